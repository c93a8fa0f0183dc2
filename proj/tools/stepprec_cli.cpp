// stepprec: per-timestep precision scheduling experiments on synthetic
// denoising processes.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "stepprec/config.hpp"
#include "stepprec/errors.hpp"
#include "stepprec/experiments.hpp"
#include "stepprec/report.hpp"
#include "stepprec/stats.hpp"

namespace fs = std::filesystem;
using namespace stepprec;

namespace {

enum ExitCode { kOk = 0, kConfigError = 1, kInfeasible = 2, kCapacity = 3 };

struct Options {
  std::string config_path;
  std::string out_dir = "stepprec_out";
  std::optional<std::uint64_t> seed;
  bool full_measure = false;
  std::string ks;
  std::string input;
  std::string x_column;
  std::string y_column;
};

ExperimentConfig resolve_config(const Options& opt, const std::string& experiment) {
  ExperimentConfig cfg = opt.config_path.empty() ? ExperimentConfig{} : load_config(opt.config_path);
  cfg.experiment = experiment;
  if (opt.seed) cfg.seed = *opt.seed;
  cfg.validate();
  return cfg;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

template <typename F>
std::string render(F&& f) {
  std::ostringstream os;
  f(os);
  return os.str();
}

void write_outputs(const Options& opt, const ExperimentConfig& cfg,
                   const std::vector<std::pair<std::string, std::string>>& files) {
  const fs::path dir(opt.out_dir);
  fs::create_directories(dir);
  write_file(dir / "resolved_config.ini", render([&](std::ostream& os) { write_config(os, cfg); }));
  for (const auto& [name, content] : files) write_file(dir / name, content);
}

std::vector<int> ks_option(const Options& opt) {
  try {
    return opt.ks.empty() ? std::vector<int>{} : parse_int_list(opt.ks);
  } catch (const std::exception&) {
    throw ConfigError("--ks: expected a comma-separated integer list, got '" + opt.ks + "'");
  }
}

int cmd_validate_additivity(const Options& opt) {
  const auto cfg = resolve_config(opt, "validate-additivity");
  const auto rep = run_validate_additivity(cfg);
  write_outputs(opt, cfg,
                {{"additivity_report.json", json(rep).dump(2)},
                 {"correlations.csv",
                  render([&](std::ostream& os) { write_correlation_csv(os, rep.correlations); })},
                 {"schedules.csv",
                  render([&](std::ostream& os) { write_schedule_points_csv(os, rep.points); })},
                 {"gains_upcast.csv", render([&](std::ostream& os) { write_gain_csv(os, rep.upcast); })},
                 {"gains_downcast.csv",
                  render([&](std::ostream& os) { write_gain_csv(os, rep.downcast); })}});
  if (rep.single_step)
    std::cout << "single-step upcast vs downcast: r = " << rep.single_step->pearson_r
              << ", rho = " << rep.single_step->spearman_rho
              << ", tau = " << rep.single_step->kendall_tau << '\n';
  for (const auto& c : rep.correlations) {
    std::cout << (c.k < 0 ? std::string("all") : "K=" + std::to_string(c.k)) << ' ' << c.predictor
              << ": ";
    if (c.summary)
      std::cout << "r = " << c.summary->pearson_r << ", rho = " << c.summary->spearman_rho
                << ", tau = " << c.summary->kendall_tau << '\n';
    else
      std::cout << "undefined\n";
  }
  return kOk;
}

int cmd_calibrate(const Options& opt) {
  const auto cfg = resolve_config(opt, "calibrate");
  const auto rep = run_calibrate(cfg, opt.full_measure);
  write_outputs(opt, cfg,
                {{"calibration_report.json", json(rep).dump(2)},
                 {"schedule.txt", rep.schedule_bits + "\n"},
                 {"gains.csv", render([&](std::ostream& os) { write_gain_csv(os, rep.profile); })}});
  std::cout << "K = " << rep.k << "\nschedule " << rep.schedule_bits << "\nE = " << rep.schedule_error
            << " (all quantized: " << rep.all_quantized_error << ")\n";
  for (const auto& w : rep.warnings) std::cerr << "warning: " << w << '\n';
  return kOk;
}

int cmd_pareto(const Options& opt) {
  auto cfg = resolve_config(opt, "pareto");
  if (const auto ks = ks_option(opt); !ks.empty()) cfg.pareto_ks = ks;
  cfg.validate();
  const auto rep = run_pareto(cfg, opt.full_measure);
  const auto csv = render([&](std::ostream& os) { write_pareto_csv(os, rep.rows); });
  write_outputs(opt, cfg, {{"pareto.csv", csv}, {"pareto_report.json", json(rep).dump(2)}});
  std::cout << csv;
  return kOk;
}

int cmd_mix_models(const Options& opt) {
  const auto cfg = resolve_config(opt, "mix-models");
  const auto rep = run_mix_models(cfg);
  write_outputs(opt, cfg, {{"mix_models_report.json", json(rep).dump(2)}});
  std::cout << "sensitivity-based " << rep.ours_bits << "  E = " << rep.ours_error << '\n'
            << "end placement     " << rep.heuristic_bits << "  E = " << rep.heuristic_error << '\n';
  return kOk;
}

int cmd_brute_force(const Options& opt) {
  const auto cfg = resolve_config(opt, "brute-force");
  const auto rep = run_brute_force(cfg, ks_option(opt));
  write_outputs(opt, cfg, {{"brute_force_report.json", json(rep).dump(2)}});
  for (const auto& row : rep.rows)
    std::cout << "K=" << row.k << " greedy " << row.greedy_bits << " E=" << row.greedy_error
              << "  optimum " << row.optimal_bits << " E=" << row.optimal_error
              << "  gap=" << row.gap() << '\n';
  return kOk;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

int cmd_stats(const Options& opt) {
  std::ifstream in(opt.input);
  if (!in) throw ConfigError("--input: cannot open '" + opt.input + "'");
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("--input: empty file");
  const auto header = split_csv_line(line);
  auto column = [&](const std::string& name, std::size_t fallback) {
    if (name.empty()) {
      if (fallback >= header.size()) throw ConfigError("--input: need at least two columns");
      return fallback;
    }
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ConfigError("--input: no column named '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto xi = column(opt.x_column, 0);
  const auto yi = column(opt.y_column, 1);
  std::vector<double> xs, ys;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    try {
      xs.push_back(std::stod(cells.at(xi)));
      ys.push_back(std::stod(cells.at(yi)));
    } catch (const std::exception&) {
      throw ConfigError("--input: malformed row '" + line + "'");
    }
  }
  const json out = correlate(xs, ys);
  const fs::path dir(opt.out_dir);
  fs::create_directories(dir);
  write_file(dir / "stats.json", out.dump(2) + "\n");
  std::cout << out.dump(2) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Per-timestep precision scheduling for synthetic denoising processes"};
  app.require_subcommand(1);
  Options opt;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "Flat key = value experiment config")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--seed", opt.seed, "Override the config seed");
    sub->add_flag("--full-measure", opt.full_measure,
                  "Measure every timestep as a reference (rank-deviation curve)");
  };

  std::function<int(const Options&)> handler;
  auto add = [&](const char* name, const char* help, int (*fn)(const Options&)) {
    auto* sub = app.add_subcommand(name, help);
    common(sub);
    sub->callback([&handler, fn] { handler = fn; });
    return sub;
  };

  add("validate-additivity", "Single-step gains and multi-step score correlation",
      cmd_validate_additivity);
  add("calibrate", "Adaptive bisection calibration and greedy schedule", cmd_calibrate);
  add("pareto", "Error vs modeled speedup over K", cmd_pareto)
      ->add_option("--ks", opt.ks, "Comma-separated K values (default 0..T)");
  add("mix-models", "Large/small model assignment by sensitivity", cmd_mix_models);
  add("brute-force", "Greedy schedule vs exhaustive optimum", cmd_brute_force)
      ->add_option("--ks", opt.ks, "Comma-separated K values (default 0..T)");
  auto* stats = app.add_subcommand("stats", "Correlation summary of two CSV columns");
  stats->add_option("--input", opt.input, "CSV file with a header row")->required();
  stats->add_option("--x", opt.x_column, "Column for x (default: first)");
  stats->add_option("--y", opt.y_column, "Column for y (default: second)");
  stats->add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
  stats->callback([&handler] { handler = cmd_stats; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    return handler(opt);
  } catch (const InfeasibleTargetError& e) {
    std::cerr << "infeasible target: " << e.what() << '\n';
    return kInfeasible;
  } catch (const CapacityError& e) {
    std::cerr << "capacity: " << e.what() << '\n';
    return kCapacity;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
}
