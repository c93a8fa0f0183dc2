// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "stepprec/error_model.hpp"
#include "stepprec/experiments.hpp"
#include "stepprec/scheduler.hpp"
#include "stepprec/stats.hpp"
#include "stepprec/synthetic.hpp"

using namespace stepprec;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few failure messages of a criterion.
class Check {
 public:
  void require(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) messages_ << (failures_ > 1 ? "; " : "") << what;
  }
  Outcome done(std::string summary) const {
    if (failures_ == 0) return {true, std::move(summary)};
    return {false, std::to_string(failures_) + " failure(s): " + messages_.str()};
  }

 private:
  int failures_ = 0;
  std::ostringstream messages_;
};

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

PrecisionSchedule from_mask(int steps, std::uint32_t mask) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) bits[static_cast<std::size_t>(i)] = (mask >> i) & 1u;
  return PrecisionSchedule(std::move(bits));
}

NoiseSchedule linear_schedule(int steps) {
  return build_noise_schedule(AlphaKind::linear_alpha, steps, 0.05, 0.999);
}

Outcome linear_exactness() {
  Check c;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto schedule = linear_schedule(10);
    DenoiserSpec spec;
    spec.dim = 8;
    spec.nonlinearity = 0.0;
    spec.per_step_jacobians = true;
    spec.error_structure = ErrorStructure::gaussian;
    spec.error_profile = ErrorProfile::spiky;
    const auto model = make_denoiser(spec, schedule, seed);
    const Measurer m(model, schedule, make_samples(8, 4, seed));
    const PropagationCache<double> cache(model, schedule);
    for (std::uint32_t mask = 0; mask < (1u << 10); ++mask) {
      const auto z = from_mask(10, mask);
      const double measured = m.error(z);
      const double predicted = cache.gated_sum(z).norm();
      const double rel = std::abs(measured - predicted) / std::max(predicted, 1e-300);
      if (predicted > 0.0) worst = std::max(worst, rel);
      c.require(predicted == 0.0 ? measured == 0.0 : rel <= 1e-9,
                "seed " + std::to_string(seed) + " z=" + z.to_string());
    }
  }
  return c.done("5 seeds x 1024 schedules, max relative error " + sci(worst));
}

Outcome ansatz_extremes() {
  Check c;
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> steps_dist(2, 30), dim_dist(2, 12);
  for (int i = 0; i < 20; ++i) {
    const int steps = steps_dist(rng);
    DenoiserSpec spec;
    spec.dim = dim_dist(rng);
    spec.per_step_jacobians = i % 2 == 0;
    spec.nonlinearity = 0.0;
    spec.error_structure = i % 3 == 0 ? ErrorStructure::coherent : ErrorStructure::gaussian;
    const auto schedule = build_noise_schedule(i % 2 ? AlphaKind::cosine : AlphaKind::linear_alpha,
                                               steps, 0.02, 0.999);
    const auto model = make_denoiser(spec, schedule, rng());
    const auto zeros = ansatz_delta0(model, schedule, PrecisionSchedule::all_quantized(steps));
    const auto ones = ansatz_delta0(model, schedule, PrecisionSchedule::all_full(steps));
    c.require(zeros == closed_form_delta0(model, schedule), "config " + std::to_string(i) + " Z=0");
    c.require((ones.array() == 0.0).all(), "config " + std::to_string(i) + " Z=1");
  }
  return c.done("20 random configs, both extremes exact");
}

Outcome greedy_vs_brute_force() {
  Check c;
  int cases = 0;
  for (int steps : {6, 10, 12}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto schedule = linear_schedule(steps);
      DenoiserSpec spec;
      spec.dim = 12;
      spec.nonlinearity = 0.0;
      spec.per_step_jacobians = true;
      spec.error_structure = ErrorStructure::orthogonal;
      spec.error_profile = ErrorProfile::spiky;
      const auto model = make_denoiser(spec, schedule, seed);
      const Measurer m(model, schedule, make_samples(12, 2, seed));
      const auto gains = m.measure_profile(GainKind::upcast);
      for (int k = 0; k <= steps; ++k) {
        const double greedy = m.error(greedy_topk(gains, k));
        const auto best = brute_force_optimal(m, k);
        // schedules within rounding of the minimum count as optimal
        c.require(greedy <= best.error + 1e-12 * std::max(1.0, best.error),
                  "T=" + std::to_string(steps) + " seed " + std::to_string(seed) +
                      " K=" + std::to_string(k));
        ++cases;
      }
    }
  }
  return c.done(std::to_string(cases) + " (T, seed, K) cases optimal");
}

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  cfg.seed = 0;
  cfg.samples = 128;
  cfg.schedules_per_k = 20;
  cfg.validate_ks = {2, 6, 10, 14, 18};
  return cfg;
}

Outcome schedule_correlation(const AdditivityReport& rep) {
  Check c;
  c.require(rep.nonlinear_fraction <= 0.05,
            "nonlinear fraction " + fmt(rep.nonlinear_fraction) + " > 0.05");
  double min_rho = 1.0, min_tau = 1.0;
  for (int k : {2, 6, 10, 14, 18}) {
    const auto* row = rep.find(k, "s_up");
    c.require(row && row->summary, "K=" + std::to_string(k) + " missing");
    if (!row || !row->summary) continue;
    const auto& s = *row->summary;
    min_rho = std::min(min_rho, s.spearman_rho);
    min_tau = std::min(min_tau, s.kendall_tau);
    c.require(s.n == 20, "K=" + std::to_string(k) + " n=" + std::to_string(s.n));
    c.require(s.spearman_rho >= 0.99, "K=" + std::to_string(k) + " rho " + fmt(s.spearman_rho));
    c.require(s.kendall_tau >= 0.93, "K=" + std::to_string(k) + " tau " + fmt(s.kendall_tau));
  }
  const auto* pooled = rep.find(-1, "s_up");
  c.require(pooled && pooled->summary && pooled->summary->spearman_rho >= 0.99 &&
                pooled->summary->kendall_tau >= 0.93,
            "pooled");
  return c.done("per-K min rho " + fmt(min_rho) + ", min tau " + fmt(min_tau) + "; pooled rho " +
                fmt(pooled && pooled->summary ? pooled->summary->spearman_rho : 0.0) + ", tau " +
                fmt(pooled && pooled->summary ? pooled->summary->kendall_tau : 0.0) +
                ", nonlinear fraction " + fmt(rep.nonlinear_fraction));
}

Outcome single_step_correlation(const AdditivityReport& rep) {
  Check c;
  c.require(rep.single_step.has_value(), "undefined");
  if (!rep.single_step) return c.done("");
  const auto& s = *rep.single_step;
  c.require(s.pearson_r >= 0.94, "r " + fmt(s.pearson_r));
  c.require(s.r_squared >= 0.88, "R2 " + fmt(s.r_squared));
  c.require(s.spearman_rho >= 0.97, "rho " + fmt(s.spearman_rho));
  c.require(s.kendall_tau >= 0.88, "tau " + fmt(s.kendall_tau));
  return c.done("r " + fmt(s.pearson_r) + ", R2 " + fmt(s.r_squared) + ", rho " +
                fmt(s.spearman_rho) + ", tau " + fmt(s.kendall_tau));
}

Outcome bisection_convergence() {
  Check c;
  auto cfg = default_config();
  cfg.steps = 20;
  cfg.model.error_profile = ErrorProfile::front_loaded;
  cfg.full_steps = 5;
  cfg.rank_ks = {2, 3, 4, 5};
  const auto rep = run_calibrate(cfg, true);
  const auto& curve = *rep.rank_deviation;
  std::string detail = "first zero at iteration";
  for (std::size_t j = 0; j < curve.ks.size(); ++j) {
    const auto first = curve.first_zero(j);
    c.require(first && *first <= 10, "K=" + std::to_string(curve.ks[j]) + " never reached 0");
    detail += " K=" + std::to_string(curve.ks[j]) + ":" + (first ? std::to_string(*first) : "-");
  }
  std::string start = " (iteration 0 deviations";
  for (auto d : curve.deviation.front()) start += " " + std::to_string(d);
  return c.done(detail + start + ")");
}

Outcome latency_budget() {
  Check c;
  c.require(compute_budget(20, 2.5, 5.0).k == 5, "K != 5");
  c.require(modeled_speedup(20, 0, 5.0) == 5.0, "r(K=0) != lambda");
  c.require(modeled_speedup(20, 20, 5.0) == 1.0, "r(K=T) != 1");
  int trips = 0;
  for (int steps : {2, 5, 10, 20, 50, 100})
    for (double lambda : {1.5, 2.0, 3.0, 4.0, 5.0, 8.0})
      for (int i = 1; i <= 20; ++i) {
        const double r = 1.0 + (lambda - 1.0) * i / 20.0;
        const auto b = compute_budget(steps, r, lambda);
        c.require(modeled_speedup(steps, b.k, lambda) >= r * (1.0 - 1e-12),
                  "T=" + std::to_string(steps) + " lambda " + fmt(lambda) + " r " + fmt(r));
        ++trips;
      }
  return c.done("K = 5 for (20, 2.5, 5); endpoints exact; " + std::to_string(trips) +
                " round trips meet r");
}

Outcome concordance_identity(const std::vector<CorrelationSummary>& summaries) {
  Check c;
  for (const auto& s : summaries)
    c.require(s.concordance_p == (s.kendall_tau + 1.0) / 2.0, "tau " + fmt(s.kendall_tau, 17));
  c.require(concordance_probability(0.88) == 0.94, "P(0.88) != 0.94");
  return c.done(std::to_string(summaries.size()) + " summaries; tau 0.88 -> P 0.94");
}

Outcome pareto_monotone() {
  Check c;
  auto cfg = default_config();
  cfg.steps = 20;
  cfg.model.dim = 20;
  cfg.model.nonlinearity = 0.0;
  cfg.model.error_structure = ErrorStructure::orthogonal;
  cfg.samples = 4;
  cfg.quant_speedup = 4.0;
  int rows = 0;
  for (bool full : {true, false}) {
    const auto rep = run_pareto(cfg, full);
    const std::string mode = full ? "measured" : "bisection";
    c.require(rep.error_non_increasing, mode + ": E(K) increases");
    c.require(rep.strictly_decreasing_where_positive, mode + ": E(K) flat at positive gain");
    const double e0 = rep.rows.front().error;
    for (const auto& row : rep.rows) {
      if (row.k == 0 || row.k == cfg.steps) continue;
      c.require(row.error < e0, mode + ": E(" + std::to_string(row.k) + ") >= E(0)");
      c.require(row.speedup > 1.0, mode + ": r(" + std::to_string(row.k) + ") <= 1");
    }
    rows += static_cast<int>(rep.rows.size());
  }
  return c.done(std::to_string(rows) + " frontier points, measured and bisection profiles");
}

bool non_monotone(const GainProfile& p) {
  bool up = false, down = false;
  for (int t = 2; t <= p.steps(); ++t) {
    up |= p.value(t) > p.value(t - 1);
    down |= p.value(t) < p.value(t - 1);
  }
  return up && down;
}

Outcome mix_models() {
  Check c;
  int strict = 0;
  std::string errs;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto cfg = default_config();
    cfg.seed = seed;
    cfg.steps = 20;
    cfg.model.dim = 20;
    cfg.model.nonlinearity = 0.0;
    cfg.model.error_structure = ErrorStructure::orthogonal;
    cfg.samples = 4;
    cfg.small_profile = ErrorProfile::spiky;
    cfg.small_structure = ErrorStructure::orthogonal;
    cfg.small_steps = 6;
    const auto rep = run_mix_models(cfg);
    c.require(non_monotone(rep.sensitivity), "seed " + std::to_string(seed) + " monotone");
    c.require(rep.ours_error <= rep.heuristic_error,
              "seed " + std::to_string(seed) + ": " + fmt(rep.ours_error, 6) + " > " +
                  fmt(rep.heuristic_error, 6));
    if (rep.ours_error < rep.heuristic_error) ++strict;
    errs += " " + fmt(rep.ours_error, 3) + "/" + fmt(rep.heuristic_error, 3);
  }
  c.require(strict >= 1, "no strict improvement");
  return c.done(std::to_string(strict) + "/5 seeds strictly better; ours/heuristic" + errs);
}

double tau_b_pairs(const std::vector<double>& x, const std::vector<double>& y) {
  double con = 0, dis = 0, tx = 0, ty = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double sx = x[i] - x[j], sy = y[i] - y[j];
      if (sx == 0 && sy == 0) continue;
      if (sx == 0) ++tx;
      else if (sy == 0) ++ty;
      else if ((sx > 0) == (sy > 0)) ++con;
      else ++dis;
    }
  return (con - dis) / std::sqrt((con + dis + tx) * (con + dis + ty));
}

Outcome kendall_oracle() {
  Check c;
  int cases = 0;
  for (int n = 2; n <= 6; ++n) {
    const std::size_t len = static_cast<std::size_t>(n);
    // distinct values: every permutation
    std::vector<double> x(len), y(len);
    std::iota(x.begin(), x.end(), 0.0);
    std::iota(y.begin(), y.end(), 0.0);
    do {
      c.require(std::abs(kendall_tau_b(x, y) - tau_b_pairs(x, y)) <= 1e-12, "distinct n=" + std::to_string(n));
      ++cases;
    } while (std::next_permutation(y.begin(), y.end()));
    // ties: every permutation of a multiset with repeated values, against tied x
    std::vector<double> xt(len), yt(len);
    for (std::size_t i = 0; i < len; ++i) {
      xt[i] = static_cast<double>(i / 2);
      yt[i] = static_cast<double>(i / 3);
    }
    std::sort(yt.begin(), yt.end());
    if (yt.front() == yt.back()) continue;
    do {
      for (const auto* xs : {&x, &xt}) {
        c.require(std::abs(kendall_tau_b(*xs, yt) - tau_b_pairs(*xs, yt)) <= 1e-12,
                  "tied n=" + std::to_string(n));
        ++cases;
      }
    } while (std::next_permutation(yt.begin(), yt.end()));
  }
  return c.done(std::to_string(cases) + " orderings agree");
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int id, const std::string& name, const std::function<Outcome()>& run) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  };

  report(1, "linear exactness of the additive model", linear_exactness);
  report(2, "additive model extremes", ansatz_extremes);
  report(3, "greedy matches brute force under exact additivity", greedy_vs_brute_force);

  std::optional<AdditivityReport> additivity;
  std::vector<CorrelationSummary> summaries;
  try {
    additivity = run_validate_additivity(default_config());
    for (const auto& row : additivity->correlations)
      if (row.summary) summaries.push_back(*row.summary);
    if (additivity->single_step) summaries.push_back(*additivity->single_step);
  } catch (const std::exception& e) {
    std::printf("validate-additivity run failed: %s\n", e.what());
  }
  report(4, "multi-step score correlation", [&] {
    return additivity ? schedule_correlation(*additivity) : Outcome{false, "no report"};
  });
  report(5, "single-step upcast/downcast correlation", [&] {
    return additivity ? single_step_correlation(*additivity) : Outcome{false, "no report"};
  });
  report(6, "bisection rank-deviation convergence", bisection_convergence);
  report(7, "latency budget", latency_budget);
  report(8, "concordance probability identity", [&] {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g;
    for (int i = 0; i < 100; ++i) {
      std::vector<double> x(15), y(15);
      for (std::size_t j = 0; j < x.size(); ++j) {
        x[j] = g(rng);
        y[j] = x[j] * (i % 5) + g(rng);
      }
      summaries.push_back(correlate(x, y));
    }
    return concordance_identity(summaries);
  });
  report(9, "pareto frontier monotonicity", pareto_monotone);
  report(10, "mix of models beats end placement", mix_models);
  report(11, "Kendall tau-b against pairwise count", kendall_oracle);

  std::printf("%s: %d of 11 criteria failed\n", failed ? "FAIL" : "PASS", failed);
  return failed ? 1 : 0;
}
