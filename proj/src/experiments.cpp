#include "stepprec/experiments.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "stepprec/random.hpp"
#include "stepprec/synthetic.hpp"

namespace stepprec {

ExperimentSetup build_setup(const ExperimentConfig& cfg) {
  cfg.validate();
  auto schedule = build_noise_schedule(cfg.alpha_kind, cfg.steps, cfg.alpha_min, cfg.alpha_max);
  auto model = make_denoiser(cfg.model, schedule, cfg.seed);
  auto samples = make_samples(cfg.model.dim, cfg.samples, cfg.seed);
  return {std::move(schedule), std::move(model), std::move(samples)};
}

std::vector<PrecisionSchedule> sample_schedules(int steps, int k, int count, std::mt19937_64& rng) {
  if (k < 0 || k > steps) throw ParameterError("K outside [0, T]");
  const std::uint64_t available = binomial(steps, k);
  const auto want = std::min<std::uint64_t>(static_cast<std::uint64_t>(count), available);
  std::set<PrecisionSchedule> seen;
  std::vector<PrecisionSchedule> out;
  std::vector<int> ts(static_cast<std::size_t>(steps));
  std::iota(ts.begin(), ts.end(), 1);
  while (out.size() < want) {
    std::shuffle(ts.begin(), ts.end(), rng);
    auto z = PrecisionSchedule::from_timesteps(steps, std::vector<int>(ts.begin(), ts.begin() + k));
    if (seen.insert(z).second) out.push_back(std::move(z));
  }
  return out;
}

namespace {

std::optional<CorrelationSummary> try_correlate(const std::vector<double>& xs,
                                                const std::vector<double>& ys) {
  try {
    return correlate(xs, ys);
  } catch (const UndefinedCorrelationError&) {
    return std::nullopt;
  }
}

}  // namespace

const PredictorCorrelation* AdditivityReport::find(int k, const std::string& predictor) const {
  for (const auto& c : correlations)
    if (c.k == k && c.predictor == predictor) return &c;
  return nullptr;
}

AdditivityReport run_validate_additivity(const ExperimentConfig& cfg) {
  const auto setup = build_setup(cfg);
  const auto measurer = setup.measurer();
  const int steps = cfg.steps;

  AdditivityReport rep;
  rep.upcast = measurer.measure_profile(GainKind::upcast);
  rep.downcast = measurer.measure_profile(GainKind::downcast);
  rep.all_quantized_error = measurer.all_quantized_error();
  rep.nonlinear_fraction = nonlinear_fraction(setup.model, setup.schedule, setup.samples);
  rep.single_step = try_correlate(rep.upcast.values, rep.downcast.values);

  auto rng = named_stream(cfg.seed, "schedule-sampling");
  std::vector<double> all_up, all_down, all_e;
  for (int k : cfg.validate_ks) {
    std::vector<double> up, down, e;
    for (const auto& z : sample_schedules(steps, k, cfg.schedules_per_k, rng)) {
      const auto score = score_schedule(z, rep.upcast, rep.downcast);
      SchedulePoint p{k, z.to_string(), *score.s_up, *score.s_down, measurer.error(z)};
      up.push_back(p.s_up);
      down.push_back(p.s_down);
      e.push_back(p.error);
      rep.points.push_back(std::move(p));
    }
    rep.correlations.push_back({k, "s_up", try_correlate(up, e)});
    rep.correlations.push_back({k, "s_down", try_correlate(down, e)});
    all_up.insert(all_up.end(), up.begin(), up.end());
    all_down.insert(all_down.end(), down.begin(), down.end());
    all_e.insert(all_e.end(), e.begin(), e.end());
  }
  rep.correlations.push_back({-1, "s_up", try_correlate(all_up, all_e)});
  rep.correlations.push_back({-1, "s_down", try_correlate(all_down, all_e)});
  return rep;
}

std::pair<int, std::optional<LatencyBudget>> resolve_full_steps(const ExperimentConfig& cfg) {
  if (cfg.full_steps) return {*cfg.full_steps, std::nullopt};
  if (!cfg.target_speedup || !cfg.quant_speedup)
    throw ConfigError(
        "config must set either 'full_steps' or both 'target_speedup' and 'quant_speedup'");
  const auto b = compute_budget(cfg.steps, *cfg.target_speedup, *cfg.quant_speedup);
  return {b.k, b};
}

CalibrationReport run_calibrate(const ExperimentConfig& cfg, bool full_measure) {
  CalibrationReport rep;
  std::tie(rep.k, rep.budget) = resolve_full_steps(cfg);
  const auto setup = build_setup(cfg);
  const auto measurer = setup.measurer();

  auto result = bisection_calibrate(measurer, cfg.resolved_budget(), GainKind::upcast);
  rep.state = std::move(result.state);
  rep.profile = std::move(result.profile);
  const auto z = greedy_topk(rep.profile, rep.k);
  rep.schedule_bits = z.to_string();
  rep.schedule_error = measurer.error(z);
  rep.all_quantized_error = measurer.all_quantized_error();
  rep.lipschitz = lipschitz_report(rep.profile, rep.k);
  if (const int bad = nonpositive_selected(rep.profile, z); bad > 0)
    rep.warnings.push_back(std::to_string(bad) +
                           " selected timestep(s) have non-positive estimated gain");

  if (full_measure) {
    rep.reference = measurer.measure_profile(GainKind::upcast);
    auto ks = cfg.rank_ks;
    if (std::find(ks.begin(), ks.end(), rep.k) == ks.end()) ks.push_back(rep.k);
    rep.rank_deviation = rank_deviation_curve(rep.state, *rep.reference, ks);
  }
  return rep;
}

ParetoReport run_pareto(const ExperimentConfig& cfg, bool full_measure) {
  if (!cfg.quant_speedup) throw ConfigError("config key 'quant_speedup': required for pareto");
  const auto setup = build_setup(cfg);
  const auto measurer = setup.measurer();

  ParetoReport rep;
  rep.quant_speedup = *cfg.quant_speedup;
  rep.profile = full_measure
                    ? measurer.measure_profile(GainKind::upcast)
                    : bisection_calibrate(measurer, cfg.resolved_budget(), GainKind::upcast).profile;

  std::vector<int> ks = cfg.pareto_ks;
  if (ks.empty()) {
    ks.resize(static_cast<std::size_t>(cfg.steps) + 1);
    std::iota(ks.begin(), ks.end(), 0);
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

  // greedy selection order, same tie rule as greedy_topk
  std::vector<int> order(static_cast<std::size_t>(cfg.steps));
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return rep.profile.value(a) > rep.profile.value(b);
  });

  for (int k : ks) {
    const auto z = greedy_topk(rep.profile, k);
    rep.rows.push_back({k, modeled_speedup(cfg.steps, k, rep.quant_speedup), measurer.error(z),
                        z.to_string()});
  }
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    const auto& prev = rep.rows[i - 1];
    const auto& cur = rep.rows[i];
    if (cur.error > prev.error) rep.error_non_increasing = false;
    bool added_positive = true;
    for (int j = prev.k; j < cur.k; ++j)
      if (!(rep.profile.value(order[static_cast<std::size_t>(j)]) > 0.0)) added_positive = false;
    if (added_positive && !(cur.error < prev.error)) rep.strictly_decreasing_where_positive = false;
  }
  return rep;
}

MixModelsReport run_mix_models(const ExperimentConfig& cfg) {
  const auto setup = build_setup(cfg);
  auto rng = named_stream(cfg.seed, "small-model");
  auto large = setup.model.with_errors(std::vector<Eigen::VectorXd>(
      static_cast<std::size_t>(cfg.steps), Eigen::VectorXd::Zero(cfg.model.dim)));
  auto substitution = generate_errors(large, setup.schedule, cfg.small_profile,
                                      cfg.small_structure, cfg.small_scale,
                                      cfg.model.error_coherence, rng);
  const Measurer measurer(large.with_errors(std::move(substitution)), setup.schedule,
                          setup.samples);

  MixModelsReport rep;
  rep.small_steps = cfg.small_steps;
  rep.sensitivity = measurer.measure_profile(GainKind::downcast);
  const auto ours = mix_models_schedule(rep.sensitivity, cfg.small_steps);
  const auto heuristic = end_placement_schedule(cfg.steps, cfg.small_steps);
  rep.ours_bits = ours.to_string();
  rep.heuristic_bits = heuristic.to_string();
  rep.ours_error = measurer.error(ours);
  rep.heuristic_error = measurer.error(heuristic);
  return rep;
}

BruteForceReport run_brute_force(const ExperimentConfig& cfg, std::vector<int> ks) {
  if (ks.empty()) {
    ks.resize(static_cast<std::size_t>(cfg.steps) + 1);
    std::iota(ks.begin(), ks.end(), 0);
  }
  for (int k : ks)
    if (binomial(cfg.steps, k) > cfg.enumeration_cap)
      throw CapacityError("C(" + std::to_string(cfg.steps) + ", " + std::to_string(k) +
                          ") exceeds enumeration cap " + std::to_string(cfg.enumeration_cap));
  const auto setup = build_setup(cfg);
  const auto measurer = setup.measurer();
  BruteForceReport rep;
  rep.profile = measurer.measure_profile(GainKind::upcast);
  for (int k : ks) {
    const auto greedy = greedy_topk(rep.profile, k);
    const auto best = brute_force_optimal(measurer, k, cfg.enumeration_cap);
    rep.rows.push_back({k, greedy.to_string(), measurer.error(greedy), best.schedule.to_string(),
                        best.error, best.evaluated});
  }
  return rep;
}

}  // namespace stepprec
