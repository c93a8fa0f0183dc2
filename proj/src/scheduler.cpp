#include "stepprec/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "stepprec/errors.hpp"

namespace stepprec {

LatencyBudget compute_budget(int steps, double target_speedup, double quant_speedup) {
  if (steps < 1) throw ParameterError("T must be at least 1");
  if (!(quant_speedup > 1.0)) throw ParameterError("per-step speedup lambda must exceed 1");
  if (!(target_speedup > 1.0)) throw ParameterError("target speedup r must exceed 1");
  if (target_speedup > quant_speedup)
    throw InfeasibleTargetError("target speedup " + std::to_string(target_speedup) +
                                " exceeds per-step speedup " + std::to_string(quant_speedup));
  LatencyBudget b;
  b.steps = steps;
  b.target_speedup = target_speedup;
  b.quant_speedup = quant_speedup;
  b.exact_k = steps * (quant_speedup - target_speedup) /
              (target_speedup * (quant_speedup - 1.0));
  // Guard against 4.999999 from rounding when the exact answer is integral.
  const double nearest = std::round(b.exact_k);
  const double k = std::abs(b.exact_k - nearest) < 1e-9 ? nearest : std::floor(b.exact_k);
  b.k = std::clamp(static_cast<int>(k), 0, steps);
  return b;
}

double modeled_speedup(int steps, double full_steps, double quant_speedup) {
  if (steps < 1) throw ParameterError("T must be at least 1");
  if (!(quant_speedup > 0.0)) throw ParameterError("lambda must be positive");
  if (full_steps < 0.0 || full_steps > steps) throw ParameterError("K outside [0, T]");
  return steps / (full_steps + (steps - full_steps) / quant_speedup);
}

int default_bisection_budget(int steps) { return std::min(steps, 3 + 10); }

namespace {

std::vector<Segment> open_segments(const std::map<int, double>& measured) {
  std::vector<Segment> out;
  for (auto it = measured.begin(); std::next(it) != measured.end(); ++it) {
    const int l = it->first;
    const int r = std::next(it)->first;
    if (r - l >= 2) out.push_back({l, r});
  }
  return out;
}

}  // namespace

BisectionResult bisection_calibrate(const GainOracle& measure, int steps, int budget,
                                    GainKind kind) {
  if (budget < 3) throw ParameterError("bisection budget B must be at least 3");
  if (steps < 3) throw ParameterError("bisection needs T >= 3");
  BisectionState st;
  st.budget = std::min(budget, steps);

  for (int t : {1, steps / 2, steps}) {
    if (st.measurements.contains(t)) continue;
    st.measurements[t] = measure(t);
    st.measurement_order.push_back(t);
    st.anchors.push_back(t);
  }

  st.segments = open_segments(st.measurements);
  while (static_cast<int>(st.measurements.size()) < st.budget && !st.segments.empty()) {
    auto score = [&](const Segment& s) {
      return 0.5 * (st.measurements.at(s.left) + st.measurements.at(s.right));
    };
    // segments are ordered left to right, so a strict comparison keeps the leftmost
    const auto best = std::max_element(
        st.segments.begin(), st.segments.end(), [&](const Segment& a, const Segment& b) {
          const double sa = score(a), sb = score(b);
          if (sa != sb) return sa < sb;
          return a.width() < b.width();
        });
    const int mid = (best->left + best->right) / 2;
    st.measurements[mid] = measure(mid);
    st.measurement_order.push_back(mid);
    st.segments = open_segments(st.measurements);
  }
  return {interpolate_profile(kind, steps, st.measurements), std::move(st)};
}

BisectionResult bisection_calibrate(const Measurer& measurer, int budget, GainKind kind) {
  return bisection_calibrate([&](int t) { return measurer.single_toggle(kind, t); },
                             measurer.steps(), budget, kind);
}

GainProfile profile_after(const BisectionState& state, GainKind kind, int steps, int iteration) {
  if (iteration < 0 || iteration > state.iterations())
    throw IndexError("bisection iteration " + std::to_string(iteration) + " not recorded");
  std::map<int, double> subset;
  const std::size_t count = state.anchors.size() + static_cast<std::size_t>(iteration);
  for (std::size_t i = 0; i < count; ++i) {
    const int t = state.measurement_order[i];
    subset[t] = state.measurements.at(t);
  }
  return interpolate_profile(kind, steps, subset);
}

namespace {

std::vector<int> order_by_gain_desc(const GainProfile& gains) {
  std::vector<int> order(static_cast<std::size_t>(gains.steps()));
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return gains.value(a) > gains.value(b); });
  return order;
}

void check_k(int k, int steps) {
  if (k < 0 || k > steps)
    throw ParameterError("K = " + std::to_string(k) + " outside [0, " + std::to_string(steps) +
                         "]");
}

}  // namespace

PrecisionSchedule greedy_topk(const GainProfile& gains, int k) {
  check_k(k, gains.steps());
  const auto order = order_by_gain_desc(gains);
  return PrecisionSchedule::from_timesteps(gains.steps(),
                                           std::vector<int>(order.begin(), order.begin() + k));
}

int nonpositive_selected(const GainProfile& gains, const PrecisionSchedule& z) {
  int n = 0;
  for (int t : z.full_timesteps())
    if (gains.value(t) <= 0.0) ++n;
  return n;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (c > std::numeric_limits<std::uint64_t>::max() / num)
      return std::numeric_limits<std::uint64_t>::max();
    c = c * num / static_cast<std::uint64_t>(i);
  }
  return c;
}

namespace {

// Visits every K-subset of {1..T} as a schedule, in decreasing lexicographic order.
template <typename F>
void for_each_schedule(int steps, int k, F&& visit) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(steps), 0);
  std::fill(bits.begin(), bits.begin() + k, 1);
  do {
    visit(PrecisionSchedule(bits));
  } while (std::prev_permutation(bits.begin(), bits.end()));
}

void check_cap(int steps, int k, std::uint64_t cap) {
  const auto n = binomial(steps, k);
  if (n > cap)
    throw CapacityError("C(" + std::to_string(steps) + ", " + std::to_string(k) +
                        ") = " + std::to_string(n) + " schedules exceeds enumeration cap " +
                        std::to_string(cap));
}

}  // namespace

BruteForceResult brute_force_optimal(const std::function<double(const PrecisionSchedule&)>& error,
                                     int steps, int k, std::uint64_t cap) {
  check_k(k, steps);
  check_cap(steps, k, cap);
  BruteForceResult best;
  best.error = std::numeric_limits<double>::infinity();
  for_each_schedule(steps, k, [&](const PrecisionSchedule& z) {
    const double e = error(z);
    ++best.evaluated;
    if (e < best.error || (e == best.error && z < best.schedule)) {
      best.error = e;
      best.schedule = z;
    }
  });
  return best;
}

BruteForceResult brute_force_optimal(const Measurer& measurer, int k, std::uint64_t cap) {
  return brute_force_optimal([&](const PrecisionSchedule& z) { return measurer.error(z); },
                             measurer.steps(), k, cap);
}

LipschitzReport lipschitz_report(const GainProfile& gains, int k) {
  check_k(k, gains.steps());
  const auto ts = gains.measured_timesteps();
  if (ts.size() < 2) throw ParameterError("Lipschitz estimate needs at least two measured gains");
  LipschitzReport r;
  r.k = k;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const double slope =
        std::abs(gains.value(ts[i + 1]) - gains.value(ts[i])) / (ts[i + 1] - ts[i]);
    r.lipschitz = std::max(r.lipschitz, slope);
  }
  for (std::size_t i = 0; i + 1 < ts.size(); ++i)
    if (ts[i + 1] - ts[i] >= 2)
      r.epsilon = std::max(r.epsilon, 0.5 * r.lipschitz * (ts[i + 1] - ts[i]));

  if (k == 0 || k == gains.steps()) {
    r.certified = true;  // nothing to confuse
    return r;
  }
  std::vector<double> values;
  for (int t : ts) values.push_back(gains.value(t));
  std::sort(values.begin(), values.end(), std::greater<>());
  if (static_cast<std::size_t>(k) < values.size()) {
    r.gap_k = values[static_cast<std::size_t>(k) - 1] - values[static_cast<std::size_t>(k)];
    r.certified = 2.0 * r.epsilon < *r.gap_k;
  }
  return r;
}

std::uint64_t rank_deviation(const PrecisionSchedule& estimate, const GainProfile& reference,
                             int k, std::uint64_t cap) {
  if (reference.interpolated_count() != 0)
    throw ParameterError("rank deviation needs a fully measured reference");
  if (estimate.steps() != reference.steps()) throw ShapeError("schedule length does not match T");
  if (estimate.k() != k)
    throw ParameterError("estimate has " + std::to_string(estimate.k()) +
                         " full-precision steps, expected K = " + std::to_string(k));
  check_cap(reference.steps(), k, cap);
  const double target = gated_score(estimate, reference);
  std::uint64_t better = 0;
  for_each_schedule(reference.steps(), k, [&](const PrecisionSchedule& z) {
    if (gated_score(z, reference) < target) ++better;
  });
  return better;
}

std::optional<int> RankDeviationCurve::converged_at(std::size_t j) const {
  std::optional<int> at;
  for (std::size_t i = deviation.size(); i-- > 0;) {
    if (deviation[i][j] != 0) break;
    at = static_cast<int>(i);
  }
  return at;
}

std::optional<int> RankDeviationCurve::first_zero(std::size_t j) const {
  for (std::size_t i = 0; i < deviation.size(); ++i)
    if (deviation[i][j] == 0) return static_cast<int>(i);
  return std::nullopt;
}

RankDeviationCurve rank_deviation_curve(const BisectionState& state, const GainProfile& reference,
                                        const std::vector<int>& ks) {
  RankDeviationCurve curve;
  curve.ks = ks;
  for (int i = 0; i <= state.iterations(); ++i) {
    const auto estimate = profile_after(state, reference.kind, reference.steps(), i);
    std::vector<std::uint64_t> row;
    for (int k : ks) row.push_back(rank_deviation(greedy_topk(estimate, k), reference, k));
    curve.deviation.push_back(std::move(row));
  }
  return curve;
}

PrecisionSchedule mix_models_schedule(const GainProfile& sensitivity, int small_steps) {
  const int steps = sensitivity.steps();
  check_k(small_steps, steps);
  std::vector<int> order(static_cast<std::size_t>(steps));
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return sensitivity.value(a) < sensitivity.value(b); });
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(steps), 1);
  for (int i = 0; i < small_steps; ++i) bits[static_cast<std::size_t>(order[i] - 1)] = 0;
  return PrecisionSchedule(std::move(bits));
}

PrecisionSchedule end_placement_schedule(int steps, int small_steps) {
  check_k(small_steps, steps);
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(steps), 1);
  std::fill(bits.begin(), bits.begin() + small_steps, 0);
  return PrecisionSchedule(std::move(bits));
}

}  // namespace stepprec
