#include "stepprec/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "stepprec/errors.hpp"

namespace stepprec {

namespace {

void check_pair(std::span<const double> xs, std::span<const double> ys, std::size_t min_n) {
  if (xs.size() != ys.size())
    throw ParameterError("correlation inputs differ in length (" + std::to_string(xs.size()) +
                         " vs " + std::to_string(ys.size()) + ")");
  if (xs.size() < min_n)
    throw ParameterError("correlation needs at least " + std::to_string(min_n) + " points");
}

bool constant(std::span<const double> v) {
  return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
}

// Number of tied pairs sum n_i (n_i - 1) / 2 over runs of equal values in
// an already sorted range.
template <typename It, typename Eq>
std::int64_t tied_pairs(It first, It last, Eq eq) {
  std::int64_t total = 0;
  while (first != last) {
    auto run_end = std::find_if_not(first, last, [&](const auto& v) { return eq(v, *first); });
    const std::int64_t n = std::distance(first, run_end);
    total += n * (n - 1) / 2;
    first = run_end;
  }
  return total;
}

// Sorts `v` by y and returns the number of inversions (strict y[i] > y[j], i < j).
std::int64_t merge_count(std::vector<std::pair<double, double>>& v,
                         std::vector<std::pair<double, double>>& buf, std::size_t lo,
                         std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = merge_count(v, buf, lo, mid) + merge_count(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j].second < v[i].second) {
      swaps += static_cast<std::int64_t>(mid - i);
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
            buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> xs) {
  std::vector<std::size_t> idx(xs.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i + 1;
    while (j < idx.size() && xs[idx[j]] == xs[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1..j
    for (std::size_t k = i; k < j; ++k) ranks[idx[k]] = r;
    i = j;
  }
  return ranks;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  check_pair(xs, ys, 2);
  if (constant(xs) || constant(ys))
    throw UndefinedCorrelationError("Pearson r undefined for a constant sequence");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
  check_pair(xs, ys, 2);
  if (constant(xs) || constant(ys))
    throw UndefinedCorrelationError("Spearman rho undefined for a constant sequence");
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  return pearson(rx, ry);
}

double kendall_tau_b(std::span<const double> xs, std::span<const double> ys) {
  check_pair(xs, ys, 2);
  if (constant(xs) || constant(ys))
    throw UndefinedCorrelationError("Kendall tau undefined for a constant sequence");
  const std::int64_t n = static_cast<std::int64_t>(xs.size());
  std::vector<std::pair<double, double>> v(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) v[i] = {xs[i], ys[i]};
  std::sort(v.begin(), v.end());

  const std::int64_t n0 = n * (n - 1) / 2;
  const std::int64_t n1 = tied_pairs(v.begin(), v.end(),
                                     [](const auto& a, const auto& b) { return a.first == b.first; });
  const std::int64_t n3 = tied_pairs(v.begin(), v.end(), [](const auto& a, const auto& b) {
    return a.first == b.first && a.second == b.second;
  });
  std::vector<std::pair<double, double>> buf(v.size());
  const std::int64_t swaps = merge_count(v, buf, 0, v.size());
  const std::int64_t n2 = tied_pairs(v.begin(), v.end(),
                                     [](const auto& a, const auto& b) { return a.second == b.second; });

  // concordant - discordant = n0 - n1 - n2 + n3 - 2 * swaps
  const double numer = static_cast<double>(n0 - n1 - n2 + n3 - 2 * swaps);
  const double denom = std::sqrt(static_cast<double>(n0 - n1) * static_cast<double>(n0 - n2));
  return std::clamp(numer / denom, -1.0, 1.0);
}

CorrelationSummary correlate(std::span<const double> xs, std::span<const double> ys) {
  check_pair(xs, ys, 3);
  CorrelationSummary s;
  s.n = static_cast<int>(xs.size());
  s.pearson_r = pearson(xs, ys);
  s.r_squared = s.pearson_r * s.pearson_r;
  s.spearman_rho = spearman(xs, ys);
  s.kendall_tau = kendall_tau_b(xs, ys);
  s.concordance_p = concordance_probability(s.kendall_tau);
  return s;
}

}  // namespace stepprec
