#pragma once

#include <span>
#include <vector>

namespace stepprec {

struct CorrelationSummary {
  double pearson_r = 0.0;
  double r_squared = 0.0;
  double spearman_rho = 0.0;
  double kendall_tau = 0.0;  // tau-b
  double concordance_p = 0.0;
  int n = 0;

  friend bool operator==(const CorrelationSummary&, const CorrelationSummary&) = default;
};

/// Probability that a random pair is ordered the same way by both
/// variables: (tau + 1) / 2.
constexpr double concordance_probability(double tau) { return (tau + 1.0) / 2.0; }

/// Average (fractional) ranks, 1-based; ties share the mean of their ranks.
std::vector<double> average_ranks(std::span<const double> xs);

double pearson(std::span<const double> xs, std::span<const double> ys);
double spearman(std::span<const double> xs, std::span<const double> ys);

/// Tie-corrected Kendall tau-b in O(n log n) (Knight's algorithm).
double kendall_tau_b(std::span<const double> xs, std::span<const double> ys);

/// All five statistics. Throws UndefinedCorrelationError on constant input
/// and ParameterError on length mismatch or n < 3.
CorrelationSummary correlate(std::span<const double> xs, std::span<const double> ys);

}  // namespace stepprec
