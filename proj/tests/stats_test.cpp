#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "stepprec/errors.hpp"
#include "stepprec/stats.hpp"

using namespace stepprec;

namespace {

// Pairwise tau-b by definition.
double tau_b_pairs(const std::vector<double>& x, const std::vector<double>& y) {
  double c = 0, d = 0, tx = 0, ty = 0;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double sx = x[i] - x[j], sy = y[i] - y[j];
      if (sx == 0 && sy == 0) continue;
      if (sx == 0) ++tx;
      else if (sy == 0) ++ty;
      else if ((sx > 0) == (sy > 0)) ++c;
      else ++d;
    }
  return (c - d) / std::sqrt((c + d + tx) * (c + d + ty));
}

}  // namespace

TEST(Stats, KendallSmallOracle) {
  const std::vector<double> x{1, 2, 3, 4}, y{1, 3, 2, 4};
  // 5 concordant pairs, 1 discordant
  EXPECT_NEAR(kendall_tau_b(x, y), 2.0 / 3.0, 1e-15);
  const auto s = correlate(x, y);
  EXPECT_NEAR(s.kendall_tau, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(s.concordance_p, 5.0 / 6.0, 1e-15);
  EXPECT_NEAR(s.spearman_rho, 0.8, 1e-15);
  EXPECT_NEAR(s.pearson_r, 0.8, 1e-15);
  EXPECT_NEAR(s.r_squared, 0.64, 1e-15);
  EXPECT_EQ(s.n, 4);
}

TEST(Stats, KendallMatchesPairCountOnAllPermutations) {
  for (int n = 3; n <= 6; ++n) {
    std::vector<double> x(static_cast<std::size_t>(n)), y(x.size());
    std::iota(x.begin(), x.end(), 0.0);
    std::iota(y.begin(), y.end(), 0.0);
    do {
      EXPECT_NEAR(kendall_tau_b(x, y), tau_b_pairs(x, y), 1e-12);
    } while (std::next_permutation(y.begin(), y.end()));
  }
}

TEST(Stats, KendallWithTiesMatchesPairCount) {
  for (int n = 3; n <= 6; ++n) {
    // every y in {0,1,2}^n against a fixed tied x
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = i / 2;
    int total = 1;
    for (int i = 0; i < n; ++i) total *= 3;
    for (int code = 0; code < total; ++code) {
      std::vector<double> y(x.size());
      int c = code;
      for (auto& v : y) { v = c % 3; c /= 3; }
      if (std::all_of(y.begin(), y.end(), [&](double v) { return v == y.front(); })) continue;
      EXPECT_NEAR(kendall_tau_b(x, y), tau_b_pairs(x, y), 1e-12);
    }
  }
}

TEST(Stats, KendallLargeRandom) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick(0, 30);
  std::vector<double> x(500), y(500);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = pick(rng);
    y[i] = x[i] + pick(rng);
  }
  EXPECT_NEAR(kendall_tau_b(x, y), tau_b_pairs(x, y), 1e-12);
}

TEST(Stats, AverageRanks) {
  const std::vector<double> x{10, 20, 10, 30, 20, 20};
  EXPECT_EQ(average_ranks(x), (std::vector<double>{1.5, 4, 1.5, 6, 4, 4}));
}

TEST(Stats, InvariantUnderMonotoneMapAndSymmetric) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<double> x(40), y(40), yx(40);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = g(rng);
    y[i] = x[i] + 0.5 * g(rng);
    yx[i] = std::exp(3.0 * y[i]);
  }
  const auto a = correlate(x, y);
  const auto b = correlate(x, yx);
  EXPECT_DOUBLE_EQ(a.spearman_rho, b.spearman_rho);
  EXPECT_DOUBLE_EQ(a.kendall_tau, b.kendall_tau);
  const auto s = correlate(y, x);
  EXPECT_NEAR(a.pearson_r, s.pearson_r, 1e-14);
  EXPECT_NEAR(a.spearman_rho, s.spearman_rho, 1e-14);
  EXPECT_NEAR(a.kendall_tau, s.kendall_tau, 1e-14);
  std::vector<double> scaled(y);
  for (auto& v : scaled) v = 4.0 * v - 2.0;
  EXPECT_NEAR(correlate(x, scaled).pearson_r, a.pearson_r, 1e-14);
}

TEST(Stats, BoundsAndConcordanceIdentity) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u;
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> x(12), y(12);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = u(rng);
      y[i] = u(rng);
    }
    const auto s = correlate(x, y);
    for (double v : {s.pearson_r, s.spearman_rho, s.kendall_tau}) {
      EXPECT_GE(v, -1.0);
      EXPECT_LE(v, 1.0);
    }
    EXPECT_EQ(s.concordance_p, (s.kendall_tau + 1.0) / 2.0);
    EXPECT_EQ(s.r_squared, s.pearson_r * s.pearson_r);
  }
  EXPECT_DOUBLE_EQ(concordance_probability(0.88), 0.94);
  EXPECT_EQ(concordance_probability(1.0), 1.0);
  EXPECT_EQ(concordance_probability(-1.0), 0.0);
}

TEST(Stats, PerfectOrderings) {
  const std::vector<double> x{1, 2, 3, 4, 5}, up{2, 4, 6, 8, 10}, down{9, 7, 5, 3, 1};
  EXPECT_DOUBLE_EQ(correlate(x, up).kendall_tau, 1.0);
  EXPECT_DOUBLE_EQ(correlate(x, down).kendall_tau, -1.0);
  EXPECT_DOUBLE_EQ(correlate(x, down).spearman_rho, -1.0);
}

TEST(Stats, Errors) {
  const std::vector<double> x{1, 2, 3}, c{2, 2, 2}, shorter{1, 2};
  EXPECT_THROW(correlate(x, c), UndefinedCorrelationError);
  EXPECT_THROW(correlate(c, x), UndefinedCorrelationError);
  EXPECT_THROW(correlate(x, shorter), ParameterError);
  EXPECT_THROW(correlate(shorter, shorter), ParameterError);
}
