#include <gtest/gtest.h>

#include <sstream>

#include "stepprec/config.hpp"
#include "stepprec/errors.hpp"
#include "stepprec/report.hpp"

using namespace stepprec;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

template <typename T>
void expect_json_round_trip(const T& value) {
  const json j = value;
  const T back = j.get<T>();
  EXPECT_EQ(json(back), j);
}

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.steps = 8;
  cfg.model.dim = 4;
  cfg.samples = 4;
  cfg.budget = 5;
  cfg.schedules_per_k = 5;
  cfg.validate_ks = {2, 4};
  cfg.rank_ks = {2};
  cfg.quant_speedup = 4.0;
  cfg.target_speedup = 2.0;
  cfg.small_steps = 2;
  return cfg;
}

}  // namespace

TEST(Config, ParsesKeysAndComments) {
  const auto cfg = parse(
      "# comment\n"
      "steps = 12\n"
      "alpha_kind = cosine\n"
      "dim = 20 \n"
      "error_structure = orthogonal\n"
      "nonlinearity = 0\n"
      "; other comment\n"
      "quant_speedup = 3.5\n"
      "validate_ks = 1, 3,5\n"
      "per_step_jacobians = true\n");
  EXPECT_EQ(cfg.steps, 12);
  EXPECT_EQ(cfg.alpha_kind, AlphaKind::cosine);
  EXPECT_EQ(cfg.model.dim, 20);
  EXPECT_EQ(cfg.model.error_structure, ErrorStructure::orthogonal);
  EXPECT_EQ(cfg.model.nonlinearity, 0.0);
  EXPECT_EQ(cfg.quant_speedup, 3.5);
  EXPECT_FALSE(cfg.target_speedup.has_value());
  EXPECT_EQ(cfg.validate_ks, (std::vector<int>{1, 3, 5}));
  EXPECT_TRUE(cfg.model.per_step_jacobians);
  EXPECT_EQ(cfg.resolved_budget(), 12);
}

TEST(Config, Defaults) {
  const auto cfg = parse("");
  EXPECT_EQ(cfg, ExperimentConfig{});
  EXPECT_EQ(cfg.resolved_budget(), 13);
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(parse("stepz = 3\n"), ConfigError);
  EXPECT_THROW(parse("steps = three\n"), ConfigError);
  EXPECT_THROW(parse("steps = 1\n"), ConfigError);
  EXPECT_THROW(parse("[model]\ndim = 3\n"), ConfigError);
  EXPECT_THROW(parse("error_profile = wavy\n"), ConfigError);
  EXPECT_THROW(parse("per_step_jacobians = maybe\n"), ConfigError);
  EXPECT_THROW(parse("error_structure = orthogonal\ndim = 4\n"), ConfigError);
  EXPECT_THROW(parse("quant_speedup = 1\n"), ConfigError);
  EXPECT_THROW(parse("validate_ks = 2, 40\n"), ConfigError);
  EXPECT_THROW(parse("budget = 2\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.ini"), ConfigError);
  try {
    parse("alpha_min = 0.9\nalpha_max = 0.5\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("alpha_min"), std::string::npos);
  }
}

TEST(Config, WrittenConfigReloadsIdentically) {
  auto cfg = small_config();
  cfg.alpha_kind = AlphaKind::cosine;
  cfg.model.error_coherence = 0.123456789012345;
  cfg.full_steps = 3;
  cfg.pareto_ks = {0, 8};
  std::ostringstream os;
  write_config(os, cfg);
  EXPECT_EQ(parse(os.str()), cfg);

  ExperimentConfig defaults;
  std::ostringstream os2;
  write_config(os2, defaults);
  const auto back = parse(os2.str());
  EXPECT_EQ(back.resolved_budget(), defaults.resolved_budget());
  back.validate();
}

TEST(Config, IntList) {
  EXPECT_EQ(parse_int_list("1,2, 3"), (std::vector<int>{1, 2, 3}));
  EXPECT_TRUE(parse_int_list("").empty());
  EXPECT_THROW(parse_int_list("1,x"), std::exception);
}

TEST(Report, GainCsvRoundTrip) {
  const auto p = interpolate_profile(GainKind::downcast, 6, {{1, 0.125}, {3, -1e-9}, {6, 2.0 / 3.0}});
  std::ostringstream os;
  write_gain_csv(os, p);
  EXPECT_EQ(os.str().rfind("t,value,kind,provenance\n", 0), 0u);
  std::istringstream is(os.str());
  EXPECT_EQ(read_gain_csv(is), p);
}

TEST(Report, JsonRoundTrips) {
  auto cfg = small_config();
  const auto add = run_validate_additivity(cfg);
  expect_json_round_trip(add);
  expect_json_round_trip(run_calibrate(cfg, true));
  expect_json_round_trip(run_pareto(cfg));
  expect_json_round_trip(run_mix_models(cfg));
  expect_json_round_trip(run_brute_force(cfg, {2, 3}));
  expect_json_round_trip(add.upcast);
  expect_json_round_trip(compute_budget(20, 2.5, 5.0));

  json j = add;
  j["schema_version"] = 99;
  EXPECT_THROW(j.get<AdditivityReport>(), std::exception);
}

TEST(Report, DeviationReportJson) {
  DeviationReport r;
  r.schedule_bits = "0101";
  r.delta0 = Eigen::Vector3d(1.0, -2.0, 0.5);
  r.per_sample_errors = {0.1, 0.3};
  r.mean_error = 0.2;
  r.variance = 0.01;
  const json j = r;
  EXPECT_EQ(j.at("schedule_bits"), "0101");
  EXPECT_EQ(j.at("delta0").size(), 3u);
  const auto back = j.get<DeviationReport>();
  EXPECT_EQ(back.delta0, r.delta0);
  EXPECT_EQ(back.per_sample_errors, r.per_sample_errors);
}

TEST(Report, CsvWriters) {
  std::vector<PredictorCorrelation> rows{{2, "s_up", CorrelationSummary{0.9, 0.81, 0.8, 0.7, 0.85, 20}},
                                         {-1, "s_down", std::nullopt}};
  std::ostringstream os;
  write_correlation_csv(os, rows);
  const auto text = os.str();
  EXPECT_EQ(text.rfind("K,predictor,n,pearson_r,r_squared,spearman_rho,kendall_tau,concordance_p\n", 0),
            0u);
  EXPECT_NE(text.find("\nall,s_down"), std::string::npos);

  std::ostringstream ps;
  write_pareto_csv(ps, {{0, 4.0, 1.5, "0000"}});
  EXPECT_EQ(ps.str().rfind("K,speedup,error,bits\n0,4", 0), 0u);
}
