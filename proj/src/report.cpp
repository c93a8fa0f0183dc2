#include "stepprec/report.hpp"

#include <ostream>

#include "stepprec/errors.hpp"

namespace stepprec {

namespace {

void check_version(const json& j) {
  const int v = j.at("schema_version").get<int>();
  if (v != kReportSchemaVersion)
    throw ParameterError("unsupported report schema version " + std::to_string(v));
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

void to_json(json& j, const CorrelationSummary& s) {
  j = json{{"pearson_r", s.pearson_r},       {"r_squared", s.r_squared},
           {"spearman_rho", s.spearman_rho}, {"kendall_tau", s.kendall_tau},
           {"concordance_p", s.concordance_p}, {"n", s.n}};
}

void from_json(const json& j, CorrelationSummary& s) {
  j.at("pearson_r").get_to(s.pearson_r);
  j.at("r_squared").get_to(s.r_squared);
  j.at("spearman_rho").get_to(s.spearman_rho);
  j.at("kendall_tau").get_to(s.kendall_tau);
  j.at("concordance_p").get_to(s.concordance_p);
  j.at("n").get_to(s.n);
}

void to_json(json& j, const GainProfile& p) {
  std::vector<std::string> prov;
  for (auto v : p.provenance) prov.emplace_back(to_string(v));
  j = json{{"kind", to_string(p.kind)}, {"values", p.values}, {"provenance", prov}};
}

void from_json(const json& j, GainProfile& p) {
  p.kind = parse_gain_kind(j.at("kind").get<std::string>());
  j.at("values").get_to(p.values);
  p.provenance.clear();
  for (const auto& s : j.at("provenance")) p.provenance.push_back(parse_provenance(s.get<std::string>()));
  if (p.provenance.size() != p.values.size())
    throw ParameterError("gain profile values and provenance differ in length");
}

void to_json(json& j, const DeviationReport& r) {
  j = json{{"schema_version", kReportSchemaVersion},
           {"schedule_bits", r.schedule_bits},
           {"mean_error", r.mean_error},
           {"per_sample_errors", r.per_sample_errors},
           {"variance", r.variance},
           {"delta0", std::vector<double>(r.delta0.begin(), r.delta0.end())}};
}

void from_json(const json& j, DeviationReport& r) {
  check_version(j);
  j.at("schedule_bits").get_to(r.schedule_bits);
  j.at("mean_error").get_to(r.mean_error);
  j.at("per_sample_errors").get_to(r.per_sample_errors);
  j.at("variance").get_to(r.variance);
  const auto d = j.at("delta0").get<std::vector<double>>();
  r.delta0 = Eigen::Map<const Eigen::VectorXd>(d.data(), static_cast<Eigen::Index>(d.size()));
}

void to_json(json& j, const LatencyBudget& b) {
  j = json{{"T", b.steps}, {"r", b.target_speedup}, {"lambda", b.quant_speedup},
           {"exact_K", b.exact_k}, {"K", b.k}};
}

void from_json(const json& j, LatencyBudget& b) {
  j.at("T").get_to(b.steps);
  j.at("r").get_to(b.target_speedup);
  j.at("lambda").get_to(b.quant_speedup);
  j.at("exact_K").get_to(b.exact_k);
  j.at("K").get_to(b.k);
}

void to_json(json& j, const LipschitzReport& r) {
  j = json{{"K", r.k},
           {"lipschitz", r.lipschitz},
           {"epsilon", r.epsilon},
           {"gap_K", optional_json(r.gap_k)},
           {"certified", r.certified}};
}

void from_json(const json& j, LipschitzReport& r) {
  j.at("K").get_to(r.k);
  j.at("lipschitz").get_to(r.lipschitz);
  j.at("epsilon").get_to(r.epsilon);
  r.gap_k = optional_from<double>(j, "gap_K");
  j.at("certified").get_to(r.certified);
}

void to_json(json& j, const RankDeviationCurve& c) {
  j = json{{"ks", c.ks}, {"deviation", c.deviation}};
}

void from_json(const json& j, RankDeviationCurve& c) {
  j.at("ks").get_to(c.ks);
  j.at("deviation").get_to(c.deviation);
}

void to_json(json& j, const BisectionState& s) {
  json m = json::array();
  for (const auto& [t, v] : s.measurements) m.push_back({t, v});
  json segs = json::array();
  for (const auto& seg : s.segments) segs.push_back({seg.left, seg.right});
  j = json{{"budget", s.budget},
           {"anchors", s.anchors},
           {"measurement_order", s.measurement_order},
           {"measurements", m},
           {"segments", segs}};
}

void from_json(const json& j, BisectionState& s) {
  j.at("budget").get_to(s.budget);
  j.at("anchors").get_to(s.anchors);
  j.at("measurement_order").get_to(s.measurement_order);
  s.measurements.clear();
  for (const auto& e : j.at("measurements")) s.measurements[e.at(0).get<int>()] = e.at(1).get<double>();
  s.segments.clear();
  for (const auto& e : j.at("segments")) s.segments.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
}

void to_json(json& j, const CalibrationReport& r) {
  j = json{{"schema_version", r.schema_version},
           {"budget", optional_json(r.budget)},
           {"K", r.k},
           {"bisection", r.state},
           {"gain_profile", r.profile},
           {"schedule_bits", r.schedule_bits},
           {"schedule_error", r.schedule_error},
           {"all_quantized_error", r.all_quantized_error},
           {"lipschitz", r.lipschitz},
           {"reference_profile", optional_json(r.reference)},
           {"rank_deviation", optional_json(r.rank_deviation)},
           {"warnings", r.warnings}};
}

void from_json(const json& j, CalibrationReport& r) {
  check_version(j);
  r.schema_version = kReportSchemaVersion;
  r.budget = optional_from<LatencyBudget>(j, "budget");
  j.at("K").get_to(r.k);
  j.at("bisection").get_to(r.state);
  j.at("gain_profile").get_to(r.profile);
  j.at("schedule_bits").get_to(r.schedule_bits);
  j.at("schedule_error").get_to(r.schedule_error);
  j.at("all_quantized_error").get_to(r.all_quantized_error);
  j.at("lipschitz").get_to(r.lipschitz);
  r.reference = optional_from<GainProfile>(j, "reference_profile");
  r.rank_deviation = optional_from<RankDeviationCurve>(j, "rank_deviation");
  j.at("warnings").get_to(r.warnings);
}

void to_json(json& j, const AdditivityReport& r) {
  json points = json::array();
  for (const auto& p : r.points)
    points.push_back({{"K", p.k}, {"bits", p.bits}, {"s_up", p.s_up}, {"s_down", p.s_down},
                      {"error", p.error}});
  json corr = json::array();
  for (const auto& c : r.correlations)
    corr.push_back({{"K", c.k}, {"predictor", c.predictor}, {"summary", optional_json(c.summary)}});
  j = json{{"schema_version", r.schema_version},
           {"upcast", r.upcast},
           {"downcast", r.downcast},
           {"all_quantized_error", r.all_quantized_error},
           {"nonlinear_fraction", r.nonlinear_fraction},
           {"single_step", optional_json(r.single_step)},
           {"points", points},
           {"correlations", corr}};
}

void from_json(const json& j, AdditivityReport& r) {
  check_version(j);
  r.schema_version = kReportSchemaVersion;
  j.at("upcast").get_to(r.upcast);
  j.at("downcast").get_to(r.downcast);
  j.at("all_quantized_error").get_to(r.all_quantized_error);
  j.at("nonlinear_fraction").get_to(r.nonlinear_fraction);
  r.single_step = optional_from<CorrelationSummary>(j, "single_step");
  r.points.clear();
  for (const auto& p : j.at("points"))
    r.points.push_back({p.at("K").get<int>(), p.at("bits").get<std::string>(),
                        p.at("s_up").get<double>(), p.at("s_down").get<double>(),
                        p.at("error").get<double>()});
  r.correlations.clear();
  for (const auto& c : j.at("correlations"))
    r.correlations.push_back({c.at("K").get<int>(), c.at("predictor").get<std::string>(),
                              optional_from<CorrelationSummary>(c, "summary")});
}

void to_json(json& j, const ParetoReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"K", row.k}, {"speedup", row.speedup}, {"error", row.error}, {"bits", row.bits}});
  j = json{{"schema_version", r.schema_version},
           {"lambda", r.quant_speedup},
           {"gain_profile", r.profile},
           {"rows", rows},
           {"error_non_increasing", r.error_non_increasing},
           {"strictly_decreasing_where_positive", r.strictly_decreasing_where_positive}};
}

void from_json(const json& j, ParetoReport& r) {
  check_version(j);
  r.schema_version = kReportSchemaVersion;
  j.at("lambda").get_to(r.quant_speedup);
  j.at("gain_profile").get_to(r.profile);
  r.rows.clear();
  for (const auto& row : j.at("rows"))
    r.rows.push_back({row.at("K").get<int>(), row.at("speedup").get<double>(),
                      row.at("error").get<double>(), row.at("bits").get<std::string>()});
  j.at("error_non_increasing").get_to(r.error_non_increasing);
  j.at("strictly_decreasing_where_positive").get_to(r.strictly_decreasing_where_positive);
}

void to_json(json& j, const MixModelsReport& r) {
  j = json{{"schema_version", r.schema_version},
           {"sensitivity", r.sensitivity},
           {"small_steps", r.small_steps},
           {"ours_bits", r.ours_bits},
           {"heuristic_bits", r.heuristic_bits},
           {"ours_error", r.ours_error},
           {"heuristic_error", r.heuristic_error}};
}

void from_json(const json& j, MixModelsReport& r) {
  check_version(j);
  r.schema_version = kReportSchemaVersion;
  j.at("sensitivity").get_to(r.sensitivity);
  j.at("small_steps").get_to(r.small_steps);
  j.at("ours_bits").get_to(r.ours_bits);
  j.at("heuristic_bits").get_to(r.heuristic_bits);
  j.at("ours_error").get_to(r.ours_error);
  j.at("heuristic_error").get_to(r.heuristic_error);
}

void to_json(json& j, const BruteForceReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"K", row.k},
                    {"greedy_bits", row.greedy_bits},
                    {"greedy_error", row.greedy_error},
                    {"optimal_bits", row.optimal_bits},
                    {"optimal_error", row.optimal_error},
                    {"gap", row.gap()},
                    {"evaluated", row.evaluated}});
  j = json{{"schema_version", r.schema_version}, {"gain_profile", r.profile}, {"rows", rows}};
}

void from_json(const json& j, BruteForceReport& r) {
  check_version(j);
  r.schema_version = kReportSchemaVersion;
  j.at("gain_profile").get_to(r.profile);
  r.rows.clear();
  for (const auto& row : j.at("rows"))
    r.rows.push_back({row.at("K").get<int>(), row.at("greedy_bits").get<std::string>(),
                      row.at("greedy_error").get<double>(),
                      row.at("optimal_bits").get<std::string>(),
                      row.at("optimal_error").get<double>(),
                      row.at("evaluated").get<std::uint64_t>()});
}

void write_correlation_csv(std::ostream& os, const std::vector<PredictorCorrelation>& rows) {
  const auto old = os.precision(17);
  os << "K,predictor,n,pearson_r,r_squared,spearman_rho,kendall_tau,concordance_p\n";
  for (const auto& r : rows) {
    if (r.k < 0) os << "all";
    else os << r.k;
    os << ',' << r.predictor << ',';
    if (r.summary) {
      const auto& s = *r.summary;
      os << s.n << ',' << s.pearson_r << ',' << s.r_squared << ',' << s.spearman_rho << ','
         << s.kendall_tau << ',' << s.concordance_p;
    } else {
      os << ",,,,,";
    }
    os << '\n';
  }
  os.precision(old);
}

void write_schedule_points_csv(std::ostream& os, const std::vector<SchedulePoint>& points) {
  const auto old = os.precision(17);
  os << "K,bits,s_up,s_down,error\n";
  for (const auto& p : points)
    os << p.k << ',' << p.bits << ',' << p.s_up << ',' << p.s_down << ',' << p.error << '\n';
  os.precision(old);
}

void write_pareto_csv(std::ostream& os, const std::vector<ParetoRow>& rows) {
  const auto old = os.precision(17);
  os << "K,speedup,error,bits\n";
  for (const auto& r : rows) os << r.k << ',' << r.speedup << ',' << r.error << ',' << r.bits << '\n';
  os.precision(old);
}

}  // namespace stepprec
