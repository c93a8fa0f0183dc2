#pragma once

#include <iosfwd>

#include "json.hpp"
#include "stepprec/experiments.hpp"

namespace stepprec {

using nlohmann::json;

void to_json(json& j, const CorrelationSummary& s);
void from_json(const json& j, CorrelationSummary& s);
void to_json(json& j, const GainProfile& p);
void from_json(const json& j, GainProfile& p);
void to_json(json& j, const DeviationReport& r);
void from_json(const json& j, DeviationReport& r);
void to_json(json& j, const LatencyBudget& b);
void from_json(const json& j, LatencyBudget& b);
void to_json(json& j, const LipschitzReport& r);
void from_json(const json& j, LipschitzReport& r);
void to_json(json& j, const RankDeviationCurve& c);
void from_json(const json& j, RankDeviationCurve& c);
void to_json(json& j, const BisectionState& s);
void from_json(const json& j, BisectionState& s);
void to_json(json& j, const CalibrationReport& r);
void from_json(const json& j, CalibrationReport& r);
void to_json(json& j, const AdditivityReport& r);
void from_json(const json& j, AdditivityReport& r);
void to_json(json& j, const ParetoReport& r);
void from_json(const json& j, ParetoReport& r);
void to_json(json& j, const MixModelsReport& r);
void from_json(const json& j, MixModelsReport& r);
void to_json(json& j, const BruteForceReport& r);
void from_json(const json& j, BruteForceReport& r);

/// `K,predictor,n,pearson_r,r_squared,spearman_rho,kendall_tau,concordance_p`;
/// K = all for the pooled rows, empty statistics when undefined.
void write_correlation_csv(std::ostream& os, const std::vector<PredictorCorrelation>& rows);
/// `K,bits,s_up,s_down,error`
void write_schedule_points_csv(std::ostream& os, const std::vector<SchedulePoint>& points);
/// `K,speedup,error,bits`
void write_pareto_csv(std::ostream& os, const std::vector<ParetoRow>& rows);

}  // namespace stepprec
