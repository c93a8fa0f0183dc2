#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "stepprec/precision_schedule.hpp"

namespace stepprec {

/// Upcast: Delta_up_t = E(0) - E(e_t). Downcast: Delta_down_t = E(1 - e_t) - E(1).
enum class GainKind { upcast, downcast };
enum class Provenance { measured, interpolated };

std::string_view to_string(GainKind kind);
std::string_view to_string(Provenance p);
GainKind parse_gain_kind(std::string_view s);
Provenance parse_provenance(std::string_view s);

/// Single-toggle gains over t = 1..T with a per-entry provenance flag.
struct GainProfile {
  GainKind kind = GainKind::upcast;
  std::vector<double> values;
  std::vector<Provenance> provenance;

  int steps() const { return static_cast<int>(values.size()); }
  double value(int t) const { return values.at(static_cast<std::size_t>(t - 1)); }
  bool measured(int t) const {
    return provenance.at(static_cast<std::size_t>(t - 1)) == Provenance::measured;
  }
  std::vector<int> measured_timesteps() const;
  int interpolated_count() const;

  friend bool operator==(const GainProfile&, const GainProfile&) = default;
};

GainProfile fully_measured(GainKind kind, std::vector<double> values);

/// Piecewise-linear fill of the unmeasured steps. Steps 1 and T must be
/// among the measurements.
GainProfile interpolate_profile(GainKind kind, int steps, const std::map<int, double>& measured);

/// CSV with header `t,value,kind,provenance`.
void write_gain_csv(std::ostream& os, const GainProfile& profile);
GainProfile read_gain_csv(std::istream& is);

/// Predicted ranking score; lower predicts lower E(Z).
struct ScheduleScore {
  PrecisionSchedule schedule;
  std::optional<double> s_up;
  std::optional<double> s_down;
};

/// -sum_t Delta_t z_t.
double gated_score(const PrecisionSchedule& z, const GainProfile& gains);

/// Fills s_up or s_down according to the profile kind.
ScheduleScore score_schedule(const PrecisionSchedule& z, const GainProfile& gains);
ScheduleScore score_schedule(const PrecisionSchedule& z, const GainProfile& up,
                             const GainProfile& down);

}  // namespace stepprec
