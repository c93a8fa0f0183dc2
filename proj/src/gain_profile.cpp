#include "stepprec/gain_profile.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "stepprec/errors.hpp"

namespace stepprec {

std::string_view to_string(GainKind kind) {
  return kind == GainKind::upcast ? "upcast" : "downcast";
}

std::string_view to_string(Provenance p) {
  return p == Provenance::measured ? "measured" : "interpolated";
}

GainKind parse_gain_kind(std::string_view s) {
  if (s == "upcast") return GainKind::upcast;
  if (s == "downcast") return GainKind::downcast;
  throw ParameterError("unknown gain kind '" + std::string(s) + "'");
}

Provenance parse_provenance(std::string_view s) {
  if (s == "measured") return Provenance::measured;
  if (s == "interpolated") return Provenance::interpolated;
  throw ParameterError("unknown provenance '" + std::string(s) + "'");
}

std::vector<int> GainProfile::measured_timesteps() const {
  std::vector<int> out;
  for (int t = 1; t <= steps(); ++t)
    if (measured(t)) out.push_back(t);
  return out;
}

int GainProfile::interpolated_count() const {
  return steps() - static_cast<int>(measured_timesteps().size());
}

GainProfile fully_measured(GainKind kind, std::vector<double> values) {
  GainProfile p;
  p.kind = kind;
  p.provenance.assign(values.size(), Provenance::measured);
  p.values = std::move(values);
  return p;
}

GainProfile interpolate_profile(GainKind kind, int steps, const std::map<int, double>& measured) {
  if (steps < 1) throw ParameterError("profile needs at least one step");
  if (!measured.contains(1) || !measured.contains(steps))
    throw ParameterError("interpolation needs measurements at t = 1 and t = T");
  GainProfile p;
  p.kind = kind;
  p.values.resize(static_cast<std::size_t>(steps));
  p.provenance.assign(static_cast<std::size_t>(steps), Provenance::interpolated);
  for (auto it = measured.begin(); it != measured.end(); ++it) {
    const auto [t_left, v_left] = *it;
    if (t_left < 1 || t_left > steps) throw IndexError("measured timestep outside [1, T]");
    p.values[static_cast<std::size_t>(t_left - 1)] = v_left;
    p.provenance[static_cast<std::size_t>(t_left - 1)] = Provenance::measured;
    const auto next = std::next(it);
    if (next == measured.end()) break;
    const auto [t_right, v_right] = *next;
    const double width = t_right - t_left;
    for (int t = t_left + 1; t < t_right; ++t) {
      const double w = (t - t_left) / width;
      p.values[static_cast<std::size_t>(t - 1)] = (1.0 - w) * v_left + w * v_right;
    }
  }
  return p;
}

void write_gain_csv(std::ostream& os, const GainProfile& profile) {
  const auto old = os.precision(17);
  os << "t,value,kind,provenance\n";
  for (int t = 1; t <= profile.steps(); ++t)
    os << t << ',' << profile.value(t) << ',' << to_string(profile.kind) << ','
       << to_string(profile.provenance[static_cast<std::size_t>(t - 1)]) << '\n';
  os.precision(old);
}

GainProfile read_gain_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "t,value,kind,provenance")
    throw ParameterError("gain CSV must start with header t,value,kind,provenance");
  GainProfile p;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string t_s, v_s, kind_s, prov_s;
    if (!std::getline(row, t_s, ',') || !std::getline(row, v_s, ',') ||
        !std::getline(row, kind_s, ',') || !std::getline(row, prov_s))
      throw ParameterError("malformed gain CSV row: " + line);
    if (std::stoi(t_s) != p.steps() + 1) throw ParameterError("gain CSV rows must be t = 1..T");
    const auto kind = parse_gain_kind(kind_s);
    if (first) p.kind = kind;
    else if (kind != p.kind) throw ParameterError("gain CSV mixes kinds");
    first = false;
    p.values.push_back(std::stod(v_s));
    p.provenance.push_back(parse_provenance(prov_s));
  }
  return p;
}

double gated_score(const PrecisionSchedule& z, const GainProfile& gains) {
  if (z.steps() != gains.steps())
    throw ShapeError("schedule length " + std::to_string(z.steps()) +
                     " does not match gain profile length " + std::to_string(gains.steps()));
  double sum = 0.0;
  for (int t = 1; t <= z.steps(); ++t)
    if (z.full(t)) sum += gains.value(t);
  return -sum;
}

ScheduleScore score_schedule(const PrecisionSchedule& z, const GainProfile& gains) {
  ScheduleScore s{z, std::nullopt, std::nullopt};
  (gains.kind == GainKind::upcast ? s.s_up : s.s_down) = gated_score(z, gains);
  return s;
}

ScheduleScore score_schedule(const PrecisionSchedule& z, const GainProfile& up,
                             const GainProfile& down) {
  if (up.kind != GainKind::upcast || down.kind != GainKind::downcast)
    throw ParameterError("expected an upcast and a downcast profile");
  return {z, gated_score(z, up), gated_score(z, down)};
}

}  // namespace stepprec
