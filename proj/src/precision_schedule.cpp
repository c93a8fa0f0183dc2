#include "stepprec/precision_schedule.hpp"

#include <algorithm>
#include <numeric>

#include "stepprec/errors.hpp"

namespace stepprec {

namespace {

void check_step(int steps, int t) {
  if (t < 1 || t > steps)
    throw IndexError("timestep " + std::to_string(t) + " outside [1, " +
                     std::to_string(steps) + "]");
}

}  // namespace

PrecisionSchedule::PrecisionSchedule(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto b : bits_)
    if (b > 1) throw ParameterError("schedule bits must be 0 or 1");
}

PrecisionSchedule PrecisionSchedule::all_quantized(int steps) {
  return PrecisionSchedule(std::vector<std::uint8_t>(static_cast<std::size_t>(steps), 0));
}

PrecisionSchedule PrecisionSchedule::all_full(int steps) {
  return PrecisionSchedule(std::vector<std::uint8_t>(static_cast<std::size_t>(steps), 1));
}

PrecisionSchedule PrecisionSchedule::one_hot(int steps, int t) {
  check_step(steps, t);
  auto z = all_quantized(steps);
  z.bits_[static_cast<std::size_t>(t - 1)] = 1;
  return z;
}

PrecisionSchedule PrecisionSchedule::all_but(int steps, int t) {
  check_step(steps, t);
  auto z = all_full(steps);
  z.bits_[static_cast<std::size_t>(t - 1)] = 0;
  return z;
}

PrecisionSchedule PrecisionSchedule::from_timesteps(int steps, const std::vector<int>& full_steps) {
  auto z = all_quantized(steps);
  for (int t : full_steps) {
    check_step(steps, t);
    z.bits_[static_cast<std::size_t>(t - 1)] = 1;
  }
  return z;
}

PrecisionSchedule PrecisionSchedule::parse(std::string_view bits) {
  std::vector<std::uint8_t> out;
  out.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1')
      throw ParameterError("schedule string may contain only '0' and '1': " + std::string(bits));
    out.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return PrecisionSchedule(std::move(out));
}

bool PrecisionSchedule::full(int t) const {
  check_step(steps(), t);
  return bits_[static_cast<std::size_t>(t - 1)] != 0;
}

int PrecisionSchedule::k() const {
  return std::accumulate(bits_.begin(), bits_.end(), 0);
}

std::vector<int> PrecisionSchedule::full_timesteps() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) out.push_back(static_cast<int>(i) + 1);
  return out;
}

std::string PrecisionSchedule::to_string() const {
  std::string s(bits_.size(), '0');
  std::transform(bits_.begin(), bits_.end(), s.begin(),
                 [](std::uint8_t b) { return static_cast<char>('0' + b); });
  return s;
}

}  // namespace stepprec
