#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace stepprec {

/// Binary per-timestep assignment z_1..z_T; z_t = 1 runs step t at full
/// precision (or with the large model), z_t = 0 runs it quantized.
class PrecisionSchedule {
 public:
  PrecisionSchedule() = default;
  explicit PrecisionSchedule(std::vector<std::uint8_t> bits);

  static PrecisionSchedule all_quantized(int steps);
  static PrecisionSchedule all_full(int steps);
  /// e_t: full precision only at step t.
  static PrecisionSchedule one_hot(int steps, int t);
  /// 1 - e_t: quantized only at step t.
  static PrecisionSchedule all_but(int steps, int t);
  static PrecisionSchedule from_timesteps(int steps, const std::vector<int>& full_steps);
  /// Parses "0101..." where the leftmost character is t = 1.
  static PrecisionSchedule parse(std::string_view bits);

  int steps() const { return static_cast<int>(bits_.size()); }
  bool full(int t) const;
  /// Number of full-precision steps (K).
  int k() const;
  std::vector<int> full_timesteps() const;
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  std::string to_string() const;

  friend bool operator==(const PrecisionSchedule&, const PrecisionSchedule&) = default;
  friend auto operator<=>(const PrecisionSchedule& a, const PrecisionSchedule& b) {
    return a.bits_ <=> b.bits_;
  }

 private:
  std::vector<std::uint8_t> bits_;
};

}  // namespace stepprec
