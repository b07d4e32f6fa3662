#pragma once

#include <compare>
#include <cstdint>
#include <limits>

namespace lsim {

// Wide intermediate for byte * picosecond products.
__extension__ typedef __int128 Int128;

// Simulation time as integer picoseconds since the start of a run. A 1 KiB
// packet at 100 Gb/s serializes in exactly 81,920 ps.
class SimTime {
 public:
  constexpr SimTime() = default;

  static constexpr SimTime FromPs(std::int64_t ps) { return SimTime(ps); }
  static constexpr SimTime FromNs(std::int64_t ns) { return SimTime(ns * 1'000); }
  static constexpr SimTime FromUs(std::int64_t us) {
    return SimTime(us * 1'000'000);
  }
  static constexpr SimTime FromMs(std::int64_t ms) {
    return SimTime(ms * 1'000'000'000);
  }
  static constexpr SimTime Zero() { return SimTime(0); }
  static constexpr SimTime Max() {
    return SimTime(std::numeric_limits<std::int64_t>::max());
  }

  constexpr std::int64_t ps() const { return ps_; }
  constexpr double ToSeconds() const { return static_cast<double>(ps_) * 1e-12; }
  constexpr double ToMs() const { return static_cast<double>(ps_) * 1e-9; }
  constexpr double ToUs() const { return static_cast<double>(ps_) * 1e-6; }

  constexpr auto operator<=>(const SimTime&) const = default;

  constexpr SimTime operator+(SimTime o) const { return SimTime(ps_ + o.ps_); }
  constexpr SimTime operator-(SimTime o) const { return SimTime(ps_ - o.ps_); }
  constexpr SimTime& operator+=(SimTime o) {
    ps_ += o.ps_;
    return *this;
  }
  constexpr SimTime operator*(std::int64_t k) const { return SimTime(ps_ * k); }

 private:
  constexpr explicit SimTime(std::int64_t ps) : ps_(ps) {}
  std::int64_t ps_ = 0;
};

inline constexpr std::int64_t kPsPerSecond = 1'000'000'000'000;

}  // namespace lsim
