#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qfree {

/// Formal time symbol. Ordering is by id; ids are assigned in word-position
/// order so the smallest label is the leftmost one.
struct TimeLabel {
  std::uint32_t id = 0;
  friend auto operator<=>(const TimeLabel&, const TimeLabel&) = default;
};

/// Formal wave-vector symbol.
struct WaveLabel {
  std::uint32_t id = 0;
  friend auto operator<=>(const WaveLabel&, const WaveLabel&) = default;
};

/// Display names for labels. Labels without an entry render as t<id+1>/k<id+1>.
class Symbols {
 public:
  Symbols() = default;
  Symbols(std::vector<std::string> times, std::vector<std::string> waves)
      : times_(std::move(times)), waves_(std::move(waves)) {}

  /// Positional names t1..tN, k1..kN.
  static Symbols positional(std::size_t n) {
    Symbols s;
    for (std::size_t i = 1; i <= n; ++i) {
      s.times_.push_back("t" + std::to_string(i));
      s.waves_.push_back("k" + std::to_string(i));
    }
    return s;
  }

  std::string name(TimeLabel t) const {
    if (t.id < times_.size()) return times_[t.id];
    return "t" + std::to_string(t.id + 1);
  }
  std::string name(WaveLabel k) const {
    if (k.id < waves_.size()) return waves_[k.id];
    return "k" + std::to_string(k.id + 1);
  }

  TimeLabel time(std::string_view nm) const {
    if (auto i = find(times_, nm)) return TimeLabel{*i};
    throw std::invalid_argument("unknown time label '" + std::string(nm) + "'");
  }
  WaveLabel wave(std::string_view nm) const {
    if (auto i = find(waves_, nm)) return WaveLabel{*i};
    throw std::invalid_argument("unknown wave label '" + std::string(nm) + "'");
  }

  /// Returns the label for `nm`, registering it if new.
  TimeLabel intern_time(std::string_view nm) {
    if (auto i = find(times_, nm)) return TimeLabel{*i};
    times_.emplace_back(nm);
    return TimeLabel{static_cast<std::uint32_t>(times_.size() - 1)};
  }
  WaveLabel intern_wave(std::string_view nm) {
    if (auto i = find(waves_, nm)) return WaveLabel{*i};
    waves_.emplace_back(nm);
    return WaveLabel{static_cast<std::uint32_t>(waves_.size() - 1)};
  }

  const std::vector<std::string>& time_names() const { return times_; }
  const std::vector<std::string>& wave_names() const { return waves_; }

  friend bool operator==(const Symbols&, const Symbols&) = default;

 private:
  static std::optional<std::uint32_t> find(const std::vector<std::string>& v,
                                           std::string_view nm) {
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] == nm) return static_cast<std::uint32_t>(i);
    return std::nullopt;
  }

  std::vector<std::string> times_;
  std::vector<std::string> waves_;
};

}  // namespace qfree
