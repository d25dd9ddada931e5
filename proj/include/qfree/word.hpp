#pragma once

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qfree/labels.hpp"

namespace qfree {

/// One entangled operator a_λ(t,k) (epsilon = -1) or a†_λ(t,k) (epsilon = +1).
struct Letter {
  int epsilon = -1;
  TimeLabel time;
  WaveLabel wave;

  bool is_creation() const { return epsilon > 0; }
  bool is_annihilation() const { return epsilon < 0; }
  friend auto operator<=>(const Letter&, const Letter&) = default;
};

/// Ordered product of entangled operators; all labels are distinct.
class OperatorWord {
 public:
  OperatorWord() = default;
  explicit OperatorWord(std::vector<Letter> letters) : letters_(std::move(letters)) {
    std::set<TimeLabel> times;
    std::set<WaveLabel> waves;
    for (auto& l : letters_) {
      if (l.epsilon != 1 && l.epsilon != -1)
        throw std::invalid_argument("letter epsilon must be +1 or -1");
      if (!times.insert(l.time).second || !waves.insert(l.wave).second)
        throw std::invalid_argument("operator word labels must be pairwise distinct");
    }
  }

  /// Word with positional labels t_s, k_s (ids 0..N-1) for a ±1 pattern.
  static OperatorWord from_pattern(const std::vector<int>& pattern) {
    std::vector<Letter> ls;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      auto id = static_cast<std::uint32_t>(i);
      ls.push_back({pattern[i], TimeLabel{id}, WaveLabel{id}});
    }
    return OperatorWord(std::move(ls));
  }

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  const Letter& operator[](std::size_t i) const { return letters_[i]; }
  /// 1-based access matching diagram positions.
  const Letter& at_position(std::size_t pos) const { return letters_.at(pos - 1); }

  std::vector<int> pattern() const {
    std::vector<int> p;
    for (auto& l : letters_) p.push_back(l.epsilon);
    return p;
  }

  bool balanced() const {
    int s = 0;
    for (auto& l : letters_) s += l.epsilon;
    return s == 0;
  }

  friend bool operator==(const OperatorWord&, const OperatorWord&) = default;

 private:
  std::vector<Letter> letters_;
};

/// All balanced ±1 patterns of length n (n even), in lexicographic order with -1 < +1.
inline std::vector<std::vector<int>> balanced_patterns(std::size_t n) {
  std::vector<std::vector<int>> out;
  if (n % 2 != 0) return out;
  std::vector<int> p(n / 2, -1);
  p.resize(n, +1);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace qfree
