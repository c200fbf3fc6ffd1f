#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <stdexcept>
#include <string>
#include <vector>

#include "ilbat/error.hpp"
#include "ilbat/network.hpp"
#include "ilbat/state_vector.hpp"

namespace ilbat {

/// Binary-addition-tree enumeration over m coordinates. A single vector is
/// updated in place: each step finds the lowest zero coordinate, sets it and
/// clears everything below it. Starting from all zeros this visits all 2^m
/// vectors, which read as integers (x1 least significant) count 0..2^m-1.
class BatCursor {
 public:
  /// Positions the cursor on the all-zero m-vector.
  explicit BatCursor(std::size_t m) : current_(m) {
    if (m == 0) throw std::invalid_argument("BAT needs at least one coordinate");
  }

  /// Resumes enumeration from an arbitrary vector.
  explicit BatCursor(StateVector start) : current_(std::move(start)) {
    if (current_.size() == 0)
      throw std::invalid_argument("BAT needs at least one coordinate");
  }

  const StateVector& current() const noexcept { return current_; }
  bool exhausted() const noexcept { return exhausted_; }

  /// Advances to the successor; false once the all-ones vector has been
  /// passed. The current vector is left at all ones when exhausted.
  bool advance() noexcept {
    if (exhausted_) return false;
    auto& words = current_.mutable_words();
    const std::size_t m = current_.size();
    const std::size_t last = words.size() - 1;
    const std::size_t tail_bits = m - last * StateVector::kWordBits;
    const StateVector::Word tail_mask =
        tail_bits == StateVector::kWordBits
            ? ~StateVector::Word{0}
            : (StateVector::Word{1} << tail_bits) - 1;

    std::size_t w = 0;
    while (w < last && words[w] == ~StateVector::Word{0}) ++w;
    if (w == last && words[w] == tail_mask) {
      exhausted_ = true;
      return false;
    }
    // Coordinates below the located zero are all ones: clear them.
    for (std::size_t k = 0; k < w; ++k) words[k] = 0;
    const StateVector::Word word = words[w];
    const StateVector::Word zero_bit = ~word & (word + 1);
    words[w] = (word | zero_bit) & ~(zero_bit - 1);
    return true;
  }

  /// The successor vector, or nullopt once exhausted.
  std::optional<StateVector> next() {
    if (!advance()) return std::nullopt;
    return current_;
  }

 private:
  StateVector current_;
  bool exhausted_ = false;
};

inline BatCursor bat_init(std::size_t m) { return BatCursor(m); }

inline std::optional<StateVector> bat_next(BatCursor& cursor) {
  return cursor.next();
}

/// Calls `visit(const StateVector&)` for every vector over `width`
/// coordinates in BAT order, optionally skipping the leading zero vector.
template <class Visit>
void for_each_bat_vector(std::size_t width, bool skip_zero, Visit&& visit) {
  BatCursor cursor(width);
  if (!skip_zero) visit(cursor.current());
  while (cursor.advance()) visit(cursor.current());
}

inline constexpr std::size_t kMaxSubBatWidth = 30;

/// All vectors over an increment of `width` arcs in BAT order. With
/// `skip_zero` the leading all-zero vector is omitted.
inline std::vector<StateVector> sub_bat(std::size_t width, bool skip_zero) {
  if (width == 0) throw InvalidIncrement("sub-BAT over an empty increment");
  if (width > kMaxSubBatWidth)
    throw CapExceeded("increment of " + std::to_string(width) +
                      " arcs is too wide to enumerate");
  std::vector<StateVector> out;
  out.reserve((std::size_t{1} << width) - (skip_zero ? 1 : 0));
  for_each_bat_vector(width, skip_zero,
                      [&](const StateVector& v) { out.push_back(v); });
  return out;
}

inline std::vector<StateVector> sub_bat(const IncrementProcess& process,
                                        bool skip_zero) {
  return sub_bat(process.size(), skip_zero);
}

inline std::vector<StateVector> sub_bat(const BoundIncrement& inc,
                                        bool skip_zero) {
  return sub_bat(inc.size(), skip_zero);
}

}  // namespace ilbat
