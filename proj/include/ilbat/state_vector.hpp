#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ilbat {

/// Packed binary arc-state vector. Coordinate 0 is the first arc of the
/// network (x1); the bit order is global and append-only across increments.
class StateVector {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  StateVector() = default;

  explicit StateVector(std::size_t size)
      : words_(word_count(size), 0), size_(size) {}

  StateVector(std::initializer_list<int> bits) : StateVector(bits.size()) {
    std::size_t i = 0;
    for (int b : bits) set(i++, b != 0);
  }

  /// Parses "01101" (x1 first). Any other character is rejected.
  static StateVector from_string(std::string_view bits) {
    StateVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] != '0' && bits[i] != '1')
        throw std::invalid_argument("state vector digits must be 0 or 1");
      v.set(i, bits[i] == '1');
    }
    return v;
  }

  /// Bit k of `value` becomes coordinate k.
  static StateVector from_integer(std::uint64_t value, std::size_t size) {
    StateVector v(size);
    if (size > 0) {
      const Word mask = size >= kWordBits ? ~Word{0} : (Word{1} << size) - 1;
      v.words_[0] = value & mask;
    }
    return v;
  }

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  bool operator[](std::size_t i) const noexcept {
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
  }

  bool test(std::size_t i) const {
    if (i >= size_) throw std::out_of_range("state vector index");
    return (*this)[i];
  }

  void set(std::size_t i, bool value = true) noexcept {
    const Word bit = Word{1} << (i % kWordBits);
    if (value)
      words_[i / kWordBits] |= bit;
    else
      words_[i / kWordBits] &= ~bit;
  }

  std::size_t count() const noexcept {
    std::size_t n = 0;
    for (Word w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  bool none() const noexcept {
    return std::all_of(words_.begin(), words_.end(),
                       [](Word w) { return w == 0; });
  }

  bool all() const noexcept { return count() == size_; }

  /// Appends `tail` in place; the product X ⊗ Y when `tail` covers the
  /// increment's arcs.
  void append(const StateVector& tail) {
    const std::size_t old = size_;
    size_ += tail.size_;
    words_.resize(word_count(size_), 0);
    for (std::size_t i = 0; i < tail.size_; ++i)
      if (tail[i]) set(old + i);
  }

  /// Raw words; bits past size() are always zero.
  const std::vector<Word>& words() const noexcept { return words_; }
  std::vector<Word>& mutable_words() noexcept { return words_; }

  /// "01101", x1 first.
  std::string to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i)
      if ((*this)[i]) s[i] = '1';
    return s;
  }

  /// "(0, 1, 1, 0, 1)".
  std::string to_tuple_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < size_; ++i) {
      if (i != 0) s += ", ";
      s += (*this)[i] ? '1' : '0';
    }
    return s + ")";
  }

  friend bool operator==(const StateVector&, const StateVector&) = default;

  friend bool operator<(const StateVector& a, const StateVector& b) {
    if (a.size_ != b.size_) return a.size_ < b.size_;
    return a.to_string() < b.to_string();
  }

  std::size_t hash() const noexcept {
    std::size_t h = std::hash<std::size_t>{}(size_);
    for (Word w : words_)
      h ^= std::hash<Word>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

  static constexpr std::size_t word_count(std::size_t bits) noexcept {
    return (bits + kWordBits - 1) / kWordBits;
  }

 private:
  std::vector<Word> words_;
  std::size_t size_ = 0;
};

/// X ⊗ Y: the coordinates of `head` followed by those of `tail`.
inline StateVector convolve(const StateVector& head, const StateVector& tail) {
  StateVector out = head;
  out.append(tail);
  return out;
}

}  // namespace ilbat

template <>
struct std::hash<ilbat::StateVector> {
  std::size_t operator()(const ilbat::StateVector& v) const noexcept {
    return v.hash();
  }
};
