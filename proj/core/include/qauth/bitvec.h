#ifndef QAUTH_BITVEC_H
#define QAUTH_BITVEC_H

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace qauth {

/// Fixed-length bit vector over GF(2), packed into 64-bit words.
///
/// Bit i lives in word i / 64 at position i % 64. Padding bits above size()
/// are kept zero so word-level equality, popcount and parity are exact.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(size_t num_bits);

  /// Parses a string of '0'/'1' characters; character i is bit i.
  static BitVec from_bits(std::string_view bits);
  /// Inverse of to_hex(). Throws std::invalid_argument on malformed input.
  static BitVec from_hex(std::string_view hex, size_t num_bits);
  /// Low `num_bits` bits of `value`.
  static BitVec from_u64(uint64_t value, size_t num_bits);

  size_t size() const { return num_bits_; }
  size_t num_words() const { return words_.size(); }

  bool get(size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
  void set(size_t i, bool value = true) {
    uint64_t mask = uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }
  void flip(size_t i) { words_[i >> 6] ^= uint64_t{1} << (i & 63); }
  void clear();

  size_t popcount() const;
  bool any() const;
  bool none() const { return !any(); }
  /// Parity of the bitwise AND, i.e. the GF(2) dot product.
  bool dot(const BitVec& other) const;
  /// Index of the lowest set bit, or size() when none is set.
  size_t first_set() const;
  std::vector<size_t> support() const;

  BitVec& operator^=(const BitVec& other);
  BitVec& operator&=(const BitVec& other);
  BitVec& operator|=(const BitVec& other);
  friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }
  friend BitVec operator&(BitVec a, const BitVec& b) { return a &= b; }
  friend BitVec operator|(BitVec a, const BitVec& b) { return a |= b; }
  bool operator==(const BitVec& other) const = default;

  std::span<uint64_t> words() { return {words_.data(), words_.size()}; }
  std::span<const uint64_t> words() const { return {words_.data(), words_.size()}; }

  /// '0'/'1' string, bit 0 first.
  std::string str() const;
  /// Hex string; character k holds bits 4k..4k+3 with bit 4k as the nibble's
  /// least significant bit. Length is ceil(size() / 4).
  std::string to_hex() const;

 private:
  void check_same_size(const BitVec& other) const;

  size_t num_bits_ = 0;
  // Two inline words cover every register up to 128 qubits without allocating.
  boost::container::small_vector<uint64_t, 2> words_;
};

inline size_t words_for_bits(size_t num_bits) { return (num_bits + 63) / 64; }

}  // namespace qauth

#endif  // QAUTH_BITVEC_H
