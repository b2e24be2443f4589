#include "qauth/bitvec.h"

#include <stdexcept>

namespace qauth {

BitVec::BitVec(size_t num_bits) : num_bits_(num_bits), words_(words_for_bits(num_bits), 0) {}

BitVec BitVec::from_bits(std::string_view bits) {
  BitVec result(bits.size());
  for (size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      result.set(i);
    } else if (bits[i] != '0') {
      throw std::invalid_argument("bit string may only contain '0' and '1': " + std::string(bits));
    }
  }
  return result;
}

BitVec BitVec::from_hex(std::string_view hex, size_t num_bits) {
  if (hex.size() != (num_bits + 3) / 4) {
    throw std::invalid_argument("hex string length " + std::to_string(hex.size()) + " does not match " +
                                std::to_string(num_bits) + " bits");
  }
  BitVec result(num_bits);
  for (size_t k = 0; k < hex.size(); ++k) {
    char c = hex[k];
    unsigned nibble;
    if (c >= '0' && c <= '9') {
      nibble = static_cast<unsigned>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      nibble = static_cast<unsigned>(c - 'a' + 10);
    } else if (c >= 'A' && c <= 'F') {
      nibble = static_cast<unsigned>(c - 'A' + 10);
    } else {
      throw std::invalid_argument("invalid hex character in '" + std::string(hex) + "'");
    }
    for (size_t b = 0; b < 4; ++b) {
      if ((nibble >> b) & 1) {
        size_t i = 4 * k + b;
        if (i >= num_bits) {
          throw std::invalid_argument("hex string sets a bit beyond " + std::to_string(num_bits));
        }
        result.set(i);
      }
    }
  }
  return result;
}

BitVec BitVec::from_u64(uint64_t value, size_t num_bits) {
  BitVec result(num_bits);
  if (num_bits == 0) {
    return result;
  }
  if (num_bits < 64) {
    value &= (uint64_t{1} << num_bits) - 1;
  }
  result.words_[0] = value;
  return result;
}

void BitVec::clear() {
  for (auto& w : words_) {
    w = 0;
  }
}

size_t BitVec::popcount() const {
  size_t total = 0;
  for (uint64_t w : words_) {
    total += static_cast<size_t>(std::popcount(w));
  }
  return total;
}

bool BitVec::any() const {
  for (uint64_t w : words_) {
    if (w) {
      return true;
    }
  }
  return false;
}

bool BitVec::dot(const BitVec& other) const {
  check_same_size(other);
  uint64_t acc = 0;
  for (size_t i = 0; i < words_.size(); ++i) {
    acc ^= words_[i] & other.words_[i];
  }
  return std::popcount(acc) & 1;
}

size_t BitVec::first_set() const {
  for (size_t i = 0; i < words_.size(); ++i) {
    if (words_[i]) {
      return i * 64 + static_cast<size_t>(std::countr_zero(words_[i]));
    }
  }
  return num_bits_;
}

std::vector<size_t> BitVec::support() const {
  std::vector<size_t> out;
  for (size_t i = 0; i < words_.size(); ++i) {
    uint64_t w = words_[i];
    while (w) {
      out.push_back(i * 64 + static_cast<size_t>(std::countr_zero(w)));
      w &= w - 1;
    }
  }
  return out;
}

BitVec& BitVec::operator^=(const BitVec& other) {
  check_same_size(other);
  for (size_t i = 0; i < words_.size(); ++i) {
    words_[i] ^= other.words_[i];
  }
  return *this;
}

BitVec& BitVec::operator&=(const BitVec& other) {
  check_same_size(other);
  for (size_t i = 0; i < words_.size(); ++i) {
    words_[i] &= other.words_[i];
  }
  return *this;
}

BitVec& BitVec::operator|=(const BitVec& other) {
  check_same_size(other);
  for (size_t i = 0; i < words_.size(); ++i) {
    words_[i] |= other.words_[i];
  }
  return *this;
}

std::string BitVec::str() const {
  std::string out(num_bits_, '0');
  for (size_t i = 0; i < num_bits_; ++i) {
    if (get(i)) {
      out[i] = '1';
    }
  }
  return out;
}

std::string BitVec::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out((num_bits_ + 3) / 4, '0');
  for (size_t k = 0; k < out.size(); ++k) {
    unsigned nibble = 0;
    for (size_t b = 0; b < 4 && 4 * k + b < num_bits_; ++b) {
      nibble |= static_cast<unsigned>(get(4 * k + b)) << b;
    }
    out[k] = kDigits[nibble];
  }
  return out;
}

void BitVec::check_same_size(const BitVec& other) const {
  if (num_bits_ != other.num_bits_) {
    throw std::invalid_argument("bit vector size mismatch: " + std::to_string(num_bits_) + " vs " +
                                std::to_string(other.num_bits_));
  }
}

}  // namespace qauth
