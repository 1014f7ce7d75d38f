#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pforge {

/// Fixed-width bit vector with wrap-around arithmetic.
///
/// Widths run from 1 to 1024 bits; values are stored as little-endian
/// 64-bit limbs with all bits above the width kept at zero. Bit 0 is the
/// least significant bit. Packet bytes map to bits so that byte k occupies
/// bits [8k, 8k+8).
class BitVec {
public:
  BitVec() : width_(1), words_(1, 0) {}

  static BitVec zeros(uint32_t width);
  static BitVec ones(uint32_t width);
  static BitVec from_u64(uint64_t value, uint32_t width);
  static BitVec from_bytes(std::span<const uint8_t> bytes, uint32_t width);
  // Hex without "0x" prefix; throws std::invalid_argument on bad digits or
  // a value that does not fit the width.
  static BitVec from_hex(std::string_view hex, uint32_t width);

  uint32_t width() const { return width_; }
  bool is_zero() const;
  bool bit(uint32_t i) const;
  void set_bit(uint32_t i, bool v);
  bool sign_bit() const { return bit(width_ - 1); }

  uint64_t low_u64() const { return words_[0]; }
  bool fits_u64() const;
  std::string to_hex() const;  // minimal lowercase, "0" for zero
  std::vector<uint8_t> to_bytes(size_t nbytes) const;

  // Arithmetic/logic, all modulo 2^width. Binary ops require equal widths.
  BitVec add(const BitVec& o) const;
  BitVec sub(const BitVec& o) const;
  BitVec mul(const BitVec& o) const;
  BitVec and_(const BitVec& o) const;
  BitVec or_(const BitVec& o) const;
  BitVec xor_(const BitVec& o) const;
  BitVec not_() const;
  BitVec neg() const;
  // Logical shifts; the amount is the full value of `o`, results are zero
  // once the amount reaches the width.
  BitVec shl(const BitVec& o) const;
  BitVec shr(const BitVec& o) const;

  bool eq(const BitVec& o) const;
  bool ult(const BitVec& o) const;
  bool ule(const BitVec& o) const;
  bool slt(const BitVec& o) const;  // two's complement
  bool sle(const BitVec& o) const;

  BitVec slice(uint32_t offset, uint32_t width) const;
  BitVec zext(uint32_t width) const;
  BitVec sext(uint32_t width) const;
  // Concatenation; the first element lands in the least significant bits.
  static BitVec concat(std::span<const BitVec> parts);

  friend bool operator==(const BitVec& a, const BitVec& b) {
    return a.width_ == b.width_ && a.words_ == b.words_;
  }
  friend bool operator!=(const BitVec& a, const BitVec& b) { return !(a == b); }

private:
  explicit BitVec(uint32_t width) : width_(width), words_(word_count(width), 0) {}
  static size_t word_count(uint32_t width) { return (width + 63) / 64; }
  void normalize();

  uint32_t width_;
  std::vector<uint64_t> words_;
};

}  // namespace pforge
