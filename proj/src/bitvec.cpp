#include "pforge/bitvec.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace pforge {

namespace {
unsigned hex_digit(char c) {
  if (c >= '0' && c <= '9') return unsigned(c - '0');
  if (c >= 'a' && c <= 'f') return unsigned(c - 'a' + 10);
  if (c >= 'A' && c <= 'F') return unsigned(c - 'A' + 10);
  throw std::invalid_argument(std::string("bad hex digit '") + c + "'");
}
}  // namespace

void BitVec::normalize() {
  uint32_t rem = width_ % 64;
  if (rem != 0) words_.back() &= (~uint64_t{0}) >> (64 - rem);
}

BitVec BitVec::zeros(uint32_t width) {
  assert(width >= 1);
  return BitVec(width);
}

BitVec BitVec::ones(uint32_t width) {
  BitVec r(width);
  std::fill(r.words_.begin(), r.words_.end(), ~uint64_t{0});
  r.normalize();
  return r;
}

BitVec BitVec::from_u64(uint64_t value, uint32_t width) {
  BitVec r(width);
  r.words_[0] = value;
  r.normalize();
  return r;
}

BitVec BitVec::from_bytes(std::span<const uint8_t> bytes, uint32_t width) {
  BitVec r(width);
  size_t n = std::min(bytes.size(), size_t((width + 7) / 8));
  for (size_t i = 0; i < n; ++i)
    r.words_[i / 8] |= uint64_t(bytes[i]) << (8 * (i % 8));
  r.normalize();
  return r;
}

BitVec BitVec::from_hex(std::string_view hex, uint32_t width) {
  if (hex.empty()) throw std::invalid_argument("empty hex value");
  BitVec r(width);
  uint32_t bits = 0;
  for (size_t i = 0; i < hex.size(); ++i) {
    unsigned d = hex_digit(hex[hex.size() - 1 - i]);
    if (d != 0) {
      uint32_t top = uint32_t(4 * i + (d >= 8 ? 4 : d >= 4 ? 3 : d >= 2 ? 2 : 1));
      bits = std::max(bits, top);
    }
    if (4 * i < width) r.words_[(4 * i) / 64] |= uint64_t(d) << ((4 * i) % 64);
  }
  if (bits > width)
    throw std::invalid_argument("hex value needs " + std::to_string(bits) +
                                " bits, field is " + std::to_string(width));
  r.normalize();
  return r;
}

bool BitVec::is_zero() const {
  for (uint64_t w : words_)
    if (w != 0) return false;
  return true;
}

bool BitVec::bit(uint32_t i) const {
  if (i >= width_) return false;
  return (words_[i / 64] >> (i % 64)) & 1;
}

void BitVec::set_bit(uint32_t i, bool v) {
  assert(i < width_);
  uint64_t mask = uint64_t{1} << (i % 64);
  if (v)
    words_[i / 64] |= mask;
  else
    words_[i / 64] &= ~mask;
}

bool BitVec::fits_u64() const {
  for (size_t i = 1; i < words_.size(); ++i)
    if (words_[i] != 0) return false;
  return true;
}

std::string BitVec::to_hex() const {
  static const char digits[] = "0123456789abcdef";
  std::string out;
  bool leading = true;
  for (size_t i = words_.size(); i-- > 0;) {
    for (int shift = 60; shift >= 0; shift -= 4) {
      unsigned d = unsigned((words_[i] >> shift) & 0xF);
      if (leading && d == 0) continue;
      leading = false;
      out.push_back(digits[d]);
    }
  }
  if (out.empty()) out = "0";
  return out;
}

std::vector<uint8_t> BitVec::to_bytes(size_t nbytes) const {
  std::vector<uint8_t> out(nbytes, 0);
  size_t n = std::min(nbytes, size_t((width_ + 7) / 8));
  for (size_t i = 0; i < n; ++i)
    out[i] = uint8_t(words_[i / 8] >> (8 * (i % 8)));
  return out;
}

BitVec BitVec::add(const BitVec& o) const {
  assert(width_ == o.width_);
  BitVec r(width_);
  uint64_t carry = 0;
  for (size_t i = 0; i < words_.size(); ++i) {
    uint64_t s = words_[i] + carry;
    uint64_t c1 = s < carry;
    r.words_[i] = s + o.words_[i];
    carry = c1 + (r.words_[i] < s);
  }
  r.normalize();
  return r;
}

BitVec BitVec::sub(const BitVec& o) const { return add(o.neg()); }

BitVec BitVec::mul(const BitVec& o) const {
  assert(width_ == o.width_);
  BitVec r(width_);
  size_t n = words_.size();
  for (size_t i = 0; i < n; ++i) {
    if (words_[i] == 0) continue;
    uint64_t carry = 0;
    for (size_t j = 0; i + j < n; ++j) {
      unsigned __int128 t = (unsigned __int128)words_[i] * o.words_[j] +
                            r.words_[i + j] + carry;
      r.words_[i + j] = uint64_t(t);
      carry = uint64_t(t >> 64);
    }
  }
  r.normalize();
  return r;
}

BitVec BitVec::and_(const BitVec& o) const {
  assert(width_ == o.width_);
  BitVec r(width_);
  for (size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] & o.words_[i];
  return r;
}

BitVec BitVec::or_(const BitVec& o) const {
  assert(width_ == o.width_);
  BitVec r(width_);
  for (size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] | o.words_[i];
  return r;
}

BitVec BitVec::xor_(const BitVec& o) const {
  assert(width_ == o.width_);
  BitVec r(width_);
  for (size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] ^ o.words_[i];
  return r;
}

BitVec BitVec::not_() const {
  BitVec r(width_);
  for (size_t i = 0; i < words_.size(); ++i) r.words_[i] = ~words_[i];
  r.normalize();
  return r;
}

BitVec BitVec::neg() const {
  BitVec r = not_();
  BitVec one = from_u64(1, width_);
  return r.add(one);
}

BitVec BitVec::shl(const BitVec& o) const {
  if (!o.fits_u64() || o.words_[0] >= width_) return zeros(width_);
  uint64_t k = o.words_[0];
  BitVec r(width_);
  size_t wshift = k / 64, bshift = k % 64;
  for (size_t i = words_.size(); i-- > 0;) {
    uint64_t v = 0;
    if (i >= wshift) {
      v = words_[i - wshift] << bshift;
      if (bshift != 0 && i > wshift) v |= words_[i - wshift - 1] >> (64 - bshift);
    }
    r.words_[i] = v;
  }
  r.normalize();
  return r;
}

BitVec BitVec::shr(const BitVec& o) const {
  if (!o.fits_u64() || o.words_[0] >= width_) return zeros(width_);
  uint64_t k = o.words_[0];
  BitVec r(width_);
  size_t wshift = k / 64, bshift = k % 64;
  for (size_t i = 0; i < words_.size(); ++i) {
    uint64_t v = 0;
    if (i + wshift < words_.size()) {
      v = words_[i + wshift] >> bshift;
      if (bshift != 0 && i + wshift + 1 < words_.size())
        v |= words_[i + wshift + 1] << (64 - bshift);
    }
    r.words_[i] = v;
  }
  return r;
}

bool BitVec::eq(const BitVec& o) const {
  assert(width_ == o.width_);
  return words_ == o.words_;
}

bool BitVec::ult(const BitVec& o) const {
  assert(width_ == o.width_);
  for (size_t i = words_.size(); i-- > 0;) {
    if (words_[i] != o.words_[i]) return words_[i] < o.words_[i];
  }
  return false;
}

bool BitVec::ule(const BitVec& o) const { return !o.ult(*this); }

bool BitVec::slt(const BitVec& o) const {
  bool sa = sign_bit(), sb = o.sign_bit();
  if (sa != sb) return sa;
  return ult(o);
}

bool BitVec::sle(const BitVec& o) const { return !o.slt(*this); }

BitVec BitVec::slice(uint32_t offset, uint32_t width) const {
  assert(offset + width <= width_);
  BitVec r(width);
  for (size_t i = 0; i < r.words_.size(); ++i) {
    size_t bitpos = offset + 64 * i;
    uint64_t v = words_[bitpos / 64] >> (bitpos % 64);
    if (bitpos % 64 != 0 && bitpos / 64 + 1 < words_.size())
      v |= words_[bitpos / 64 + 1] << (64 - bitpos % 64);
    r.words_[i] = v;
  }
  r.normalize();
  return r;
}

BitVec BitVec::zext(uint32_t width) const {
  assert(width >= width_);
  BitVec r(width);
  std::copy(words_.begin(), words_.end(), r.words_.begin());
  return r;
}

BitVec BitVec::sext(uint32_t width) const {
  assert(width >= width_);
  if (!sign_bit()) return zext(width);
  BitVec r = ones(width);
  for (size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i];
  uint32_t rem = width_ % 64;
  if (rem != 0) r.words_[words_.size() - 1] |= (~uint64_t{0}) << rem;
  r.normalize();
  return r;
}

BitVec BitVec::concat(std::span<const BitVec> parts) {
  assert(!parts.empty());
  uint32_t total = 0;
  for (const BitVec& p : parts) total += p.width();
  BitVec r(total);
  uint32_t pos = 0;
  for (const BitVec& p : parts) {
    for (uint32_t i = 0; i < p.width(); ++i)
      if (p.bit(i)) r.set_bit(pos + i, true);
    pos += p.width();
  }
  return r;
}

}  // namespace pforge
