#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>

#include <gmp.h>

namespace pcoh::exactlin {

/// Arbitrary-precision integer with an inline fast path.
///
/// The value occupies one machine word. When the low bit is set, the word
/// holds a 63-bit signed value shifted left by one; otherwise it is a
/// pointer to a heap-allocated mpz. Arithmetic stays on the inline path
/// until a result leaves the 63-bit window, then promotes transparently.
/// Results that fit are demoted again, so equal values always share one
/// representation.
class Int {
 public:
  static constexpr std::int64_t kSmallMax = (std::int64_t{1} << 62) - 1;
  static constexpr std::int64_t kSmallMin = -(std::int64_t{1} << 62);

  Int() noexcept : word_(1) {}
  Int(int v) noexcept : word_(encode(v)) {}  // NOLINT(google-explicit-constructor)
  Int(long v) { init_int64(v); }              // NOLINT(google-explicit-constructor)
  Int(long long v) { init_int64(v); }         // NOLINT(google-explicit-constructor)
  explicit Int(mpz_srcptr z) { set_mpz(z); }

  Int(const Int& other) {
    if (other.is_small()) {
      word_ = other.word_;
    } else {
      copy_big(other);
    }
  }

  Int(Int&& other) noexcept : word_(other.word_) { other.word_ = 1; }

  Int& operator=(const Int& other) {
    if (this == &other) return *this;
    if (other.is_small()) {
      release();
      word_ = other.word_;
    } else {
      Int tmp(other);
      swap(tmp);
    }
    return *this;
  }

  Int& operator=(Int&& other) noexcept {
    if (this != &other) {
      release();
      word_ = other.word_;
      other.word_ = 1;
    }
    return *this;
  }

  ~Int() { release(); }

  void swap(Int& other) noexcept { std::swap(word_, other.word_); }

  [[nodiscard]] bool is_small() const noexcept { return (word_ & 1U) != 0; }
  [[nodiscard]] std::int64_t small_value() const noexcept {
    return static_cast<std::int64_t>(word_) >> 1;
  }

  [[nodiscard]] bool is_zero() const noexcept { return word_ == 1; }
  [[nodiscard]] bool is_one() const noexcept { return word_ == 3; }
  [[nodiscard]] int sign() const noexcept;
  [[nodiscard]] bool is_unit() const noexcept {
    return is_small() && (small_value() == 1 || small_value() == -1);
  }

  [[nodiscard]] bool fits_int64() const noexcept;
  /// Throws std::overflow_error when the value does not fit.
  [[nodiscard]] std::int64_t to_int64() const;
  /// Nonnegative residue modulo m (m > 0, m < 2^62).
  [[nodiscard]] std::uint64_t mod_u64(std::uint64_t m) const;
  [[nodiscard]] std::size_t bit_length() const noexcept;

  [[nodiscard]] std::string str() const;
  static Int from_string(std::string_view text);

  /// Copies the value into an initialized mpz.
  void get_mpz(mpz_ptr out) const;

  Int operator-() const;
  Int& operator+=(const Int& rhs);
  Int& operator-=(const Int& rhs);
  Int& operator*=(const Int& rhs);

  friend Int operator+(Int lhs, const Int& rhs) { return lhs += rhs; }
  friend Int operator-(Int lhs, const Int& rhs) { return lhs -= rhs; }
  friend Int operator*(Int lhs, const Int& rhs) { return lhs *= rhs; }

  /// this -= q * r, the inner-loop primitive of every elimination.
  void submul(const Int& q, const Int& r);
  /// this += q * r.
  void addmul(const Int& q, const Int& r);

  friend bool operator==(const Int& a, const Int& b) noexcept {
    if (a.is_small() || b.is_small()) return a.word_ == b.word_;
    return mpz_cmp(a.big(), b.big()) == 0;
  }
  friend bool operator!=(const Int& a, const Int& b) noexcept { return !(a == b); }
  friend int compare(const Int& a, const Int& b) noexcept;
  friend bool operator<(const Int& a, const Int& b) noexcept { return compare(a, b) < 0; }
  friend bool operator>(const Int& a, const Int& b) noexcept { return compare(a, b) > 0; }
  friend bool operator<=(const Int& a, const Int& b) noexcept { return compare(a, b) <= 0; }
  friend bool operator>=(const Int& a, const Int& b) noexcept { return compare(a, b) >= 0; }

  friend Int abs(const Int& a);
  /// Quotient rounded toward negative infinity; b != 0.
  friend Int floor_div(const Int& a, const Int& b);
  /// Remainder with the sign of b (floor convention); b != 0.
  friend Int floor_mod(const Int& a, const Int& b);
  /// Truncating quotient.
  friend Int trunc_div(const Int& a, const Int& b);
  /// a / b when b is known to divide a.
  friend Int divexact(const Int& a, const Int& b);
  [[nodiscard]] bool divisible_by(const Int& b) const;
  friend Int gcd(const Int& a, const Int& b);
  friend Int lcm(const Int& a, const Int& b);

  std::size_t hash() const noexcept;

 private:
  static constexpr std::uintptr_t encode(std::int64_t v) noexcept {
    return (static_cast<std::uintptr_t>(v) << 1) | 1U;
  }
  [[nodiscard]] mpz_ptr big() const noexcept { return reinterpret_cast<mpz_ptr>(word_); }

  void init_int64(std::int64_t v) {
    if (v >= kSmallMin && v <= kSmallMax) {
      word_ = encode(v);
    } else {
      word_ = 1;
      set_int64_big(v);
    }
  }
  void assign_int64(std::int64_t v) {
    if (v >= kSmallMin && v <= kSmallMax) {
      release();
      word_ = encode(v);
    } else {
      release();
      word_ = 1;
      set_int64_big(v);
    }
  }
  void set_int64_big(std::int64_t v);
  void set_mpz(mpz_srcptr z);
  // Slow paths; at least one operand is an mpz or the result overflowed.
  void add_slow(const Int& rhs, bool negate);
  void mul_slow(const Int& rhs);
  void addmul_slow(const Int& q, const Int& r, bool negate);
  void copy_big(const Int& other);
  void release() noexcept {
    if (!is_small()) release_big();
  }
  void release_big() noexcept;

  std::uintptr_t word_;
};

/// Extended gcd: returns (g, s, t) with s*a + t*b = g >= 0.
struct XGcd {
  Int g, s, t;
};
XGcd xgcd(const Int& a, const Int& b);

std::ostream& operator<<(std::ostream& os, const Int& v);

inline Int& Int::operator+=(const Int& rhs) {
  if (is_small() && rhs.is_small()) {
    assign_int64(small_value() + rhs.small_value());
  } else {
    add_slow(rhs, false);
  }
  return *this;
}

inline Int& Int::operator-=(const Int& rhs) {
  if (is_small() && rhs.is_small()) {
    assign_int64(small_value() - rhs.small_value());
  } else {
    add_slow(rhs, true);
  }
  return *this;
}

inline Int& Int::operator*=(const Int& rhs) {
  std::int64_t p = 0;
  if (is_small() && rhs.is_small() &&
      !__builtin_mul_overflow(small_value(), rhs.small_value(), &p)) {
    assign_int64(p);
  } else {
    mul_slow(rhs);
  }
  return *this;
}

inline void Int::submul(const Int& q, const Int& r) {
  std::int64_t p = 0;
  std::int64_t out = 0;
  if (is_small() && q.is_small() && r.is_small() &&
      !__builtin_mul_overflow(q.small_value(), r.small_value(), &p) &&
      !__builtin_sub_overflow(small_value(), p, &out)) {
    assign_int64(out);
  } else {
    addmul_slow(q, r, true);
  }
}

inline void Int::addmul(const Int& q, const Int& r) {
  std::int64_t p = 0;
  std::int64_t out = 0;
  if (is_small() && q.is_small() && r.is_small() &&
      !__builtin_mul_overflow(q.small_value(), r.small_value(), &p) &&
      !__builtin_add_overflow(small_value(), p, &out)) {
    assign_int64(out);
  } else {
    addmul_slow(q, r, false);
  }
}

inline int Int::sign() const noexcept {
  if (is_small()) {
    const auto v = small_value();
    return (v > 0) - (v < 0);
  }
  return mpz_sgn(big());
}

}  // namespace pcoh::exactlin

template <>
struct std::hash<pcoh::exactlin::Int> {
  std::size_t operator()(const pcoh::exactlin::Int& v) const noexcept { return v.hash(); }
};
