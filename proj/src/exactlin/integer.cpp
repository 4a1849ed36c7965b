#include "permcohom/exactlin/integer.hpp"

#include <ostream>
#include <stdexcept>

namespace pcoh::exactlin {

namespace {

// RAII scratch mpz for the slow paths.
struct Scratch {
  mpz_t z;
  Scratch() { mpz_init(z); }
  ~Scratch() { mpz_clear(z); }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;
};

void load(mpz_ptr out, const Int& v) { v.get_mpz(out); }

}  // namespace

void Int::set_int64_big(std::int64_t v) {
  auto* z = new __mpz_struct;
  mpz_init(z);
  mpz_set_si(z, v);
  word_ = reinterpret_cast<std::uintptr_t>(z);
}

void Int::set_mpz(mpz_srcptr z) {
  word_ = 1;
  if (mpz_fits_slong_p(z) != 0) {
    const long v = mpz_get_si(z);
    if (v >= kSmallMin && v <= kSmallMax) {
      word_ = encode(v);
      return;
    }
  }
  auto* copy = new __mpz_struct;
  mpz_init_set(copy, z);
  word_ = reinterpret_cast<std::uintptr_t>(copy);
}

void Int::copy_big(const Int& other) {
  auto* copy = new __mpz_struct;
  mpz_init_set(copy, other.big());
  word_ = reinterpret_cast<std::uintptr_t>(copy);
}

void Int::release_big() noexcept {
  mpz_clear(big());
  delete big();
  word_ = 1;
}

void Int::get_mpz(mpz_ptr out) const {
  if (is_small()) {
    mpz_set_si(out, small_value());
  } else {
    mpz_set(out, big());
  }
}

bool Int::fits_int64() const noexcept { return is_small() || mpz_fits_slong_p(big()) != 0; }

std::int64_t Int::to_int64() const {
  if (is_small()) return small_value();
  if (mpz_fits_slong_p(big()) == 0) throw std::overflow_error("Int does not fit in int64");
  return mpz_get_si(big());
}

std::uint64_t Int::mod_u64(std::uint64_t m) const {
  if (is_small()) {
    const auto mm = static_cast<std::int64_t>(m);
    std::int64_t r = small_value() % mm;
    if (r < 0) r += mm;
    return static_cast<std::uint64_t>(r);
  }
  return mpz_fdiv_ui(big(), m);
}

std::size_t Int::bit_length() const noexcept {
  if (is_small()) {
    auto v = small_value();
    if (v == 0) return 0;
    if (v < 0) v = -v;
    return static_cast<std::size_t>(64 - __builtin_clzll(static_cast<unsigned long long>(v)));
  }
  return mpz_sizeinbase(big(), 2);
}

std::string Int::str() const {
  if (is_small()) return std::to_string(small_value());
  std::string out(mpz_sizeinbase(big(), 10) + 2, '\0');
  mpz_get_str(out.data(), 10, big());
  out.resize(std::char_traits<char>::length(out.c_str()));
  return out;
}

Int Int::from_string(std::string_view text) {
  Scratch s;
  const std::string buf(text);
  if (buf.empty() || mpz_set_str(s.z, buf.c_str(), 10) != 0) {
    throw std::invalid_argument("not an integer: '" + buf + "'");
  }
  return Int(s.z);
}

Int Int::operator-() const {
  if (is_small()) return Int(static_cast<long long>(-small_value()));
  Scratch s;
  mpz_neg(s.z, big());
  return Int(s.z);
}

void Int::add_slow(const Int& rhs, bool negate) {
  Scratch a;
  Scratch b;
  load(a.z, *this);
  load(b.z, rhs);
  if (negate) {
    mpz_sub(a.z, a.z, b.z);
  } else {
    mpz_add(a.z, a.z, b.z);
  }
  release();
  set_mpz(a.z);
}

void Int::mul_slow(const Int& rhs) {
  Scratch a;
  Scratch b;
  load(a.z, *this);
  load(b.z, rhs);
  mpz_mul(a.z, a.z, b.z);
  release();
  set_mpz(a.z);
}

void Int::addmul_slow(const Int& q, const Int& r, bool negate) {
  Scratch acc;
  Scratch x;
  Scratch y;
  load(acc.z, *this);
  load(x.z, q);
  load(y.z, r);
  if (negate) {
    mpz_submul(acc.z, x.z, y.z);
  } else {
    mpz_addmul(acc.z, x.z, y.z);
  }
  release();
  set_mpz(acc.z);
}

int compare(const Int& a, const Int& b) noexcept {
  if (a.is_small() && b.is_small()) {
    const auto x = a.small_value();
    const auto y = b.small_value();
    return (x > y) - (x < y);
  }
  if (a.is_small()) return -mpz_cmp_si(b.big(), a.small_value());
  if (b.is_small()) return mpz_cmp_si(a.big(), b.small_value());
  return mpz_cmp(a.big(), b.big());
}

Int abs(const Int& a) { return a.sign() < 0 ? -a : a; }

Int floor_div(const Int& a, const Int& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  if (a.is_small() && b.is_small()) {
    const auto x = a.small_value();
    const auto y = b.small_value();
    auto q = x / y;
    if ((x % y != 0) && ((x < 0) != (y < 0))) --q;
    return Int(static_cast<long long>(q));
  }
  Scratch x;
  Scratch y;
  load(x.z, a);
  load(y.z, b);
  mpz_fdiv_q(x.z, x.z, y.z);
  return Int(x.z);
}

Int floor_mod(const Int& a, const Int& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  if (a.is_small() && b.is_small()) {
    const auto x = a.small_value();
    const auto y = b.small_value();
    auto r = x % y;
    if (r != 0 && ((r < 0) != (y < 0))) r += y;
    return Int(static_cast<long long>(r));
  }
  Scratch x;
  Scratch y;
  load(x.z, a);
  load(y.z, b);
  mpz_fdiv_r(x.z, x.z, y.z);
  return Int(x.z);
}

Int trunc_div(const Int& a, const Int& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  if (a.is_small() && b.is_small()) {
    return Int(static_cast<long long>(a.small_value() / b.small_value()));
  }
  Scratch x;
  Scratch y;
  load(x.z, a);
  load(y.z, b);
  mpz_tdiv_q(x.z, x.z, y.z);
  return Int(x.z);
}

Int divexact(const Int& a, const Int& b) {
  if (a.is_small() && b.is_small()) {
    return Int(static_cast<long long>(a.small_value() / b.small_value()));
  }
  Scratch x;
  Scratch y;
  load(x.z, a);
  load(y.z, b);
  mpz_divexact(x.z, x.z, y.z);
  return Int(x.z);
}

bool Int::divisible_by(const Int& b) const {
  if (b.is_zero()) return is_zero();
  if (is_small() && b.is_small()) return small_value() % b.small_value() == 0;
  Scratch x;
  Scratch y;
  load(x.z, *this);
  load(y.z, b);
  return mpz_divisible_p(x.z, y.z) != 0;
}

Int gcd(const Int& a, const Int& b) {
  if (a.is_small() && b.is_small()) {
    auto x = a.small_value();
    auto y = b.small_value();
    if (x < 0) x = -x;
    if (y < 0) y = -y;
    while (y != 0) {
      const auto t = x % y;
      x = y;
      y = t;
    }
    return Int(static_cast<long long>(x));
  }
  Scratch x;
  Scratch y;
  load(x.z, a);
  load(y.z, b);
  mpz_gcd(x.z, x.z, y.z);
  return Int(x.z);
}

Int lcm(const Int& a, const Int& b) {
  if (a.is_zero() || b.is_zero()) return Int{};
  Scratch x;
  Scratch y;
  load(x.z, a);
  load(y.z, b);
  mpz_lcm(x.z, x.z, y.z);
  return Int(x.z);
}

XGcd xgcd(const Int& a, const Int& b) {
  if (a.is_small() && b.is_small()) {
    // Iterative extended Euclid; all cofactors stay bounded by |a|, |b|.
    std::int64_t old_r = a.small_value();
    std::int64_t r = b.small_value();
    std::int64_t old_s = 1;
    std::int64_t s = 0;
    std::int64_t old_t = 0;
    std::int64_t t = 1;
    while (r != 0) {
      const auto q = old_r / r;
      auto tmp = old_r - q * r;
      old_r = r;
      r = tmp;
      tmp = old_s - q * s;
      old_s = s;
      s = tmp;
      tmp = old_t - q * t;
      old_t = t;
      t = tmp;
    }
    if (old_r < 0) {
      old_r = -old_r;
      old_s = -old_s;
      old_t = -old_t;
    }
    return {Int(static_cast<long long>(old_r)), Int(static_cast<long long>(old_s)),
            Int(static_cast<long long>(old_t))};
  }
  Scratch g;
  Scratch s;
  Scratch t;
  Scratch x;
  Scratch y;
  load(x.z, a);
  load(y.z, b);
  mpz_gcdext(g.z, s.z, t.z, x.z, y.z);
  return {Int(g.z), Int(s.z), Int(t.z)};
}

std::size_t Int::hash() const noexcept {
  if (is_small()) return std::hash<std::int64_t>{}(small_value());
  std::size_t h = 0xcbf29ce484222325ULL;
  const auto n = mpz_size(big());
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<std::size_t>(mpz_getlimbn(big(), static_cast<mp_size_t>(i)));
    h *= 0x100000001b3ULL;
  }
  return h ^ static_cast<std::size_t>(mpz_sgn(big()) + 1);
}

std::ostream& operator<<(std::ostream& os, const Int& v) { return os << v.str(); }

}  // namespace pcoh::exactlin
