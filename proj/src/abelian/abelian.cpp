#include "permcohom/abelian/abelian.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>

namespace pcoh::abelian {

namespace {

// Prime-power factorization by trial division; fine for the group orders
// that occur here. Returns (p, p^e) pairs.
std::vector<std::pair<Int, Int>> prime_powers(Int n) {
  std::vector<std::pair<Int, Int>> out;
  if (!n.fits_int64()) {
    // Too large to factor by trial division; keep as a single block. The
    // gcd/lcm merge in normalize() handles such blocks correctly.
    out.emplace_back(Int{0}, n);
    return out;
  }
  auto m = n.to_int64();
  for (std::int64_t p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    std::int64_t q = 1;
    while (m % p == 0) {
      m /= p;
      q *= p;
    }
    out.emplace_back(Int(static_cast<long long>(p)), Int(static_cast<long long>(q)));
  }
  if (m > 1) out.emplace_back(Int(static_cast<long long>(m)), Int(static_cast<long long>(m)));
  return out;
}

// Turns an arbitrary list of positive orders into a divisor chain by
// repeated gcd/lcm exchange; used for orders that were not factored.
std::vector<Int> chain_by_gcd(std::vector<Int> d) {
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      Int g = gcd(d[i], d[j]);
      Int l = lcm(d[i], d[j]);
      d[i] = std::move(g);
      d[j] = std::move(l);
    }
  }
  std::vector<Int> out;
  for (auto& x : d) {
    if (!x.is_one()) out.push_back(std::move(x));
  }
  return out;
}

}  // namespace

AbelianInvariants normalize(const std::vector<Int>& cyclic_orders) {
  AbelianInvariants g;
  // Primary decomposition: prime -> exponents (as prime powers).
  std::map<Int, std::vector<Int>> primary;
  std::vector<Int> unfactored;
  for (const auto& raw : cyclic_orders) {
    Int n = abs(raw);
    if (n.is_zero()) {
      ++g.free_rank_;
      continue;
    }
    if (n.is_one()) continue;
    for (auto& [p, q] : prime_powers(n)) {
      if (p.is_zero()) {
        unfactored.push_back(q);
      } else {
        primary[p].push_back(q);
      }
    }
  }
  std::size_t length = 0;
  for (auto& [p, powers] : primary) {
    std::sort(powers.begin(), powers.end(), std::greater<>());
    length = std::max(length, powers.size());
  }
  // Reassemble: the k-th largest invariant factor is the product of the
  // k-th largest prime powers.
  std::vector<Int> chain(length, Int{1});
  for (auto& [p, powers] : primary) {
    for (std::size_t k = 0; k < powers.size(); ++k) chain[k] *= powers[k];
  }
  std::reverse(chain.begin(), chain.end());
  if (!unfactored.empty()) {
    chain.insert(chain.end(), unfactored.begin(), unfactored.end());
    chain = chain_by_gcd(std::move(chain));
  }
  g.torsion_ = std::move(chain);
  return g;
}

AbelianInvariants make_group(std::size_t free_rank, const std::vector<Int>& torsion) {
  std::vector<Int> orders(free_rank, Int{0});
  orders.insert(orders.end(), torsion.begin(), torsion.end());
  return normalize(orders);
}

AbelianInvariants trivial_group() { return {}; }
AbelianInvariants integers() { return make_group(1, {}); }
AbelianInvariants cyclic(const Int& n) { return normalize({n}); }
AbelianInvariants elementary(const Int& n, std::size_t k) {
  return normalize(std::vector<Int>(k, n));
}

Int AbelianInvariants::order() const {
  if (free_rank_ != 0) throw std::domain_error("order of an infinite abelian group");
  Int o{1};
  for (const auto& d : torsion_) o *= d;
  return o;
}

std::size_t AbelianInvariants::two_rank() const {
  return static_cast<std::size_t>(std::count_if(
      torsion_.begin(), torsion_.end(), [](const Int& d) { return d.divisible_by(Int{2}); }));
}

std::string AbelianInvariants::str() const {
  if (is_trivial()) return "0";
  std::string out;
  if (free_rank_ == 1) {
    out = "Z";
  } else if (free_rank_ > 1) {
    out = "Z^" + std::to_string(free_rank_);
  }
  for (const auto& d : torsion_) {
    if (!out.empty()) out += " x ";
    out += "Z/" + d.str();
  }
  return out;
}

AbelianInvariants AbelianInvariants::parse(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c)) == 0) s.push_back(c);
  }
  if (s == "0" || s.empty()) return {};
  std::vector<Int> orders;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto next = s.find('x', pos);
    if (next == std::string::npos) next = s.size();
    const auto token = s.substr(pos, next - pos);
    if (token == "Z") {
      orders.emplace_back(0);
    } else if (token.rfind("Z^", 0) == 0) {
      const auto r = std::stoul(token.substr(2));
      orders.insert(orders.end(), r, Int{0});
    } else if (token.rfind("Z/", 0) == 0) {
      orders.push_back(Int::from_string(token.substr(2)));
    } else {
      throw std::invalid_argument("cannot parse abelian group '" + std::string(text) + "'");
    }
    pos = next + 1;
  }
  return normalize(orders);
}

AbelianInvariants direct_sum(const AbelianInvariants& a, const AbelianInvariants& b) {
  std::vector<Int> torsion = a.torsion();
  torsion.insert(torsion.end(), b.torsion().begin(), b.torsion().end());
  return make_group(a.free_rank() + b.free_rank(), torsion);
}

AbelianInvariants tensor(const AbelianInvariants& a, const AbelianInvariants& b) {
  std::vector<Int> torsion;
  for (std::size_t i = 0; i < b.free_rank(); ++i) {
    torsion.insert(torsion.end(), a.torsion().begin(), a.torsion().end());
  }
  for (std::size_t i = 0; i < a.free_rank(); ++i) {
    torsion.insert(torsion.end(), b.torsion().begin(), b.torsion().end());
  }
  for (const auto& x : a.torsion()) {
    for (const auto& y : b.torsion()) torsion.push_back(gcd(x, y));
  }
  return make_group(a.free_rank() * b.free_rank(), torsion);
}

AbelianInvariants tor(const AbelianInvariants& a, const AbelianInvariants& b) {
  std::vector<Int> torsion;
  for (const auto& x : a.torsion()) {
    for (const auto& y : b.torsion()) torsion.push_back(gcd(x, y));
  }
  return make_group(0, torsion);
}

AbelianInvariants hom(const AbelianInvariants& a, const AbelianInvariants& b) {
  std::vector<Int> torsion;
  // Hom(Z, B) = B for each free summand of A.
  for (std::size_t i = 0; i < a.free_rank(); ++i) {
    torsion.insert(torsion.end(), b.torsion().begin(), b.torsion().end());
  }
  // Hom(Z/x, Z) = 0, Hom(Z/x, Z/y) = Z/gcd.
  for (const auto& x : a.torsion()) {
    for (const auto& y : b.torsion()) torsion.push_back(gcd(x, y));
  }
  return make_group(a.free_rank() * b.free_rank(), torsion);
}

AbelianInvariants ext(const AbelianInvariants& a, const AbelianInvariants& b) {
  std::vector<Int> torsion;
  // Ext(Z/x, Z) = Z/x; Ext(Z/x, Z/y) = Z/gcd; Ext(Z, -) = 0.
  for (const auto& x : a.torsion()) {
    for (std::size_t i = 0; i < b.free_rank(); ++i) torsion.push_back(x);
    for (const auto& y : b.torsion()) torsion.push_back(gcd(x, y));
  }
  return make_group(0, torsion);
}

AbelianInvariants torsion_subgroup(const AbelianInvariants& a, const Int& m) {
  return hom(cyclic(m), a);
}

AbelianInvariants quotient_by_multiple(const AbelianInvariants& a, const Int& m) {
  return tensor(a, cyclic(m));
}

AbelianInvariants uct_h2(const AbelianInvariants& h1, const AbelianInvariants& h2,
                         const AbelianInvariants& m) {
  return uct_cohomology(h1, h2, m);
}

AbelianInvariants uct_cohomology(const AbelianInvariants& h_prev, const AbelianInvariants& h_n,
                                 const AbelianInvariants& m) {
  return direct_sum(ext(h_prev, m), hom(h_n, m));
}

AbelianInvariants kuenneth_homology(const std::vector<AbelianInvariants>& ha,
                                    const std::vector<AbelianInvariants>& hb, std::size_t n) {
  if (ha.size() <= n || hb.size() <= n) {
    throw std::invalid_argument("kuenneth_homology: factor homology needed in degrees 0..n");
  }
  AbelianInvariants out;
  for (std::size_t i = 0; i <= n; ++i) out = direct_sum(out, tensor(ha[i], hb[n - i]));
  if (n >= 1) {
    for (std::size_t i = 0; i <= n - 1; ++i) out = direct_sum(out, tor(ha[i], hb[n - 1 - i]));
  }
  return out;
}

AbelianInvariants cohomology_from_homology(const AbelianInvariants& h_n,
                                           const AbelianInvariants& h_next) {
  if (!h_n.is_finite() || !h_next.is_finite()) {
    throw std::domain_error("degree shift needs finite homology in both degrees (got " +
                            h_n.str() + ", " + h_next.str() + ")");
  }
  // Hom(H_{n+1}, Z) = 0 for finite H_{n+1}; Ext(H_n, Z) = H_n.
  return uct_cohomology(h_n, h_next, integers());
}

}  // namespace pcoh::abelian
