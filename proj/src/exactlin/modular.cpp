#include "permcohom/exactlin/modular.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace pcoh::exactlin {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e != 0) {
    if ((e & 1U) != 0) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1U;
  }
  return r;
}

u64 invmod(u64 a, u64 m) {
  // Extended Euclid on signed 128-bit to avoid overflow for m < 2^63.
  __int128 old_r = static_cast<__int128>(a % m);
  __int128 r = static_cast<__int128>(m);
  __int128 old_s = 1;
  __int128 s = 0;
  while (r != 0) {
    const __int128 q = old_r / r;
    __int128 t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) throw std::domain_error("invmod: not invertible");
  __int128 x = old_s % static_cast<__int128>(m);
  if (x < 0) x += static_cast<__int128>(m);
  return static_cast<u64>(x);
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::uint64_t> verification_primes(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<u64> dist(u64{1} << 30U, (u64{1} << 31U) - 1);
  std::vector<u64> out;
  while (out.size() < count) {
    const u64 candidate = dist(rng) | 1U;
    if (is_prime_u64(candidate) && std::find(out.begin(), out.end(), candidate) == out.end()) {
      out.push_back(candidate);
    }
  }
  return out;
}

SparseIntMatrix mod_m_reduce(const SparseIntMatrix& a, const Int& m) {
  if (m < Int{2}) throw std::invalid_argument("mod_m_reduce: modulus must be >= 2");
  std::vector<SparseVec> cols;
  cols.reserve(a.cols());
  for (const auto& c : a.columns()) cols.push_back(reduce_mod(c, m));
  return SparseIntMatrix::from_columns(a.rows(), std::move(cols));
}

ModpEchelon::ModpEchelon(std::size_t dim, std::uint64_t p) : p_(p), pivot_row_(dim, -1) {
  if (p < 2 || p >= (u64{1} << 32U)) throw std::invalid_argument("ModpEchelon: prime out of range");
}

ModpEchelon::Row ModpEchelon::from_sparse(const SparseVec& v, std::uint64_t p) {
  Row out;
  out.reserve(v.size());
  for (const auto& e : v) {
    const auto r = e.value.mod_u64(p);
    if (r != 0) out.push_back({e.index, static_cast<std::uint32_t>(r)});
  }
  return out;
}

void ModpEchelon::reduce(Row& v) const {
  Row scratch;
  while (!v.empty()) {
    const auto r = pivot_row_[v.front().index];
    if (r < 0) return;
    const auto& row = rows_[static_cast<std::size_t>(r)];
    const u64 factor = v.front().value;  // rows are monic
    scratch.clear();
    auto vi = v.begin();
    auto ri = row.begin();
    while (vi != v.end() || ri != row.end()) {
      if (ri == row.end() || (vi != v.end() && vi->index < ri->index)) {
        scratch.push_back(*vi++);
      } else if (vi == v.end() || ri->index < vi->index) {
        const u64 val = (p_ - mulmod(factor, ri->value, p_)) % p_;
        if (val != 0) scratch.push_back({ri->index, static_cast<std::uint32_t>(val)});
        ++ri;
      } else {
        const u64 val = (vi->value + p_ - mulmod(factor, ri->value, p_)) % p_;
        if (val != 0) scratch.push_back({vi->index, static_cast<std::uint32_t>(val)});
        ++vi;
        ++ri;
      }
    }
    v.swap(scratch);
  }
}

bool ModpEchelon::insert(Row v) {
  reduce(v);
  if (v.empty()) return false;
  const u64 inv = invmod(v.front().value, p_);
  for (auto& t : v) t.value = static_cast<std::uint32_t>(mulmod(t.value, inv, p_));
  pivot_row_[v.front().index] = static_cast<std::int32_t>(rows_.size());
  rows_.push_back(std::move(v));
  return true;
}

bool ModpEchelon::contains(Row v) const {
  reduce(v);
  return v.empty();
}

std::size_t rank_mod_p(const SparseIntMatrix& a, std::uint64_t p) {
  // Columns as rows: rank is transpose invariant and column access is cheap.
  ModpEchelon ech(a.rows(), p);
  for (const auto& c : a.columns()) ech.insert(ModpEchelon::from_sparse(c, p));
  return ech.rank();
}

std::vector<unsigned> invariants_mod_prime_power(const SparseIntMatrix& a, std::uint64_t p,
                                                 unsigned e) {
  if (p < 2 || e == 0) throw std::invalid_argument("invariants_mod_prime_power: bad modulus");
  u128 big = 1;
  for (unsigned i = 0; i < e; ++i) {
    big *= p;
    if (big >= (u128{1} << 62U)) throw std::invalid_argument("p^e too large");
  }
  const u64 q = static_cast<u64>(big);
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  std::vector<std::vector<u64>> d(m, std::vector<u64>(n, 0));
  for (std::size_t j = 0; j < n; ++j) {
    for (const auto& entry : a.column(j)) d[entry.index][j] = entry.value.mod_u64(q);
  }
  auto valuation = [&](u64 x) {
    unsigned v = 0;
    while (x % p == 0 && v < e) {
      x /= p;
      ++v;
    }
    return v;
  };
  std::vector<unsigned> out;
  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    // Pivot of least valuation; lowest row, then column, on ties.
    unsigned best = e;
    std::size_t bi = 0;
    std::size_t bj = 0;
    for (std::size_t i = t; i < m && best > 0; ++i) {
      for (std::size_t j = t; j < n; ++j) {
        if (d[i][j] == 0) continue;
        const auto v = valuation(d[i][j]);
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
          if (v == 0) break;
        }
      }
    }
    if (best == e) break;
    std::swap(d[t], d[bi]);
    for (auto& row : d) std::swap(row[t], row[bj]);
    // pivot = p^best * unit; scale row t by unit^{-1} so the pivot is p^best.
    u64 pk = 1;
    for (unsigned i = 0; i < best; ++i) pk *= p;
    const u64 unit = d[t][t] / pk;
    const u64 unit_inv = invmod(unit % q, q);
    for (auto& x : d[t]) x = mulmod(x, unit_inv, q);
    for (std::size_t i = 0; i < m; ++i) {
      if (i == t || d[i][t] == 0) continue;
      // d[i][t] has valuation >= best, so the factor is integral.
      const u64 factor = d[i][t] / pk;
      for (std::size_t j = t; j < n; ++j) {
        d[i][j] = (d[i][j] + q - mulmod(factor, d[t][j], q)) % q;
      }
    }
    for (std::size_t j = t + 1; j < n; ++j) {
      // Column operations clear row t; entries there are multiples of p^best.
      d[t][j] = 0;
    }
    out.push_back(best);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace pcoh::exactlin
