#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "permcohom/exactlin/sparse_matrix.hpp"

namespace pcoh::exactlin {

/// Entrywise reduction into [0, m); m >= 2.
SparseIntMatrix mod_m_reduce(const SparseIntMatrix& a, const Int& m);

/// Rank over F_p by sparse elimination; p prime, p < 2^32.
std::size_t rank_mod_p(const SparseIntMatrix& a, std::uint64_t p);

/// Smith form over the local ring Z/p^e: returns the exponents a_i of the
/// nonzero diagonal entries p^{a_i} (0 <= a_i < e), ascending.
std::vector<unsigned> invariants_mod_prime_power(const SparseIntMatrix& a, std::uint64_t p,
                                                 unsigned e);

/// Deterministic list of distinct primes in [2^30, 2^31) derived from a seed.
std::vector<std::uint64_t> verification_primes(std::size_t count, std::uint64_t seed);

bool is_prime_u64(std::uint64_t n);

/// Row echelon over F_p with sparse rows; the cheap backend for ranks and
/// mod-p dimension counts.
class ModpEchelon {
 public:
  struct Term {
    std::uint32_t index;
    std::uint32_t value;
  };
  using Row = std::vector<Term>;

  ModpEchelon(std::size_t dim, std::uint64_t p);

  /// Returns true when the row is independent of the stored rows.
  bool insert(Row v);
  [[nodiscard]] bool contains(Row v) const;
  [[nodiscard]] std::size_t rank() const noexcept { return rows_.size(); }
  [[nodiscard]] std::uint64_t prime() const noexcept { return p_; }

  static Row from_sparse(const SparseVec& v, std::uint64_t p);

 private:
  void reduce(Row& v) const;

  std::uint64_t p_;
  std::vector<Row> rows_;
  std::vector<std::int32_t> pivot_row_;
};

}  // namespace pcoh::exactlin
