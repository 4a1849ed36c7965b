#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "permcohom/abelian/abelian.hpp"
#include "permcohom/exactlin/echelon.hpp"
#include "permcohom/exactlin/sparse_matrix.hpp"

namespace pcoh::exactlin {

struct HermiteForm {
  SparseIntMatrix h;  ///< row Hermite normal form, zero rows last
  SparseIntMatrix u;  ///< unimodular, h = u * m
};

/// Smith decomposition u * m * v = diag(diagonal) with the divisibility
/// chain d1 | d2 | ... (trailing zeros for rank deficiency).
struct SmithForm {
  std::vector<Int> diagonal;  ///< length min(rows, cols)
  SparseIntMatrix u;
  SparseIntMatrix v;
};

HermiteForm hnf(const SparseIntMatrix& m);

/// Full Smith form with transformation witnesses; dense internally, meant
/// for matrices up to a few hundred rows. The identity u*m*v = d and the
/// divisibility chain are verified before returning.
SmithForm snf(const SparseIntMatrix& m);

struct SmithInvariants {
  std::vector<Int> nonzero;  ///< nonzero invariant factors, ascending chain
  std::size_t rank = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t unit_pivots = 0;  ///< eliminated sparsely with +-1 pivots
  std::size_t dense_tail = 0;   ///< order of the residual dense block
  std::size_t max_bits = 0;
};

struct SmithOptions {
  /// Cross-check the rank modulo this many primes (drawn from a fixed seed)
  /// against the invariant factors.
  int verification_primes = 3;
};

/// Invariant factors only, by sparse elimination with Markowitz pivot
/// selection over unit entries; a residual block without unit entries is
/// finished densely. Suitable for large sparse matrices.
SmithInvariants smith_invariants(const SparseIntMatrix& m, const SmithOptions& opts = {});

/// Z-basis of {x : m x = 0}, in row Hermite normal form.
std::vector<SparseVec> kernel_basis(const SparseIntMatrix& m);

/// Solves m x = b over Z. Returns nullopt when no integral solution exists.
/// Throws std::invalid_argument on a dimension mismatch.
std::optional<SparseVec> solve(const SparseIntMatrix& m, const SparseVec& b);

/// Reusable solver for many right-hand sides against one matrix.
class LinearSolver {
 public:
  explicit LinearSolver(const SparseIntMatrix& m);
  [[nodiscard]] std::optional<SparseVec> solve(const SparseVec& b) const;
  [[nodiscard]] std::size_t rank() const noexcept { return echelon_.rank(); }

 private:
  std::size_t rows_;
  PivotedEchelon echelon_;
};

/// Z^rows / im(m).
abelian::AbelianInvariants cokernel_invariants(const SparseIntMatrix& m);

/// Dense Smith form used by snf() and by Subquotient; exposed for tests.
struct DenseSmith {
  DenseMatrix d;
  DenseMatrix u;
  DenseMatrix v;
  DenseMatrix u_inv;
};
DenseSmith smith_dense(DenseMatrix a, bool want_u, bool want_v, bool want_u_inv);

/// The abelian group numerator / denominator for lattices
/// denominator <= numerator <= Z^dim, with explicit generators and a
/// classification map from numerator elements to coordinates.
class Subquotient {
 public:
  Subquotient(std::size_t dim, const std::vector<SparseVec>& numerator_gens,
              const std::vector<SparseVec>& denominator_gens);

  [[nodiscard]] const abelian::AbelianInvariants& invariants() const noexcept { return invariants_; }
  /// Orders of the cyclic generators (0 for free ones); a divisor chain
  /// with the free generators last.
  [[nodiscard]] const std::vector<Int>& orders() const noexcept { return orders_; }
  /// Representatives in the ambient Z^dim, reduced modulo the denominator.
  [[nodiscard]] const std::vector<SparseVec>& generators() const noexcept { return generators_; }
  [[nodiscard]] std::size_t numerator_rank() const noexcept { return numerator_.rank(); }

  [[nodiscard]] bool in_numerator(const SparseVec& x) const { return numerator_.contains(x); }
  [[nodiscard]] bool in_denominator(const SparseVec& x) const { return denominator_.contains(x); }

  /// Coordinates of x (which must lie in the numerator) in terms of
  /// generators(), each reduced into [0, order) for finite orders.
  /// Throws std::invalid_argument when x is outside the numerator.
  [[nodiscard]] std::vector<Int> classify(const SparseVec& x) const;
  /// Element given by coordinates, as an ambient vector.
  [[nodiscard]] SparseVec element(const std::vector<Int>& coords) const;

 private:
  std::size_t dim_;
  LatticeEchelon numerator_;
  LatticeEchelon coords_;  // numerator HNF basis with unit tags
  LatticeEchelon denominator_;
  DenseMatrix u_;          // coordinate change from the HNF basis
  std::vector<std::size_t> kept_;  // SNF positions with order != 1
  std::vector<Int> orders_;
  std::vector<SparseVec> generators_;
  abelian::AbelianInvariants invariants_;
};

}  // namespace pcoh::exactlin
