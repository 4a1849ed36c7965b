#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "permcohom/exactlin/integer.hpp"

namespace pcoh::abelian {

using exactlin::Int;

/// A finitely generated abelian group Z^free_rank x Z/d1 x ... x Z/dk in
/// elementary-divisor form: every d_i >= 2 and d_i | d_{i+1}.
///
/// Instances are only produced by normalize(), so two isomorphic groups
/// compare equal structurally.
class AbelianInvariants {
 public:
  AbelianInvariants() = default;

  [[nodiscard]] std::size_t free_rank() const noexcept { return free_rank_; }
  [[nodiscard]] const std::vector<Int>& torsion() const noexcept { return torsion_; }

  [[nodiscard]] bool is_trivial() const noexcept { return free_rank_ == 0 && torsion_.empty(); }
  [[nodiscard]] bool is_finite() const noexcept { return free_rank_ == 0; }
  /// Order of a finite group; throws std::domain_error when infinite.
  [[nodiscard]] Int order() const;
  /// Number of cyclic factors of even order, i.e. dim over F2 of A/2A
  /// restricted to torsion.
  [[nodiscard]] std::size_t two_rank() const;
  /// dim_F2 (A tensor F2).
  [[nodiscard]] std::size_t dim_mod2() const { return free_rank_ + two_rank(); }

  /// "Z^2 x Z/2 x Z/4", "Z", "Z/6", or "0".
  [[nodiscard]] std::string str() const;
  static AbelianInvariants parse(std::string_view text);

  friend bool operator==(const AbelianInvariants&, const AbelianInvariants&) = default;

  friend AbelianInvariants normalize(const std::vector<Int>& cyclic_orders);
  friend AbelianInvariants make_group(std::size_t free_rank, const std::vector<Int>& torsion);

 private:
  std::size_t free_rank_ = 0;
  std::vector<Int> torsion_;
};

/// Canonical form of Z/n1 x Z/n2 x ...; an order of 0 denotes a Z factor and
/// orders of 1 are dropped. Unit and negative orders are treated by |n|.
AbelianInvariants normalize(const std::vector<Int>& cyclic_orders);
AbelianInvariants make_group(std::size_t free_rank, const std::vector<Int>& torsion);

AbelianInvariants trivial_group();
AbelianInvariants integers();
AbelianInvariants cyclic(const Int& n);
/// (Z/n)^k.
AbelianInvariants elementary(const Int& n, std::size_t k);

AbelianInvariants direct_sum(const AbelianInvariants& a, const AbelianInvariants& b);
AbelianInvariants tensor(const AbelianInvariants& a, const AbelianInvariants& b);
AbelianInvariants tor(const AbelianInvariants& a, const AbelianInvariants& b);
AbelianInvariants hom(const AbelianInvariants& a, const AbelianInvariants& b);
AbelianInvariants ext(const AbelianInvariants& a, const AbelianInvariants& b);

/// The m-torsion subgroup A[m] = Hom(Z/m, A).
AbelianInvariants torsion_subgroup(const AbelianInvariants& a, const Int& m);
/// A/mA = A tensor Z/m.
AbelianInvariants quotient_by_multiple(const AbelianInvariants& a, const Int& m);

/// H^2(G, M) for trivial M from integral homology via the (split) dual
/// universal coefficient sequence: Ext(H1, M) + Hom(H2, M).
AbelianInvariants uct_h2(const AbelianInvariants& h1, const AbelianInvariants& h2,
                         const AbelianInvariants& m);

/// General form of the same sequence: H^n(G, M) = Ext(H_{n-1}, M) + Hom(H_n, M).
AbelianInvariants uct_cohomology(const AbelianInvariants& h_prev, const AbelianInvariants& h_n,
                                 const AbelianInvariants& m);

/// Homology of a product from the factors' homology (Kuenneth). ha[i], hb[i]
/// are H_i for i = 0..n.
AbelianInvariants kuenneth_homology(const std::vector<AbelianInvariants>& ha,
                                    const std::vector<AbelianInvariants>& hb, std::size_t n);

/// H^{n+1}(G, Z) from H_n(G, Z) and H_{n+1}(G, Z) for a finite group, n >= 1.
/// Throws std::domain_error when either homology group is infinite, since
/// the shift only holds for finite displayed homology.
AbelianInvariants cohomology_from_homology(const AbelianInvariants& h_n,
                                           const AbelianInvariants& h_next);

}  // namespace pcoh::abelian
