#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "permcohom/abelian/abelian.hpp"
#include "permcohom/exactlin/normal_form.hpp"
#include "permcohom/perm/group.hpp"
#include "permcohom/resolution/resolution.hpp"

namespace pcoh::cohomology {

using abelian::AbelianInvariants;
using exactlin::DenseMatrix;
using exactlin::Int;
using exactlin::SparseIntMatrix;
using exactlin::SparseVec;
using perm::PermGroup;
using resolution::FreeResolution;

/// M = Z/o_1 x ... x Z/o_r (o_k = 0 for a free coordinate) with G acting by
/// integer matrices; column k of rho(g) is the image of the k-th generator.
class CoeffModule {
 public:
  CoeffModule() = default;
  /// Validates that every action matrix respects the relations and that
  /// rho is a homomorphism (checked on all element-generator pairs).
  /// Throws std::invalid_argument otherwise.
  static CoeffModule from_action(const PermGroup& g, std::vector<Int> orders, std::vector<DenseMatrix> generator_actions,
                                 std::string label = {});
  static CoeffModule trivial(const PermGroup& g, std::vector<Int> orders, std::string label = {});
  static CoeffModule integers(const PermGroup& g) { return trivial(g, {Int(0)}, "Z"); }
  static CoeffModule mod(const PermGroup& g, long m);
  /// Trivial module with the given invariants, one coordinate per cyclic
  /// factor.
  static CoeffModule trivial_from(const PermGroup& g, const AbelianInvariants& a);

  /// Same abelian group with the action restricted to a subgroup.
  [[nodiscard]] CoeffModule restrict_to(const PermGroup& h) const;

  [[nodiscard]] const PermGroup& group() const noexcept { return group_; }
  [[nodiscard]] const std::vector<Int>& orders() const noexcept { return orders_; }
  [[nodiscard]] std::size_t rank() const noexcept { return orders_.size(); }
  [[nodiscard]] bool trivial_action() const noexcept { return trivial_; }
  [[nodiscard]] AbelianInvariants base() const { return abelian::normalize(orders_); }
  [[nodiscard]] const std::string& label() const noexcept { return label_; }
  /// rho of the group element with index g.
  [[nodiscard]] const DenseMatrix& action(std::size_t g) const;
  /// Entry k reduced into [0, o_k) when o_k > 0.
  [[nodiscard]] SparseVec reduce(const SparseVec& cochain) const;

 private:
  PermGroup group_;
  std::vector<Int> orders_;
  std::vector<DenseMatrix> actions_;  // one per element, or one when trivial
  bool trivial_ = true;
  std::string label_;
};

/// A^n with S_n permuting the n copies (Coind from the point stabiliser).
CoeffModule coinduced_module(const AbelianInvariants& a, std::size_t n);

/// Matrix of the coboundary C^n -> C^{n+1}, C^n = M^{a_n} with coordinate
/// j*r + k; requires n + 1 <= length.
SparseIntMatrix coboundary_matrix(const FreeResolution& r, const CoeffModule& m, std::size_t n);

/// H^n presented as cocycles modulo coboundaries.
struct CohomologyGroup {
  PermGroup group;
  std::size_t degree = 0;
  std::string coefficients;
  AbelianInvariants invariants;
  /// Cocycle representatives, one per cyclic factor of `orders`.
  std::vector<SparseVec> representatives;
  std::vector<Int> orders;
  std::size_t cochain_dim = 0;
  std::string resolution_hash;
  double seconds = 0;
  std::shared_ptr<const exactlin::Subquotient> presentation;
  std::vector<Int> module_orders;

  /// Coordinates of a cocycle in terms of the representatives.
  [[nodiscard]] std::vector<Int> classify(const SparseVec& cocycle) const;
  [[nodiscard]] bool is_cocycle(const SparseVec& x) const { return presentation->in_numerator(x); }
  [[nodiscard]] bool is_coboundary(const SparseVec& x) const { return presentation->in_denominator(x); }
  [[nodiscard]] nlohmann::json to_json(bool with_representatives = false) const;
};

/// Requires r.length() >= n + 1.
CohomologyGroup cohomology_group(const FreeResolution& r, const CoeffModule& m, std::size_t n);

/// H_n(G, Z) from Z tensored over ZG with the resolution; requires
/// r.length() >= n + 1.
AbelianInvariants homology_group(const FreeResolution& r, std::size_t n);

/// H^n(G, C^x), defined through the exponential sequence as H^{n+1}(G, Z).
CohomologyGroup cx_cohomology(const FreeResolution& r, std::size_t n);

/// {text, free_rank, torsion}, the record used in every JSON output.
nlohmann::json invariants_json(const AbelianInvariants& a);

/// A homomorphism of cohomology groups given on representatives.
struct CohomologyMap {
  CohomologyGroup source;
  CohomologyGroup target;
  /// matrix[j] = target coordinates of the image of source generator j.
  std::vector<std::vector<Int>> matrix;
  AbelianInvariants image;
  bool injective = false;
  bool surjective = false;
  std::string backend;

  [[nodiscard]] nlohmann::json to_json() const;
};

/// Applies a cochain map to every source representative and classifies the
/// images. Injectivity is decided on lattices: the kernel lattice of the
/// coordinate map must lie in the source relation lattice.
CohomologyMap induced_map(const CohomologyGroup& source, const CohomologyGroup& target,
                          const std::function<SparseVec(const SparseVec&)>& cochain_map, std::string backend = {});

/// Builds or fetches resolutions, memoised per group and optionally backed
/// by a disk cache.
class ResolutionSource {
 public:
  explicit ResolutionSource(std::optional<resolution::ResolutionCache> cache = std::nullopt,
                            resolution::BuildOptions opts = {});
  const FreeResolution& get(const PermGroup& g, std::size_t length);
  [[nodiscard]] const resolution::BuildOptions& options() const noexcept { return opts_; }
  void set_options(resolution::BuildOptions opts) { opts_ = opts; }
  /// Groups whose resolution came from the disk cache.
  [[nodiscard]] std::size_t cache_hits() const noexcept { return hits_; }
  /// Every resolution handed out so far, keyed by "fingerprint:length".
  [[nodiscard]] const std::map<std::string, FreeResolution>& resolutions() const noexcept { return memo_; }

 private:
  std::optional<resolution::ResolutionCache> cache_;
  resolution::BuildOptions opts_;
  std::map<std::string, FreeResolution> memo_;
  std::size_t hits_ = 0;
};

enum class Backend { ambient, chainmap };
const char* backend_name(Backend b);

/// Res: H^n(G, M) -> H^n(H, M). The ambient backend restricts the G
/// resolution to H; the chainmap backend lifts the inclusion to a chain map
/// from an independent resolution of H.
CohomologyMap restriction_map(ResolutionSource& src, const PermGroup& g, const PermGroup& h, const CoeffModule& m,
                              std::size_t n, Backend backend);

/// Runs both backends and raises VerificationFailure unless their image
/// invariants and injectivity/surjectivity flags agree. Returns the
/// ambient result.
CohomologyMap restriction_both(ResolutionSource& src, const PermGroup& g, const PermGroup& h, const CoeffModule& m,
                               std::size_t n);

struct TransferResult {
  CohomologyMap restriction;  ///< ambient backend
  CohomologyMap transfer;     ///< cor: H^n(H, M) -> H^n(G, M)
  std::size_t index = 0;
  /// cor(res(x_j)) in coordinates of H^n(G, M).
  std::vector<std::vector<Int>> composite;
  bool composite_is_index = false;
};

/// Coset-sum transfer on the ambient resolution, with the check
/// cor o res = [G:H].
TransferResult transfer_map(ResolutionSource& src, const PermGroup& g, const PermGroup& h, const CoeffModule& m,
                            std::size_t n);

struct BocksteinResult {
  CohomologyGroup mod2;        ///< H^n(G, F2)
  CohomologyGroup integral;    ///< H^{n+1}(G, Z)
  CohomologyGroup mod2_next;   ///< H^{n+1}(G, F2)
  CohomologyMap beta;          ///< H^n(G, F2) -> H^{n+1}(G, Z)
  CohomologyMap sq1;           ///< H^n(G, F2) -> H^{n+1}(G, F2), through Z/4
  CohomologyMap reduction;     ///< pi: H^{n+1}(G, Z) -> H^{n+1}(G, F2)
  bool sq1_is_pi_beta = false;  ///< checked on every generator
};

/// Requires r.length() >= n + 2. Throws VerificationFailure when a lifted
/// coboundary is not divisible by 2.
BocksteinResult bockstein(const FreeResolution& r, std::size_t n);

struct NaturalityResult {
  bool commutes = false;
  /// Per generator of H^n(G, F2): Res(beta x) and beta(Res x) in
  /// coordinates of H^{n+1}(H, Z).
  std::vector<std::vector<Int>> res_beta;
  std::vector<std::vector<Int>> beta_res;
};

/// Res o beta = beta o Res for H <= G in degree n, on the ambient
/// resolution.
NaturalityResult bockstein_naturality(ResolutionSource& src, const PermGroup& g, const PermGroup& h, std::size_t n);

struct ShapiroReport {
  std::size_t n = 0;
  AbelianInvariants coefficients;
  AbelianInvariants permutation_side;   ///< H^2(S_n, A^n), computed
  AbelianInvariants stabiliser_side;    ///< H^2(S_{n-1}, A), computed
  AbelianInvariants uct_prediction;     ///< from computed H_1, H_2 of S_{n-1}
  bool shapiro_holds = false;
  bool uct_holds = false;
  [[nodiscard]] nlohmann::json to_json() const;
};

ShapiroReport shapiro_check(ResolutionSource& src, std::size_t n, const AbelianInvariants& a);

struct Mod2Consistency {
  std::size_t degree = 0;
  std::size_t dim_f2 = 0;
  std::size_t predicted = 0;  ///< dim(H^n tensor F2) + dim(H^{n+1}[2])
  bool holds = false;
};

/// dim H^n(G, F2) = dim(H^n(G, Z) tensor F2) + dim(H^{n+1}(G, Z)[2]) for
/// n = 0 .. r.length() - 2.
std::vector<Mod2Consistency> mod2_uct_check(const FreeResolution& r);

}  // namespace pcoh::cohomology
