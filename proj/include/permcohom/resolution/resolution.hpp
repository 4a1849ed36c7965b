#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "permcohom/exactlin/sparse_matrix.hpp"
#include "permcohom/exactlin/sparse_vector.hpp"
#include "permcohom/perm/group.hpp"

namespace pcoh::resolution {

using exactlin::Int;
using exactlin::SparseIntMatrix;
using exactlin::SparseVec;
using perm::GroupHom;
using perm::PermGroup;

/// An element of the integral group ring: coefficients indexed by element
/// position in the group's canonical ordering.
class GroupRingElement {
 public:
  GroupRingElement() = default;
  GroupRingElement(PermGroup g, SparseVec coeffs);
  static GroupRingElement one(const PermGroup& g);
  static GroupRingElement basis(const PermGroup& g, std::size_t element);

  [[nodiscard]] const PermGroup& group() const noexcept { return group_; }
  [[nodiscard]] const SparseVec& coeffs() const noexcept { return coeffs_; }
  /// Sum of coefficients.
  [[nodiscard]] Int augmentation() const;

  friend GroupRingElement operator+(const GroupRingElement& a, const GroupRingElement& b);
  friend GroupRingElement operator-(const GroupRingElement& a, const GroupRingElement& b);
  friend GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b);
  friend bool operator==(const GroupRingElement& a, const GroupRingElement& b) {
    return a.group_ == b.group_ && a.coeffs_ == b.coeffs_;
  }

 private:
  PermGroup group_;
  SparseVec coeffs_;
};

/// A free resolution ... -> (ZG)^{a_1} -> (ZG)^{a_0} -> Z.
///
/// A vector in (ZG)^{a} is stored over Z with coordinate i*|G| + h for the
/// basis element h*e_i; G acts on the left through the h index. The
/// augmentation sends every h*e_i of degree 0 to 1.
class FreeResolution {
 public:
  FreeResolution() = default;
  /// boundaries[n][j] = d_n(e_j) for n = 1..N; boundaries[0] is empty.
  FreeResolution(PermGroup group, std::vector<std::size_t> ranks, std::vector<std::vector<SparseVec>> boundaries);

  [[nodiscard]] const PermGroup& group() const noexcept { return group_; }
  [[nodiscard]] std::size_t length() const noexcept { return ranks_.empty() ? 0 : ranks_.size() - 1; }
  [[nodiscard]] const std::vector<std::size_t>& ranks() const noexcept { return ranks_; }
  [[nodiscard]] std::size_t rank(std::size_t n) const { return ranks_.at(n); }
  /// Z-rank of the degree-n module, a_n * |G|.
  [[nodiscard]] std::size_t z_dim(std::size_t n) const { return ranks_.at(n) * group_.order(); }
  [[nodiscard]] const SparseVec& boundary(std::size_t n, std::size_t j) const { return boundaries_.at(n).at(j); }
  [[nodiscard]] const std::vector<std::vector<SparseVec>>& boundaries() const noexcept { return boundaries_; }
  /// Coefficient of e_i in d_n(e_j).
  [[nodiscard]] GroupRingElement entry(std::size_t n, std::size_t i, std::size_t j) const;

  /// g * x for x in a free module of this resolution.
  [[nodiscard]] SparseVec translate(std::size_t g, const SparseVec& x) const;
  /// d_n applied to any Z-vector of degree n.
  [[nodiscard]] SparseVec apply_boundary(std::size_t n, const SparseVec& x) const;
  /// d_n as a Z-matrix of size z_dim(n-1) x z_dim(n); column j*|G| + g is
  /// g * d_n(e_j).
  [[nodiscard]] SparseIntMatrix z_matrix(std::size_t n) const;
  /// id_Z tensored over ZG with d_n: the a_{n-1} x a_n matrix of
  /// augmentations of the entries.
  [[nodiscard]] SparseIntMatrix augmented_matrix(std::size_t n) const;

  [[nodiscard]] FreeResolution truncated(std::size_t n) const;
  /// Overwrites one coefficient; for fault-injection tests.
  void corrupt(std::size_t n, std::size_t j, std::uint32_t index, const Int& value);

  /// SHA-256 over the group fingerprint, ranks and boundaries.
  [[nodiscard]] std::string content_hash() const;

  /// Cache file format: versioned header followed by one block per degree
  /// of (row, col, element, coeff) quadruplets.
  [[nodiscard]] std::string serialize() const;
  /// Parses serialize() output. The group must have the recorded
  /// fingerprint. Throws std::runtime_error on malformed input.
  static FreeResolution deserialize(const std::string& text, const PermGroup& group);

 private:
  PermGroup group_;
  std::vector<std::size_t> ranks_;
  std::vector<std::vector<SparseVec>> boundaries_;
};

/// Version of the construction algorithm; part of every cache key.
inline constexpr int kAlgorithmVersion = 1;

struct BuildOptions {
  /// Upper bound on any a_n; exceeding it raises ResourceLimit.
  std::size_t rank_cap = 4096;
  /// Wall-clock deadline; passing it raises ResourceLimit.
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct BuildTelemetry {
  std::vector<double> seconds;        ///< per degree
  std::vector<std::size_t> candidates;  ///< kernel basis size offered per degree
  std::size_t max_bits = 0;
};

/// Degree-by-degree construction. At degree n a Z-basis of ker d_{n-1}
/// (ker of the augmentation for n = 1), sorted stably by support size, is
/// scanned; a vector not already in the Z-span of the translates of
/// earlier choices becomes a new free generator. The relations among those
/// translates give ker d_n for the next step. Membership uses a
/// PivotedEchelon, which keeps coefficients small.
FreeResolution build_resolution(const PermGroup& g, std::size_t length, const BuildOptions& opts = {},
                                BuildTelemetry* telemetry = nullptr);

struct ValidationReport {
  bool passed = true;
  /// First failing degree and the reason, when !passed.
  std::optional<std::size_t> failed_degree;
  std::string failure;
  std::vector<std::size_t> ranks;
  /// Z-rank of d_n, n = 1..N (index 0 unused).
  std::vector<std::size_t> boundary_ranks;
  std::vector<double> seconds;
};

/// Checks d_{n-1} d_n = 0, augmentation d_1 = 0, and exactness at every
/// degree below the top: rank(d_n) + rank(d_{n+1}) = a_n |G| and
/// im d_{n+1} saturated (all nonzero Smith invariants equal 1).
ValidationReport validate_resolution(const FreeResolution& r);
/// validate_resolution, raising VerificationFailure on failure.
void require_valid(const FreeResolution& r);

/// The resolution viewed over ZH through the basis t*e_i, t running over a
/// right transversal of H in G.
struct RestrictedResolution {
  FreeResolution complex;          ///< over ZH; generator (i, t) has index i*k + t
  std::vector<std::uint32_t> transversal;  ///< G-indices of the coset representatives
  std::vector<std::uint32_t> subgroup_in_ambient;  ///< H-index -> G-index
};

RestrictedResolution restrict_scalars(const FreeResolution& r, const PermGroup& h);

/// tau_n: R_n -> S_n over f: H -> G; maps[n][j] = tau_n(e_j) as a Z-vector
/// of S_n.
struct ChainMap {
  GroupHom hom;
  std::vector<std::vector<SparseVec>> maps;
  [[nodiscard]] std::size_t length() const noexcept { return maps.empty() ? 0 : maps.size() - 1; }
};

/// Lifts the identity on Z along f to degrees 0..min(R, S) (or `length`
/// when given) by integer solves, and verifies d^S tau_n = tau_{n-1} d^R.
ChainMap lift_chain_map(const GroupHom& f, const FreeResolution& source, const FreeResolution& target,
                        std::optional<std::size_t> length = std::nullopt, const BuildOptions& opts = {});

/// tau applied to any Z-vector of R_n: sum of c * f(h) * tau_n(e_i).
SparseVec apply_chain_map(const ChainMap& tau, const FreeResolution& source, const FreeResolution& target,
                          std::size_t n, const SparseVec& x);

/// Cohomology-level dimension counts from a resolution over F_p G, the
/// cheap backend. ranks[n] are the F_p G-ranks and cochain_dims[n] =
/// dim H^n(G, F_p) for n < length.
struct ModpResolution {
  std::uint64_t prime = 2;
  std::vector<std::size_t> ranks;
  std::vector<std::size_t> cohomology_dims;
  std::vector<double> seconds;
};

ModpResolution build_resolution_mod_p(const PermGroup& g, std::size_t length, std::uint64_t p,
                                      const BuildOptions& opts = {});

/// Directory of cached resolutions keyed by (group fingerprint, length,
/// algorithm version). Entries are written to a temporary file and renamed
/// into place; every load is revalidated.
class ResolutionCache {
 public:
  explicit ResolutionCache(std::filesystem::path dir);
  [[nodiscard]] const std::filesystem::path& dir() const noexcept { return dir_; }
  [[nodiscard]] std::filesystem::path path_for(const PermGroup& g, std::size_t length) const;

  /// A validated cached resolution of at least this length, truncated.
  [[nodiscard]] std::optional<FreeResolution> load(const PermGroup& g, std::size_t length) const;
  void store(const FreeResolution& r) const;
  FreeResolution get_or_build(const PermGroup& g, std::size_t length, const BuildOptions& opts = {},
                              bool* hit = nullptr) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace pcoh::resolution
