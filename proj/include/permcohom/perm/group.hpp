#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "permcohom/perm/permutation.hpp"

namespace pcoh::perm {

inline constexpr std::size_t kDefaultElementCap = 1'000'000;

/// A finite permutation group with its elements enumerated.
///
/// Elements are sorted lexicographically by image sequence, so index 0 is
/// always the identity and the indexing depends only on the element set,
/// not on the generators. The handle is cheap to copy; the enumerated data
/// is shared and immutable.
class PermGroup {
 public:
  PermGroup() = default;

  /// Breadth-first closure over the generators. Throws
  /// std::invalid_argument on mixed degrees and pcoh::ResourceLimit when
  /// the order would exceed `element_cap`.
  static PermGroup generated_by(std::vector<Permutation> gens, std::size_t element_cap = kDefaultElementCap);
  static PermGroup parse(std::string_view generators, std::size_t degree = 0,
                         std::size_t element_cap = kDefaultElementCap);

  [[nodiscard]] std::size_t degree() const noexcept;
  [[nodiscard]] std::size_t order() const noexcept;
  [[nodiscard]] const std::vector<Permutation>& generators() const noexcept;
  [[nodiscard]] const std::vector<Permutation>& elements() const noexcept;
  [[nodiscard]] const Permutation& element(std::size_t i) const { return elements().at(i); }
  /// Indices of the generators in the element list.
  [[nodiscard]] const std::vector<std::uint32_t>& generator_indices() const noexcept;

  [[nodiscard]] std::optional<std::size_t> find(const Permutation& p) const;
  /// Throws std::invalid_argument when p is not in the group.
  [[nodiscard]] std::size_t index_of(const Permutation& p) const;
  [[nodiscard]] bool contains(const Permutation& p) const { return find(p).has_value(); }

  /// Index of element(a) * element(b).
  [[nodiscard]] std::uint32_t mul(std::size_t a, std::size_t b) const;
  [[nodiscard]] std::uint32_t inv(std::size_t a) const;
  [[nodiscard]] bool has_table() const noexcept;

  /// SHA-256 over the degree and the sorted element list; identifies the
  /// group as a set of permutations.
  [[nodiscard]] const std::string& fingerprint() const noexcept;
  /// Generators in cycle notation.
  [[nodiscard]] std::string describe() const { return format_generators(generators()); }

  friend bool operator==(const PermGroup& a, const PermGroup& b) { return a.fingerprint() == b.fingerprint(); }

 private:
  struct Data;
  std::shared_ptr<const Data> data_;
};

/// A homomorphism of permutation groups given on generators, verified and
/// tabulated on all source elements.
class GroupHom {
 public:
  /// Checks that the images lie in the target, that the graph subgroup
  /// generated by (g_i, f(g_i)) has order |source|, and multiplicativity
  /// (exhaustive when |source|^2 <= 10^6, else 10^4 seeded random pairs).
  /// Throws NotAHomomorphism otherwise.
  static GroupHom by_images(const PermGroup& source, const PermGroup& target, const std::vector<Permutation>& images);
  static GroupHom identity(const PermGroup& g);
  /// Inclusion of a subgroup; generators map to themselves.
  static GroupHom inclusion(const PermGroup& sub, const PermGroup& super);

  [[nodiscard]] const PermGroup& source() const noexcept { return source_; }
  [[nodiscard]] const PermGroup& target() const noexcept { return target_; }
  [[nodiscard]] const std::vector<Permutation>& generator_images() const noexcept { return images_; }
  /// Target index of the image of source element i.
  [[nodiscard]] std::uint32_t operator()(std::size_t i) const { return table_.at(i); }
  [[nodiscard]] const std::vector<std::uint32_t>& table() const noexcept { return table_; }
  [[nodiscard]] bool is_injective() const;

 private:
  PermGroup source_;
  PermGroup target_;
  std::vector<Permutation> images_;
  std::vector<std::uint32_t> table_;
};

class NotAHomomorphism : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SubgroupIndex {
  std::size_t index = 0;
  bool odd = false;
};

/// [G : H] for H contained in G. Throws std::invalid_argument otherwise.
/// The smaller degree is padded with fixed points.
SubgroupIndex subgroup_index(const PermGroup& g, const PermGroup& h);

/// Right cosets H t of H in G; returns the first element (in G's
/// ordering) of each coset, in increasing order. Index 0 is the identity.
std::vector<std::uint32_t> right_transversal(const PermGroup& g, const PermGroup& h);

}  // namespace pcoh::perm
