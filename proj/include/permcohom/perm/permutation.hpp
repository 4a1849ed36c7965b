#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace pcoh::perm {

/// A bijection of {0, ..., degree-1}, stored as its image sequence.
///
/// Products compose as functions: (p * q)(i) = p(q(i)). Points are 0-based
/// here and 1-based in cycle notation.
class Permutation {
 public:
  Permutation() = default;
  /// Throws std::invalid_argument unless images is a bijection.
  explicit Permutation(std::vector<std::uint32_t> images);

  static Permutation identity(std::size_t degree);
  /// Parses one permutation in cycle notation, e.g. "(1,2)(3,4)" or
  /// "(1 2 3)" or "()". Adjacent cycles are applied left to right, the
  /// usual computer-algebra reading; for disjoint cycles the order is immaterial.
  /// The degree is the largest point mentioned or `degree`, whichever is
  /// larger.
  static Permutation parse(std::string_view text, std::size_t degree = 0);

  [[nodiscard]] std::size_t degree() const noexcept { return images_.size(); }
  [[nodiscard]] std::uint32_t operator()(std::uint32_t point) const { return images_.at(point); }
  [[nodiscard]] const std::vector<std::uint32_t>& images() const noexcept { return images_; }

  [[nodiscard]] Permutation inverse() const;
  [[nodiscard]] bool is_identity() const noexcept;
  /// Order of the element in the symmetric group.
  [[nodiscard]] std::size_t order() const;
  /// Same permutation on a larger point set, fixing the new points.
  [[nodiscard]] Permutation extended(std::size_t degree) const;
  /// Cycle notation with 1-based points, "()" for the identity.
  [[nodiscard]] std::string cycles() const;

  /// Requires equal degrees.
  friend Permutation operator*(const Permutation& p, const Permutation& q);
  friend bool operator==(const Permutation& a, const Permutation& b) = default;
  /// Lexicographic on image sequences (shorter first across degrees).
  friend bool operator<(const Permutation& a, const Permutation& b) noexcept;

 private:
  std::vector<std::uint32_t> images_;
};

std::ostream& operator<<(std::ostream& os, const Permutation& p);

/// Parses a generator list such as "(1,2),(2,3),(3,4)", "[(1,2),(3,4)]" or
/// "(1 2), (3 4)(5 6)". All results are brought to a common degree (the
/// maximum point, or `degree` if larger). Throws std::invalid_argument on
/// malformed text.
std::vector<Permutation> parse_generators(std::string_view text, std::size_t degree = 0);

/// Comma-separated cycle notation of a generator list.
std::string format_generators(const std::vector<Permutation>& gens);

}  // namespace pcoh::perm
