#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "permcohom/exactlin/sparse_vector.hpp"

namespace pcoh::exactlin {

/// Incrementally maintained row-echelon basis of an integer lattice.
///
/// Rows are kept with distinct leading columns (the smallest index in the
/// row) and positive leading entries. Inserting a vector reduces it against
/// the rows; when a leading entry is not divisible by the pivot, the pivot
/// row and the vector are replaced by a unimodular gcd combination, so the
/// lattice spanned by everything inserted is preserved exactly.
///
/// With tag tracking on, every inserted vector carries a tag (typically a
/// unit vector naming it) that undergoes the same row operations. A vector
/// that reduces to zero then yields its reduced tag as an integer relation;
/// the relations collected over a run form a Z-basis of the relation
/// lattice of the inserted family, and row tags express each basis row in
/// terms of the inserted vectors.
class LatticeEchelon {
 public:
  explicit LatticeEchelon(std::size_t dim, bool track_tags = false);

  struct Inserted {
    bool grew = false;         ///< spanned lattice strictly increased
    bool dependent = false;    ///< the vector reduced to zero
    SparseVec relation;        ///< reduced tag when dependent and tracking
  };

  Inserted insert(SparseVec v, SparseVec tag = {});

  [[nodiscard]] bool contains(const SparseVec& v) const;
  /// Combination of tags whose image is v, or nullopt when v is outside the
  /// lattice. Requires tag tracking.
  [[nodiscard]] std::optional<SparseVec> solve(const SparseVec& v) const;
  /// Canonical representative of v modulo the lattice: the entry at every
  /// pivot column is reduced into [0, pivot). Canonical once
  /// hermite_reduce() has been applied.
  [[nodiscard]] SparseVec reduce(SparseVec v) const;

  /// Reduces entries above pivots into [0, pivot): row Hermite normal form.
  void hermite_reduce();

  [[nodiscard]] std::size_t dim() const noexcept { return pivot_row_.size(); }
  [[nodiscard]] std::size_t rank() const noexcept { return rows_.size(); }
  [[nodiscard]] bool tracks_tags() const noexcept { return track_tags_; }
  [[nodiscard]] bool has_pivot(std::uint32_t col) const { return pivot_row_.at(col) >= 0; }

  /// Basis rows ordered by increasing pivot column.
  [[nodiscard]] std::vector<SparseVec> basis() const;
  /// Tags of the basis rows, same order as basis().
  [[nodiscard]] std::vector<SparseVec> basis_tags() const;
  [[nodiscard]] std::vector<std::uint32_t> pivot_columns() const;

  [[nodiscard]] std::size_t max_bits_seen() const noexcept { return max_bits_; }
  [[nodiscard]] std::size_t stored_entries() const noexcept;

 private:
  void note_bits(const SparseVec& v);
  [[nodiscard]] std::vector<std::size_t> rows_by_pivot() const;

  bool track_tags_;
  std::vector<SparseVec> rows_;
  std::vector<SparseVec> tags_;
  std::vector<std::int32_t> pivot_row_;
  std::size_t max_bits_ = 0;
};

}  // namespace pcoh::exactlin

namespace pcoh::exactlin {

/// Lattice echelon with a free choice of pivot column.
///
/// Same contract as LatticeEchelon, but a new row may pivot on any of its
/// columns: the rule prefers entries of absolute value 1, then the column
/// that occurs in the fewest stored rows, then the lowest index. Rows are
/// ordered by insertion; row i vanishes on the pivots of rows 0..i-1, so a
/// vector is reduced against pivots in insertion order. With unit pivots
/// the reduction is division free, which keeps coefficients small on the
/// group-ring matrices met in resolutions.
class PivotedEchelon {
 public:
  explicit PivotedEchelon(std::size_t dim, bool track_tags = false);

  using Inserted = LatticeEchelon::Inserted;

  Inserted insert(SparseVec v, SparseVec tag = {});
  [[nodiscard]] bool contains(const SparseVec& v) const;
  /// Combination of tags whose image is v; requires tag tracking.
  [[nodiscard]] std::optional<SparseVec> solve(const SparseVec& v) const;

  [[nodiscard]] std::size_t dim() const noexcept { return row_of_col_.size(); }
  [[nodiscard]] std::size_t rank() const noexcept { return rows_.size(); }
  [[nodiscard]] std::size_t unit_pivots() const noexcept;
  /// Unimodular exchanges performed so far (non-unit pivot events).
  [[nodiscard]] std::size_t exchanges() const noexcept { return exchanges_; }
  [[nodiscard]] const std::vector<SparseVec>& rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t max_bits_seen() const noexcept { return max_bits_; }
  [[nodiscard]] std::size_t stored_entries() const noexcept;

 private:
  // Reduces v (and x, when non-null, by the tag combination) against the
  // rows. In mutating mode a non-divisible pivot triggers a unimodular
  // exchange with the stored row; otherwise the call reports failure.
  bool reduce(SparseVec& v, SparseVec* x, SparseVec* tag, bool mutate);
  bool reduce_const(SparseVec& v, SparseVec* x) const;
  void count_columns(const SparseVec& v, int sign);

  bool track_tags_;
  std::vector<SparseVec> rows_;
  std::vector<SparseVec> tags_;
  std::vector<std::uint32_t> pivot_col_;
  std::vector<std::int32_t> row_of_col_;
  std::vector<std::uint32_t> col_count_;
  std::size_t exchanges_ = 0;
  std::size_t max_bits_ = 0;
};

}  // namespace pcoh::exactlin
