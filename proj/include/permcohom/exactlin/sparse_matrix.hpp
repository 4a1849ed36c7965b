#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "permcohom/exactlin/sparse_vector.hpp"

namespace pcoh::exactlin {

using DenseMatrix = std::vector<std::vector<Int>>;

/// Exact sparse integer matrix, stored column-major: column j is a
/// SparseVec over row indices.
class SparseIntMatrix {
 public:
  SparseIntMatrix() = default;
  SparseIntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), columns_(cols) {}

  static SparseIntMatrix identity(std::size_t n);
  static SparseIntMatrix from_dense(const DenseMatrix& rows);
  static SparseIntMatrix from_columns(std::size_t rows, std::vector<SparseVec> columns);
  static SparseIntMatrix diagonal(const std::vector<Int>& diag, std::size_t rows, std::size_t cols);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return columns_.size(); }
  [[nodiscard]] std::size_t nnz() const noexcept;

  [[nodiscard]] Int at(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, const Int& v);

  [[nodiscard]] const SparseVec& column(std::size_t c) const { return columns_.at(c); }
  [[nodiscard]] const std::vector<SparseVec>& columns() const noexcept { return columns_; }
  /// Row-major view: rows()[r] is a SparseVec over column indices.
  [[nodiscard]] std::vector<SparseVec> row_vectors() const;

  [[nodiscard]] SparseIntMatrix transpose() const;
  [[nodiscard]] DenseMatrix to_dense() const;
  [[nodiscard]] SparseVec apply(const SparseVec& x) const;
  [[nodiscard]] std::vector<Int> apply_dense(const std::vector<Int>& x) const;
  [[nodiscard]] bool is_zero() const noexcept { return nnz() == 0; }
  [[nodiscard]] std::size_t max_bit_length() const;

  friend SparseIntMatrix operator*(const SparseIntMatrix& a, const SparseIntMatrix& b);
  friend bool operator==(const SparseIntMatrix& a, const SparseIntMatrix& b) {
    return a.rows_ == b.rows_ && a.columns_ == b.columns_;
  }

  /// Sparse triplet text: "rows cols nnz" then one "row col value" line per
  /// entry, column-major order, 0-based indices.
  [[nodiscard]] std::string to_triplet_text() const;
  static SparseIntMatrix from_triplet_text(const std::string& text);
  [[nodiscard]] nlohmann::json to_json() const;
  static SparseIntMatrix from_json(const nlohmann::json& j);

 private:
  std::size_t rows_ = 0;
  std::vector<SparseVec> columns_;
};

std::ostream& operator<<(std::ostream& os, const SparseIntMatrix& m);

}  // namespace pcoh::exactlin
