#include "permcohom/exactlin/sparse_matrix.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace pcoh::exactlin {

SparseIntMatrix SparseIntMatrix::identity(std::size_t n) {
  SparseIntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.columns_[i].push_back({static_cast<std::uint32_t>(i), Int{1}});
  return m;
}

SparseIntMatrix SparseIntMatrix::from_dense(const DenseMatrix& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  SparseIntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw std::invalid_argument("ragged dense matrix");
    for (std::size_t j = 0; j < c; ++j) {
      if (!rows[i][j].is_zero()) m.columns_[j].push_back({static_cast<std::uint32_t>(i), rows[i][j]});
    }
  }
  return m;
}

SparseIntMatrix SparseIntMatrix::from_columns(std::size_t rows, std::vector<SparseVec> columns) {
  SparseIntMatrix m;
  m.rows_ = rows;
  for (const auto& col : columns) {
    if (!col.empty() && col.back().index >= rows) {
      throw std::out_of_range("column entry outside row range");
    }
  }
  m.columns_ = std::move(columns);
  return m;
}

SparseIntMatrix SparseIntMatrix::diagonal(const std::vector<Int>& diag, std::size_t rows,
                                          std::size_t cols) {
  SparseIntMatrix m(rows, cols);
  for (std::size_t i = 0; i < diag.size() && i < rows && i < cols; ++i) {
    if (!diag[i].is_zero()) m.columns_[i].push_back({static_cast<std::uint32_t>(i), diag[i]});
  }
  return m;
}

std::size_t SparseIntMatrix::nnz() const noexcept {
  std::size_t n = 0;
  for (const auto& c : columns_) n += c.size();
  return n;
}

Int SparseIntMatrix::at(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols()) throw std::out_of_range("SparseIntMatrix::at");
  return value_at(columns_[c], static_cast<std::uint32_t>(r));
}

void SparseIntMatrix::set(std::size_t r, std::size_t c, const Int& v) {
  if (r >= rows_ || c >= cols()) throw std::out_of_range("SparseIntMatrix::set");
  auto& col = columns_[c];
  const auto idx = static_cast<std::uint32_t>(r);
  auto it = std::lower_bound(col.begin(), col.end(), idx,
                             [](const Entry& e, std::uint32_t i) { return e.index < i; });
  if (it != col.end() && it->index == idx) {
    if (v.is_zero()) {
      col.erase(it);
    } else {
      it->value = v;
    }
  } else if (!v.is_zero()) {
    col.insert(it, {idx, v});
  }
}

std::vector<SparseVec> SparseIntMatrix::row_vectors() const {
  std::vector<SparseVec> out(rows_);
  for (std::size_t j = 0; j < cols(); ++j) {
    for (const auto& e : columns_[j]) out[e.index].push_back({static_cast<std::uint32_t>(j), e.value});
  }
  return out;
}

SparseIntMatrix SparseIntMatrix::transpose() const {
  SparseIntMatrix t;
  t.rows_ = cols();
  t.columns_ = row_vectors();
  return t;
}

DenseMatrix SparseIntMatrix::to_dense() const {
  DenseMatrix d(rows_, std::vector<Int>(cols()));
  for (std::size_t j = 0; j < cols(); ++j) {
    for (const auto& e : columns_[j]) d[e.index][j] = e.value;
  }
  return d;
}

SparseVec SparseIntMatrix::apply(const SparseVec& x) const {
  std::vector<Entry> acc;
  for (const auto& xe : x) {
    if (xe.index >= cols()) throw std::out_of_range("SparseIntMatrix::apply");
    for (const auto& e : columns_[xe.index]) acc.push_back({e.index, e.value * xe.value});
  }
  return make_sparse(std::move(acc));
}

std::vector<Int> SparseIntMatrix::apply_dense(const std::vector<Int>& x) const {
  if (x.size() != cols()) throw std::invalid_argument("dimension mismatch in apply_dense");
  std::vector<Int> out(rows_);
  for (std::size_t j = 0; j < cols(); ++j) {
    if (x[j].is_zero()) continue;
    for (const auto& e : columns_[j]) out[e.index].addmul(e.value, x[j]);
  }
  return out;
}

std::size_t SparseIntMatrix::max_bit_length() const {
  std::size_t m = 0;
  for (const auto& c : columns_) m = std::max(m, exactlin::max_bit_length(c));
  return m;
}

SparseIntMatrix operator*(const SparseIntMatrix& a, const SparseIntMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("dimension mismatch in matrix product");
  SparseIntMatrix out(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) out.columns_[j] = a.apply(b.columns_[j]);
  return out;
}

std::string SparseIntMatrix::to_triplet_text() const {
  std::ostringstream os;
  os << rows_ << ' ' << cols() << ' ' << nnz() << '\n';
  for (std::size_t j = 0; j < cols(); ++j) {
    for (const auto& e : columns_[j]) os << e.index << ' ' << j << ' ' << e.value << '\n';
  }
  return os.str();
}

SparseIntMatrix SparseIntMatrix::from_triplet_text(const std::string& text) {
  std::istringstream is(text);
  std::size_t r = 0;
  std::size_t c = 0;
  std::size_t n = 0;
  if (!(is >> r >> c >> n)) throw std::invalid_argument("bad triplet header");
  std::vector<std::vector<Entry>> cols(c);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t i = 0;
    std::size_t j = 0;
    std::string v;
    if (!(is >> i >> j >> v)) throw std::invalid_argument("truncated triplet body");
    if (i >= r || j >= c) throw std::out_of_range("triplet index outside matrix");
    cols[j].push_back({static_cast<std::uint32_t>(i), Int::from_string(v)});
  }
  SparseIntMatrix m(r, c);
  for (std::size_t j = 0; j < c; ++j) m.columns_[j] = make_sparse(std::move(cols[j]));
  return m;
}

nlohmann::json SparseIntMatrix::to_json() const {
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t j = 0; j < cols(); ++j) {
    for (const auto& e : columns_[j]) entries.push_back({e.index, j, e.value.str()});
  }
  return {{"rows", rows_}, {"cols", cols()}, {"nnz", nnz()}, {"entries", entries}};
}

SparseIntMatrix SparseIntMatrix::from_json(const nlohmann::json& j) {
  const auto r = j.at("rows").get<std::size_t>();
  const auto c = j.at("cols").get<std::size_t>();
  std::vector<std::vector<Entry>> cols(c);
  for (const auto& e : j.at("entries")) {
    const auto i = e.at(0).get<std::size_t>();
    const auto col = e.at(1).get<std::size_t>();
    if (i >= r || col >= c) throw std::out_of_range("json entry outside matrix");
    cols[col].push_back({static_cast<std::uint32_t>(i), Int::from_string(e.at(2).get<std::string>())});
  }
  if (j.contains("nnz") && j.at("nnz").get<std::size_t>() != j.at("entries").size()) {
    throw std::invalid_argument("json nnz does not match entry count");
  }
  SparseIntMatrix m(r, c);
  for (std::size_t k = 0; k < c; ++k) m.columns_[k] = make_sparse(std::move(cols[k]));
  return m;
}

std::ostream& operator<<(std::ostream& os, const SparseIntMatrix& m) {
  const auto d = m.to_dense();
  os << '[';
  for (std::size_t i = 0; i < d.size(); ++i) {
    os << (i == 0 ? "[" : " [");
    for (std::size_t j = 0; j < d[i].size(); ++j) os << (j == 0 ? "" : ",") << d[i][j];
    os << ']';
  }
  return os << ']';
}

}  // namespace pcoh::exactlin
