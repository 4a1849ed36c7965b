#include "permcohom/exactlin/echelon.hpp"

#include <algorithm>
#include <stdexcept>

namespace pcoh::exactlin {

LatticeEchelon::LatticeEchelon(std::size_t dim, bool track_tags)
    : track_tags_(track_tags), pivot_row_(dim, -1) {}

void LatticeEchelon::note_bits(const SparseVec& v) {
  max_bits_ = std::max(max_bits_, max_bit_length(v));
}

LatticeEchelon::Inserted LatticeEchelon::insert(SparseVec v, SparseVec tag) {
  Inserted result;
  SparseVec scratch;
  SparseVec new_row;
  SparseVec new_tag;
  while (!v.empty()) {
    const auto col = v.front().index;
    if (col >= dim()) throw std::out_of_range("LatticeEchelon::insert: index outside dimension");
    const auto r = pivot_row_[col];
    if (r < 0) {
      if (v.front().value.sign() < 0) {
        negate(v);
        if (track_tags_) negate(tag);
      }
      note_bits(v);
      pivot_row_[col] = static_cast<std::int32_t>(rows_.size());
      rows_.push_back(std::move(v));
      if (track_tags_) tags_.push_back(std::move(tag));
      result.grew = true;
      return result;
    }
    auto& row = rows_[static_cast<std::size_t>(r)];
    const Int& a = row.front().value;
    const Int b = v.front().value;
    if (b.divisible_by(a)) {
      const Int q = divexact(b, a);
      axmy(v, q, row, scratch);
      if (track_tags_) axmy(tag, q, tags_[static_cast<std::size_t>(r)], scratch);
      continue;
    }
    // Unimodular exchange [[s, t], [b/g, -a/g]] keeps the joint span.
    const auto [g, s, t] = xgcd(a, b);
    const Int bg = divexact(b, g);
    const Int ag = divexact(a, g);
    lincomb(new_row, s, row, t, v);
    SparseVec next;
    lincomb(next, bg, row, -ag, v);
    if (track_tags_) {
      auto& row_tag = tags_[static_cast<std::size_t>(r)];
      lincomb(new_tag, s, row_tag, t, tag);
      SparseVec next_tag;
      lincomb(next_tag, bg, row_tag, -ag, tag);
      row_tag.swap(new_tag);
      tag.swap(next_tag);
    }
    note_bits(new_row);
    row.swap(new_row);
    v.swap(next);
    result.grew = true;
  }
  result.dependent = true;
  if (track_tags_) result.relation = std::move(tag);
  return result;
}

bool LatticeEchelon::contains(const SparseVec& v_in) const {
  SparseVec v = v_in;
  SparseVec scratch;
  while (!v.empty()) {
    const auto col = v.front().index;
    if (col >= dim()) return false;
    const auto r = pivot_row_[col];
    if (r < 0) return false;
    const auto& row = rows_[static_cast<std::size_t>(r)];
    if (!v.front().value.divisible_by(row.front().value)) return false;
    const Int q = divexact(v.front().value, row.front().value);
    axmy(v, q, row, scratch);
  }
  return true;
}

std::optional<SparseVec> LatticeEchelon::solve(const SparseVec& v_in) const {
  if (!track_tags_) throw std::logic_error("LatticeEchelon::solve requires tag tracking");
  SparseVec v = v_in;
  SparseVec x;
  SparseVec scratch;
  while (!v.empty()) {
    const auto col = v.front().index;
    if (col >= dim()) return std::nullopt;
    const auto r = pivot_row_[col];
    if (r < 0) return std::nullopt;
    const auto& row = rows_[static_cast<std::size_t>(r)];
    if (!v.front().value.divisible_by(row.front().value)) return std::nullopt;
    const Int q = divexact(v.front().value, row.front().value);
    axmy(v, q, row, scratch);
    axpy(x, q, tags_[static_cast<std::size_t>(r)], scratch);
  }
  return x;
}

SparseVec LatticeEchelon::reduce(SparseVec v) const {
  SparseVec scratch;
  std::uint32_t cursor = 0;
  for (;;) {
    auto it = std::lower_bound(v.begin(), v.end(), cursor,
                               [](const Entry& e, std::uint32_t i) { return e.index < i; });
    // Advance to the next entry sitting on a pivot column.
    while (it != v.end() && (it->index >= dim() || pivot_row_[it->index] < 0)) ++it;
    if (it == v.end()) break;
    const auto col = it->index;
    const auto& row = rows_[static_cast<std::size_t>(pivot_row_[col])];
    const Int q = floor_div(it->value, row.front().value);
    if (!q.is_zero()) axmy(v, q, row, scratch);
    cursor = col + 1;
  }
  return v;
}

std::vector<std::size_t> LatticeEchelon::rows_by_pivot() const {
  std::vector<std::size_t> order;
  order.reserve(rows_.size());
  for (const auto r : pivot_row_) {
    if (r >= 0) order.push_back(static_cast<std::size_t>(r));
  }
  return order;
}

void LatticeEchelon::hermite_reduce() {
  const auto order = rows_by_pivot();
  SparseVec scratch;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& prow = rows_[order[k]];
    const auto pcol = prow.front().index;
    const Int& pivot = prow.front().value;
    for (std::size_t above = 0; above < k; ++above) {
      auto& row = rows_[order[above]];
      const Int entry = value_at(row, pcol);
      if (entry.is_zero()) continue;
      const Int q = floor_div(entry, pivot);
      if (q.is_zero()) continue;
      axmy(row, q, prow, scratch);
      if (track_tags_) axmy(tags_[order[above]], q, tags_[order[k]], scratch);
      note_bits(row);
    }
  }
}

std::vector<SparseVec> LatticeEchelon::basis() const {
  std::vector<SparseVec> out;
  for (const auto r : rows_by_pivot()) out.push_back(rows_[r]);
  return out;
}

std::vector<SparseVec> LatticeEchelon::basis_tags() const {
  if (!track_tags_) throw std::logic_error("basis_tags requires tag tracking");
  std::vector<SparseVec> out;
  for (const auto r : rows_by_pivot()) out.push_back(tags_[r]);
  return out;
}

std::vector<std::uint32_t> LatticeEchelon::pivot_columns() const {
  std::vector<std::uint32_t> out;
  for (std::size_t c = 0; c < pivot_row_.size(); ++c) {
    if (pivot_row_[c] >= 0) out.push_back(static_cast<std::uint32_t>(c));
  }
  return out;
}

std::size_t LatticeEchelon::stored_entries() const noexcept {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.size();
  for (const auto& t : tags_) n += t.size();
  return n;
}

}  // namespace pcoh::exactlin
