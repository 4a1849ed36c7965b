#include <algorithm>
#include <functional>
#include <queue>
#include <stdexcept>
#include <tuple>

#include "permcohom/exactlin/echelon.hpp"

namespace pcoh::exactlin {

namespace {

using MinHeap = std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>>;

const Int* find_entry(const SparseVec& v, std::uint32_t col) {
  const auto it = std::lower_bound(v.begin(), v.end(), col, [](const Entry& e, std::uint32_t i) { return e.index < i; });
  return it != v.end() && it->index == col ? &it->value : nullptr;
}

}  // namespace

PivotedEchelon::PivotedEchelon(std::size_t dim, bool track_tags)
    : track_tags_(track_tags), row_of_col_(dim, -1), col_count_(dim, 0) {}

void PivotedEchelon::count_columns(const SparseVec& v, int sign) {
  for (const auto& e : v) col_count_[e.index] = static_cast<std::uint32_t>(static_cast<int>(col_count_[e.index]) + sign);
}

bool PivotedEchelon::reduce(SparseVec& v, SparseVec* x, SparseVec* tag, bool mutate) {
  MinHeap pending;
  auto enqueue = [&](const SparseVec& w, std::int32_t after) {
    for (const auto& e : w) {
      const auto r = row_of_col_[e.index];
      if (r > after) pending.push(static_cast<std::uint32_t>(r));
    }
  };
  enqueue(v, -1);
  SparseVec scratch;
  std::int64_t last = -1;
  while (!pending.empty()) {
    const auto i = pending.top();
    pending.pop();
    if (static_cast<std::int64_t>(i) == last) continue;
    last = i;
    const auto p = pivot_col_[i];
    const Int* bp = find_entry(v, p);
    if (bp == nullptr) continue;
    auto& row = rows_[i];
    const Int a = *find_entry(row, p);
    const Int b = *bp;
    enqueue(row, static_cast<std::int32_t>(i));
    if (b.divisible_by(a)) {
      const Int q = divexact(b, a);
      axmy(v, q, row, scratch);
      if (x != nullptr) axpy(*x, q, tags_[i], scratch);
      if (tag != nullptr) axmy(*tag, q, tags_[i], scratch);
      continue;
    }
    if (!mutate) return false;
    // [[s, t], [b/g, -a/g]] on (row, v): the row keeps pivot value g and v
    // loses its entry at p.
    const auto [g, s, t] = xgcd(a, b);
    const Int bg = divexact(b, g);
    const Int ag = divexact(a, g);
    SparseVec new_row;
    SparseVec next;
    lincomb(new_row, s, row, t, v);
    lincomb(next, bg, row, -ag, v);
    if (track_tags_ && tag != nullptr) {
      SparseVec new_tag;
      SparseVec next_tag;
      lincomb(new_tag, s, tags_[i], t, *tag);
      lincomb(next_tag, bg, tags_[i], -ag, *tag);
      tags_[i].swap(new_tag);
      tag->swap(next_tag);
    }
    ++exchanges_;
    count_columns(row, -1);
    count_columns(new_row, +1);
    max_bits_ = std::max(max_bits_, max_bit_length(new_row));
    row.swap(new_row);
    v.swap(next);
  }
  return true;
}

bool PivotedEchelon::reduce_const(SparseVec& v, SparseVec* x) const {
  // Non-mutating mode touches no member.
  return const_cast<PivotedEchelon*>(this)->reduce(v, x, nullptr, false);
}

PivotedEchelon::Inserted PivotedEchelon::insert(SparseVec v, SparseVec tag) {
  for (const auto& e : v) {
    if (e.index >= dim()) throw std::out_of_range("PivotedEchelon::insert: index outside dimension");
  }
  Inserted result;
  const auto exchanges_before = exchanges_;
  reduce(v, nullptr, track_tags_ ? &tag : nullptr, true);
  if (v.empty()) {
    result.grew = exchanges_ != exchanges_before;
    result.dependent = true;
    if (track_tags_) result.relation = std::move(tag);
    return result;
  }
  // Pivot choice: unit entries first, then sparse columns, then low index.
  std::size_t best = 0;
  auto key = [&](const Entry& e) {
    const bool unit = e.value == Int(1) || e.value == Int(-1);
    return std::tuple<int, std::uint32_t, std::uint32_t>(unit ? 0 : 1, col_count_[e.index], e.index);
  };
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (key(v[k]) < key(v[best])) best = k;
  }
  if (!(v[best].value == Int(1) || v[best].value == Int(-1))) {
    // No unit: take the smallest absolute value among the sparse columns.
    for (std::size_t k = 0; k < v.size(); ++k) {
      const auto ak = abs(v[k].value);
      const auto ab = abs(v[best].value);
      if (ak < ab || (ak == ab && key(v[k]) < key(v[best]))) best = k;
    }
  }
  const auto p = v[best].index;
  if (v[best].value.sign() < 0) {
    negate(v);
    if (track_tags_) negate(tag);
  }
  row_of_col_[p] = static_cast<std::int32_t>(rows_.size());
  pivot_col_.push_back(p);
  count_columns(v, +1);
  max_bits_ = std::max(max_bits_, max_bit_length(v));
  rows_.push_back(std::move(v));
  if (track_tags_) tags_.push_back(std::move(tag));
  result.grew = true;
  return result;
}

bool PivotedEchelon::contains(const SparseVec& v_in) const {
  SparseVec v = v_in;
  for (const auto& e : v) {
    if (e.index >= dim()) return false;
  }
  return reduce_const(v, nullptr) && v.empty();
}

std::optional<SparseVec> PivotedEchelon::solve(const SparseVec& v_in) const {
  if (!track_tags_) throw std::logic_error("PivotedEchelon::solve requires tag tracking");
  SparseVec v = v_in;
  for (const auto& e : v) {
    if (e.index >= dim()) return std::nullopt;
  }
  SparseVec x;
  if (!reduce_const(v, &x) || !v.empty()) return std::nullopt;
  return x;
}

std::size_t PivotedEchelon::unit_pivots() const noexcept {
  std::size_t n = 0;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Int* a = find_entry(rows_[i], pivot_col_[i]);
    n += (a != nullptr && *a == Int(1)) ? 1 : 0;
  }
  return n;
}

std::size_t PivotedEchelon::stored_entries() const noexcept {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.size();
  for (const auto& t : tags_) n += t.size();
  return n;
}

}  // namespace pcoh::exactlin
