#include "permcohom/exactlin/sparse_vector.hpp"

#include <algorithm>

namespace pcoh::exactlin {

SparseVec make_sparse(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.index < b.index; });
  SparseVec out;
  out.reserve(entries.size());
  for (auto& e : entries) {
    if (!out.empty() && out.back().index == e.index) {
      out.back().value += e.value;
      if (out.back().value.is_zero()) out.pop_back();
    } else if (!e.value.is_zero()) {
      out.push_back(std::move(e));
    }
  }
  return out;
}

SparseVec from_dense(std::span<const Int> dense) {
  SparseVec out;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (!dense[i].is_zero()) out.push_back({static_cast<std::uint32_t>(i), dense[i]});
  }
  return out;
}

std::vector<Int> to_dense(const SparseVec& v, std::size_t dim) {
  std::vector<Int> out(dim);
  for (const auto& e : v) out.at(e.index) = e.value;
  return out;
}

namespace {

template <bool Subtract>
void fused(SparseVec& y, const Int& a, const SparseVec& x, SparseVec& scratch) {
  if (a.is_zero() || x.empty()) return;
  scratch.clear();
  scratch.reserve(y.size() + x.size());
  auto yi = y.begin();
  auto xi = x.begin();
  while (yi != y.end() || xi != x.end()) {
    if (xi == x.end() || (yi != y.end() && yi->index < xi->index)) {
      scratch.push_back(std::move(*yi));
      ++yi;
    } else if (yi == y.end() || xi->index < yi->index) {
      Int v;
      if constexpr (Subtract) {
        v.submul(a, xi->value);
      } else {
        v.addmul(a, xi->value);
      }
      scratch.push_back({xi->index, std::move(v)});
      ++xi;
    } else {
      if constexpr (Subtract) {
        yi->value.submul(a, xi->value);
      } else {
        yi->value.addmul(a, xi->value);
      }
      if (!yi->value.is_zero()) scratch.push_back(std::move(*yi));
      ++yi;
      ++xi;
    }
  }
  y.swap(scratch);
}

}  // namespace

void axpy(SparseVec& y, const Int& a, const SparseVec& x, SparseVec& scratch) {
  fused<false>(y, a, x, scratch);
}

void axmy(SparseVec& y, const Int& a, const SparseVec& x, SparseVec& scratch) {
  fused<true>(y, a, x, scratch);
}

void lincomb(SparseVec& out, const Int& a, const SparseVec& x, const Int& b, const SparseVec& y) {
  out.clear();
  auto xi = x.begin();
  auto yi = y.begin();
  while (xi != x.end() || yi != y.end()) {
    Int v;
    std::uint32_t idx = 0;
    if (yi == y.end() || (xi != x.end() && xi->index < yi->index)) {
      idx = xi->index;
      v = a * xi->value;
      ++xi;
    } else if (xi == x.end() || yi->index < xi->index) {
      idx = yi->index;
      v = b * yi->value;
      ++yi;
    } else {
      idx = xi->index;
      v = a * xi->value;
      v.addmul(b, yi->value);
      ++xi;
      ++yi;
    }
    if (!v.is_zero()) out.push_back({idx, std::move(v)});
  }
}

void scale(SparseVec& v, const Int& a) {
  if (a.is_zero()) {
    v.clear();
    return;
  }
  for (auto& e : v) e.value *= a;
}

void negate(SparseVec& v) {
  for (auto& e : v) e.value = -e.value;
}

Int dot(const SparseVec& a, const SparseVec& b) {
  Int acc;
  auto ai = a.begin();
  auto bi = b.begin();
  while (ai != a.end() && bi != b.end()) {
    if (ai->index < bi->index) {
      ++ai;
    } else if (bi->index < ai->index) {
      ++bi;
    } else {
      acc.addmul(ai->value, bi->value);
      ++ai;
      ++bi;
    }
  }
  return acc;
}

Int dot_dense(const SparseVec& a, std::span<const Int> b) {
  Int acc;
  for (const auto& e : a) acc.addmul(e.value, b[e.index]);
  return acc;
}

Int value_at(const SparseVec& v, std::uint32_t index) {
  auto it = std::lower_bound(v.begin(), v.end(), index,
                             [](const Entry& e, std::uint32_t i) { return e.index < i; });
  if (it != v.end() && it->index == index) return it->value;
  return Int{};
}

std::size_t max_bit_length(const SparseVec& v) {
  std::size_t m = 0;
  for (const auto& e : v) m = std::max(m, e.value.bit_length());
  return m;
}

SparseVec reduce_mod(const SparseVec& v, const Int& m) {
  SparseVec out;
  for (const auto& e : v) {
    Int r = floor_mod(e.value, m);
    if (!r.is_zero()) out.push_back({e.index, std::move(r)});
  }
  return out;
}

}  // namespace pcoh::exactlin
