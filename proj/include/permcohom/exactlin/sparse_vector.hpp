#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "permcohom/exactlin/integer.hpp"

namespace pcoh::exactlin {

struct Entry {
  std::uint32_t index;
  Int value;

  friend bool operator==(const Entry& a, const Entry& b) {
    return a.index == b.index && a.value == b.value;
  }
};

/// Sparse integer vector: entries sorted by strictly increasing index, no
/// stored zeros.
using SparseVec = std::vector<Entry>;

/// Builds a SparseVec from unsorted (index, value) pairs; duplicates are
/// summed and zeros dropped.
SparseVec make_sparse(std::vector<Entry> entries);
SparseVec from_dense(std::span<const Int> dense);
std::vector<Int> to_dense(const SparseVec& v, std::size_t dim);

/// y <- y + a*x. scratch is reused storage.
void axpy(SparseVec& y, const Int& a, const SparseVec& x, SparseVec& scratch);
/// y <- y - a*x.
void axmy(SparseVec& y, const Int& a, const SparseVec& x, SparseVec& scratch);
/// out <- a*x + b*y.
void lincomb(SparseVec& out, const Int& a, const SparseVec& x, const Int& b, const SparseVec& y);

void scale(SparseVec& v, const Int& a);
void negate(SparseVec& v);
Int dot(const SparseVec& a, const SparseVec& b);
Int dot_dense(const SparseVec& a, std::span<const Int> b);
/// Value at index, zero if absent.
Int value_at(const SparseVec& v, std::uint32_t index);
std::size_t max_bit_length(const SparseVec& v);

/// Reduces the vector's entries modulo m (m >= 2) into [0, m).
SparseVec reduce_mod(const SparseVec& v, const Int& m);

}  // namespace pcoh::exactlin
