#include "permcohom/exactlin/normal_form.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include "permcohom/exactlin/modular.hpp"

namespace pcoh::exactlin {

namespace {

constexpr std::uint64_t kVerificationSeed = 0x5eed5eedULL;
// Residual blocks above this many entries are refused rather than densified.
constexpr std::size_t kDenseTailLimit = 36'000'000;

SparseVec unit_vector(std::size_t i) { return SparseVec{Entry{static_cast<std::uint32_t>(i), Int{1}}}; }

void check_divisor_chain(const std::vector<Int>& diag) {
  for (std::size_t i = 0; i + 1 < diag.size(); ++i) {
    if (diag[i].is_zero()) {
      if (!diag[i + 1].is_zero()) throw std::logic_error("snf: zero before nonzero on diagonal");
      continue;
    }
    if (diag[i].sign() < 0 || !diag[i + 1].divisible_by(diag[i])) {
      throw std::logic_error("snf: divisibility chain violated");
    }
  }
}

}  // namespace

namespace {

using Rows = std::vector<SparseVec>;

Rows dense_to_rows(const DenseMatrix& a) {
  Rows out;
  out.reserve(a.size());
  for (const auto& r : a) out.push_back(from_dense(r));
  return out;
}

Rows transpose_rows(const Rows& rows, std::size_t cols) {
  Rows out(cols);
  for (std::uint32_t i = 0; i < rows.size(); ++i) {
    for (const auto& e : rows[i]) out[e.index].push_back({i, e.value});
  }
  return out;
}

// Row Hermite form of `rows`; `tags` receive the same row operations.
void hermite_step(Rows& rows, Rows* tags, std::size_t dim) {
  LatticeEchelon ech(dim, tags != nullptr);
  Rows relations;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto res = ech.insert(std::move(rows[i]), tags != nullptr ? std::move((*tags)[i]) : SparseVec{});
    if (res.dependent && tags != nullptr) relations.push_back(std::move(res.relation));
  }
  ech.hermite_reduce();
  const std::size_t n = rows.size();
  rows = ech.basis();
  rows.resize(n);
  if (tags != nullptr) {
    *tags = ech.basis_tags();
    for (auto& r : relations) tags->push_back(std::move(r));
  }
}

bool is_monomial(const Rows& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const SparseVec& r) { return r.size() <= 1; });
}

DenseMatrix rows_to_dense(const Rows& rows, std::size_t cols) {
  DenseMatrix out(rows.size(), std::vector<Int>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& e : rows[i]) out[i][e.index] = e.value;
  }
  return out;
}

Rows identity_rows(std::size_t n) {
  Rows out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = unit_vector(i);
  return out;
}

}  // namespace

DenseSmith smith_dense(DenseMatrix a, bool want_u, bool want_v, bool want_u_inv) {
  // Alternating row and column Hermite forms until the matrix is monomial,
  // then a gcd/lcm pass over the diagonal. Hermite forms keep entries
  // bounded by their pivots, which avoids the blow-up of naive elimination.
  const std::size_t m = a.size();
  const std::size_t n = m == 0 ? 0 : a[0].size();
  const bool track_u = want_u || want_u_inv;
  Rows rows = dense_to_rows(a);
  Rows u = track_u ? identity_rows(m) : Rows{};
  Rows vt = want_v ? identity_rows(n) : Rows{};  // rows of V^T
  for (;;) {
    hermite_step(rows, track_u ? &u : nullptr, n);
    if (is_monomial(rows)) break;
    Rows cols = transpose_rows(rows, n);
    hermite_step(cols, want_v ? &vt : nullptr, m);
    rows = transpose_rows(cols, m);
    if (is_monomial(cols)) break;
  }

  // Monomial: move the nonzero entries onto the diagonal.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> spots;  // (row, col)
  for (std::uint32_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].empty()) spots.emplace_back(i, rows[i].front().index);
  }
  std::vector<Int> diag;
  std::vector<std::size_t> row_order;
  std::vector<std::size_t> col_order;
  std::vector<bool> row_used(m, false);
  std::vector<bool> col_used(n, false);
  for (const auto& [r, c] : spots) {
    diag.push_back(rows[r].front().value);
    row_order.push_back(r);
    col_order.push_back(c);
    row_used[r] = true;
    col_used[c] = true;
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!row_used[i]) row_order.push_back(i);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!col_used[j]) col_order.push_back(j);
  }
  DenseMatrix ud;
  DenseMatrix vd;
  if (track_u) {
    const auto full = rows_to_dense(u, m);
    for (const auto r : row_order) ud.push_back(full[r]);
  }
  if (want_v) {
    const auto full_t = rows_to_dense(vt, n);  // V^T
    vd.assign(n, std::vector<Int>(n));
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) vd[i][k] = full_t[col_order[k]][i];
    }
  }

  const std::size_t r = diag.size();
  for (std::size_t k = 0; k < r; ++k) {
    if (diag[k].sign() < 0) {
      diag[k] = -diag[k];
      if (track_u) {
        for (auto& x : ud[k]) x = -x;
      }
    }
  }
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = i + 1; j < r; ++j) {
      if (diag[j].divisible_by(diag[i])) continue;
      // [[s, t], [-b/g, a/g]] diag(a, b) [[1, -t b/g], [1, s a/g]] = diag(g, ab/g)
      const Int& a0 = diag[i];
      const Int& b0 = diag[j];
      const auto [g, s, t] = xgcd(a0, b0);
      const Int ag = divexact(a0, g);
      const Int bg = divexact(b0, g);
      if (track_u) {
        for (std::size_t c = 0; c < m; ++c) {
          const Int top = s * ud[i][c] + t * ud[j][c];
          const Int bot = ag * ud[j][c] - bg * ud[i][c];
          ud[i][c] = top;
          ud[j][c] = bot;
        }
      }
      if (want_v) {
        const Int tb = t * bg;
        const Int sa = s * ag;
        for (std::size_t c = 0; c < n; ++c) {
          const Int left = vd[c][i] + vd[c][j];
          const Int right = sa * vd[c][j] - tb * vd[c][i];
          vd[c][i] = left;
          vd[c][j] = right;
        }
      }
      const Int l = ag * b0;
      diag[i] = g;
      diag[j] = l;
    }
  }

  DenseSmith out;
  out.d.assign(m, std::vector<Int>(n));
  for (std::size_t k = 0; k < r; ++k) out.d[k][k] = diag[k];
  if (want_u_inv) {
    // U is unimodular; invert it column by column with an exact solver.
    const auto um = SparseIntMatrix::from_dense(ud);
    const LinearSolver solver(um);
    out.u_inv.assign(m, std::vector<Int>(m));
    for (std::size_t k = 0; k < m; ++k) {
      const auto x = solver.solve(unit_vector(k));
      if (!x) throw std::logic_error("smith_dense: transformation is not unimodular");
      for (const auto& e : *x) out.u_inv[e.index][k] = e.value;
    }
  }
  if (want_u) out.u = std::move(ud);
  if (want_v) out.v = std::move(vd);
  return out;
}

HermiteForm hnf(const SparseIntMatrix& m) {
  const auto rows = m.row_vectors();
  LatticeEchelon ech(m.cols(), true);
  std::vector<SparseVec> relations;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto res = ech.insert(rows[i], unit_vector(i));
    if (res.dependent) relations.push_back(std::move(res.relation));
  }
  ech.hermite_reduce();
  auto h_rows = ech.basis();
  auto u_rows = ech.basis_tags();
  for (auto& r : relations) u_rows.push_back(std::move(r));
  h_rows.resize(rows.size());
  HermiteForm out;
  out.h = SparseIntMatrix::from_columns(m.cols(), std::move(h_rows)).transpose();
  out.u = SparseIntMatrix::from_columns(m.rows(), std::move(u_rows)).transpose();
  return out;
}

SmithForm snf(const SparseIntMatrix& m) {
  auto ds = smith_dense(m.to_dense(), true, true, false);
  SmithForm out;
  const std::size_t k = std::min(m.rows(), m.cols());
  out.diagonal.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.diagonal.push_back(ds.d[i][i]);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (i != j && !ds.d[i][j].is_zero()) throw std::logic_error("snf: off-diagonal residue");
    }
  }
  check_divisor_chain(out.diagonal);
  out.u = SparseIntMatrix::from_dense(ds.u);
  out.v = SparseIntMatrix::from_dense(ds.v);
  if (m.rows() == 0 || m.cols() == 0) {
    out.u = SparseIntMatrix::identity(m.rows());
    out.v = SparseIntMatrix::identity(m.cols());
  }
  const auto witness = out.u * m * out.v;
  if (witness != SparseIntMatrix::diagonal(out.diagonal, m.rows(), m.cols())) {
    throw std::logic_error("snf: u*m*v does not reproduce the diagonal");
  }
  return out;
}

SmithInvariants smith_invariants(const SparseIntMatrix& m, const SmithOptions& opts) {
  SmithInvariants out;
  out.rows = m.rows();
  out.cols = m.cols();
  out.max_bits = m.max_bit_length();

  auto rows = m.row_vectors();
  std::vector<std::size_t> col_count(m.cols(), 0);
  std::vector<std::vector<std::uint32_t>> col_rows(m.cols());
  for (std::uint32_t i = 0; i < rows.size(); ++i) {
    for (const auto& e : rows[i]) {
      ++col_count[e.index];
      col_rows[e.index].push_back(i);
    }
  }
  // Active rows ordered by (length, index).
  std::set<std::pair<std::size_t, std::uint32_t>> by_length;
  for (std::uint32_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].empty()) by_length.emplace(rows[i].size(), i);
  }

  constexpr std::size_t kSearchRows = 8;
  SparseVec scratch;
  SparseVec updated;
  for (;;) {
    // Markowitz search over unit entries of the shortest rows.
    bool found = false;
    std::size_t best_cost = 0;
    std::uint32_t prow = 0;
    std::uint32_t pcol = 0;
    std::size_t examined = 0;
    for (const auto& [len, i] : by_length) {
      if (found && examined >= kSearchRows) break;
      bool has_unit = false;
      for (const auto& e : rows[i]) {
        if (!e.value.is_unit()) continue;
        has_unit = true;
        const std::size_t cost = (len - 1) * (col_count[e.index] - 1);
        if (!found || cost < best_cost || (cost == best_cost && (i < prow || (i == prow && e.index < pcol)))) {
          found = true;
          best_cost = cost;
          prow = i;
          pcol = e.index;
        }
      }
      if (has_unit) ++examined;
      if (found && best_cost == 0) break;
    }
    if (!found) break;

    const SparseVec pivot_row = std::move(rows[prow]);
    rows[prow].clear();
    by_length.erase({pivot_row.size(), prow});
    for (const auto& e : pivot_row) --col_count[e.index];
    const Int pivot = value_at(pivot_row, pcol);

    auto targets = std::move(col_rows[pcol]);
    col_rows[pcol].clear();
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    for (const auto i : targets) {
      if (i == prow) continue;
      const Int entry = value_at(rows[i], pcol);
      if (entry.is_zero()) continue;
      // pivot is +-1, so entry/pivot = entry*pivot.
      const Int q = entry * pivot;
      updated = rows[i];
      axmy(updated, q, pivot_row, scratch);
      // Maintain column counts and occurrence lists by merging patterns.
      auto a = rows[i].begin();
      auto b = updated.begin();
      while (a != rows[i].end() || b != updated.end()) {
        if (b == updated.end() || (a != rows[i].end() && a->index < b->index)) {
          --col_count[a->index];
          ++a;
        } else if (a == rows[i].end() || b->index < a->index) {
          ++col_count[b->index];
          col_rows[b->index].push_back(i);
          ++b;
        } else {
          ++a;
          ++b;
        }
      }
      by_length.erase({rows[i].size(), i});
      if (!updated.empty()) by_length.emplace(updated.size(), i);
      out.max_bits = std::max(out.max_bits, max_bit_length(updated));
      rows[i].swap(updated);
    }
    ++out.unit_pivots;
    out.nonzero.emplace_back(1);
  }

  // Dense finish on what remains.
  std::vector<std::uint32_t> live_rows;
  std::vector<std::int64_t> col_pos(m.cols(), -1);
  std::size_t live_cols = 0;
  for (std::uint32_t i = 0; i < rows.size(); ++i) {
    if (rows[i].empty()) continue;
    live_rows.push_back(i);
    for (const auto& e : rows[i]) {
      if (col_pos[e.index] < 0) col_pos[e.index] = static_cast<std::int64_t>(live_cols++);
    }
  }
  if (!live_rows.empty()) {
    if (live_rows.size() * live_cols > kDenseTailLimit) {
      throw std::length_error("smith_invariants: residual block " + std::to_string(live_rows.size()) +
                              "x" + std::to_string(live_cols) + " too large for dense finish");
    }
    DenseMatrix tail(live_rows.size(), std::vector<Int>(live_cols));
    for (std::size_t r = 0; r < live_rows.size(); ++r) {
      for (const auto& e : rows[live_rows[r]]) tail[r][static_cast<std::size_t>(col_pos[e.index])] = e.value;
    }
    out.dense_tail = std::max(live_rows.size(), live_cols);
    auto ds = smith_dense(std::move(tail), false, false, false);
    for (std::size_t i = 0; i < std::min(live_rows.size(), live_cols); ++i) {
      if (ds.d[i][i].is_zero()) break;
      out.max_bits = std::max(out.max_bits, ds.d[i][i].bit_length());
      out.nonzero.push_back(ds.d[i][i]);
    }
  }
  out.rank = out.nonzero.size();
  check_divisor_chain(out.nonzero);

  if (opts.verification_primes > 0) {
    for (const auto p :
         verification_primes(static_cast<std::size_t>(opts.verification_primes), kVerificationSeed)) {
      std::size_t expected = 0;
      for (const auto& d : out.nonzero) {
        if (d.mod_u64(p) != 0) ++expected;
      }
      if (rank_mod_p(m, p) != expected) {
        throw std::logic_error("smith_invariants: rank modulo " + std::to_string(p) +
                               " disagrees with the invariant factors");
      }
    }
  }
  return out;
}

std::vector<SparseVec> kernel_basis(const SparseIntMatrix& m) {
  PivotedEchelon ech(m.rows(), true);
  LatticeEchelon kernel(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    auto res = ech.insert(m.column(j), unit_vector(j));
    if (res.dependent) kernel.insert(std::move(res.relation));
  }
  kernel.hermite_reduce();
  return kernel.basis();
}

LinearSolver::LinearSolver(const SparseIntMatrix& m) : rows_(m.rows()), echelon_(m.rows(), true) {
  for (std::size_t j = 0; j < m.cols(); ++j) echelon_.insert(m.column(j), unit_vector(j));
}

std::optional<SparseVec> LinearSolver::solve(const SparseVec& b) const {
  if (!b.empty() && b.back().index >= rows_) {
    throw std::invalid_argument("LinearSolver::solve: right-hand side longer than the matrix");
  }
  return echelon_.solve(b);
}

std::optional<SparseVec> solve(const SparseIntMatrix& m, const SparseVec& b) {
  if (!b.empty() && b.back().index >= m.rows()) {
    throw std::invalid_argument("solve: right-hand side longer than the matrix");
  }
  return LinearSolver(m).solve(b);
}

abelian::AbelianInvariants cokernel_invariants(const SparseIntMatrix& m) {
  const auto inv = smith_invariants(m);
  std::vector<Int> orders = inv.nonzero;
  orders.resize(orders.size() + (m.rows() - inv.rank), Int{0});
  return abelian::normalize(orders);
}

Subquotient::Subquotient(std::size_t dim, const std::vector<SparseVec>& numerator_gens,
                         const std::vector<SparseVec>& denominator_gens)
    : dim_(dim), numerator_(dim), coords_(dim, true), denominator_(dim) {
  for (const auto& g : numerator_gens) numerator_.insert(g);
  numerator_.hermite_reduce();
  for (const auto& g : denominator_gens) {
    if (!numerator_.contains(g)) {
      throw std::invalid_argument("Subquotient: denominator is not contained in the numerator");
    }
    denominator_.insert(g);
  }
  denominator_.hermite_reduce();

  const auto z = numerator_.basis();
  for (std::size_t k = 0; k < z.size(); ++k) coords_.insert(z[k], unit_vector(k));

  const std::size_t r = z.size();
  const auto den = denominator_.basis();
  const std::size_t s = den.size();
  DenseMatrix c(r, std::vector<Int>(s));
  for (std::size_t j = 0; j < s; ++j) {
    const auto x = coords_.solve(den[j]);
    if (!x) throw std::logic_error("Subquotient: denominator basis vector has no coordinates");
    for (const auto& e : *x) c[e.index][j] = e.value;
  }
  auto ds = smith_dense(std::move(c), true, false, true);
  u_ = std::move(ds.u);
  std::vector<Int> all_orders;
  for (std::size_t i = 0; i < r; ++i) {
    const Int d = i < s ? ds.d[i][i] : Int{0};
    if (d.is_one()) continue;
    kept_.push_back(i);
    orders_.push_back(d);
    SparseVec w;
    SparseVec scratch;
    for (std::size_t k = 0; k < r; ++k) {
      if (!ds.u_inv[k][i].is_zero()) axpy(w, ds.u_inv[k][i], z[k], scratch);
    }
    generators_.push_back(denominator_.reduce(std::move(w)));
  }
  invariants_ = abelian::normalize(orders_);
}

std::vector<Int> Subquotient::classify(const SparseVec& x) const {
  if (!x.empty() && x.back().index >= dim_) throw std::invalid_argument("Subquotient::classify: bad dimension");
  const auto c = coords_.solve(x);
  if (!c) throw std::invalid_argument("Subquotient::classify: vector outside the numerator");
  std::vector<Int> out;
  out.reserve(kept_.size());
  for (std::size_t k = 0; k < kept_.size(); ++k) {
    Int y;
    for (const auto& e : *c) y.addmul(u_[kept_[k]][e.index], e.value);
    if (!orders_[k].is_zero()) y = floor_mod(y, orders_[k]);
    out.push_back(std::move(y));
  }
  return out;
}

SparseVec Subquotient::element(const std::vector<Int>& coords) const {
  if (coords.size() != generators_.size()) {
    throw std::invalid_argument("Subquotient::element: wrong number of coordinates");
  }
  SparseVec out;
  SparseVec scratch;
  for (std::size_t k = 0; k < coords.size(); ++k) {
    if (!coords[k].is_zero()) axpy(out, coords[k], generators_[k], scratch);
  }
  return out;
}

}  // namespace pcoh::exactlin
