#include "permcohom/cohomology/cohomology.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "permcohom/errors.hpp"
#include "permcohom/perm/named.hpp"

namespace pcoh::cohomology {

using exactlin::Entry;
using exactlin::Subquotient;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

DenseMatrix identity_matrix(std::size_t r) {
  DenseMatrix m(r, std::vector<Int>(r, Int(0)));
  for (std::size_t i = 0; i < r; ++i) m[i][i] = Int(1);
  return m;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  const auto r = a.size();
  DenseMatrix c(r, std::vector<Int>(r, Int(0)));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t k = 0; k < r; ++k) {
      if (a[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < r; ++j) c[i][j].addmul(a[i][k], b[k][j]);
    }
  }
  return c;
}

// Row i taken modulo o_i.
void reduce_rows(DenseMatrix& m, const std::vector<Int>& orders) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (orders[i].is_zero()) continue;
    for (auto& x : m[i]) x = floor_mod(x, orders[i]);
  }
}

SparseVec unit(std::size_t i) { return SparseVec{Entry{static_cast<std::uint32_t>(i), Int(1)}}; }

nlohmann::json int_json(const Int& v) {
  if (v.fits_int64()) return v.to_int64();
  return v.str();
}

nlohmann::json vector_json(const std::vector<Int>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& x : v) out.push_back(int_json(x));
  return out;
}

// Indices of the G-elements of H, or invalid_argument when H is not in G.
std::vector<std::uint32_t> subgroup_positions(const PermGroup& g, const PermGroup& h) {
  if (h.degree() > g.degree()) {
    (void)perm::subgroup_index(g, h);  // throws with a precise reason
  }
  std::vector<std::uint32_t> out;
  out.reserve(h.order());
  for (const auto& x : h.elements()) {
    const auto i = g.find(x.extended(g.degree()));
    if (!i) throw std::invalid_argument("subgroup: " + x.cycles() + " is not in G");
    out.push_back(static_cast<std::uint32_t>(*i));
  }
  return out;
}

}  // namespace

nlohmann::json invariants_json(const AbelianInvariants& a) {
  nlohmann::json t = nlohmann::json::array();
  for (const auto& d : a.torsion()) t.push_back(int_json(d));
  return {{"text", a.str()}, {"free_rank", a.free_rank()}, {"torsion", t}};
}

// ------------------------------------------------------------ CoeffModule

CoeffModule CoeffModule::from_action(const PermGroup& g, std::vector<Int> orders,
                                     std::vector<DenseMatrix> generator_actions, std::string label) {
  const auto r = orders.size();
  for (auto& o : orders) {
    if (o.sign() < 0) o = -o;
    if (o.is_one()) throw std::invalid_argument("CoeffModule: a coordinate of order 1 is not allowed");
  }
  if (generator_actions.size() != g.generators().size()) {
    throw std::invalid_argument("CoeffModule: one action matrix per group generator is required");
  }
  for (auto& a : generator_actions) {
    if (a.size() != r) throw std::invalid_argument("CoeffModule: action matrix has the wrong size");
    for (const auto& row : a) {
      if (row.size() != r) throw std::invalid_argument("CoeffModule: action matrix has the wrong size");
    }
    // Column k is the image of a generator of order o_k, so o_k * a[i][k]
    // must vanish in Z/o_i.
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t k = 0; k < r; ++k) {
        const Int v = orders[k] * a[i][k];
        const bool ok = orders[i].is_zero() ? v.is_zero() : floor_mod(v, orders[i]).is_zero();
        if (!ok) {
          throw std::invalid_argument("CoeffModule: action does not respect the relations of the module");
        }
      }
    }
    reduce_rows(a, orders);
  }

  CoeffModule m;
  m.group_ = g;
  m.orders_ = std::move(orders);
  m.label_ = std::move(label);
  const auto id = [&] {
    auto e = identity_matrix(r);
    reduce_rows(e, m.orders_);
    return e;
  }();
  m.trivial_ = std::all_of(generator_actions.begin(), generator_actions.end(),
                           [&](const DenseMatrix& a) { return a == id; });
  if (m.trivial_) {
    m.actions_ = {id};
    return m;
  }

  // rho on all elements by breadth-first search from the identity, then the
  // homomorphism identity rho(s x) = rho(s) rho(x) on every pair.
  const auto n = g.order();
  const auto& gens = g.generator_indices();
  std::vector<DenseMatrix> act(n);
  std::vector<bool> seen(n, false);
  act[0] = id;
  seen[0] = true;
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    const auto x = queue.front();
    queue.pop_front();
    for (std::size_t s = 0; s < gens.size(); ++s) {
      const auto y = g.mul(gens[s], x);
      if (seen[y]) continue;
      seen[y] = true;
      act[y] = multiply(generator_actions[s], act[x]);
      reduce_rows(act[y], m.orders_);
      queue.push_back(y);
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t s = 0; s < gens.size(); ++s) {
      auto p = multiply(generator_actions[s], act[x]);
      reduce_rows(p, m.orders_);
      if (p != act[g.mul(gens[s], x)]) {
        throw std::invalid_argument("CoeffModule: the action matrices do not define a group action");
      }
    }
  }
  m.actions_ = std::move(act);
  return m;
}

CoeffModule CoeffModule::trivial(const PermGroup& g, std::vector<Int> orders, std::string label) {
  const auto r = orders.size();
  std::vector<DenseMatrix> acts(g.generators().size(), identity_matrix(r));
  return from_action(g, std::move(orders), std::move(acts), std::move(label));
}

CoeffModule CoeffModule::mod(const PermGroup& g, long m) {
  if (m < 2) throw std::invalid_argument("CoeffModule::mod: modulus must be at least 2");
  return trivial(g, {Int(m)}, "Z/" + std::to_string(m));
}

CoeffModule CoeffModule::trivial_from(const PermGroup& g, const AbelianInvariants& a) {
  std::vector<Int> orders(a.free_rank(), Int(0));
  orders.insert(orders.end(), a.torsion().begin(), a.torsion().end());
  return trivial(g, std::move(orders), a.str());
}

CoeffModule CoeffModule::restrict_to(const PermGroup& h) const {
  const auto pos = subgroup_positions(group_, h);
  CoeffModule m;
  m.group_ = h;
  m.orders_ = orders_;
  m.trivial_ = trivial_;
  m.label_ = label_;
  if (trivial_) {
    m.actions_ = actions_;
  } else {
    m.actions_.reserve(pos.size());
    for (const auto p : pos) m.actions_.push_back(actions_[p]);
  }
  return m;
}

const DenseMatrix& CoeffModule::action(std::size_t g) const { return trivial_ ? actions_.at(0) : actions_.at(g); }

SparseVec CoeffModule::reduce(const SparseVec& cochain) const {
  const auto r = orders_.size();
  SparseVec out;
  out.reserve(cochain.size());
  for (const auto& e : cochain) {
    const auto& o = orders_[e.index % r];
    Int v = o.is_zero() ? e.value : floor_mod(e.value, o);
    if (!v.is_zero()) out.push_back(Entry{e.index, std::move(v)});
  }
  return out;
}

CoeffModule coinduced_module(const AbelianInvariants& a, std::size_t n) {
  if (n < 2) throw std::invalid_argument("coinduced_module: n must be at least 2");
  const auto g = perm::symmetric_group(n);
  std::vector<Int> factor(a.free_rank(), Int(0));
  factor.insert(factor.end(), a.torsion().begin(), a.torsion().end());
  const auto f = factor.size();
  std::vector<Int> orders;
  for (std::size_t k = 0; k < n; ++k) orders.insert(orders.end(), factor.begin(), factor.end());
  // sigma sends copy k to copy sigma(k).
  std::vector<DenseMatrix> acts;
  for (const auto& s : g.generators()) {
    DenseMatrix m(n * f, std::vector<Int>(n * f, Int(0)));
    for (std::uint32_t k = 0; k < n; ++k) {
      for (std::size_t c = 0; c < f; ++c) m[s(k) * f + c][k * f + c] = Int(1);
    }
    acts.push_back(std::move(m));
  }
  return CoeffModule::from_action(g, std::move(orders), std::move(acts),
                                  "(" + a.str() + ")^" + std::to_string(n));
}

// ------------------------------------------------------ cochain complexes

SparseIntMatrix coboundary_matrix(const FreeResolution& r, const CoeffModule& m, std::size_t n) {
  if (!(m.group() == r.group())) throw std::invalid_argument("coboundary_matrix: module is over a different group");
  if (n + 1 > r.length()) throw std::invalid_argument("coboundary_matrix: resolution too short");
  const auto ng = r.group().order();
  const auto rk = m.rank();
  const auto cols = r.rank(n) * rk;
  const auto rows = r.rank(n + 1) * rk;
  const auto& orders = m.orders();
  // Block (j, i) of the matrix is the sum of c * rho(h) over the terms
  // c * h * e_i of d_{n+1}(e_j).
  std::vector<SparseVec> row_vecs(rows);
  std::vector<Int> dense(cols);
  std::vector<std::uint32_t> touched;
  for (std::size_t j = 0; j < r.rank(n + 1); ++j) {
    for (std::size_t a = 0; a < rk; ++a) {
      touched.clear();
      for (const auto& e : r.boundary(n + 1, j)) {
        const auto i = e.index / ng;
        const auto h = e.index % ng;
        const auto& rho = m.action(h);
        for (std::size_t b = 0; b < rk; ++b) {
          if (rho[a][b].is_zero()) continue;
          const auto c = static_cast<std::uint32_t>(i * rk + b);
          if (dense[c].is_zero()) touched.push_back(c);
          dense[c].addmul(e.value, rho[a][b]);
        }
      }
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
      SparseVec row;
      for (const auto c : touched) {
        Int v = orders[a].is_zero() ? dense[c] : floor_mod(dense[c], orders[a]);
        if (!v.is_zero()) row.push_back(Entry{c, std::move(v)});
        dense[c] = Int(0);
      }
      row_vecs[j * rk + a] = std::move(row);
    }
  }
  return SparseIntMatrix::from_columns(cols, std::move(row_vecs)).transpose();
}

namespace {

// o_k e_{j,k} for the finite coordinates of an a-fold cochain group.
std::vector<SparseVec> order_lattice(const CoeffModule& m, std::size_t a) {
  std::vector<SparseVec> out;
  const auto rk = m.rank();
  for (std::size_t j = 0; j < a; ++j) {
    for (std::size_t k = 0; k < rk; ++k) {
      if (m.orders()[k].is_zero()) continue;
      out.push_back(SparseVec{Entry{static_cast<std::uint32_t>(j * rk + k), m.orders()[k]}});
    }
  }
  return out;
}

// {x : delta x lies in the order lattice of the next degree}.
std::vector<SparseVec> cocycle_lattice(const SparseIntMatrix& delta, const CoeffModule& m, std::size_t a_next) {
  auto extra = order_lattice(m, a_next);
  if (extra.empty()) return exactlin::kernel_basis(delta);
  auto cols = delta.columns();
  const auto width = cols.size();
  for (auto& e : extra) cols.push_back(std::move(e));
  const auto stacked = SparseIntMatrix::from_columns(delta.rows(), std::move(cols));
  std::vector<SparseVec> out;
  for (const auto& v : exactlin::kernel_basis(stacked)) {
    SparseVec p;
    for (const auto& e : v) {
      if (e.index < width) p.push_back(e);
    }
    if (!p.empty()) out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

CohomologyGroup cohomology_group(const FreeResolution& r, const CoeffModule& m, std::size_t n) {
  const auto t0 = std::chrono::steady_clock::now();
  if (n + 1 > r.length()) {
    throw std::invalid_argument("cohomology_group: degree " + std::to_string(n) + " needs a resolution of length " +
                                std::to_string(n + 1));
  }
  const auto dim = r.rank(n) * m.rank();
  const auto delta = coboundary_matrix(r, m, n);
  auto numerator = cocycle_lattice(delta, m, r.rank(n + 1));
  auto denominator = order_lattice(m, r.rank(n));
  if (n > 0) {
    const auto prev = coboundary_matrix(r, m, n - 1);
    for (const auto& c : prev.columns()) {
      if (!c.empty()) denominator.push_back(c);
    }
  }
  auto sq = std::make_shared<Subquotient>(dim, numerator, denominator);

  CohomologyGroup h;
  h.group = r.group();
  h.degree = n;
  h.coefficients = m.label().empty() ? m.base().str() : m.label();
  h.invariants = sq->invariants();
  h.representatives = sq->generators();
  h.orders = sq->orders();
  h.cochain_dim = dim;
  h.resolution_hash = r.content_hash();
  h.module_orders = m.orders();
  h.presentation = std::move(sq);
  for (std::size_t k = 0; k < h.representatives.size(); ++k) {
    if (!h.is_cocycle(h.representatives[k])) throw VerificationFailure("cohomology_group: representative is not a cocycle");
  }
  h.seconds = seconds_since(t0);
  return h;
}

std::vector<Int> CohomologyGroup::classify(const SparseVec& cocycle) const {
  try {
    return presentation->classify(cocycle);
  } catch (const std::invalid_argument&) {
    throw VerificationFailure("classify: the cochain is not a cocycle of H^" + std::to_string(degree));
  }
}

nlohmann::json CohomologyGroup::to_json(bool with_representatives) const {
  nlohmann::json j = {
      {"group", group.describe()},
      {"group_order", group.order()},
      {"degree", degree},
      {"coefficients", coefficients},
      {"invariants", invariants_json(invariants)},
      {"timings", {{"cohomology_seconds", seconds}}},
      {"resolution_hash", resolution_hash},
  };
  if (with_representatives) {
    nlohmann::json reps = nlohmann::json::array();
    for (std::size_t k = 0; k < representatives.size(); ++k) {
      nlohmann::json entries = nlohmann::json::array();
      for (const auto& e : representatives[k]) entries.push_back({e.index, int_json(e.value)});
      reps.push_back({{"order", int_json(orders[k])}, {"entries", entries}});
    }
    j["representatives"] = reps;
  }
  return j;
}

AbelianInvariants homology_group(const FreeResolution& r, std::size_t n) {
  if (n + 1 > r.length()) throw std::invalid_argument("homology_group: resolution too short");
  const auto dim = r.rank(n);
  std::vector<SparseVec> cycles;
  if (n == 0) {
    for (std::size_t i = 0; i < dim; ++i) cycles.push_back(unit(i));
  } else {
    cycles = exactlin::kernel_basis(r.augmented_matrix(n));
  }
  std::vector<SparseVec> boundaries;
  const auto next = r.augmented_matrix(n + 1);
  for (const auto& c : next.columns()) {
    if (!c.empty()) boundaries.push_back(c);
  }
  return Subquotient(dim, cycles, boundaries).invariants();
}

CohomologyGroup cx_cohomology(const FreeResolution& r, std::size_t n) {
  auto h = cohomology_group(r, CoeffModule::integers(r.group()), n + 1);
  h.degree = n;
  h.coefficients = "C^x";
  return h;
}

// ---------------------------------------------------------- induced maps

CohomologyMap induced_map(const CohomologyGroup& source, const CohomologyGroup& target,
                          const std::function<SparseVec(const SparseVec&)>& cochain_map, std::string backend) {
  CohomologyMap f;
  f.source = source;
  f.target = target;
  f.backend = std::move(backend);
  const auto s = source.representatives.size();
  const auto t = target.representatives.size();
  for (const auto& x : source.representatives) f.matrix.push_back(target.classify(cochain_map(x)));

  // Target coordinates live in Z^t modulo the diagonal of its orders.
  std::vector<SparseVec> relations;
  for (std::size_t i = 0; i < t; ++i) {
    if (!target.orders[i].is_zero()) relations.push_back(SparseVec{Entry{static_cast<std::uint32_t>(i), target.orders[i]}});
  }
  std::vector<SparseVec> span = relations;
  std::vector<SparseVec> cols;
  for (const auto& col : f.matrix) {
    cols.push_back(exactlin::from_dense(col));
    if (!cols.back().empty()) span.push_back(cols.back());
  }
  const Subquotient image(t, span, relations);
  f.image = image.invariants();
  f.surjective = true;
  for (std::size_t i = 0; i < t && f.surjective; ++i) f.surjective = image.in_numerator(unit(i));

  // Kernel lattice {x : M x in relations}, projected to the source
  // coordinates, must lie in the source relation lattice.
  auto stacked = cols;
  for (const auto& rel : relations) stacked.push_back(rel);
  f.injective = true;
  if (s > 0) {
    const auto k = exactlin::kernel_basis(SparseIntMatrix::from_columns(t, std::move(stacked)));
    for (const auto& v : k) {
      for (const auto& e : v) {
        if (e.index >= s) continue;
        const auto& o = source.orders[e.index];
        if (o.is_zero() ? !e.value.is_zero() : !floor_mod(e.value, o).is_zero()) f.injective = false;
      }
    }
  }
  return f;
}

nlohmann::json CohomologyMap::to_json() const {
  nlohmann::json m = nlohmann::json::array();
  for (const auto& col : matrix) m.push_back(vector_json(col));
  return {
      {"source", source.to_json()},
      {"target", target.to_json()},
      {"matrix", m},
      {"image", invariants_json(image)},
      {"injective", injective},
      {"surjective", surjective},
      {"backend", backend},
  };
}

// ------------------------------------------------------ ResolutionSource

ResolutionSource::ResolutionSource(std::optional<resolution::ResolutionCache> cache, resolution::BuildOptions opts)
    : cache_(std::move(cache)), opts_(opts) {}

const FreeResolution& ResolutionSource::get(const PermGroup& g, std::size_t length) {
  const auto key = g.fingerprint() + ":" + std::to_string(length);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  // A longer memoised resolution of the same group serves by truncation.
  for (const auto& [k, r] : memo_) {
    if (r.group() == g && r.length() >= length) return memo_.emplace(key, r.truncated(length)).first->second;
  }
  FreeResolution r;
  if (cache_) {
    bool hit = false;
    r = cache_->get_or_build(g, length, opts_, &hit);
    if (hit) ++hits_;
  } else {
    r = resolution::build_resolution(g, length, opts_);
    resolution::require_valid(r);
  }
  return memo_.emplace(key, std::move(r)).first->second;
}

const char* backend_name(Backend b) { return b == Backend::ambient ? "ambient" : "chainmap"; }

// ------------------------------------------------------------ restriction

namespace {

// psi_(i,t) = rho(t) phi_i on the restricted complex.
SparseVec restrict_cochain(const SparseVec& phi, const CoeffModule& m, const std::vector<std::uint32_t>& transversal) {
  const auto rk = m.rank();
  const auto k = transversal.size();
  std::vector<Entry> terms;
  std::size_t pos = 0;
  while (pos < phi.size()) {
    const auto i = phi[pos].index / rk;
    std::vector<Int> v(rk);
    for (; pos < phi.size() && phi[pos].index / rk == i; ++pos) v[phi[pos].index % rk] = phi[pos].value;
    for (std::size_t t = 0; t < k; ++t) {
      const auto& rho = m.action(transversal[t]);
      for (std::size_t a = 0; a < rk; ++a) {
        Int y;
        for (std::size_t b = 0; b < rk; ++b) {
          if (!v[b].is_zero()) y.addmul(rho[a][b], v[b]);
        }
        if (!y.is_zero()) terms.push_back(Entry{static_cast<std::uint32_t>((i * k + t) * rk + a), std::move(y)});
      }
    }
  }
  return m.reduce(exactlin::make_sparse(std::move(terms)));
}

// phi_i = sum_t rho(t^-1) psi_(i,t).
SparseVec corestrict_cochain(const SparseVec& psi, const CoeffModule& m, const std::vector<std::uint32_t>& transversal) {
  const auto rk = m.rank();
  const auto k = transversal.size();
  const auto& g = m.group();
  std::vector<Entry> terms;
  for (const auto& e : psi) {
    const auto gen = e.index / rk;
    const auto b = e.index % rk;
    const auto i = gen / k;
    const auto t = gen % k;
    const auto& rho = m.action(g.inv(transversal[t]));
    for (std::size_t a = 0; a < rk; ++a) {
      if (!rho[a][b].is_zero()) terms.push_back(Entry{static_cast<std::uint32_t>(i * rk + a), rho[a][b] * e.value});
    }
  }
  return m.reduce(exactlin::make_sparse(std::move(terms)));
}

// psi_j = sum over c * x * e_k in tau_n(e_j) of c * rho(x) phi_k.
SparseVec pull_back(const SparseVec& phi, const CoeffModule& m, const std::vector<SparseVec>& tau_n, std::size_t ng) {
  const auto rk = m.rank();
  std::vector<Entry> terms;
  for (std::size_t j = 0; j < tau_n.size(); ++j) {
    std::vector<Int> out(rk);
    for (const auto& e : tau_n[j]) {
      const auto k = e.index / ng;
      const auto x = e.index % ng;
      const auto& rho = m.action(x);
      // phi_k occupies coordinates k*rk .. k*rk + rk - 1.
      auto it = std::lower_bound(phi.begin(), phi.end(), static_cast<std::uint32_t>(k * rk),
                                 [](const Entry& a, std::uint32_t v) { return a.index < v; });
      for (; it != phi.end() && it->index < (k + 1) * rk; ++it) {
        const auto b = it->index % rk;
        for (std::size_t a = 0; a < rk; ++a) {
          if (!rho[a][b].is_zero()) out[a].addmul(e.value, rho[a][b] * it->value);
        }
      }
    }
    for (std::size_t a = 0; a < rk; ++a) {
      if (!out[a].is_zero()) terms.push_back(Entry{static_cast<std::uint32_t>(j * rk + a), out[a]});
    }
  }
  return m.reduce(exactlin::make_sparse(std::move(terms)));
}

}  // namespace

CohomologyMap restriction_map(ResolutionSource& src, const PermGroup& g, const PermGroup& h, const CoeffModule& m,
                              std::size_t n, Backend backend) {
  if (!(m.group() == g)) throw std::invalid_argument("restriction_map: module is over a different group");
  (void)perm::subgroup_index(g, h);
  const auto mh = m.restrict_to(h);
  const auto& rg = src.get(g, n + 1);
  const auto source = cohomology_group(rg, m, n);
  if (backend == Backend::ambient) {
    const auto rr = resolution::restrict_scalars(rg, h);
    const auto target = cohomology_group(rr.complex, mh, n);
    return induced_map(source, target,
                       [&](const SparseVec& phi) { return restrict_cochain(phi, m, rr.transversal); },
                       backend_name(backend));
  }
  const auto& rh = src.get(h, n + 1);
  const auto target = cohomology_group(rh, mh, n);
  const auto tau = resolution::lift_chain_map(perm::GroupHom::inclusion(h, g), rh, rg, n, src.options());
  return induced_map(source, target,
                     [&](const SparseVec& phi) { return pull_back(phi, m, tau.maps.at(n), g.order()); },
                     backend_name(backend));
}

CohomologyMap restriction_both(ResolutionSource& src, const PermGroup& g, const PermGroup& h, const CoeffModule& m,
                               std::size_t n) {
  auto a = restriction_map(src, g, h, m, n, Backend::ambient);
  const auto c = restriction_map(src, g, h, m, n, Backend::chainmap);
  if (a.target.invariants != c.target.invariants) {
    throw VerificationFailure("restriction: backends disagree on H^" + std::to_string(n) + "(H): " +
                              a.target.invariants.str() + " vs " + c.target.invariants.str());
  }
  if (a.image != c.image || a.injective != c.injective || a.surjective != c.surjective) {
    throw VerificationFailure("restriction: backends disagree on the image (" + a.image.str() + " vs " +
                              c.image.str() + ") or on injectivity/surjectivity");
  }
  a.backend = "both";
  return a;
}

TransferResult transfer_map(ResolutionSource& src, const PermGroup& g, const PermGroup& h, const CoeffModule& m,
                            std::size_t n) {
  if (!(m.group() == g)) throw std::invalid_argument("transfer_map: module is over a different group");
  TransferResult out;
  out.index = perm::subgroup_index(g, h).index;
  const auto& rg = src.get(g, n + 1);
  const auto rr = resolution::restrict_scalars(rg, h);
  const auto hg = cohomology_group(rg, m, n);
  const auto hh = cohomology_group(rr.complex, m.restrict_to(h), n);
  out.restriction = induced_map(hg, hh, [&](const SparseVec& phi) { return restrict_cochain(phi, m, rr.transversal); },
                                "ambient");
  out.transfer = induced_map(hh, hg, [&](const SparseVec& psi) { return corestrict_cochain(psi, m, rr.transversal); },
                             "ambient");

  // cor o res through coordinates: res lands in H^n(H) coordinates, which
  // cor sends back along its own matrix.
  const auto s = hg.representatives.size();
  out.composite_is_index = true;
  for (std::size_t j = 0; j < s; ++j) {
    std::vector<Int> y(s);
    for (std::size_t k = 0; k < out.restriction.matrix[j].size(); ++k) {
      const auto& c = out.restriction.matrix[j][k];
      if (c.is_zero()) continue;
      for (std::size_t i = 0; i < s; ++i) y[i].addmul(c, out.transfer.matrix[k][i]);
    }
    for (std::size_t i = 0; i < s; ++i) {
      if (!hg.orders[i].is_zero()) y[i] = floor_mod(y[i], hg.orders[i]);
      Int expect = i == j ? Int(static_cast<long>(out.index)) : Int(0);
      if (!hg.orders[i].is_zero()) expect = floor_mod(expect, hg.orders[i]);
      if (y[i] != expect) out.composite_is_index = false;
    }
    out.composite.push_back(std::move(y));
  }
  if (!out.composite_is_index) {
    throw VerificationFailure("transfer: cor o res differs from multiplication by the index in degree " +
                              std::to_string(n));
  }
  return out;
}

// -------------------------------------------------------------- Bockstein

namespace {

// (delta x) / 2 for an integer lift x of a mod-2 cocycle.
SparseVec half_coboundary(const SparseIntMatrix& delta_z, const SparseVec& x) {
  auto y = delta_z.apply(x);
  for (auto& e : y) {
    if (!floor_mod(e.value, Int(2)).is_zero()) {
      throw VerificationFailure("bockstein: coboundary of a lifted mod-2 cocycle is not divisible by 2");
    }
    e.value = divexact(e.value, Int(2));
  }
  return y;
}

}  // namespace

BocksteinResult bockstein(const FreeResolution& r, std::size_t n) {
  if (n + 2 > r.length()) throw std::invalid_argument("bockstein: resolution too short");
  const auto& g = r.group();
  const auto f2 = CoeffModule::mod(g, 2);
  const auto z = CoeffModule::integers(g);
  const auto z4 = CoeffModule::mod(g, 4);
  BocksteinResult b;
  b.mod2 = cohomology_group(r, f2, n);
  b.integral = cohomology_group(r, z, n + 1);
  b.mod2_next = cohomology_group(r, f2, n + 1);
  const auto delta_z = coboundary_matrix(r, z, n);
  const auto delta_4 = coboundary_matrix(r, z4, n);

  b.beta = induced_map(b.mod2, b.integral, [&](const SparseVec& x) { return half_coboundary(delta_z, x); }, "integral");
  b.reduction = induced_map(b.integral, b.mod2_next,
                            [&](const SparseVec& x) { return exactlin::reduce_mod(x, Int(2)); }, "reduction");
  // Z/4 route: the lift is read in Z/4, its coboundary taken there, then
  // halved into Z/2.
  b.sq1 = induced_map(b.mod2, b.mod2_next,
                      [&](const SparseVec& x) {
                        auto y = exactlin::reduce_mod(delta_4.apply(exactlin::reduce_mod(x, Int(4))), Int(4));
                        for (auto& e : y) {
                          if (e.value != Int(2)) {
                            throw VerificationFailure("bockstein: mod-4 coboundary of a mod-2 cocycle is not even");
                          }
                          e.value = Int(1);
                        }
                        return y;
                      },
                      "sq1");

  b.sq1_is_pi_beta = true;
  const auto t = b.mod2_next.representatives.size();
  for (std::size_t j = 0; j < b.beta.matrix.size(); ++j) {
    std::vector<Int> y(t);
    for (std::size_t k = 0; k < b.beta.matrix[j].size(); ++k) {
      for (std::size_t i = 0; i < t; ++i) y[i].addmul(b.beta.matrix[j][k], b.reduction.matrix[k][i]);
    }
    for (std::size_t i = 0; i < t; ++i) {
      if (floor_mod(y[i], Int(2)) != b.sq1.matrix[j][i]) b.sq1_is_pi_beta = false;
    }
  }
  return b;
}

NaturalityResult bockstein_naturality(ResolutionSource& src, const PermGroup& g, const PermGroup& h, std::size_t n) {
  (void)perm::subgroup_index(g, h);
  const auto& rg = src.get(g, n + 2);
  const auto rr = resolution::restrict_scalars(rg, h);
  const auto& rh = rr.complex;
  const auto z_g = CoeffModule::integers(g);
  const auto z_h = CoeffModule::integers(h);
  const auto f2_g = CoeffModule::mod(g, 2);
  const auto f2_h = CoeffModule::mod(h, 2);

  const auto mod2_g = cohomology_group(rg, f2_g, n);
  const auto int_g = cohomology_group(rg, z_g, n + 1);
  const auto mod2_h = cohomology_group(rh, f2_h, n);
  const auto int_h = cohomology_group(rh, z_h, n + 1);
  const auto dz_g = coboundary_matrix(rg, z_g, n);
  const auto dz_h = coboundary_matrix(rh, z_h, n);

  auto res_z = [&](const SparseVec& x) { return restrict_cochain(x, z_g, rr.transversal); };
  auto res_2 = [&](const SparseVec& x) { return restrict_cochain(x, f2_g, rr.transversal); };
  const auto beta_g = induced_map(mod2_g, int_g, [&](const SparseVec& x) { return half_coboundary(dz_g, x); });
  const auto beta_h = induced_map(mod2_h, int_h, [&](const SparseVec& x) { return half_coboundary(dz_h, x); });
  const auto res_int = induced_map(int_g, int_h, res_z);
  const auto res_mod2 = induced_map(mod2_g, mod2_h, res_2);

  NaturalityResult out;
  out.commutes = true;
  const auto t = int_h.representatives.size();
  auto compose = [&](const std::vector<Int>& first, const CohomologyMap& second) {
    std::vector<Int> y(t);
    for (std::size_t k = 0; k < first.size(); ++k) {
      for (std::size_t i = 0; i < t; ++i) y[i].addmul(first[k], second.matrix[k][i]);
    }
    for (std::size_t i = 0; i < t; ++i) {
      if (!int_h.orders[i].is_zero()) y[i] = floor_mod(y[i], int_h.orders[i]);
    }
    return y;
  };
  for (std::size_t j = 0; j < mod2_g.representatives.size(); ++j) {
    out.res_beta.push_back(compose(beta_g.matrix[j], res_int));
    out.beta_res.push_back(compose(res_mod2.matrix[j], beta_h));
    if (out.res_beta.back() != out.beta_res.back()) out.commutes = false;
  }
  return out;
}

// --------------------------------------------------------------- Shapiro

nlohmann::json ShapiroReport::to_json() const {
  return {
      {"n", n},
      {"coefficients", coefficients.str()},
      {"permutation_side", invariants_json(permutation_side)},
      {"stabiliser_side", invariants_json(stabiliser_side)},
      {"uct_prediction", invariants_json(uct_prediction)},
      {"shapiro_holds", shapiro_holds},
      {"uct_holds", uct_holds},
  };
}

ShapiroReport shapiro_check(ResolutionSource& src, std::size_t n, const AbelianInvariants& a) {
  if (n < 3) throw std::invalid_argument("shapiro_check: n must be at least 3");
  ShapiroReport rep;
  rep.n = n;
  rep.coefficients = a;
  const auto mod = coinduced_module(a, n);
  const auto& rn = src.get(mod.group(), 3);
  rep.permutation_side = cohomology_group(rn, mod, 2).invariants;

  const auto s = perm::symmetric_group(n - 1);
  const auto& rs = src.get(s, 3);
  rep.stabiliser_side = cohomology_group(rs, CoeffModule::trivial_from(s, a), 2).invariants;
  rep.uct_prediction = abelian::uct_h2(homology_group(rs, 1), homology_group(rs, 2), a);
  rep.shapiro_holds = rep.permutation_side == rep.stabiliser_side;
  rep.uct_holds = rep.stabiliser_side == rep.uct_prediction;
  return rep;
}

std::vector<Mod2Consistency> mod2_uct_check(const FreeResolution& r) {
  std::vector<Mod2Consistency> out;
  if (r.length() < 2) return out;
  const auto f2 = CoeffModule::mod(r.group(), 2);
  const auto z = CoeffModule::integers(r.group());
  std::vector<AbelianInvariants> hz;
  for (std::size_t n = 0; n + 1 <= r.length(); ++n) hz.push_back(cohomology_group(r, z, n).invariants);
  for (std::size_t n = 0; n + 2 <= r.length(); ++n) {
    Mod2Consistency c;
    c.degree = n;
    c.dim_f2 = cohomology_group(r, f2, n).invariants.dim_mod2();
    c.predicted = hz[n].dim_mod2() + abelian::torsion_subgroup(hz[n + 1], Int(2)).dim_mod2();
    c.holds = c.dim_f2 == c.predicted;
    out.push_back(c);
  }
  return out;
}

}  // namespace pcoh::cohomology
