#include "permcohom/resolution/resolution.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <queue>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

#include "permcohom/digest.hpp"
#include "permcohom/errors.hpp"
#include "permcohom/exactlin/echelon.hpp"
#include "permcohom/exactlin/modular.hpp"
#include "permcohom/exactlin/normal_form.hpp"

namespace pcoh::resolution {

using exactlin::Entry;
using exactlin::PivotedEchelon;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void check_deadline(const BuildOptions& opts, const char* what) {
  if (opts.deadline && std::chrono::steady_clock::now() > *opts.deadline) {
    throw ResourceLimit(std::string(what) + ": time budget exhausted");
  }
}

SparseVec unit(std::size_t i) { return SparseVec{Entry{static_cast<std::uint32_t>(i), Int(1)}}; }

// Translates of x by every group element, in element order.
SparseVec translate_in(const PermGroup& g, std::size_t h, const SparseVec& x) {
  const auto n = g.order();
  SparseVec out;
  out.reserve(x.size());
  for (const auto& e : x) {
    const auto i = e.index / n;
    const auto y = e.index % n;
    out.push_back(Entry{static_cast<std::uint32_t>(i * n + g.mul(h, y)), e.value});
  }
  std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) { return a.index < b.index; });
  return out;
}

// Kernel vectors are offered sparsest first; ties keep production order.
void order_candidates(std::vector<SparseVec>& vs) {
  std::stable_sort(vs.begin(), vs.end(), [](const SparseVec& a, const SparseVec& b) { return a.size() < b.size(); });
}

// Z-basis of the augmentation kernel of (ZG)^1: e_g - e_1.
std::vector<SparseVec> augmentation_kernel(std::size_t order) {
  std::vector<SparseVec> vs;
  for (std::uint32_t g = 1; g < order; ++g) vs.push_back(SparseVec{Entry{0, Int(-1)}, Entry{g, Int(1)}});
  return vs;
}

}  // namespace

// ---------------------------------------------------------------- group ring

GroupRingElement::GroupRingElement(PermGroup g, SparseVec coeffs) : group_(std::move(g)), coeffs_(std::move(coeffs)) {
  for (const auto& e : coeffs_) {
    if (e.index >= group_.order()) throw std::invalid_argument("GroupRingElement: element index out of range");
  }
}

GroupRingElement GroupRingElement::one(const PermGroup& g) { return basis(g, 0); }

GroupRingElement GroupRingElement::basis(const PermGroup& g, std::size_t element) {
  return GroupRingElement(g, unit(element));
}

Int GroupRingElement::augmentation() const {
  Int s(0);
  for (const auto& e : coeffs_) s += e.value;
  return s;
}

namespace {
void same_ring(const GroupRingElement& a, const GroupRingElement& b) {
  if (!(a.group() == b.group())) throw std::invalid_argument("GroupRingElement: different groups");
}
}  // namespace

GroupRingElement operator+(const GroupRingElement& a, const GroupRingElement& b) {
  same_ring(a, b);
  SparseVec out = a.coeffs_;
  SparseVec scratch;
  exactlin::axpy(out, Int(1), b.coeffs_, scratch);
  return GroupRingElement(a.group_, std::move(out));
}

GroupRingElement operator-(const GroupRingElement& a, const GroupRingElement& b) {
  same_ring(a, b);
  SparseVec out = a.coeffs_;
  SparseVec scratch;
  exactlin::axmy(out, Int(1), b.coeffs_, scratch);
  return GroupRingElement(a.group_, std::move(out));
}

GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b) {
  same_ring(a, b);
  std::vector<Entry> terms;
  for (const auto& x : a.coeffs_) {
    for (const auto& y : b.coeffs_) terms.push_back(Entry{a.group_.mul(x.index, y.index), x.value * y.value});
  }
  return GroupRingElement(a.group_, exactlin::make_sparse(std::move(terms)));
}

// ----------------------------------------------------------- free resolution

FreeResolution::FreeResolution(PermGroup group, std::vector<std::size_t> ranks,
                               std::vector<std::vector<SparseVec>> boundaries)
    : group_(std::move(group)), ranks_(std::move(ranks)), boundaries_(std::move(boundaries)) {
  if (ranks_.empty() || boundaries_.size() != ranks_.size()) {
    throw std::invalid_argument("FreeResolution: need one boundary list per degree");
  }
  const auto n = group_.order();
  for (std::size_t d = 1; d < ranks_.size(); ++d) {
    if (boundaries_[d].size() != ranks_[d]) throw std::invalid_argument("FreeResolution: rank mismatch");
    for (const auto& v : boundaries_[d]) {
      if (!v.empty() && v.back().index >= ranks_[d - 1] * n) {
        throw std::invalid_argument("FreeResolution: boundary coordinate out of range");
      }
    }
  }
}

GroupRingElement FreeResolution::entry(std::size_t n, std::size_t i, std::size_t j) const {
  const auto order = group_.order();
  SparseVec c;
  for (const auto& e : boundary(n, j)) {
    if (e.index / order == i) c.push_back(Entry{static_cast<std::uint32_t>(e.index % order), e.value});
  }
  return GroupRingElement(group_, std::move(c));
}

SparseVec FreeResolution::translate(std::size_t g, const SparseVec& x) const { return translate_in(group_, g, x); }

SparseVec FreeResolution::apply_boundary(std::size_t n, const SparseVec& x) const {
  if (n == 0 || n > length()) throw std::out_of_range("apply_boundary: degree out of range");
  const auto order = group_.order();
  std::vector<Entry> terms;
  for (const auto& e : x) {
    const auto i = e.index / order;
    const auto h = e.index % order;
    for (const auto& t : boundary(n, i)) {
      const auto k = t.index / order;
      const auto y = t.index % order;
      terms.push_back(Entry{static_cast<std::uint32_t>(k * order + group_.mul(h, y)), e.value * t.value});
    }
  }
  return exactlin::make_sparse(std::move(terms));
}

SparseIntMatrix FreeResolution::z_matrix(std::size_t n) const {
  std::vector<SparseVec> cols;
  cols.reserve(z_dim(n));
  for (std::size_t j = 0; j < rank(n); ++j) {
    for (std::size_t g = 0; g < group_.order(); ++g) cols.push_back(translate(g, boundary(n, j)));
  }
  return SparseIntMatrix::from_columns(z_dim(n - 1), std::move(cols));
}

SparseIntMatrix FreeResolution::augmented_matrix(std::size_t n) const {
  const auto order = group_.order();
  std::vector<SparseVec> cols;
  for (std::size_t j = 0; j < rank(n); ++j) {
    std::vector<Entry> terms;
    for (const auto& e : boundary(n, j)) terms.push_back(Entry{static_cast<std::uint32_t>(e.index / order), e.value});
    cols.push_back(exactlin::make_sparse(std::move(terms)));
  }
  return SparseIntMatrix::from_columns(rank(n - 1), std::move(cols));
}

FreeResolution FreeResolution::truncated(std::size_t n) const {
  if (n > length()) throw std::out_of_range("truncated: longer than the resolution");
  return FreeResolution(group_, std::vector<std::size_t>(ranks_.begin(), ranks_.begin() + static_cast<std::ptrdiff_t>(n + 1)),
                        std::vector<std::vector<SparseVec>>(boundaries_.begin(),
                                                            boundaries_.begin() + static_cast<std::ptrdiff_t>(n + 1)));
}

void FreeResolution::corrupt(std::size_t n, std::size_t j, std::uint32_t index, const Int& value) {
  auto& v = boundaries_.at(n).at(j);
  std::vector<Entry> terms;
  for (const auto& e : v) {
    if (e.index != index) terms.push_back(e);
  }
  terms.push_back(Entry{index, value});
  v = exactlin::make_sparse(std::move(terms));
}

namespace {

constexpr const char* kMagic = "permcohom-resolution";

void write_body(std::ostream& os, const FreeResolution& r) {
  const auto order = r.group().order();
  os << "fingerprint " << r.group().fingerprint() << '\n';
  os << "degree " << r.length() << '\n';
  os << "ranks";
  for (const auto a : r.ranks()) os << ' ' << a;
  os << '\n';
  for (std::size_t n = 1; n <= r.length(); ++n) {
    std::size_t count = 0;
    for (std::size_t j = 0; j < r.rank(n); ++j) count += r.boundary(n, j).size();
    os << "boundary " << n << ' ' << count << '\n';
    for (std::size_t j = 0; j < r.rank(n); ++j) {
      for (const auto& e : r.boundary(n, j)) {
        os << e.index / order << ' ' << j << ' ' << e.index % order << ' ' << e.value.str() << '\n';
      }
    }
  }
}

}  // namespace

std::string FreeResolution::content_hash() const {
  std::ostringstream os;
  os << kMagic << " v" << kAlgorithmVersion << '\n';
  write_body(os, *this);
  return sha256_hex(os.str());
}

std::string FreeResolution::serialize() const {
  std::ostringstream os;
  os << kMagic << " v" << kAlgorithmVersion << '\n';
  os << "generators " << group_.describe() << '\n';
  write_body(os, *this);
  os << "end\n";
  return os.str();
}

FreeResolution FreeResolution::deserialize(const std::string& text, const PermGroup& group) {
  std::istringstream is(text);
  auto fail = [](const std::string& why) -> void { throw std::runtime_error("resolution file: " + why); };
  std::string word;
  std::string version;
  is >> word >> version;
  if (word != kMagic) fail("bad magic");
  if (version != "v" + std::to_string(kAlgorithmVersion)) fail("unsupported version " + version);
  std::string line;
  std::getline(is, line);
  std::getline(is, line);
  if (line.rfind("generators ", 0) != 0) fail("missing generators line");
  std::string fp;
  is >> word >> fp;
  if (word != "fingerprint") fail("missing fingerprint");
  if (fp != group.fingerprint()) fail("group fingerprint mismatch");
  std::size_t len = 0;
  is >> word >> len;
  if (word != "degree") fail("missing degree");
  is >> word;
  if (word != "ranks") fail("missing ranks");
  std::vector<std::size_t> ranks(len + 1);
  for (auto& a : ranks) is >> a;
  const auto order = group.order();
  std::vector<std::vector<SparseVec>> boundaries(len + 1);
  for (std::size_t n = 1; n <= len; ++n) {
    std::size_t deg = 0;
    std::size_t count = 0;
    is >> word >> deg >> count;
    if (word != "boundary" || deg != n) fail("missing boundary block " + std::to_string(n));
    std::vector<std::vector<Entry>> cols(ranks[n]);
    for (std::size_t k = 0; k < count; ++k) {
      std::size_t row = 0;
      std::size_t col = 0;
      std::size_t elem = 0;
      std::string coeff;
      is >> row >> col >> elem >> coeff;
      if (!is || row >= ranks[n - 1] || col >= ranks[n] || elem >= order) fail("bad quadruplet");
      cols[col].push_back(Entry{static_cast<std::uint32_t>(row * order + elem), Int::from_string(coeff)});
    }
    for (auto& c : cols) boundaries[n].push_back(exactlin::make_sparse(std::move(c)));
  }
  is >> word;
  if (word != "end") fail("truncated file");
  return FreeResolution(group, std::move(ranks), std::move(boundaries));
}

// -------------------------------------------------------------- construction

FreeResolution build_resolution(const PermGroup& g, std::size_t length, const BuildOptions& opts,
                                BuildTelemetry* telemetry) {
  if (length < 1) throw std::invalid_argument("build_resolution: length must be at least 1");
  const auto order = g.order();
  std::vector<std::size_t> ranks{1};
  std::vector<std::vector<SparseVec>> boundaries(1);
  std::vector<SparseVec> candidates = augmentation_kernel(order);

  for (std::size_t n = 1; n <= length; ++n) {
    const auto t0 = std::chrono::steady_clock::now();
    const bool track = n < length;
    PivotedEchelon image(ranks[n - 1] * order, track);
    std::vector<SparseVec> gens;
    std::vector<SparseVec> relations;
    const auto offered = candidates.size();
    for (auto& c : candidates) {
      if (image.contains(c)) continue;
      const auto j = gens.size();
      if (j >= opts.rank_cap) {
        throw ResourceLimit("build_resolution: rank cap " + std::to_string(opts.rank_cap) + " exceeded in degree " +
                            std::to_string(n));
      }
      for (std::size_t h = 0; h < order; ++h) {
        auto r = image.insert(translate_in(g, h, c), track ? unit(j * order + h) : SparseVec{});
        if (r.dependent && track) relations.push_back(std::move(r.relation));
      }
      gens.push_back(std::move(c));
      check_deadline(opts, "build_resolution");
    }
    ranks.push_back(gens.size());
    boundaries.push_back(std::move(gens));
    if (track) {
      candidates = std::move(relations);
      order_candidates(candidates);
    }
    if (telemetry != nullptr) {
      telemetry->seconds.push_back(seconds_since(t0));
      telemetry->candidates.push_back(offered);
      telemetry->max_bits = std::max(telemetry->max_bits, image.max_bits_seen());
    }
  }
  return FreeResolution(g, std::move(ranks), std::move(boundaries));
}

// ---------------------------------------------------------------- validation

ValidationReport validate_resolution(const FreeResolution& r) {
  ValidationReport rep;
  rep.ranks = r.ranks();
  rep.boundary_ranks.assign(r.length() + 1, 0);
  const auto order = r.group().order();
  auto fail = [&](std::size_t n, const std::string& why) {
    if (!rep.passed) return;
    rep.passed = false;
    rep.failed_degree = n;
    rep.failure = "degree " + std::to_string(n) + ": " + why;
  };
  if (r.ranks().empty() || r.rank(0) == 0) {
    fail(0, "augmentation is not surjective");
    return rep;
  }

  for (std::size_t j = 0; r.length() >= 1 && j < r.rank(1); ++j) {
    Int s(0);
    for (const auto& e : r.boundary(1, j)) s += e.value;
    if (s.sign() != 0) fail(1, "augmentation of d_1(e_" + std::to_string(j) + ") is nonzero");
  }
  for (std::size_t n = 2; n <= r.length(); ++n) {
    for (std::size_t j = 0; j < r.rank(n); ++j) {
      if (!r.apply_boundary(n - 1, r.boundary(n, j)).empty()) {
        fail(n, "d_" + std::to_string(n - 1) + " d_" + std::to_string(n) + "(e_" + std::to_string(j) + ") != 0");
      }
    }
  }

  // Exactness at degree n - 1 from the Smith invariants of d_n.
  rep.seconds.assign(r.length() + 1, 0.0);
  for (std::size_t n = 1; n <= r.length(); ++n) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto inv = exactlin::smith_invariants(r.z_matrix(n));
    rep.boundary_ranks[n] = inv.rank;
    const bool saturated = std::all_of(inv.nonzero.begin(), inv.nonzero.end(), [](const Int& d) { return d == Int(1); });
    const auto below = n == 1 ? std::size_t{1} : rep.boundary_ranks[n - 1];
    if (inv.rank + below != r.rank(n - 1) * order) {
      fail(n - 1, "homology has positive rank (rank d_" + std::to_string(n) + " = " + std::to_string(inv.rank) + ")");
    } else if (!saturated) {
      fail(n - 1, "homology has torsion (image of d_" + std::to_string(n) + " is not saturated)");
    }
    rep.seconds[n] = seconds_since(t0);
  }
  return rep;
}

void require_valid(const FreeResolution& r) {
  const auto rep = validate_resolution(r);
  if (!rep.passed) throw VerificationFailure("resolution validation failed at " + rep.failure);
}

// ------------------------------------------------------------- restriction

RestrictedResolution restrict_scalars(const FreeResolution& r, const PermGroup& h) {
  const auto& g = r.group();
  (void)perm::subgroup_index(g, h);  // throws when h is not inside g
  RestrictedResolution out;
  out.transversal = perm::right_transversal(g, h);
  for (const auto& x : h.elements()) {
    out.subgroup_in_ambient.push_back(static_cast<std::uint32_t>(g.index_of(x.extended(g.degree()))));
  }
  const auto ng = g.order();
  const auto nh = h.order();
  const auto k = out.transversal.size();
  // G-element -> (coset, H-element) with g = h t.
  std::vector<std::uint32_t> coset(ng);
  std::vector<std::uint32_t> part(ng);
  for (std::uint32_t t = 0; t < k; ++t) {
    for (std::uint32_t y = 0; y < nh; ++y) {
      const auto x = g.mul(out.subgroup_in_ambient[y], out.transversal[t]);
      coset[x] = t;
      part[x] = y;
    }
  }
  auto reindex = [&](const SparseVec& v) {
    std::vector<Entry> terms;
    terms.reserve(v.size());
    for (const auto& e : v) {
      const auto i = e.index / ng;
      const auto x = e.index % ng;
      terms.push_back(Entry{static_cast<std::uint32_t>((i * k + coset[x]) * nh + part[x]), e.value});
    }
    return exactlin::make_sparse(std::move(terms));
  };
  std::vector<std::size_t> ranks;
  std::vector<std::vector<SparseVec>> boundaries(r.length() + 1);
  for (std::size_t n = 0; n <= r.length(); ++n) {
    ranks.push_back(r.rank(n) * k);
    if (n == 0) continue;
    for (std::size_t i = 0; i < r.rank(n); ++i) {
      for (std::size_t t = 0; t < k; ++t) boundaries[n].push_back(reindex(r.translate(out.transversal[t], r.boundary(n, i))));
    }
  }
  out.complex = FreeResolution(h, std::move(ranks), std::move(boundaries));
  return out;
}

// --------------------------------------------------------------- chain maps

SparseVec apply_chain_map(const ChainMap& tau, const FreeResolution& source, const FreeResolution& target,
                          std::size_t n, const SparseVec& x) {
  const auto nh = source.group().order();
  std::vector<Entry> terms;
  for (const auto& e : x) {
    const auto i = e.index / nh;
    const auto y = e.index % nh;
    for (const auto& t : target.translate(tau.hom(y), tau.maps.at(n).at(i))) {
      terms.push_back(Entry{t.index, e.value * t.value});
    }
  }
  return exactlin::make_sparse(std::move(terms));
}

ChainMap lift_chain_map(const GroupHom& f, const FreeResolution& source, const FreeResolution& target,
                        std::optional<std::size_t> length, const BuildOptions& opts) {
  if (!(f.source() == source.group()) || !(f.target() == target.group())) {
    throw std::invalid_argument("lift_chain_map: homomorphism does not match the resolutions");
  }
  const auto top = length.value_or(std::min(source.length(), target.length()));
  if (top > source.length() || top > target.length()) throw std::invalid_argument("lift_chain_map: degrees incompatible");
  const auto ng = target.group().order();
  ChainMap tau{f, {}};
  // Degree 0: every generator goes to 1*e_0, which covers id_Z.
  tau.maps.emplace_back(source.rank(0), unit(0));
  for (std::size_t n = 1; n <= top; ++n) {
    PivotedEchelon image(target.z_dim(n - 1), true);
    for (std::size_t k = 0; k < target.rank(n); ++k) {
      for (std::size_t h = 0; h < ng; ++h) image.insert(target.translate(h, target.boundary(n, k)), unit(k * ng + h));
      check_deadline(opts, "lift_chain_map");
    }
    std::vector<SparseVec> maps;
    for (std::size_t j = 0; j < source.rank(n); ++j) {
      const auto rhs = apply_chain_map(tau, source, target, n - 1, source.boundary(n, j));
      auto x = image.solve(rhs);
      if (!x) {
        throw VerificationFailure("lift_chain_map: no lift in degree " + std::to_string(n) +
                                  "; the target resolution is not exact");
      }
      if (target.apply_boundary(n, *x) != rhs) {
        throw VerificationFailure("lift_chain_map: commutation fails in degree " + std::to_string(n));
      }
      maps.push_back(std::move(*x));
    }
    tau.maps.push_back(std::move(maps));
  }
  return tau;
}

// ------------------------------------------------------------ mod-p backend

namespace {

// Echelon over F_p with tags. Rows are monic at their pivot, which is the
// entry in the column with fewest stored entries; a vector is reduced
// against the rows in insertion order.
class TaggedModp {
 public:
  using Row = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

  TaggedModp(std::size_t dim, std::uint64_t p, bool track)
      : p_(p), track_(track), row_of_col_(dim, -1), col_count_(dim, 0) {}

  // Returns the relation tag when v reduces to zero.
  std::optional<Row> insert(Row v, Row tag) {
    reduce(v, track_ ? &tag : nullptr);
    if (v.empty()) return tag;
    std::size_t best = 0;
    for (std::size_t k = 1; k < v.size(); ++k) {
      if (col_count_[v[k].first] < col_count_[v[best].first]) best = k;
    }
    const auto inv = inverse(v[best].second);
    scale(v, inv);
    if (track_) scale(tag, inv);
    row_of_col_[v[best].first] = static_cast<std::int32_t>(rows_.size());
    pivot_col_.push_back(v[best].first);
    for (const auto& t : v) ++col_count_[t.first];
    rows_.push_back(std::move(v));
    tags_.push_back(std::move(tag));
    return std::nullopt;
  }

  [[nodiscard]] bool contains(Row v) const {
    const_cast<TaggedModp*>(this)->reduce(v, nullptr);
    return v.empty();
  }

  [[nodiscard]] std::size_t rank() const noexcept { return rows_.size(); }

 private:
  void reduce(Row& v, Row* tag) {
    std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> pending;
    auto enqueue = [&](const Row& w, std::int64_t after) {
      for (const auto& t : w) {
        const auto r = row_of_col_[t.first];
        if (r > after) pending.push(static_cast<std::uint32_t>(r));
      }
    };
    enqueue(v, -1);
    std::int64_t last = -1;
    while (!pending.empty()) {
      const auto i = pending.top();
      pending.pop();
      if (static_cast<std::int64_t>(i) == last) continue;
      last = i;
      const auto col = pivot_col_[i];
      const auto it = std::lower_bound(v.begin(), v.end(), col,
                                       [](const auto& t, std::uint32_t c) { return t.first < c; });
      if (it == v.end() || it->first != col) continue;
      const auto c = it->second;
      enqueue(rows_[i], i);
      v = axmy(v, c, rows_[i]);
      if (tag != nullptr) *tag = axmy(*tag, c, tags_[i]);
    }
  }

  [[nodiscard]] std::uint32_t inverse(std::uint64_t a) const {
    std::uint64_t r = 1;
    std::uint64_t b = a;
    for (std::uint64_t e = p_ - 2; e != 0; e >>= 1) {
      if ((e & 1U) != 0) r = r * b % p_;
      b = b * b % p_;
    }
    return static_cast<std::uint32_t>(r);
  }
  void scale(Row& v, std::uint64_t c) const {
    for (auto& t : v) t.second = static_cast<std::uint32_t>(t.second * c % p_);
  }
  // v - c * w
  [[nodiscard]] Row axmy(const Row& v, std::uint64_t c, const Row& w) const {
    Row out;
    out.reserve(v.size() + w.size());
    std::size_t i = 0;
    std::size_t j = 0;
    const auto neg = static_cast<std::uint64_t>(p_ - c % p_) % p_;
    while (i < v.size() || j < w.size()) {
      if (j == w.size() || (i < v.size() && v[i].first < w[j].first)) {
        out.push_back(v[i++]);
      } else if (i == v.size() || w[j].first < v[i].first) {
        out.emplace_back(w[j].first, static_cast<std::uint32_t>(neg * w[j].second % p_));
        ++j;
      } else {
        const auto s = (v[i].second + neg * w[j].second) % p_;
        if (s != 0) out.emplace_back(v[i].first, static_cast<std::uint32_t>(s));
        ++i;
        ++j;
      }
    }
    return out;
  }

  std::uint64_t p_;
  bool track_;
  std::vector<Row> rows_;
  std::vector<Row> tags_;
  std::vector<std::uint32_t> pivot_col_;
  std::vector<std::int32_t> row_of_col_;
  std::vector<std::uint32_t> col_count_;
};

TaggedModp::Row translate_modp(const PermGroup& g, std::size_t h, const TaggedModp::Row& x) {
  const auto n = g.order();
  TaggedModp::Row out;
  out.reserve(x.size());
  for (const auto& [idx, v] : x) out.emplace_back(static_cast<std::uint32_t>((idx / n) * n + g.mul(h, idx % n)), v);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

ModpResolution build_resolution_mod_p(const PermGroup& g, std::size_t length, std::uint64_t p,
                                      const BuildOptions& opts) {
  if (length < 1) throw std::invalid_argument("build_resolution_mod_p: length must be at least 1");
  if (!exactlin::is_prime_u64(p) || p >= (1ULL << 31)) throw std::invalid_argument("build_resolution_mod_p: p must be a prime below 2^31");
  const auto order = g.order();
  ModpResolution out;
  out.prime = p;
  out.ranks.push_back(1);
  using Row = TaggedModp::Row;
  std::vector<Row> candidates;
  for (std::uint32_t x = 1; x < order; ++x) candidates.push_back(Row{{0, static_cast<std::uint32_t>(p - 1)}, {x, 1}});
  // Augmented boundary columns mod p, for the cochain ranks.
  std::vector<std::vector<std::uint64_t>> aug(length + 1);
  std::vector<std::size_t> delta_rank(length + 1, 0);
  for (std::size_t n = 1; n <= length; ++n) {
    const auto t0 = std::chrono::steady_clock::now();
    const bool track = n < length;
    TaggedModp image(out.ranks[n - 1] * order, p, track);
    std::vector<Row> relations;
    std::size_t count = 0;
    exactlin::ModpEchelon aug_rank(out.ranks[n - 1], p);
    for (auto& c : candidates) {
      if (image.contains(c)) continue;
      if (count >= opts.rank_cap) throw ResourceLimit("build_resolution_mod_p: rank cap exceeded in degree " + std::to_string(n));
      for (std::size_t h = 0; h < order; ++h) {
        auto rel = image.insert(translate_modp(g, h, c), track ? Row{{static_cast<std::uint32_t>(count * order + h), 1}} : Row{});
        if (rel && track) relations.push_back(std::move(*rel));
      }
      // epsilon tensored with d_n(e_count): sum the coefficients per block.
      std::vector<std::uint64_t> col(out.ranks[n - 1], 0);
      for (const auto& [idx, v] : c) col[idx / order] = (col[idx / order] + v) % p;
      exactlin::ModpEchelon::Row r;
      for (std::uint32_t i = 0; i < col.size(); ++i) {
        if (col[i] != 0) r.push_back({i, static_cast<std::uint32_t>(col[i])});
      }
      aug_rank.insert(std::move(r));
      ++count;
      check_deadline(opts, "build_resolution_mod_p");
    }
    out.ranks.push_back(count);
    delta_rank[n] = aug_rank.rank();
    if (track) {
      candidates = std::move(relations);
      std::stable_sort(candidates.begin(), candidates.end(),
                       [](const Row& a, const Row& b) { return a.size() < b.size(); });
    }
    out.seconds.push_back(seconds_since(t0));
  }
  // dim H^n = a_n - rank(delta^n) - rank(delta^{n-1}); delta^n is the
  // transpose of the augmented d_{n+1}.
  for (std::size_t n = 0; n < length; ++n) {
    out.cohomology_dims.push_back(out.ranks[n] - delta_rank[n + 1] - (n == 0 ? 0 : delta_rank[n]));
  }
  return out;
}

// -------------------------------------------------------------------- cache

ResolutionCache::ResolutionCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path ResolutionCache::path_for(const PermGroup& g, std::size_t length) const {
  return dir_ / (g.fingerprint() + "-n" + std::to_string(length) + "-v" + std::to_string(kAlgorithmVersion) + ".res");
}

std::optional<FreeResolution> ResolutionCache::load(const PermGroup& g, std::size_t length) const {
  const auto prefix = g.fingerprint() + "-n";
  const auto suffix = "-v" + std::to_string(kAlgorithmVersion) + ".res";
  std::optional<std::size_t> best;
  std::error_code ec;
  for (const auto& ent : std::filesystem::directory_iterator(dir_, ec)) {
    const auto name = ent.path().filename().string();
    if (name.rfind(prefix, 0) != 0 || name.size() <= prefix.size() + suffix.size() ||
        name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0) {
      continue;
    }
    const auto mid = name.substr(prefix.size(), name.size() - prefix.size() - suffix.size());
    if (mid.empty() || mid.find_first_not_of("0123456789") != std::string::npos) continue;
    const auto n = std::stoul(mid);
    if (n >= length && (!best || n < *best)) best = n;
  }
  if (!best) return std::nullopt;
  std::ifstream in(path_for(g, *best));
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    auto r = FreeResolution::deserialize(ss.str(), g).truncated(length);
    if (!validate_resolution(r).passed) return std::nullopt;
    return r;
  } catch (const std::runtime_error&) {
    return std::nullopt;
  }
}

void ResolutionCache::store(const FreeResolution& r) const {
  const auto final_path = path_for(r.group(), r.length());
  std::random_device rd;
  const auto tmp = dir_ / ("tmp-" + std::to_string(::getpid()) + "-" + std::to_string(rd()) + ".part");
  {
    std::ofstream out(tmp, std::ios::binary);
    out << r.serialize();
    if (!out) throw std::runtime_error("ResolutionCache: cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, final_path);
}

FreeResolution ResolutionCache::get_or_build(const PermGroup& g, std::size_t length, const BuildOptions& opts,
                                             bool* hit) const {
  if (auto r = load(g, length)) {
    if (hit != nullptr) *hit = true;
    return *r;
  }
  if (hit != nullptr) *hit = false;
  auto r = build_resolution(g, length, opts);
  require_valid(r);
  store(r);
  return r;
}

}  // namespace pcoh::resolution
