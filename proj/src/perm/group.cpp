#include "permcohom/perm/group.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "permcohom/digest.hpp"
#include "permcohom/errors.hpp"

namespace pcoh::perm {

namespace {

// Orders up to this get a full multiplication table (|G|^2 entries).
constexpr std::size_t kTableLimit = 2048;

struct PermHash {
  std::size_t operator()(const Permutation& p) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto x : p.images()) {
      h ^= x;
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

struct PermGroup::Data {
  std::size_t degree = 0;
  std::vector<Permutation> gens;
  std::vector<Permutation> elements;
  std::vector<std::uint32_t> gen_indices;
  std::vector<std::uint32_t> inverses;
  std::vector<std::uint32_t> table;  // empty unless order <= kTableLimit
  std::unordered_map<Permutation, std::uint32_t, PermHash> index;
  std::string fingerprint;
};

PermGroup PermGroup::generated_by(std::vector<Permutation> gens, std::size_t element_cap) {
  if (gens.empty()) throw std::invalid_argument("PermGroup: need at least one generator (use \"()\" for the trivial group)");
  const std::size_t degree = gens.front().degree();
  for (const auto& g : gens) {
    if (g.degree() != degree) throw std::invalid_argument("PermGroup: generators have different degrees");
  }
  auto d = std::make_shared<Data>();
  d->degree = degree;
  d->gens = gens;

  // Closure under left multiplication by generators reaches every element
  // because the group is finite.
  std::unordered_map<Permutation, std::uint32_t, PermHash> seen;
  std::vector<Permutation> found;
  std::deque<std::size_t> queue;
  auto visit = [&](Permutation p) {
    if (seen.count(p) != 0) return;
    if (found.size() >= element_cap) {
      throw ResourceLimit("PermGroup: order exceeds the element cap of " + std::to_string(element_cap));
    }
    seen.emplace(p, static_cast<std::uint32_t>(found.size()));
    queue.push_back(found.size());
    found.push_back(std::move(p));
  };
  visit(Permutation::identity(degree));
  while (!queue.empty()) {
    const auto i = queue.front();
    queue.pop_front();
    for (const auto& g : gens) visit(g * found[i]);
  }
  seen.clear();

  // Lagrange: the order divides |S_degree| = degree!.
  {
    const auto order = static_cast<unsigned __int128>(found.size());
    unsigned __int128 f = 1 % order;
    for (std::size_t k = 2; k <= degree && f != 0; ++k) f = (f * k) % order;
    if (f != 0) throw VerificationFailure("PermGroup: enumerated order does not divide degree!");
  }

  std::sort(found.begin(), found.end());
  d->elements = std::move(found);
  const auto n = d->elements.size();
  d->index.reserve(n);
  for (std::size_t i = 0; i < n; ++i) d->index.emplace(d->elements[i], static_cast<std::uint32_t>(i));
  for (const auto& g : gens) d->gen_indices.push_back(d->index.at(g));
  d->inverses.resize(n);
  for (std::size_t i = 0; i < n; ++i) d->inverses[i] = d->index.at(d->elements[i].inverse());

  if (n <= kTableLimit) {
    d->table.resize(n * n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) d->table[a * n + b] = d->index.at(d->elements[a] * d->elements[b]);
    }
  }

  std::string bytes = std::to_string(degree) + ":";
  bytes.reserve(bytes.size() + n * degree * 4);
  for (const auto& e : d->elements) {
    for (const auto x : e.images()) {
      for (int k = 0; k < 4; ++k) bytes += static_cast<char>((x >> (8 * k)) & 0xff);
    }
  }
  d->fingerprint = sha256_hex(bytes);

  PermGroup g;
  g.data_ = std::move(d);
  return g;
}

PermGroup PermGroup::parse(std::string_view generators, std::size_t degree, std::size_t element_cap) {
  auto gens = parse_generators(generators, degree);
  if (gens.empty()) gens.push_back(Permutation::identity(std::max<std::size_t>(degree, 1)));
  return generated_by(std::move(gens), element_cap);
}

namespace {
[[noreturn]] void empty_group() { throw std::logic_error("PermGroup: use of an empty handle"); }
}  // namespace

std::size_t PermGroup::degree() const noexcept { return data_ ? data_->degree : 0; }
std::size_t PermGroup::order() const noexcept { return data_ ? data_->elements.size() : 0; }

const std::vector<Permutation>& PermGroup::generators() const noexcept {
  static const std::vector<Permutation> none;
  return data_ ? data_->gens : none;
}

const std::vector<Permutation>& PermGroup::elements() const noexcept {
  static const std::vector<Permutation> none;
  return data_ ? data_->elements : none;
}

const std::vector<std::uint32_t>& PermGroup::generator_indices() const noexcept {
  static const std::vector<std::uint32_t> none;
  return data_ ? data_->gen_indices : none;
}

std::optional<std::size_t> PermGroup::find(const Permutation& p) const {
  if (!data_) return std::nullopt;
  const auto it = data_->index.find(p);
  if (it == data_->index.end()) return std::nullopt;
  return it->second;
}

std::size_t PermGroup::index_of(const Permutation& p) const {
  const auto i = find(p);
  if (!i) throw std::invalid_argument("PermGroup: " + p.cycles() + " is not an element");
  return *i;
}

std::uint32_t PermGroup::mul(std::size_t a, std::size_t b) const {
  if (!data_) empty_group();
  const auto n = data_->elements.size();
  if (!data_->table.empty()) return data_->table[a * n + b];
  return data_->index.at(data_->elements.at(a) * data_->elements.at(b));
}

std::uint32_t PermGroup::inv(std::size_t a) const {
  if (!data_) empty_group();
  return data_->inverses.at(a);
}

bool PermGroup::has_table() const noexcept { return data_ && !data_->table.empty(); }

const std::string& PermGroup::fingerprint() const noexcept {
  static const std::string none;
  return data_ ? data_->fingerprint : none;
}

GroupHom GroupHom::by_images(const PermGroup& source, const PermGroup& target, const std::vector<Permutation>& images) {
  const auto& gens = source.generators();
  if (images.size() != gens.size()) throw NotAHomomorphism("GroupHom: one image per generator is required");
  for (const auto& im : images) {
    if (!target.contains(im)) throw NotAHomomorphism("GroupHom: image " + im.cycles() + " is not in the target");
  }

  // The graph {(x, f(x))} is a subgroup of order |source| exactly when f is
  // well defined; it also yields the table.
  const auto ds = source.degree();
  const auto dt = target.degree();
  std::vector<Permutation> graph_gens;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::vector<std::uint32_t> im(ds + dt);
    for (std::uint32_t p = 0; p < ds; ++p) im[p] = gens[i](p);
    for (std::uint32_t p = 0; p < dt; ++p) im[ds + p] = static_cast<std::uint32_t>(ds + images[i](p));
    graph_gens.emplace_back(std::move(im));
  }
  PermGroup graph;
  try {
    graph = PermGroup::generated_by(graph_gens, source.order() + 1);
  } catch (const ResourceLimit&) {
    throw NotAHomomorphism("GroupHom: generator images do not define a homomorphism");
  }
  if (graph.order() != source.order()) {
    throw NotAHomomorphism("GroupHom: generator images do not define a homomorphism");
  }

  GroupHom f;
  f.source_ = source;
  f.target_ = target;
  f.images_ = images;
  f.table_.assign(source.order(), 0);
  for (const auto& e : graph.elements()) {
    const auto& im = e.images();
    std::vector<std::uint32_t> x(im.begin(), im.begin() + static_cast<std::ptrdiff_t>(ds));
    std::vector<std::uint32_t> y(dt);
    for (std::size_t p = 0; p < dt; ++p) y[p] = static_cast<std::uint32_t>(im[ds + p] - ds);
    f.table_[source.index_of(Permutation(std::move(x)))] =
        static_cast<std::uint32_t>(target.index_of(Permutation(std::move(y))));
  }

  const auto n = source.order();
  auto check = [&](std::size_t a, std::size_t b) {
    if (f.table_[source.mul(a, b)] != target.mul(f.table_[a], f.table_[b])) {
      throw NotAHomomorphism("GroupHom: tabulated map is not multiplicative");
    }
  };
  if (n * n <= 1'000'000) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) check(a, b);
    }
  } else {
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (int k = 0; k < 10'000; ++k) check(pick(rng), pick(rng));
  }
  return f;
}

GroupHom GroupHom::identity(const PermGroup& g) { return by_images(g, g, g.generators()); }

GroupHom GroupHom::inclusion(const PermGroup& sub, const PermGroup& super) {
  std::vector<Permutation> images;
  for (const auto& s : sub.generators()) {
    if (s.degree() > super.degree()) throw NotAHomomorphism("GroupHom::inclusion: degree exceeds the target degree");
    images.push_back(s.extended(super.degree()));
  }
  return by_images(sub, super, images);
}

bool GroupHom::is_injective() const {
  std::size_t kernel = 0;
  for (const auto t : table_) kernel += t == 0 ? 1 : 0;
  return kernel == 1;
}

namespace {

// h's elements in g's degree, or an exception if h is not inside g.
std::vector<std::uint32_t> embed(const PermGroup& g, const PermGroup& h) {
  if (h.degree() > g.degree()) {
    // Points beyond g's degree must be fixed by h.
    for (const auto& gen : h.generators()) {
      for (auto p = static_cast<std::uint32_t>(g.degree()); p < h.degree(); ++p) {
        if (gen(p) != p) throw std::invalid_argument("subgroup: H moves a point outside G's support");
      }
    }
  }
  std::vector<std::uint32_t> out;
  out.reserve(h.order());
  for (const auto& e : h.elements()) {
    std::vector<std::uint32_t> im(e.images().begin(),
                                  e.images().begin() + static_cast<std::ptrdiff_t>(std::min(e.degree(), g.degree())));
    im.resize(g.degree());
    for (auto p = static_cast<std::uint32_t>(std::min(e.degree(), g.degree())); p < g.degree(); ++p) im[p] = p;
    const auto i = g.find(Permutation(std::move(im)));
    if (!i) throw std::invalid_argument("subgroup: " + e.cycles() + " is not in G");
    out.push_back(static_cast<std::uint32_t>(*i));
  }
  return out;
}

}  // namespace

SubgroupIndex subgroup_index(const PermGroup& g, const PermGroup& h) {
  (void)embed(g, h);
  SubgroupIndex r;
  r.index = g.order() / h.order();
  r.odd = r.index % 2 == 1;
  return r;
}

std::vector<std::uint32_t> right_transversal(const PermGroup& g, const PermGroup& h) {
  const auto hs = embed(g, h);
  std::vector<bool> covered(g.order(), false);
  std::vector<std::uint32_t> reps;
  for (std::uint32_t t = 0; t < g.order(); ++t) {
    if (covered[t]) continue;
    reps.push_back(t);
    for (const auto x : hs) covered[g.mul(x, t)] = true;
  }
  return reps;
}

}  // namespace pcoh::perm
