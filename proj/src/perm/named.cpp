#include "permcohom/perm/named.hpp"

#include "permcohom/errors.hpp"

#include <cctype>
#include <charconv>
#include <optional>
#include <stdexcept>

namespace pcoh::perm {

namespace {

Permutation cycle(std::size_t degree, const std::vector<std::uint32_t>& pts) {
  std::vector<std::uint32_t> im(degree);
  for (std::uint32_t i = 0; i < degree; ++i) im[i] = i;
  for (std::size_t k = 0; k < pts.size(); ++k) im[pts[k]] = pts[(k + 1) % pts.size()];
  return Permutation(std::move(im));
}

std::optional<std::size_t> trailing_number(std::string_view s, std::string_view prefix) {
  if (s.size() <= prefix.size() || s.substr(0, prefix.size()) != prefix) return std::nullopt;
  std::size_t n = 0;
  const auto* b = s.data() + prefix.size();
  const auto* e = s.data() + s.size();
  const auto r = std::from_chars(b, e, n);
  if (r.ec != std::errc{} || r.ptr != e) return std::nullopt;
  return n;
}

}  // namespace

PermGroup symmetric_group(std::size_t n) {
  if (n == 0) throw std::invalid_argument("symmetric_group: n >= 1 required");
  if (n == 1) return PermGroup::generated_by({Permutation::identity(1)});
  std::vector<Permutation> gens;
  for (std::uint32_t i = 0; i + 1 < n; ++i) gens.push_back(cycle(n, {i, i + 1}));
  return PermGroup::generated_by(std::move(gens));
}

PermGroup alternating_group(std::size_t n) {
  if (n == 0) throw std::invalid_argument("alternating_group: n >= 1 required");
  if (n < 3) return PermGroup::generated_by({Permutation::identity(n)});
  std::vector<Permutation> gens;
  for (std::uint32_t k = 2; k < n; ++k) gens.push_back(cycle(n, {0, 1, k}));
  return PermGroup::generated_by(std::move(gens));
}

PermGroup cyclic_group(std::size_t n) {
  if (n == 0) throw std::invalid_argument("cyclic_group: n >= 1 required");
  std::vector<std::uint32_t> pts(n);
  for (std::uint32_t i = 0; i < n; ++i) pts[i] = i;
  return PermGroup::generated_by({cycle(n, pts)});
}

PermGroup direct_product(const PermGroup& a, const PermGroup& b) {
  const auto da = a.degree();
  const auto db = b.degree();
  std::vector<Permutation> gens;
  for (const auto& g : a.generators()) gens.push_back(g.extended(da + db));
  for (const auto& g : b.generators()) {
    std::vector<std::uint32_t> im(da + db);
    for (std::uint32_t i = 0; i < da; ++i) im[i] = i;
    for (std::uint32_t i = 0; i < db; ++i) im[da + i] = static_cast<std::uint32_t>(da + g(i));
    gens.emplace_back(std::move(im));
  }
  return PermGroup::generated_by(std::move(gens));
}

PermGroup young_subgroup(const std::vector<std::size_t>& blocks) {
  std::size_t degree = 0;
  for (const auto b : blocks) degree += b;
  if (degree == 0) throw std::invalid_argument("young_subgroup: empty");
  std::vector<Permutation> gens;
  std::uint32_t start = 0;
  for (const auto b : blocks) {
    for (std::uint32_t i = 0; i + 1 < b; ++i) gens.push_back(cycle(degree, {start + i, start + i + 1}));
    start += static_cast<std::uint32_t>(b);
  }
  if (gens.empty()) gens.push_back(Permutation::identity(degree));
  return PermGroup::generated_by(std::move(gens));
}

PermGroup dihedral8() { return PermGroup::parse("(1,2),(3,4),(1,3)(2,4)"); }

PermGroup group_k() { return PermGroup::parse(kGroupKCommaForm); }
PermGroup group_l() { return PermGroup::parse(kGroupLCommaForm, 8); }

PermGroup named_group(std::string_view spec, std::size_t element_cap) {
  std::string s;
  for (const char c : spec) {
    if (std::isspace(static_cast<unsigned char>(c)) == 0) s += c;
  }
  if (s.empty()) throw std::invalid_argument("named_group: empty group description");
  if (s.front() == '(' || s.front() == '[') return PermGroup::parse(spec, 0, element_cap);
  auto capped = [&](PermGroup g) {
    if (g.order() > element_cap) {
      throw ResourceLimit("PermGroup: order " + std::to_string(g.order()) + " exceeds the element cap of " +
                          std::to_string(element_cap));
    }
    return g;
  };
  if (s == "K") return capped(group_k());
  if (s == "L") return capped(group_l());
  if (s == "D8") return capped(dihedral8());
  if (s == "V4" || s == "S2xS2" || s == "C2xC2" || s == "Z2xZ2") return capped(PermGroup::parse("(1,2),(3,4)"));
  if (s == "D8xD8") return capped(group_l());
  if (const auto n = trailing_number(s, "S")) return capped(symmetric_group(*n));
  if (const auto n = trailing_number(s, "A")) return capped(alternating_group(*n));
  if (const auto n = trailing_number(s, "C")) return capped(cyclic_group(*n));
  if (const auto n = trailing_number(s, "Z")) return capped(cyclic_group(*n));
  throw std::invalid_argument("named_group: unknown group '" + std::string(spec) + "'");
}

}  // namespace pcoh::perm
