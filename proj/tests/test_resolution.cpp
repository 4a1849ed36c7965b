#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "permcohom/cohomology/cohomology.hpp"
#include "permcohom/errors.hpp"
#include "permcohom/perm/named.hpp"
#include "permcohom/resolution/resolution.hpp"

using namespace pcoh;
using namespace pcoh::resolution;
using pcoh::abelian::AbelianInvariants;
using pcoh::cohomology::CoeffModule;
using pcoh::cohomology::cohomology_group;
using pcoh::exactlin::Entry;
using pcoh::perm::named_group;

namespace {

AbelianInvariants H(const FreeResolution& r, std::size_t n) {
  return cohomology_group(r, CoeffModule::integers(r.group()), n).invariants;
}

AbelianInvariants G(const char* text) { return AbelianInvariants::parse(text); }

std::filesystem::path fresh_dir(const char* name) {
  auto d = std::filesystem::temp_directory_path() / ("permcohom-test-" + std::string(name));
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d;
}

// Cochain pull-back along a chain map, trivial Z coefficients: the value on
// e_j is the sum over blocks k of aug(tau_n(e_j)|_k) * phi_k.
SparseVec pull_back_z(const ChainMap& tau, const FreeResolution& target, std::size_t n, const SparseVec& phi) {
  const auto ng = target.group().order();
  std::vector<Entry> terms;
  for (std::size_t j = 0; j < tau.maps[n].size(); ++j) {
    Int s(0);
    for (const auto& e : tau.maps[n][j]) s.addmul(e.value, exactlin::value_at(phi, static_cast<std::uint32_t>(e.index / ng)));
    if (!s.is_zero()) terms.push_back(Entry{static_cast<std::uint32_t>(j), s});
  }
  return exactlin::make_sparse(std::move(terms));
}

}  // namespace

TEST_SUITE("group ring") {
  TEST_CASE("multiplication follows the group table and augmentation is a ring map") {
    const auto g = named_group("S3");
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> coeff(-3, 3);
    auto random_element = [&] {
      std::vector<Entry> t;
      for (std::size_t i = 0; i < g.order(); ++i) t.push_back(Entry{static_cast<std::uint32_t>(i), Int(coeff(rng))});
      return GroupRingElement(g, exactlin::make_sparse(std::move(t)));
    };
    for (int trial = 0; trial < 50; ++trial) {
      const auto a = random_element();
      const auto b = random_element();
      const auto c = random_element();
      CHECK((a * b).augmentation() == a.augmentation() * b.augmentation());
      CHECK((a + b).augmentation() == a.augmentation() + b.augmentation());
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(GroupRingElement::one(g) * a == a);
    }
    for (std::size_t x = 0; x < g.order(); ++x) {
      for (std::size_t y = 0; y < g.order(); ++y) {
        CHECK(GroupRingElement::basis(g, x) * GroupRingElement::basis(g, y) == GroupRingElement::basis(g, g.mul(x, y)));
      }
    }
  }
}

TEST_SUITE("build") {
  TEST_CASE("Z2 has the periodic resolution") {
    const auto g = named_group("C2");
    const auto r = build_resolution(g, 6);
    REQUIRE(r.ranks() == std::vector<std::size_t>(7, 1));
    const auto one = GroupRingElement::one(g);
    const auto t = GroupRingElement::basis(g, 1);
    for (std::size_t n = 1; n <= 6; ++n) {
      const auto d = r.entry(n, 0, 0);
      const auto expect = n % 2 == 1 ? one - t : one + t;
      const auto zero = GroupRingElement(g, {});
      CHECK((d == expect || zero - d == expect));
    }
    CHECK(validate_resolution(r).passed);
  }

  TEST_CASE("cohomology agrees with the bar complex for small groups") {
    for (const char* name : {"C2", "C3", "C4", "V4", "S3", "C6", "D8"}) {
      CAPTURE(name);
      const auto g = named_group(name);
      const auto r = build_resolution(g, 4);
      require_valid(r);
      for (std::size_t n = 0; n <= 3; ++n) {
        CAPTURE(n);
        CHECK(H(r, n) == oracle::bar_cohomology(g, n));
      }
    }
  }

  TEST_CASE("S3 in degrees 4 and 5") {
    const auto g = named_group("S3");
    const auto r = build_resolution(g, 6);
    require_valid(r);
    CHECK(H(r, 4) == G("Z/6"));
    CHECK(H(r, 5) == G("0"));
    CHECK(oracle::bar_cohomology(g, 4) == G("Z/6"));
    CHECK(oracle::bar_cohomology(g, 5) == G("0"));
  }

  TEST_CASE("S4 degree 5") {
    const auto r = build_resolution(named_group("S4"), 6);
    require_valid(r);
    CHECK(H(r, 5) == G("Z/2"));
  }

  TEST_CASE("deterministic output") {
    const auto a = build_resolution(named_group("S4"), 4);
    const auto b = build_resolution(named_group("(1,2),(2,3),(3,4)"), 4);
    CHECK(a.content_hash() == b.content_hash());
    CHECK(a.serialize() == b.serialize());
  }

  TEST_CASE("resource caps") {
    const auto g = named_group("S4");
    BuildOptions small;
    small.rank_cap = 2;
    CHECK_THROWS_AS(build_resolution(g, 4, small), ResourceLimit);
    BuildOptions late;
    late.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
    CHECK_THROWS_AS(build_resolution(g, 4, late), ResourceLimit);
    CHECK_THROWS_AS(build_resolution(g, 0), std::invalid_argument);
  }
}

TEST_SUITE("validation") {
  TEST_CASE("built resolutions pass") {
    for (const char* name : {"C2", "C4", "V4", "S3", "D8", "S4"}) {
      CAPTURE(name);
      const auto rep = validate_resolution(build_resolution(named_group(name), 5));
      CHECK(rep.passed);
      CHECK(rep.ranks.size() == 6);
    }
  }

  TEST_CASE("fault injection names the corrupted degree") {
    const auto base = build_resolution(named_group("S3"), 5);
    for (std::size_t n = 1; n <= 5; ++n) {
      CAPTURE(n);
      auto r = base;
      const auto& first = r.boundary(n, 0).front();
      r.corrupt(n, 0, first.index, first.value + Int(1));
      const auto rep = validate_resolution(r);
      CHECK_FALSE(rep.passed);
      REQUIRE(rep.failed_degree.has_value());
      CHECK(*rep.failed_degree == n);
      CHECK_THROWS_AS(require_valid(r), VerificationFailure);
    }
  }

  TEST_CASE("a missing generator breaks exactness") {
    const auto r = build_resolution(named_group("S3"), 3);
    auto bounds = r.boundaries();
    auto ranks = r.ranks();
    bounds[3].pop_back();
    --ranks[3];
    const FreeResolution cut(r.group(), ranks, bounds);
    const auto rep = validate_resolution(cut);
    CHECK_FALSE(rep.passed);
    CHECK(*rep.failed_degree == 2);
  }
}

TEST_SUITE("restriction of scalars") {
  TEST_CASE("ranks multiply by the index") {
    const auto z4 = named_group("C4");
    const auto z2 = PermGroup::parse("(1,3)(2,4)", 4);
    const auto r = build_resolution(z4, 5);
    const auto rr = restrict_scalars(r, z2);
    for (std::size_t n = 0; n <= 5; ++n) CHECK(rr.complex.rank(n) == 2 * r.rank(n));
    CHECK(validate_resolution(rr.complex).passed);
  }

  TEST_CASE("H = G leaves the resolution unchanged") {
    const auto g = named_group("S3");
    const auto r = build_resolution(g, 4);
    const auto rr = restrict_scalars(r, g);
    CHECK(rr.complex.ranks() == r.ranks());
    CHECK(rr.complex.boundaries() == r.boundaries());
  }

  TEST_CASE("S4 restricted to V4 gives V4's cohomology") {
    const auto s4 = named_group("S4");
    const auto v4 = named_group("(1,2),(3,4)");
    const auto r = build_resolution(s4, 5);
    const auto rr = restrict_scalars(r, v4);
    for (std::size_t n = 0; n <= 5; ++n) CHECK(rr.complex.rank(n) == 6 * r.rank(n));
    const auto own = build_resolution(v4, 5);
    require_valid(rr.complex);
    for (std::size_t n = 0; n <= 4; ++n) {
      CAPTURE(n);
      CHECK(H(rr.complex, n) == H(own, n));
    }
  }

  TEST_CASE("subgroup violation") {
    const auto r = build_resolution(named_group("S3"), 2);
    CHECK_THROWS(restrict_scalars(r, PermGroup::parse("(1,2,3,4)")));
  }
}

TEST_SUITE("chain maps") {
  TEST_CASE("identity lifts") {
    const auto g = named_group("S3");
    const auto r = build_resolution(g, 4);
    const auto tau = lift_chain_map(perm::GroupHom::identity(g), r, r);
    CHECK(tau.length() == 4);
    for (std::size_t n = 1; n <= 4; ++n) {
      for (std::size_t j = 0; j < r.rank(n); ++j) {
        CHECK(r.apply_boundary(n, tau.maps[n][j]) ==
              apply_chain_map(tau, r, r, n - 1, r.boundary(n, j)));
      }
    }
  }

  TEST_CASE("Z2 into Z4 induces a surjection on H^2") {
    const auto z4 = named_group("C4");
    const auto z2 = PermGroup::parse("(1,3)(2,4)", 4);
    cohomology::ResolutionSource src;
    const auto f = cohomology::restriction_map(src, z4, z2, CoeffModule::integers(z4), 2, cohomology::Backend::chainmap);
    CHECK(f.source.invariants == G("Z/4"));
    CHECK(f.target.invariants == G("Z/2"));
    CHECK(f.surjective);
    CHECK_FALSE(f.injective);
    CHECK(f.image == G("Z/2"));
  }

  TEST_CASE("composites of lifts between two resolutions act as the identity on cohomology") {
    // S3's own resolution and the restriction of S4's resolution to S3.
    const auto s3 = PermGroup::parse("(1,2),(2,3)", 4);
    const auto r = build_resolution(s3, 5);
    const auto other = restrict_scalars(build_resolution(named_group("S4"), 5), s3).complex;
    const auto id = perm::GroupHom::identity(s3);
    const auto there = lift_chain_map(id, r, other);
    const auto back = lift_chain_map(id, other, r);
    for (std::size_t n = 0; n <= 4; ++n) {
      CAPTURE(n);
      const auto hr = cohomology_group(r, CoeffModule::integers(s3), n);
      const auto ho = cohomology_group(other, CoeffModule::integers(s3), n);
      CHECK(hr.invariants == ho.invariants);
      for (std::size_t k = 0; k < hr.representatives.size(); ++k) {
        // phi on r -> pulled back to other along back -> pulled back to r along there.
        const auto on_other = pull_back_z(back, r, n, hr.representatives[k]);
        const auto again = pull_back_z(there, other, n, on_other);
        auto coords = hr.classify(again);
        std::vector<Int> expect(hr.representatives.size(), Int(0));
        expect[k] = Int(1);
        CHECK(coords == expect);
      }
    }
  }

  TEST_CASE("mismatched groups are rejected") {
    const auto a = build_resolution(named_group("C2"), 2);
    const auto b = build_resolution(named_group("C3"), 2);
    CHECK_THROWS_AS(lift_chain_map(perm::GroupHom::identity(a.group()), a, b), std::invalid_argument);
  }
}

TEST_SUITE("persistence") {
  TEST_CASE("serialization round-trips") {
    const auto g = named_group("D8");
    const auto r = build_resolution(g, 4);
    const auto text = r.serialize();
    const auto back = FreeResolution::deserialize(text, g);
    CHECK(back.content_hash() == r.content_hash());
    CHECK(back.serialize() == text);
    CHECK_THROWS(FreeResolution::deserialize(text, named_group("C4")));
    CHECK_THROWS(FreeResolution::deserialize("garbage", g));
  }

  TEST_CASE("cache hits, truncation and revalidation") {
    const auto dir = fresh_dir("cache");
    const ResolutionCache cache(dir);
    const auto g = named_group("S3");
    bool hit = true;
    const auto built = cache.get_or_build(g, 5, {}, &hit);
    CHECK_FALSE(hit);
    CHECK(std::filesystem::exists(cache.path_for(g, 5)));
    const auto again = cache.get_or_build(g, 5, {}, &hit);
    CHECK(hit);
    CHECK(again.content_hash() == built.content_hash());
    const auto shorter = cache.load(g, 3);
    REQUIRE(shorter.has_value());
    CHECK(shorter->content_hash() == built.truncated(3).content_hash());
    CHECK_FALSE(cache.load(g, 6).has_value());

    // A corrupted entry is rejected on load.
    {
      std::ifstream in(cache.path_for(g, 5));
      std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      const auto pos = text.find(" 1\n", text.find("boundary 2"));
      REQUIRE(pos != std::string::npos);
      text.replace(pos, 3, " 5\n");
      std::ofstream out(cache.path_for(g, 5));
      out << text;
    }
    CHECK_FALSE(cache.load(g, 5).has_value());
    std::filesystem::remove_all(dir);
  }
}

TEST_SUITE("mod p backend") {
  TEST_CASE("dimensions agree with the integral route") {
    for (const char* name : {"C2", "S3", "V4", "S4"}) {
      CAPTURE(name);
      const auto g = named_group(name);
      const auto r = build_resolution(g, 5);
      for (std::uint64_t p : {2ULL, 3ULL}) {
        const auto m = build_resolution_mod_p(g, 5, p);
        for (std::size_t n = 0; n < 5; ++n) {
          CAPTURE(n);
          const auto hz = cohomology_group(r, CoeffModule::mod(g, static_cast<long>(p)), n).invariants;
          CHECK(m.cohomology_dims[n] == hz.torsion().size());
        }
      }
    }
  }

  TEST_CASE("dimensions agree with the bar complex") {
    const auto g = named_group("D8");
    const auto m = build_resolution_mod_p(g, 4, 2);
    for (std::size_t n = 0; n <= 3; ++n) CHECK(m.cohomology_dims[n] == oracle::bar_cohomology_dim_mod_p(g, n, 2));
  }
}
