#include <nlohmann/json.hpp>

#include "doctest.h"
#include "oracles.hpp"
#include "permcohom/cohomology/cohomology.hpp"
#include "permcohom/errors.hpp"
#include "permcohom/perm/named.hpp"

using namespace pcoh;
using namespace pcoh::cohomology;
using pcoh::abelian::AbelianInvariants;
using pcoh::exactlin::Entry;
using pcoh::perm::named_group;

namespace {

AbelianInvariants G(const char* text) { return AbelianInvariants::parse(text); }

// One source for the whole suite so resolutions are built once.
ResolutionSource& source() {
  static ResolutionSource src;
  return src;
}

CohomologyGroup HZ(const char* name, std::size_t n) {
  const auto g = named_group(name);
  return cohomology_group(source().get(g, n + 1), CoeffModule::integers(g), n);
}

AbelianInvariants Hn(const char* name, std::size_t n) {
  return homology_group(source().get(named_group(name), n + 1), n);
}

std::vector<Int> unit_coords(std::size_t size, std::size_t k) {
  std::vector<Int> v(size, Int(0));
  v[k] = Int(1);
  return v;
}

SparseVec scaled(SparseVec v, const Int& c) {
  exactlin::scale(v, c);
  return v;
}

SparseVec diff(const SparseVec& a, const SparseVec& b) {
  SparseVec out;
  exactlin::lincomb(out, Int(1), a, Int(-1), b);
  return out;
}

}  // namespace

TEST_SUITE("coefficient modules") {
  TEST_CASE("action validation") {
    const auto c2 = named_group("C2");
    const auto c3 = named_group("C3");
    CHECK_NOTHROW(CoeffModule::from_action(c2, {Int(0)}, {{{Int(-1)}}}));
    // (1,2,3) cannot act on Z by -1.
    CHECK_THROWS_AS(CoeffModule::from_action(c3, {Int(0)}, {{{Int(-1)}}}), std::invalid_argument);
    // The order-2 generator may not map to a vector with a free component.
    CHECK_THROWS_AS(CoeffModule::from_action(c2, {Int(2), Int(0)}, {{{Int(1), Int(0)}, {Int(1), Int(1)}}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(CoeffModule::from_action(c2, {Int(0)}, {}), std::invalid_argument);
    const auto sign = CoeffModule::from_action(c2, {Int(0)}, {{{Int(-1)}}});
    CHECK_FALSE(sign.trivial_action());
    CHECK(sign.action(1)[0][0] == Int(-1));
    CHECK(sign.action(0)[0][0] == Int(1));
  }

  TEST_CASE("coinduced modules permute coordinates") {
    const auto m = coinduced_module(G("Z/2"), 3);
    CHECK(m.group().order() == 6);
    CHECK(m.base() == G("Z/2 x Z/2 x Z/2"));
    const auto& g = m.group();
    for (std::size_t x = 0; x < g.order(); ++x) {
      const auto& rho = m.action(x);
      for (std::uint32_t k = 0; k < 3; ++k) {
        for (std::uint32_t i = 0; i < 3; ++i) CHECK(rho[i][k] == Int(g.element(x)(k) == i ? 1 : 0));
      }
    }
    const auto m3 = coinduced_module(G("Z/3"), 2);
    CHECK(m3.base() == G("Z/3 x Z/3"));
    CHECK(m3.action(1)[1][0] == Int(1));
    CHECK_THROWS(coinduced_module(G("Z/2"), 1));
  }

  TEST_CASE("zero module has vanishing cohomology") {
    const auto m = coinduced_module(G("0"), 3);
    CHECK(m.rank() == 0);
    const auto& r = source().get(m.group(), 4);
    for (std::size_t n = 0; n <= 3; ++n) CHECK(cohomology_group(r, m, n).invariants.is_trivial());
  }
}

TEST_SUITE("cohomology groups") {
  TEST_CASE("cyclic group of order 2") {
    CHECK(HZ("C2", 0).invariants == G("Z"));
    for (std::size_t n = 1; n <= 5; ++n) CHECK(HZ("C2", n).invariants == (n % 2 == 0 ? G("Z/2") : G("0")));
  }

  TEST_CASE("sign module of Z/2") {
    // With the periodic resolution the coboundaries are alternately
    // multiplication by 1 - rho(g) = 2 and 1 + rho(g) = 0.
    const auto g = named_group("C2");
    const auto sign = CoeffModule::from_action(g, {Int(0)}, {{{Int(-1)}}});
    const auto& r = source().get(g, 6);
    CHECK(cohomology_group(r, sign, 0).invariants == G("0"));
    for (std::size_t n = 1; n <= 5; ++n) {
      CHECK(cohomology_group(r, sign, n).invariants == (n % 2 == 1 ? G("Z/2") : G("0")));
    }
  }

  TEST_CASE("S4 in degree 5") { CHECK(HZ("S4", 5).invariants == G("Z/2")); }

  TEST_CASE("agreement with the bar complex for nontrivial coefficients") {
    const auto g = named_group("S3");
    const auto& r = source().get(g, 4);
    for (std::size_t n = 0; n <= 3; ++n) {
      CAPTURE(n);
      CHECK(cohomology_group(r, CoeffModule::mod(g, 2), n).invariants.torsion().size() ==
            oracle::bar_cohomology_dim_mod_p(g, n, 2));
      CHECK(cohomology_group(r, CoeffModule::mod(g, 3), n).invariants.torsion().size() ==
            oracle::bar_cohomology_dim_mod_p(g, n, 3));
    }
  }

  TEST_CASE("representatives are cocycles and pairwise non-cohomologous") {
    for (const char* name : {"S4", "D8", "V4"}) {
      for (std::size_t n = 1; n <= 4; ++n) {
        CAPTURE(name);
        CAPTURE(n);
        const auto h = HZ(name, n);
        const auto k = h.representatives.size();
        REQUIRE(k == h.orders.size());
        for (std::size_t i = 0; i < k; ++i) {
          const auto& x = h.representatives[i];
          CHECK(h.is_cocycle(x));
          CHECK_FALSE(h.is_coboundary(x));
          CHECK(h.is_coboundary(scaled(x, h.orders[i])));
          CHECK(h.classify(x) == unit_coords(k, i));
          for (std::size_t j = i + 1; j < k; ++j) CHECK_FALSE(h.is_coboundary(diff(x, h.representatives[j])));
        }
      }
    }
  }

  TEST_CASE("classification wraps modulo the orders") {
    const auto h = HZ("S3", 4);
    REQUIRE(h.invariants == G("Z/6"));
    CHECK(h.classify(scaled(h.representatives[0], Int(7))) == std::vector<Int>{Int(1)});
    CHECK(h.classify(scaled(h.representatives[0], Int(-1))) == std::vector<Int>{Int(5)});
    CHECK_THROWS_AS((void)h.classify(SparseVec{Entry{0, Int(1)}}), VerificationFailure);
  }

  TEST_CASE("resolution too short") {
    const auto g = named_group("C2");
    CHECK_THROWS_AS(cohomology_group(source().get(g, 2), CoeffModule::integers(g), 2), std::invalid_argument);
  }

  TEST_CASE("JSON record") {
    const auto j = HZ("S4", 5).to_json(true);
    CHECK(j["degree"] == 5);
    CHECK(j["coefficients"] == "Z");
    CHECK(j["invariants"]["text"] == "Z/2");
    CHECK(j["group_order"] == 24);
    CHECK(j["representatives"].size() == 1);
    CHECK(j["resolution_hash"].get<std::string>().size() == 64);
    CHECK(j.contains("timings"));
  }

  TEST_CASE("C^x coefficients through the degree shift") {
    const AbelianInvariants expect[] = {G("0"), G("0"), G("Z/2"), G("Z/2")};
    for (std::size_t n = 2; n <= 5; ++n) {
      const auto g = perm::symmetric_group(n);
      const auto h = cx_cohomology(source().get(g, 6), 4);
      CHECK(h.invariants == expect[n - 2]);
      CHECK(h.coefficients == "C^x");
    }
  }
}

TEST_SUITE("homology") {
  TEST_CASE("low-degree homology of symmetric groups") {
    for (const char* name : {"S2", "S3", "S4", "S5"}) CHECK(Hn(name, 1) == G("Z/2"));
    CHECK(Hn("S2", 2) == G("0"));
    CHECK(Hn("S3", 2) == G("0"));
    CHECK(Hn("S4", 2) == G("Z/2"));
    CHECK(Hn("S5", 2) == G("Z/2"));
    CHECK(Hn("S4", 0) == G("Z"));
  }

  TEST_CASE("degree shift H^{n+1}(G, Z) = H_n(G, Z)") {
    for (const char* name : {"C2", "C3", "C4", "V4", "S3", "D8", "S4", "L"}) {
      CAPTURE(name);
      const auto g = named_group(name);
      const auto& r = source().get(g, 6);
      for (std::size_t n = 1; n <= 4; ++n) {
        CAPTURE(n);
        const auto hn = homology_group(r, n);
        CHECK(cohomology_group(r, CoeffModule::integers(g), n + 1).invariants == hn);
        CHECK(abelian::cohomology_from_homology(hn, homology_group(r, n + 1)) == hn);
      }
    }
  }

  TEST_CASE("Kuenneth assembly") {
    auto homology_list = [](const char* name, std::size_t top) {
      std::vector<AbelianInvariants> h;
      for (std::size_t n = 0; n <= top; ++n) h.push_back(Hn(name, n));
      return h;
    };
    const auto c2 = homology_list("C2", 4);
    const auto d8 = homology_list("D8", 4);
    CHECK(Hn("V4", 4) == abelian::kuenneth_homology(c2, c2, 4));
    CHECK(Hn("L", 4) == abelian::kuenneth_homology(d8, d8, 4));
    for (std::size_t n = 0; n <= 3; ++n) CHECK(Hn("L", n) == abelian::kuenneth_homology(d8, d8, n));
  }
}

TEST_SUITE("restriction") {
  TEST_CASE("S4 to <(1,2),(3,4)> in degree 5") {
    const auto s4 = named_group("S4");
    const auto v4 = PermGroup::parse("(1,2),(3,4)");
    for (auto b : {Backend::ambient, Backend::chainmap}) {
      const auto f = restriction_map(source(), s4, v4, CoeffModule::integers(s4), 5, b);
      CHECK(f.source.invariants == G("Z/2"));
      CHECK(f.image == G("Z/2"));
      CHECK(f.injective);
      CHECK_FALSE(f.surjective);
    }
    const auto both = restriction_both(source(), s4, v4, CoeffModule::integers(s4), 5);
    CHECK(both.backend == "both");
  }

  TEST_CASE("restriction to the whole group is the identity") {
    const auto g = named_group("S4");
    for (std::size_t n = 1; n <= 4; ++n) {
      for (auto b : {Backend::ambient, Backend::chainmap}) {
        const auto f = restriction_map(source(), g, g, CoeffModule::integers(g), n, b);
        for (std::size_t j = 0; j < f.matrix.size(); ++j) CHECK(f.matrix[j] == unit_coords(f.matrix.size(), j));
        CHECK(f.injective);
        CHECK(f.surjective);
      }
    }
  }

  TEST_CASE("backends agree across pairs, degrees and coefficients") {
    struct Pair {
      const char* g;
      const char* h;
    };
    for (const auto& p : {Pair{"S4", "D8"}, Pair{"S4", "(1,2),(3,4)"}, Pair{"S3", "(1,2,3)"}, Pair{"D8", "(1,2),(3,4)"},
                          Pair{"S4", "(1,2,3)"}}) {
      CAPTURE(p.g);
      CAPTURE(p.h);
      const auto g = named_group(p.g);
      const auto h = named_group(p.h);
      for (std::size_t n = 1; n <= 4; ++n) {
        CAPTURE(n);
        CHECK_NOTHROW(restriction_both(source(), g, h, CoeffModule::integers(g), n));
        CHECK_NOTHROW(restriction_both(source(), g, h, CoeffModule::mod(g, 2), n));
      }
    }
  }

  TEST_CASE("restriction with a nontrivial module") {
    const auto s3 = named_group("S3");
    const auto sign = CoeffModule::from_action(s3, {Int(0)}, {{{Int(-1)}}, {{Int(-1)}}});
    const auto c2 = PermGroup::parse("(1,2)", 3);
    for (std::size_t n = 1; n <= 4; ++n) {
      CAPTURE(n);
      const auto f = restriction_both(source(), s3, c2, sign, n);
      // [S3 : C2] = 3 is odd, so restriction is injective on 2-torsion.
      CHECK(f.image.two_rank() == f.source.invariants.two_rank());
      CHECK(transfer_map(source(), s3, c2, sign, n).composite_is_index);
    }
    // H^2(S3, Z^-) = Z/3 dies on C2.
    const auto f2 = restriction_map(source(), s3, c2, sign, 2, Backend::chainmap);
    CHECK(f2.source.invariants == G("Z/3"));
    CHECK(f2.image.is_trivial());
    CHECK_FALSE(f2.injective);
  }

  TEST_CASE("subgroup violation") {
    const auto s3 = named_group("S3");
    CHECK_THROWS(restriction_map(source(), s3, PermGroup::parse("(1,2,3,4)"), CoeffModule::integers(s3), 2,
                                 Backend::ambient));
  }
}

TEST_SUITE("transfer") {
  TEST_CASE("S4 and its Sylow 2-subgroup in degree 5") {
    const auto s4 = named_group("S4");
    const auto t = transfer_map(source(), s4, perm::dihedral8(), CoeffModule::integers(s4), 5);
    CHECK(t.index == 3);
    CHECK(t.composite_is_index);
    REQUIRE(t.composite.size() == 1);
    CHECK(t.composite[0] == std::vector<Int>{Int(1)});  // 3 = 1 in Z/2
    CHECK(t.restriction.injective);
  }

  TEST_CASE("whole group") {
    const auto g = named_group("S3");
    const auto t = transfer_map(source(), g, g, CoeffModule::integers(g), 4);
    CHECK(t.index == 1);
    CHECK(t.composite_is_index);
    CHECK(t.composite[0] == std::vector<Int>{Int(1)});
  }

  TEST_CASE("S3 and A3 in degree 4") {
    const auto s3 = named_group("S3");
    const auto t = transfer_map(source(), s3, named_group("A3"), CoeffModule::integers(s3), 4);
    REQUIRE(t.restriction.source.invariants == G("Z/6"));
    CHECK(t.composite[0] == std::vector<Int>{Int(2)});
    // The kernel of res is the 2-torsion {0, 3}.
    CHECK(t.restriction.image == G("Z/3"));
    CHECK_FALSE(t.restriction.injective);
  }

  TEST_CASE("cor o res = index on more pairs") {
    struct Case {
      const char* g;
      const char* h;
      std::size_t n;
    };
    for (const auto& c : {Case{"S4", "(1,2),(3,4)", 4}, Case{"S4", "(1,2,3)", 4}, Case{"D8", "(1,2),(3,4)", 3},
                          Case{"S3", "(1,2)", 2}, Case{"C4", "(1,3)(2,4)", 2}}) {
      CAPTURE(c.g);
      CAPTURE(c.h);
      const auto g = named_group(c.g);
      const auto t = transfer_map(source(), g, named_group(c.h), CoeffModule::integers(g), c.n);
      CHECK(t.composite_is_index);
      const auto t2 = transfer_map(source(), g, named_group(c.h), CoeffModule::mod(g, 2), c.n);
      CHECK(t2.composite_is_index);
    }
  }
}

TEST_SUITE("bockstein") {
  TEST_CASE("Z/2 in degree 1") {
    const auto b = bockstein(source().get(named_group("C2"), 3), 1);
    REQUIRE(b.mod2.invariants == G("Z/2"));
    REQUIRE(b.integral.invariants == G("Z/2"));
    CHECK(b.beta.matrix[0] == std::vector<Int>{Int(1)});
    CHECK(b.sq1_is_pi_beta);
  }

  TEST_CASE("S4 in degree 4 surjects onto H^5") {
    const auto b = bockstein(source().get(named_group("S4"), 6), 4);
    CHECK(b.integral.invariants == G("Z/2"));
    CHECK(b.beta.surjective);
    CHECK(b.sq1_is_pi_beta);
  }

  TEST_CASE("Sq1 = pi o beta in all computed degrees") {
    for (const char* name : {"C2", "V4", "S4", "D8"}) {
      const auto& r = source().get(named_group(name), 6);
      for (std::size_t n = 0; n <= 4; ++n) {
        CAPTURE(name);
        CAPTURE(n);
        const auto b = bockstein(r, n);
        CHECK(b.sq1_is_pi_beta);
        // beta kills the reductions of integral classes.
        const auto z = cohomology_group(r, CoeffModule::integers(r.group()), n);
        const auto pi = induced_map(z, b.mod2, [](const SparseVec& x) { return exactlin::reduce_mod(x, Int(2)); });
        for (const auto& col : pi.matrix) {
          std::vector<Int> y(b.integral.representatives.size(), Int(0));
          for (std::size_t k = 0; k < col.size(); ++k) {
            for (std::size_t i = 0; i < y.size(); ++i) y[i].addmul(col[k], b.beta.matrix[k][i]);
          }
          for (std::size_t i = 0; i < y.size(); ++i) CHECK(floor_mod(y[i], b.integral.orders[i]).is_zero());
        }
      }
    }
  }

  TEST_CASE("naturality for S4 and <(1,2),(3,4)>") {
    const auto nat = bockstein_naturality(source(), named_group("S4"), PermGroup::parse("(1,2),(3,4)"), 4);
    CHECK(nat.commutes);
    CHECK(nat.res_beta.size() == 3);
    CHECK(nat.res_beta == nat.beta_res);
  }
}

TEST_SUITE("shapiro") {
  TEST_CASE("n = 3 and n = 4 for Z/2, Z/3, Z/4") {
    for (std::size_t n : {3U, 4U}) {
      for (const char* a : {"Z/2", "Z/3", "Z/4"}) {
        CAPTURE(n);
        CAPTURE(a);
        const auto rep = shapiro_check(source(), n, G(a));
        CHECK(rep.shapiro_holds);
        CHECK(rep.uct_holds);
        if (n == 3) CHECK(rep.stabiliser_side == abelian::quotient_by_multiple(G(a), Int(2)));
        CHECK(rep.to_json()["n"] == n);
      }
    }
  }
}

TEST_SUITE("properties") {
  TEST_CASE("mod 2 universal coefficients") {
    for (const char* name : {"C2", "C3", "C4", "V4", "S3", "S4", "D8", "L"}) {
      CAPTURE(name);
      for (const auto& c : mod2_uct_check(source().get(named_group(name), 6))) {
        CAPTURE(c.degree);
        CHECK(c.holds);
      }
    }
  }

  TEST_CASE("Nakaoka spot checks in degrees 1 and 2") {
    struct Case {
      std::size_t k;
      std::size_t n;
    };
    for (const auto& c : {Case{1, 2}, Case{1, 3}, Case{1, 4}, Case{1, 5}, Case{1, 6}, Case{2, 4}, Case{2, 5}}) {
      CAPTURE(c.k);
      CAPTURE(c.n);
      const auto sn = perm::symmetric_group(c.n);
      const auto sub = perm::symmetric_group(2 * c.k);
      const auto f = restriction_map(source(), sn, sub, CoeffModule::mod(sn, 2), c.k, Backend::chainmap);
      CHECK(f.injective);
      CHECK(f.surjective);
    }
  }

  TEST_CASE("resolution source memoises") {
    ResolutionSource src;
    const auto g = named_group("S3");
    const auto& a = src.get(g, 4);
    const auto& b = src.get(g, 4);
    CHECK(&a == &b);
    CHECK(src.get(g, 2).length() == 2);
    CHECK(src.get(g, 2).content_hash() == a.truncated(2).content_hash());
  }
}
