#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "permcohom/exactlin/echelon.hpp"
#include "permcohom/exactlin/integer.hpp"
#include "permcohom/exactlin/modular.hpp"
#include "permcohom/exactlin/normal_form.hpp"
#include "permcohom/exactlin/sparse_matrix.hpp"
#include "snf_oracle.hpp"

using namespace pcoh::exactlin;
using namespace snf_oracle;

namespace {

SparseIntMatrix mat(const std::vector<std::vector<long>>& rows) {
  DenseMatrix d;
  for (const auto& r : rows) {
    d.emplace_back();
    for (auto v : r) d.back().emplace_back(v);
  }
  return SparseIntMatrix::from_dense(d);
}

SparseVec vec(const std::vector<long>& v) {
  std::vector<Int> d(v.begin(), v.end());
  return from_dense(d);
}

std::vector<Int> ints(const std::vector<long>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_SUITE("integer") {
  TEST_CASE("inline arithmetic matches 128-bit reference across the promotion boundary") {
    std::mt19937_64 rng(7);
    const std::int64_t edges[] = {0, 1, -1, Int::kSmallMax, Int::kSmallMin, Int::kSmallMax - 1,
                                  INT64_MAX, INT64_MIN + 1, 1LL << 40, -(1LL << 31)};
    std::vector<std::int64_t> pool(std::begin(edges), std::end(edges));
    for (int i = 0; i < 200; ++i) pool.push_back(static_cast<std::int64_t>(rng()) >> (rng() % 60));
    auto ref = [](__int128 v) {
      std::string s;
      const bool neg = v < 0;
      unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
      do {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
      } while (u != 0);
      if (neg) s.push_back('-');
      std::reverse(s.begin(), s.end());
      return s;
    };
    for (std::size_t i = 0; i < pool.size(); ++i) {
      for (std::size_t j = 0; j < pool.size(); j += 7) {
        const __int128 a = pool[i];
        const __int128 b = pool[j];
        CHECK((Int(pool[i]) + Int(pool[j])).str() == ref(a + b));
        CHECK((Int(pool[i]) - Int(pool[j])).str() == ref(a - b));
        if ((a < 0 ? -a : a) < (__int128{1} << 62) && (b < 0 ? -b : b) < (__int128{1} << 62)) {
          CHECK((Int(pool[i]) * Int(pool[j])).str() == ref(a * b));
        }
      }
    }
  }

  TEST_CASE("big values demote back to the inline form") {
    Int big = Int::from_string("123456789012345678901234567890");
    Int x = big;
    x -= big;
    CHECK(x.is_zero());
    CHECK(x.is_small());
    Int y = Int(Int::kSmallMax);
    y += 1;
    CHECK_FALSE(y.is_small());
    y -= 1;
    CHECK(y.is_small());
    CHECK(y == Int(Int::kSmallMax));
  }

  TEST_CASE("division conventions and gcd") {
    CHECK(floor_div(Int(-7), Int(2)) == Int(-4));
    CHECK(floor_mod(Int(-7), Int(2)) == Int(1));
    CHECK(trunc_div(Int(-7), Int(2)) == Int(-3));
    CHECK(gcd(Int(-12), Int(18)) == Int(6));
    CHECK(lcm(Int(4), Int(6)) == Int(12));
    std::mt19937_64 rng(3);
    for (int i = 0; i < 500; ++i) {
      const Int a(static_cast<long long>(rng() % 2000001) - 1000000);
      const Int b(static_cast<long long>(rng() % 2001) - 1000);
      auto [g, s, t] = xgcd(a, b);
      CHECK(g == gcd(a, b));
      CHECK(s * a + t * b == g);
    }
    const Int huge = Int::from_string("-340282366920938463463374607431768211457");
    auto [g, s, t] = xgcd(huge, Int(1000003));
    CHECK(s * huge + t * Int(1000003) == g);
    CHECK(huge.mod_u64(97) == static_cast<std::uint64_t>(floor_mod(huge, Int(97)).to_int64()));
  }
}

TEST_SUITE("hnf") {
  TEST_CASE("identity maps to itself") {
    const auto id = SparseIntMatrix::identity(4);
    const auto f = hnf(id);
    CHECK(f.h == id);
    CHECK(f.u == id);
  }

  TEST_CASE("2x2 example reduces to pivots 2 and 4") {
    const auto m = mat({{2, 4}, {6, 8}});
    const auto f = hnf(m);
    CHECK(f.h == mat({{2, 0}, {0, 4}}));
    CHECK(f.u * m == f.h);
    CHECK(abs(bareiss_det(f.u.to_dense())) == Int(1));
  }

  TEST_CASE("zero matrix gives zero and identity") {
    const SparseIntMatrix z(3, 2);
    const auto f = hnf(z);
    CHECK(f.h == z);
    CHECK(f.u == SparseIntMatrix::identity(3));
  }

  TEST_CASE("random inputs: H = U M, U unimodular, rows in Hermite shape") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 200; ++it) {
      const auto m = SparseIntMatrix::from_dense(random_instance(rng));
      const auto f = hnf(m);
      REQUIRE(f.u * m == f.h);
      CHECK(abs(bareiss_det(f.u.to_dense())) == Int(1));
      const auto h = f.h.to_dense();
      std::size_t last_pivot = 0;
      bool zero_seen = false;
      for (std::size_t i = 0; i < h.size(); ++i) {
        std::size_t p = 0;
        while (p < h[i].size() && h[i][p].is_zero()) ++p;
        if (p == h[i].size()) {
          zero_seen = true;
          continue;
        }
        CHECK_FALSE(zero_seen);
        if (i > 0) CHECK(p > last_pivot);
        last_pivot = p;
        CHECK(h[i][p].sign() > 0);
        for (std::size_t r = 0; r < i; ++r) {
          CHECK(h[r][p].sign() >= 0);
          CHECK(h[r][p] < h[i][p]);
        }
      }
    }
  }
}

TEST_SUITE("snf") {
  TEST_CASE("worked examples") {
    CHECK(snf(mat({{2, 4}, {6, 8}})).diagonal == ints({2, 4}));
    CHECK(snf(mat({{1}})).diagonal == ints({1}));
    CHECK(snf(mat({{6, 0}, {0, 10}})).diagonal == ints({2, 30}));
  }

  TEST_CASE("witnesses reproduce the diagonal") {
    const auto m = mat({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
    const auto f = snf(m);
    CHECK(f.diagonal == ints({2, 6, 12}));
    CHECK(f.u * m * f.v == SparseIntMatrix::diagonal(f.diagonal, 3, 3));
    CHECK(abs(bareiss_det(f.u.to_dense())) == Int(1));
    CHECK(abs(bareiss_det(f.v.to_dense())) == Int(1));
  }

  TEST_CASE("1000 random matrices agree with the textbook oracle") {
    std::mt19937_64 rng(2024);
    int minors_checked = 0;
    for (int it = 0; it < 1000; ++it) {
      const auto dense = random_instance(rng);
      const auto m = SparseIntMatrix::from_dense(dense);
      const auto oracle = nonzero(textbook_snf(dense));
      const auto f = snf(m);
      REQUIRE(nonzero(f.diagonal) == oracle);
      CHECK(f.u * m * f.v == SparseIntMatrix::diagonal(f.diagonal, m.rows(), m.cols()));
      const auto inv = smith_invariants(m);
      CHECK(inv.nonzero == oracle);
      CHECK(inv.rank == oracle.size());
      // Intermediate swell stays modest for entries of at most 3 bits.
      CHECK(inv.max_bits <= 256);
      for (const std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL}) {
        std::size_t expected = 0;
        for (const auto& d : oracle) {
          if (d.mod_u64(p) != 0) ++expected;
        }
        CHECK(rank_mod_p(m, p) == expected);
      }
      for (const unsigned e : {1U, 3U}) {
        std::vector<unsigned> expected;
        for (const auto& d : oracle) {
          unsigned v = 0;
          Int x = d;
          while (v < e && x.divisible_by(Int(2))) {
            x = divexact(x, Int(2));
            ++v;
          }
          if (v < e) expected.push_back(v);
        }
        std::sort(expected.begin(), expected.end());
        CHECK(invariants_mod_prime_power(m, 2, e) == expected);
      }
      if (m.rows() <= 8 && m.cols() <= 8 && minors_checked < 150) {
        ++minors_checked;
        Int prod{1};
        for (std::size_t k = 1; k <= oracle.size(); ++k) {
          prod *= oracle[k - 1];
          CHECK(determinantal_divisor(dense, k) == prod);
        }
      }
    }
  }

  TEST_CASE("sparse elimination on a large banded matrix") {
    // Bidiagonal 1 - g blocks of a cyclic group of order 7 summed: rank 6 per block.
    const std::size_t n = 700;
    std::vector<SparseVec> cols(n);
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t block = j / 7;
      const std::size_t next = block * 7 + (j + 1) % 7;
      cols[j] = make_sparse({{static_cast<std::uint32_t>(j), Int(1)}, {static_cast<std::uint32_t>(next), Int(-1)}});
    }
    const auto m = SparseIntMatrix::from_columns(n, cols);
    const auto inv = smith_invariants(m);
    CHECK(inv.rank == 600);
    CHECK(std::all_of(inv.nonzero.begin(), inv.nonzero.end(), [](const Int& d) { return d.is_one(); }));
    CHECK(inv.unit_pivots == 600);
    CHECK(cokernel_invariants(m).str() == "Z^100");
  }

  TEST_CASE("deterministic across repeated runs") {
    std::mt19937_64 rng(5);
    for (int it = 0; it < 50; ++it) {
      const auto m = SparseIntMatrix::from_dense(random_instance(rng));
      const auto a = snf(m);
      const auto b = snf(m);
      CHECK(a.u == b.u);
      CHECK(a.v == b.v);
      CHECK(hnf(m).u == hnf(m).u);
      CHECK(kernel_basis(m) == kernel_basis(m));
    }
  }
}

TEST_SUITE("kernel_and_solve") {
  TEST_CASE("kernel examples") {
    CHECK(kernel_basis(mat({{1, 1}, {1, 1}})) == std::vector<SparseVec>{vec({1, -1})});
    CHECK(kernel_basis(mat({{1, 0}, {0, 2}, {3, 3}})).empty());
    const auto k = kernel_basis(SparseIntMatrix(2, 3));
    CHECK(k == std::vector<SparseVec>{vec({1, 0, 0}), vec({0, 1, 0}), vec({0, 0, 1})});
  }

  TEST_CASE("random kernels: MK = 0 and rank + nullity = cols") {
    std::mt19937_64 rng(99);
    for (int it = 0; it < 300; ++it) {
      const auto m = SparseIntMatrix::from_dense(random_instance(rng));
      const auto k = kernel_basis(m);
      for (const auto& v : k) CHECK(m.apply(v).empty());
      CHECK(smith_invariants(m).rank + k.size() == m.cols());
      // Saturation: the kernel lattice is a direct summand, so its basis
      // has trivial cokernel torsion.
      if (!k.empty()) {
        const auto km = SparseIntMatrix::from_columns(m.cols(), k);
        const auto inv = smith_invariants(km);
        CHECK(std::all_of(inv.nonzero.begin(), inv.nonzero.end(), [](const Int& d) { return d.is_one(); }));
      }
    }
  }

  TEST_CASE("solve examples") {
    CHECK(solve(SparseIntMatrix::identity(2), vec({3, -1})) == vec({3, -1}));
    CHECK_FALSE(solve(mat({{2}}), vec({1})).has_value());
    CHECK(solve(mat({{2}}), vec({6})) == vec({3}));
    CHECK_THROWS_AS(solve(mat({{2}}), vec({0, 1})), std::invalid_argument);
  }

  TEST_CASE("random solves reproduce the right-hand side") {
    std::mt19937_64 rng(1234);
    for (int it = 0; it < 300; ++it) {
      const auto dense = random_instance(rng);
      const auto m = SparseIntMatrix::from_dense(dense);
      std::vector<Int> x(m.cols());
      for (auto& v : x) v = static_cast<int>(rng() % 9) - 4;
      const auto b = m.apply(from_dense(x));
      const LinearSolver solver(m);
      const auto sol = solver.solve(b);
      REQUIRE(sol.has_value());
      CHECK(m.apply(*sol) == b);
      // A surjective matrix must hit every unit vector.
      const auto coker = cokernel_invariants(m);
      if (coker.is_trivial()) CHECK(solver.solve(vec({1})).has_value());
    }
  }

  TEST_CASE("cokernel examples") {
    CHECK(cokernel_invariants(mat({{2}})).str() == "Z/2");
    CHECK(cokernel_invariants(SparseIntMatrix::identity(5)).is_trivial());
    CHECK(cokernel_invariants(mat({{2, 0}, {0, 0}})).str() == "Z x Z/2");
  }
}

TEST_SUITE("modular") {
  TEST_CASE("reduction and rank examples") {
    const auto m = mat({{2, 4}, {6, 8}});
    CHECK(mod_m_reduce(m, Int(2)).is_zero());
    CHECK(rank_mod_p(m, 2) == 0);
    CHECK(rank_mod_p(SparseIntMatrix::identity(6), 5) == 6);
    CHECK(rank_mod_p(mat({{1, 1}, {1, 1}}), 2) == 1);
    CHECK(mod_m_reduce(mat({{-1, 5}}), Int(4)) == mat({{3, 1}}));
    CHECK_THROWS(mod_m_reduce(m, Int(1)));
  }

  TEST_CASE("Z/4 invariant exponents") {
    CHECK(invariants_mod_prime_power(mat({{2, 0}, {0, 1}}), 2, 2) == std::vector<unsigned>{0, 1});
    CHECK(invariants_mod_prime_power(mat({{4}}), 2, 2).empty());
  }

  TEST_CASE("verification primes are deterministic and prime") {
    const auto a = verification_primes(3, 42);
    CHECK(a == verification_primes(3, 42));
    for (auto p : a) {
      CHECK(is_prime_u64(p));
      CHECK(p >= (1ULL << 30));
    }
    CHECK(is_prime_u64(2147483647ULL));
    CHECK_FALSE(is_prime_u64(2147483649ULL));
  }
}

TEST_SUITE("subquotient") {
  TEST_CASE("Z^2 modulo (2,0),(0,3) is cyclic of order 6") {
    const Subquotient q(2, {vec({1, 0}), vec({0, 1})}, {vec({2, 0}), vec({0, 3})});
    CHECK(q.invariants().str() == "Z/6");
    REQUIRE(q.orders().size() == 1);
    const auto g = q.generators()[0];
    // The generator has order exactly 6.
    for (int k = 1; k < 6; ++k) {
      SparseVec kg = g;
      scale(kg, Int(k));
      CHECK_FALSE(q.in_denominator(kg));
    }
    SparseVec six = g;
    scale(six, Int(6));
    CHECK(q.in_denominator(six));
    // classify and element are inverse up to the denominator.
    for (long a = -3; a <= 3; ++a) {
      for (long b = -3; b <= 3; ++b) {
        const auto x = vec({a, b});
        const auto c = q.classify(x);
        SparseVec diff = q.element(c);
        SparseVec scratch;
        axmy(diff, Int(1), x, scratch);
        CHECK(q.in_denominator(diff));
      }
    }
  }

  TEST_CASE("free and torsion parts together") {
    const Subquotient q(3, {vec({2, 0, 0}), vec({0, 1, 0}), vec({0, 0, 1})}, {vec({4, 0, 0})});
    CHECK(q.invariants().str() == "Z^2 x Z/2");
    CHECK(q.orders().back().is_zero());
    CHECK_THROWS_AS((void)q.classify(vec({1, 0, 0})), std::invalid_argument);
    CHECK_THROWS_AS(Subquotient(2, {vec({2, 0})}, {vec({1, 0})}), std::invalid_argument);
  }

  TEST_CASE("trivial quotient") {
    const Subquotient q(2, {vec({1, 1})}, {vec({-1, -1})});
    CHECK(q.invariants().is_trivial());
    CHECK(q.classify(vec({5, 5})).empty());
  }
}

TEST_SUITE("echelon") {
  TEST_CASE("relations form a basis of the relation lattice") {
    std::mt19937_64 rng(77);
    for (int it = 0; it < 200; ++it) {
      const auto m = SparseIntMatrix::from_dense(random_instance(rng));
      LatticeEchelon ech(m.rows(), true);
      std::vector<SparseVec> rel;
      for (std::size_t j = 0; j < m.cols(); ++j) {
        auto r = ech.insert(m.column(j), SparseVec{{static_cast<std::uint32_t>(j), Int(1)}});
        if (r.dependent) rel.push_back(r.relation);
      }
      for (const auto& r : rel) CHECK(m.apply(r).empty());
      CHECK(ech.rank() + rel.size() == m.cols());
      for (std::size_t j = 0; j < m.cols(); ++j) CHECK(ech.contains(m.column(j)));
      // Tags express basis rows as combinations of the columns.
      const auto basis = ech.basis();
      const auto tags = ech.basis_tags();
      for (std::size_t k = 0; k < basis.size(); ++k) CHECK(m.apply(tags[k]) == basis[k]);
    }
  }
}

TEST_SUITE("pivoted_echelon") {
  TEST_CASE("same lattice, membership and relations as the leading-column echelon") {
    std::mt19937_64 rng(78);
    std::uniform_int_distribution<int> small(-3, 3);
    for (int it = 0; it < 300; ++it) {
      const auto m = SparseIntMatrix::from_dense(random_instance(rng));
      LatticeEchelon ref(m.rows());
      PivotedEchelon piv(m.rows(), true);
      std::vector<SparseVec> rel;
      for (std::size_t j = 0; j < m.cols(); ++j) {
        ref.insert(m.column(j));
        auto r = piv.insert(m.column(j), SparseVec{{static_cast<std::uint32_t>(j), Int(1)}});
        if (r.dependent) rel.push_back(r.relation);
      }
      CHECK(piv.rank() == ref.rank());
      CHECK(piv.rank() + rel.size() == m.cols());
      for (const auto& r : rel) CHECK(m.apply(r).empty());
      // The relations span the whole integer kernel.
      LatticeEchelon rel_span(m.cols());
      for (const auto& r : rel) rel_span.insert(r);
      for (const auto& k : kernel_basis(m)) CHECK(rel_span.contains(k));
      // Membership agrees on lattice points, their halves and random vectors.
      for (int probe = 0; probe < 6; ++probe) {
        std::vector<Int> x(m.cols());
        for (auto& c : x) c = Int(small(rng));
        auto y = from_dense(m.apply_dense(x));
        CHECK(piv.contains(y));
        const auto sol = piv.solve(y);
        REQUIRE(sol.has_value());
        CHECK(m.apply(*sol) == y);
        std::vector<Int> z(m.rows());
        for (auto& c : z) c = Int(small(rng));
        const auto w = from_dense(z);
        CHECK(piv.contains(w) == ref.contains(w));
        if (!y.empty() && y.front().value == Int(1)) {
          // y + e_first is inside exactly when e_first is.
          auto shifted = y;
          shifted.front().value = Int(2);
          CHECK(piv.contains(shifted) == ref.contains(shifted));
        }
      }
    }
  }

  TEST_CASE("non-unit pivots fall back to gcd exchanges") {
    PivotedEchelon e(2, true);
    e.insert(SparseVec{{0, Int(4)}, {1, Int(6)}}, SparseVec{{0, Int(1)}});
    const auto r = e.insert(SparseVec{{0, Int(6)}, {1, Int(9)}}, SparseVec{{1, Int(1)}});
    CHECK(e.exchanges() >= 1);
    CHECK(e.contains(SparseVec{{0, Int(2)}, {1, Int(3)}}));
    CHECK_FALSE(e.contains(SparseVec{{0, Int(1)}, {1, Int(3)}}));
    CHECK(r.grew);
    CHECK(r.dependent);
    // 3*(4,6) - 2*(6,9) = 0
    CHECK((r.relation == SparseVec{{0, Int(3)}, {1, Int(-2)}} || r.relation == SparseVec{{0, Int(-3)}, {1, Int(2)}}));
  }
}

TEST_SUITE("serialization") {
  TEST_CASE("triplet text and JSON round-trip") {
    auto m = mat({{0, -3, 0}, {7, 0, 0}});
    m.set(1, 2, Int::from_string("-98765432109876543210"));
    const auto text = m.to_triplet_text();
    CHECK(text.rfind("2 3 3", 0) == 0);
    CHECK(SparseIntMatrix::from_triplet_text(text) == m);
    CHECK(SparseIntMatrix::from_json(m.to_json()) == m);
    CHECK_THROWS(SparseIntMatrix::from_triplet_text("2 2 1\n5 0 1\n"));
  }
}
