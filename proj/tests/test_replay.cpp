#include <doctest.h>

#include <filesystem>
#include <functional>
#include <random>

#include "permcohom/replay/certificate.hpp"
#include "permcohom/replay/scenarios.hpp"

using namespace pcoh;
using namespace pcoh::replay;
using nlohmann::json;
using abelian::AbelianInvariants;

namespace {

AbelianInvariants G(const char* s) { return AbelianInvariants::parse(s); }

cohomology::ResolutionSource& shared_source() {
  static cohomology::ResolutionSource src;
  return src;
}

ReplayOptions shared() {
  ReplayOptions o;
  o.source = &shared_source();
  return o;
}

// Every node of a certificate JSON, nested certificates included.
void each_node(const json& cert, const std::function<void(const json&)>& f) {
  for (const auto& n : cert.at("nodes")) {
    f(n);
    if (n.at("kind") == "COMPUTED" && n.at("evidence").at("result").contains("certificate")) {
      each_node(n.at("evidence").at("result").at("certificate"), f);
    }
  }
}

std::size_t cited_count(const json& cert) {
  std::size_t k = 0;
  each_node(cert, [&](const json& n) {
    if (n.at("kind") == "CITED") {
      ++k;
      CHECK_FALSE(n.at("evidence").at("quote").get<std::string>().empty());
      CHECK_FALSE(n.at("evidence").at("reference").get<std::string>().empty());
    }
  });
  return k;
}

// No computed cohomology record in degree >= 4 for S6, S7 or S8 outside a
// stretch-tier table row.
void check_no_large_symmetric_values(const json& cert) {
  each_node(cert, [](const json& n) {
    if (n.at("kind") != "COMPUTED") return;
    const auto& r = n.at("evidence").at("result");
    if (r.contains("cohomology")) {
      const auto order = r.at("cohomology").at("group_order").get<std::size_t>();
      const auto degree = r.at("cohomology").at("degree").get<std::size_t>();
      CHECK_FALSE((degree >= 4 && (order == 720 || order == 5040 || order == 40320)));
    }
    if (r.contains("tier") && r.contains("group") && r.at("group").at("order").get<std::size_t>() >= 720) {
      CHECK(r.at("tier") == "stretch");
    }
  });
}

Certificate small_certificate() {
  Certificate c("unit");
  c.set_input("x", 1);
  c.add_computed("a", "a holds", json{{"value", 1}}, Status::pass);
  c.add_computed("b", "b holds", json{{"value", 2}}, Status::pass);
  c.add_cited("c", "c is known", Citation{"somewhere", "exact words"});
  c.conclude("d", "d follows", {"a", "b", "c"});
  return c;
}

std::filesystem::path fresh_dir() {
  std::random_device rd;
  auto p = std::filesystem::temp_directory_path() / ("pcoh-replay-" + std::to_string(rd()));
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_SUITE("certificate") {
  TEST_CASE("verdict from node statuses") {
    auto c = small_certificate();
    CHECK(c.verdict() == Status::pass);
    CHECK(c.problems().empty());
    CHECK(c.edges().size() == 3);

    Certificate f("unit");
    f.add_computed("a", "a", json{{"v", 1}}, Status::pass);
    f.add_computed("b", "b", json{{"v", 2}}, Status::fail, "wrong value");
    f.conclude("d", "d", {"a", "b"});
    CHECK(f.verdict() == Status::fail);
    CHECK(f.status_of("d") == Status::fail);
    CHECK(f.failing_nodes() == std::vector<std::string>{"b", "d"});

    Certificate p("unit");
    p.add_computed("a", "a", json{{"v", 1}}, Status::partial, "budget");
    p.add_computed("b", "b", json{{"v", 2}}, Status::pass);
    p.conclude("d", "d", {"a", "b"});
    CHECK(p.status_of("d") == Status::partial);
    CHECK(p.verdict() == Status::partial);

    Certificate q("unit");
    q.add_computed("a", "a", json{{"v", 1}}, Status::pass);
    q.conclude("d", "d", {"a"}, false);
    CHECK(q.verdict() == Status::fail);
  }

  TEST_CASE("structural checks") {
    auto c = small_certificate();
    CHECK_THROWS_AS(c.add_computed("a", "again", json{}, Status::pass), std::invalid_argument);
    CHECK_THROWS_AS(c.depends("a", "zzz"), std::invalid_argument);

    c.depends("a", "d");  // d already depends on a
    CHECK(c.verdict() == Status::fail);
    bool cycle = false;
    for (const auto& p : c.problems()) cycle = cycle || p.find("cycle") != std::string::npos;
    CHECK(cycle);

    Certificate e("unit");
    e.add_cited("c", "c", Citation{"somewhere", ""});
    CHECK(e.verdict() == Status::fail);
  }

  TEST_CASE("JSON round trip and hash") {
    auto c = small_certificate();
    c.set_seconds("a", 1.5);
    const auto j = c.to_json();
    CHECK(j.at("verdict") == "PASS");
    CHECK(j.at("hash") == c.hash());
    const auto back = Certificate::from_json(j);
    CHECK(back.to_json().dump() == j.dump());
    CHECK(back.hash() == c.hash());

    // Timings are not hashed.
    auto d = small_certificate();
    d.set_seconds("a", 99.0);
    CHECK(d.hash() == c.hash());

    // Any content change moves the hash and is caught on load.
    auto tampered = j;
    tampered["nodes"][0]["evidence"]["result"]["value"] = 7;
    CHECK_THROWS_AS((void)Certificate::from_json(tampered), std::invalid_argument);
    tampered.erase("hash");
    const auto loaded = Certificate::from_json(tampered);
    CHECK(loaded.verdict() == Status::fail);

    CHECK_THROWS_AS((void)Certificate::from_json(json{{"schema", "other"}}), std::invalid_argument);
  }

  TEST_CASE("embedded certificates carry their verdict") {
    Certificate outer("outer");
    outer.add_certificate("sub", "sub holds", small_certificate());
    CHECK(outer.verdict() == Status::pass);

    Certificate bad("inner");
    bad.add_computed("x", "x", json{{"v", 0}}, Status::fail);
    outer.add_certificate("sub2", "sub2 holds", bad);
    CHECK(outer.verdict() == Status::fail);
    CHECK(outer.find("sub2")->note.find("x") != std::string::npos);
    const auto back = Certificate::from_json(outer.to_json());
    CHECK(back.hash() == outer.hash());
  }

  TEST_CASE("citation table") {
    const auto keys = citation_keys();
    CHECK(keys.size() >= 7);
    for (const auto& k : keys) {
      CAPTURE(k);
      CHECK_FALSE(citation(k).quote.empty());
      CHECK_FALSE(citation(k).reference.empty());
    }
    CHECK_THROWS_AS((void)citation("no-such-key"), std::out_of_range);
  }

  TEST_CASE("text rendering lists every node") {
    const auto c = small_certificate();
    const auto text = c.render_text();
    for (const auto* id : {"a", "b", "c", "d"}) CHECK(text.find(std::string(" ") + id + " ") != std::string::npos);
    CHECK(text.find("exact words") != std::string::npos);
    CHECK(text.find("verdict PASS") != std::string::npos);
    // Dependencies are listed before dependents.
    CHECK(text.find(" a ") < text.find(" d "));
  }
}

TEST_SUITE("lemma-s4") {
  TEST_CASE("default run passes with image Z/2") {
    const auto c = replay_lemma_s4(shared());
    CHECK(c.verdict() == Status::pass);
    const auto& r = c.find("s4.restriction")->result;
    CHECK(r.at("map").at("image").at("text") == "Z/2");
    CHECK(r.at("map").at("injective") == true);
    CHECK(r.at("map").at("backend") == "both");
    CHECK(c.find("s4.h5")->result.at("cohomology").at("invariants").at("text") == "Z/2");
    CHECK(c.status_of("s4.injective") == Status::pass);
    check_no_large_symmetric_values(c.to_json());
  }

  TEST_CASE("fault-injected boundary fails at the resolution node") {
    auto o = shared();
    o.corrupt = {"S4"};
    const auto c = replay_lemma_s4(o);
    CHECK(c.verdict() == Status::fail);
    CHECK(c.status_of("s4.resolution") == Status::fail);
    CHECK_FALSE(c.find("s4.resolution")->note.empty());
    const auto failing = c.failing_nodes();
    REQUIRE_FALSE(failing.empty());
    CHECK(failing.front() == "s4.resolution");
    CHECK(c.status_of("s4.injective") == Status::fail);
    // The clean run is unaffected afterwards.
    CHECK(replay_lemma_s4(shared()).verdict() == Status::pass);
  }

  TEST_CASE("rerun from cache gives the same certificate hash") {
    const auto dir = fresh_dir();
    cohomology::ResolutionSource first{resolution::ResolutionCache(dir)};
    ReplayOptions a;
    a.source = &first;
    const auto c1 = replay_lemma_s4(a);
    cohomology::ResolutionSource second{resolution::ResolutionCache(dir)};
    ReplayOptions b;
    b.source = &second;
    const auto c2 = replay_lemma_s4(b);
    CHECK(second.cache_hits() > 0);
    CHECK(c1.hash() == c2.hash());
    CHECK(c1.hash() == replay_lemma_s4().hash());
    std::filesystem::remove_all(dir);
  }
}

TEST_SUITE("lemma-s8") {
  TEST_CASE("budget-limited run is partial with the cheap checks done") {
    auto o = shared();
    o.budget_seconds = 0.01;
    const auto c = replay_lemma_s8(o);
    CHECK(c.verdict() == Status::partial);
    CHECK(c.status_of("k.resolution") == Status::partial);
    CHECK(c.status_of("k.h5") == Status::partial);
    CHECK(c.status_of("s8.res_l") == Status::partial);

    CHECK(c.status_of("k.f2_dims") == Status::pass);
    const auto& dims = c.find("k.f2_dims")->result;
    CHECK(dims.at("K").at("cochain_dims").size() == 7);
    CHECK(dims.at("K").at("cohomology_dims").size() == 6);
    CHECK(dims.at("K").at("cohomology_dims").at(0) == 1);
    // H^1(K, F2) = Hom(K, F2); K/[K,K] is (Z/2)^2.
    CHECK(dims.at("K").at("cohomology_dims").at(1) == 2);
    // Over F2, D8 has Poincare series 1/(1-t)^2, so D8 x D8 has 1/(1-t)^4:
    // binomial(n+3, 3).
    CHECK(dims.at("L").at("cohomology_dims") == json::array({1, 4, 10, 20, 35, 56}));

    CHECK(c.status_of("l.kuenneth") == Status::pass);
    CHECK(c.status_of("s4.transfer") == Status::pass);
    CHECK(c.find("s4.transfer")->result.at("index") == 3);

    // Group facts.
    CHECK(c.find("k.group")->result.at("same_element_set") == true);
    CHECK(c.find("k.index")->result.at("odd") == true);
    CHECK(c.find("k.index")->result.at("index").get<std::size_t>() * c.find("k.group")->result.at("order").get<std::size_t>() == 40320);
    CHECK(c.find("l.group")->result.at("order") == 64);
    CHECK(c.find("s8.h4")->kind == NodeKind::cited);
    CHECK(c.find("odd_index")->kind == NodeKind::cited);
    CHECK(c.inputs().at("K_presentations").size() == 2);
    CHECK(cited_count(c.to_json()) == 2);
    check_no_large_symmetric_values(c.to_json());
  }
}

TEST_SUITE("h4-table") {
  TEST_CASE("small tables") {
    const auto t2 = replay_h4_table(2, shared());
    REQUIRE(t2.rows.size() == 1);
    CHECK(t2.rows[0].computed == G("0"));
    CHECK(t2.certificate.verdict() == Status::pass);

    const auto t4 = replay_h4_table(4, shared());
    REQUIRE(t4.rows.size() == 3);
    CHECK(t4.rows[0].computed == G("0"));
    CHECK(t4.rows[1].computed == G("0"));
    CHECK(t4.rows[2].computed == G("Z/2"));
    CHECK(t4.certificate.verdict() == Status::pass);

    const auto t5 = replay_h4_table(5, shared());
    REQUIRE(t5.rows.size() == 4);
    CHECK(t5.rows[3].computed == G("Z/2"));
    CHECK_FALSE(t5.rows[3].stretch);
    CHECK(t5.to_json().at("rows").size() == 4);
  }

  TEST_CASE("range is checked") {
    CHECK_THROWS_AS((void)replay_h4_table(1), std::invalid_argument);
    CHECK_THROWS_AS((void)replay_h4_table(7), std::invalid_argument);
  }

  TEST_CASE("stretch row honours the budget") {
    auto o = shared();
    o.budget_seconds = 0.01;
    const auto t = replay_h4_table(6, o);
    REQUIRE(t.rows.size() == 5);
    CHECK(t.rows[4].stretch);
    CHECK(t.rows[4].status == Status::partial);
    CHECK_FALSE(t.rows[4].computed.has_value());
    CHECK(t.certificate.verdict() == Status::partial);
    for (std::size_t i = 0; i < 4; ++i) CHECK(t.rows[i].status == Status::pass);
  }
}

TEST_SUITE("prop-inv") {
  TEST_CASE("n = 3 agrees with A/2A") {
    const auto z2 = replay_prop_inv(3, G("Z/2"), shared());
    CHECK(z2.shapiro.permutation_side == G("Z/2"));
    CHECK(z2.shapiro.stabiliser_side == G("Z/2"));
    CHECK(z2.uct_reading == G("Z/2"));
    CHECK(z2.matches_clause);
    CHECK(z2.certificate.verdict() == Status::pass);

    const auto z3 = replay_prop_inv(3, G("Z/3"), shared());
    CHECK(z3.shapiro.permutation_side == G("0"));
    CHECK(z3.uct_reading == G("0"));
    CHECK(z3.matches_clause);
    CHECK(z3.certificate.verdict() == Status::pass);
  }

  TEST_CASE("n = 4 reports both readings") {
    const auto r = replay_prop_inv(4, G("Z/2"), shared());
    CHECK(r.shapiro.shapiro_holds);
    CHECK(r.clause_reading == G("Z/2 x Z/2"));
    CHECK(r.uct_reading == r.shapiro.stabiliser_side);
    CHECK(r.matches_uct);
    CHECK(r.matches_clause == (r.shapiro.permutation_side == G("Z/2 x Z/2")));
    CHECK_FALSE(r.adjudication.empty());
    const auto& node = r.certificate.find("readings")->result;
    CHECK(node.at("closed_form") == "Z/2 x Z/2");
    CHECK(node.contains("adjudication"));
    CHECK(r.to_json().contains("certificate"));
  }

  TEST_CASE("n = 5 readings coincide") {
    // H_1(S4) = H_2(S4) = Z/2, so Ext and Hom both contribute A/2A and A[2].
    const auto r = replay_prop_inv(5, G("Z/4"), shared());
    CHECK(r.matches_uct);
    CHECK(r.matches_clause);
    CHECK(r.shapiro.permutation_side == G("Z/2 x Z/2"));
  }

  TEST_CASE("n outside 3..5 is rejected") {
    CHECK_THROWS_AS((void)replay_prop_inv(2, G("Z/2")), std::invalid_argument);
    CHECK_THROWS_AS((void)replay_prop_inv(6, G("Z/2")), std::invalid_argument);
  }
}

TEST_SUITE("theorem-main") {
  TEST_CASE("budget-limited run is partial and round-trips") {
    auto o = shared();
    o.budget_seconds = 0.01;
    const auto c = replay_theorem_main(o);
    CHECK(c.verdict() == Status::partial);
    CHECK(c.status_of("lemma_s4") == Status::pass);
    CHECK(c.status_of("lemma_s8") == Status::partial);
    CHECK(c.status_of("s2.h5") == Status::pass);
    CHECK(c.status_of("nakaoka.k1") == Status::pass);
    CHECK(c.status_of("nakaoka.k2") == Status::pass);
    CHECK(c.find("nakaoka.k4")->kind == NodeKind::cited);
    CHECK(c.status_of("theorem") == Status::partial);

    const auto j = c.to_json();
    CHECK(Certificate::from_json(j).to_json().dump() == j.dump());
    // Five cited here, two inside lemma-s8.
    CHECK(cited_count(j) == 7);
    check_no_large_symmetric_values(j);
  }

  TEST_CASE("a failing lemma-s4 fails the theorem") {
    auto o = shared();
    o.budget_seconds = 0.01;
    o.corrupt = {"S4"};
    const auto c = replay_theorem_main(o);
    CHECK(c.status_of("lemma_s4") == Status::fail);
    CHECK(c.status_of("theorem") == Status::fail);
    CHECK(c.verdict() == Status::fail);
  }

  TEST_CASE("Nakaoka checks reject n below 2k") {
    CHECK_THROWS_AS((void)nakaoka_check(shared_source(), 2, 3), std::invalid_argument);
    const auto c = nakaoka_check(shared_source(), 1, 4);
    CHECK(c.holds());
    CHECK(c.source == G("Z/2"));
  }
}
