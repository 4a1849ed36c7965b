#include "permcohom/cli/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <unistd.h>

#include <CLI11.hpp>

#include "permcohom/cohomology/cohomology.hpp"
#include "permcohom/digest.hpp"
#include "permcohom/errors.hpp"
#include "permcohom/perm/named.hpp"
#include "permcohom/replay/scenarios.hpp"
#include "permcohom/resolution/resolution.hpp"
#include "permcohom/version.hpp"

namespace pcoh::cli {

using abelian::AbelianInvariants;
using cohomology::CoeffModule;
using cohomology::ResolutionSource;
using nlohmann::json;
using perm::PermGroup;

std::filesystem::path default_cache_dir() {
  if (const char* v = std::getenv(kCacheEnv); v != nullptr && *v != '\0') return v;
  if (const char* v = std::getenv("XDG_CACHE_HOME"); v != nullptr && *v != '\0') return std::filesystem::path(v) / "permcohom";
  if (const char* v = std::getenv("HOME"); v != nullptr && *v != '\0') return std::filesystem::path(v) / ".cache" / "permcohom";
  return std::filesystem::temp_directory_path() / "permcohom-cache";
}

void RunConfig::validate() const {
  if (!(budget_seconds > 0)) throw std::invalid_argument("budget must be positive");
  if (element_cap == 0 || rank_cap == 0) throw std::invalid_argument("caps must be positive");
  if (backend != "ambient" && backend != "chainmap" && backend != "both") {
    throw std::invalid_argument("backend must be ambient, chainmap or both");
  }
  if (use_cache) {
    std::error_code ec;
    std::filesystem::create_directories(cache_dir, ec);
    if (ec || ::access(cache_dir.c_str(), W_OK) != 0) {
      throw std::invalid_argument("cache directory " + cache_dir.string() + " is not writable");
    }
  }
}

json RunConfig::to_json() const {
  return {{"cache_dir", use_cache ? json(cache_dir.string()) : json(nullptr)},
          {"budget_seconds", budget_seconds},
          {"element_cap", element_cap},
          {"rank_cap", rank_cap},
          {"backend", backend},
          {"format", format == OutputFormat::json ? "json" : "text"},
          {"seed_lock", seed_lock}};
}

namespace {

// "Z", "Z/m", "F2", "Fp", "GF(p)".
CoeffModule parse_coefficients(const PermGroup& g, const std::string& text) {
  if (text == "Z") return CoeffModule::integers(g);
  std::string digits;
  if (text.rfind("Z/", 0) == 0) {
    digits = text.substr(2);
  } else if (text.size() > 1 && text[0] == 'F') {
    digits = text.substr(1);
  } else if (text.rfind("GF(", 0) == 0 && text.back() == ')') {
    digits = text.substr(3, text.size() - 4);
  }
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
    throw std::invalid_argument("coefficients must be Z, Z/m or Fp, got '" + text + "'");
  }
  return CoeffModule::mod(g, std::stol(digits));
}

// HAP prints invariants as a list with 0 for each free factor.
std::string hap_list(const AbelianInvariants& a) {
  std::string s = "[ ";
  bool first = true;
  for (std::size_t i = 0; i < a.free_rank(); ++i) {
    s += first ? "0" : ", 0";
    first = false;
  }
  for (const auto& d : a.torsion()) {
    s += (first ? "" : ", ") + d.str();
    first = false;
  }
  return s + (first ? "]" : " ]");
}

struct Outcome {
  int code = exit_code::ok;
  json result = json::object();
  std::string text;
};

class Session {
 public:
  RunConfig cfg;
  json inputs = json::object();

  ResolutionSource& source() {
    if (!src_) {
      resolution::BuildOptions o;
      o.rank_cap = cfg.rank_cap;
      std::optional<resolution::ResolutionCache> cache;
      if (cfg.use_cache) cache.emplace(cfg.cache_dir);
      src_.emplace(std::move(cache), o);
    }
    return *src_;
  }

  // Deadline for a plain command; replay budgets its own steps.
  void arm_deadline() {
    auto o = source().options();
    o.deadline = std::chrono::steady_clock::now() + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                                        std::chrono::duration<double>(cfg.budget_seconds));
    source().set_options(o);
  }

  PermGroup group(const std::string& key, const std::string& text) {
    auto g = perm::named_group(text, cfg.element_cap);
    inputs[key] = {{"text", text}, {"generators", g.describe()}, {"order", g.order()}, {"fingerprint", g.fingerprint()}};
    return g;
  }

 private:
  std::optional<ResolutionSource> src_;
};

Outcome cmd_resolve(Session& s, const std::string& group_text, std::size_t degree) {
  if (degree == 0) throw std::invalid_argument("degree must be at least 1");
  const auto g = s.group("group", group_text);
  s.inputs["degree"] = degree;
  resolution::BuildOptions o;
  o.rank_cap = s.cfg.rank_cap;
  o.deadline = std::chrono::steady_clock::now() +
               std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(s.cfg.budget_seconds));
  std::optional<resolution::ResolutionCache> cache;
  if (s.cfg.use_cache) cache.emplace(s.cfg.cache_dir);
  std::optional<resolution::FreeResolution> r;
  bool hit = false;
  resolution::BuildTelemetry tel;
  if (cache) {
    r = cache->load(g, degree);
    hit = r.has_value();
  }
  if (!r) {
    r = resolution::build_resolution(g, degree, o, &tel);
    resolution::require_valid(*r);
    if (cache) cache->store(*r);
  }
  Outcome out;
  out.result = {{"ranks", r->ranks()},
                {"seconds", tel.seconds},
                {"cache_hit", hit},
                {"resolution_hash", r->content_hash()},
                {"cache_path", cache ? json(cache->path_for(g, degree).string()) : json(nullptr)}};
  std::ostringstream os;
  os << "ranks";
  for (const auto a : r->ranks()) os << " " << a;
  os << "\n";
  if (hit) {
    os << "loaded from cache\n";
  } else {
    os << "seconds";
    for (const auto t : tel.seconds) os << " " << t;
    os << "\n";
  }
  out.text = os.str();
  return out;
}

Outcome cmd_cohomology(Session& s, const std::string& group_text, const std::string& coeff, std::size_t degree,
                       bool cx, bool reps) {
  const auto g = s.group("group", group_text);
  s.inputs["coefficients"] = cx ? "C^x" : coeff;
  s.inputs["degree"] = degree;
  s.arm_deadline();
  cohomology::CohomologyGroup h;
  if (cx) {
    h = cohomology::cx_cohomology(s.source().get(g, degree + 2), degree);
  } else {
    const auto m = parse_coefficients(g, coeff);
    h = cohomology::cohomology_group(s.source().get(g, degree + 1), m, degree);
  }
  Outcome out;
  out.result = h.to_json(reps);
  out.text = h.invariants.str() + "\n" + "GroupCohomology(G," + std::to_string(cx ? degree + 1 : degree) +
             ") = " + hap_list(h.invariants) + "\n";
  return out;
}

Outcome cmd_homology(Session& s, const std::string& group_text, std::size_t degree) {
  const auto g = s.group("group", group_text);
  s.inputs["degree"] = degree;
  s.arm_deadline();
  const auto h = cohomology::homology_group(s.source().get(g, degree + 1), degree);
  Outcome out;
  out.result = {{"group", g.describe()},
                {"group_order", g.order()},
                {"degree", degree},
                {"invariants", cohomology::invariants_json(h)}};
  out.text = h.str() + "\nGroupHomology(G," + std::to_string(degree) + ") = " + hap_list(h) + "\n";
  return out;
}

Outcome cmd_restrict(Session& s, const std::string& ambient, const std::string& subgroup, const std::string& coeff,
                     std::size_t degree, const std::string& backend) {
  const auto g = s.group("ambient", ambient);
  const auto h = s.group("subgroup", subgroup);
  s.inputs["coefficients"] = coeff;
  s.inputs["degree"] = degree;
  s.inputs["backend"] = backend;
  s.arm_deadline();
  const auto m = parse_coefficients(g, coeff);
  Outcome out;
  cohomology::CohomologyMap f;
  if (backend == "both") {
    try {
      f = cohomology::restriction_both(s.source(), g, h, m, degree);
      out.result["agree"] = true;
    } catch (const VerificationFailure&) {
      out.result["agree"] = false;
      out.code = exit_code::fail;
      out.text = "backends disagree\nagree=false\n";
      return out;
    }
  } else {
    f = cohomology::restriction_map(s.source(), g, h, m, degree,
                                    backend == "ambient" ? cohomology::Backend::ambient : cohomology::Backend::chainmap);
  }
  out.result["map"] = f.to_json();
  std::ostringstream os;
  os << "image " << f.image.str() << "\n";
  os << "injective=" << (f.injective ? "true" : "false") << " surjective=" << (f.surjective ? "true" : "false");
  if (backend == "both") os << " agree=true";
  os << "\nGroupCohomology(G," << degree << ") = " << hap_list(f.source.invariants) << "\n";
  os << "AbelianInvariants(Image(Hf)) = " << hap_list(f.image) << "\n";
  out.text = os.str();
  return out;
}

Outcome cmd_transfer(Session& s, const std::string& ambient, const std::string& subgroup, const std::string& coeff,
                     std::size_t degree) {
  const auto g = s.group("ambient", ambient);
  const auto h = s.group("subgroup", subgroup);
  s.inputs["coefficients"] = coeff;
  s.inputs["degree"] = degree;
  s.arm_deadline();
  const auto t = cohomology::transfer_map(s.source(), g, h, parse_coefficients(g, coeff), degree);
  Outcome out;
  json composite = json::array();
  for (const auto& row : t.composite) {
    json r = json::array();
    for (const auto& x : row) r.push_back(x.str());
    composite.push_back(r);
  }
  out.result = {{"index", t.index},
                {"composite", composite},
                {"composite_is_index", t.composite_is_index},
                {"restriction", t.restriction.to_json()},
                {"transfer", t.transfer.to_json()}};
  std::ostringstream os;
  os << "index " << t.index << "\n";
  os << "cor o res = index: " << (t.composite_is_index ? "true" : "false") << "\n";
  os << "image of res " << t.restriction.image.str() << ", image of cor " << t.transfer.image.str() << "\n";
  out.text = os.str();
  return out;
}

Outcome cmd_bockstein(Session& s, const std::string& group_text, std::size_t degree) {
  const auto g = s.group("group", group_text);
  s.inputs["degree"] = degree;
  s.arm_deadline();
  const auto b = cohomology::bockstein(s.source().get(g, degree + 2), degree);
  const bool nonzero = !b.beta.image.is_trivial();
  Outcome out;
  out.result = {{"beta", b.beta.to_json()},
                {"sq1", b.sq1.to_json()},
                {"sq1_is_pi_beta", b.sq1_is_pi_beta},
                {"nonzero", nonzero}};
  std::ostringstream os;
  os << "beta: H^" << degree << "(G, F2) = " << b.mod2.invariants.str() << " -> H^" << degree + 1
     << "(G, Z) = " << b.integral.invariants.str() << "\n";
  os << "image " << b.beta.image.str() << (nonzero ? " (nonzero)" : " (zero)") << "\n";
  os << "Sq1 = pi o beta: " << (b.sq1_is_pi_beta ? "true" : "false") << "\n";
  out.text = os.str();
  if (!b.sq1_is_pi_beta) out.code = exit_code::fail;
  return out;
}

int verdict_code(replay::Verdict v) {
  switch (v) {
    case replay::Status::pass: return exit_code::ok;
    case replay::Status::partial: return exit_code::partial;
    case replay::Status::fail: return exit_code::fail;
  }
  return exit_code::fail;
}

struct ReplayArgs {
  std::string scenario;
  std::size_t max_n = 5;
  std::size_t n = 4;
  std::string coeff = "Z/2";
  std::string out_file;
  std::vector<std::string> inject;
};

Outcome cmd_replay(Session& s, const ReplayArgs& a) {
  s.inputs["scenario"] = a.scenario;
  replay::ReplayOptions o;
  o.source = &s.source();
  o.budget_seconds = s.cfg.budget_seconds;
  o.corrupt = std::set<std::string>(a.inject.begin(), a.inject.end());
  if (!a.inject.empty()) s.inputs["inject_fault"] = a.inject;
  Outcome out;
  replay::Certificate cert;
  std::string extra_text;
  if (a.scenario == "lemma-s4") {
    cert = replay::replay_lemma_s4(o);
  } else if (a.scenario == "lemma-s8") {
    cert = replay::replay_lemma_s8(o);
  } else if (a.scenario == "h4-table") {
    s.inputs["max_n"] = a.max_n;
    const auto t = replay::replay_h4_table(a.max_n, o);
    cert = t.certificate;
    json rows = t.to_json().at("rows");
    out.result["table"] = rows;
    std::ostringstream os;
    for (const auto& r : t.rows) {
      os << "H^4(S" << r.n << ", C^x) = " << (r.computed ? r.computed->str() : std::string("(not computed)"))
         << "  expected " << r.expected.str() << "  " << replay::to_string(r.status) << (r.stretch ? "  stretch" : "")
         << "\n";
    }
    extra_text = os.str();
  } else if (a.scenario == "prop-inv") {
    s.inputs["n"] = a.n;
    s.inputs["coefficients"] = a.coeff;
    const auto rep = replay::replay_prop_inv(a.n, AbelianInvariants::parse(a.coeff), o);
    cert = rep.certificate;
    auto j = rep.to_json();
    j.erase("certificate");
    out.result["report"] = j;
    extra_text = "H^2(S" + std::to_string(a.n) + ", A^" + std::to_string(a.n) + ") = " +
                 rep.shapiro.permutation_side.str() + "\n" + rep.adjudication + "\n";
  } else if (a.scenario == "theorem-main") {
    cert = replay::replay_theorem_main(o);
  } else {
    throw std::invalid_argument("unknown scenario " + a.scenario);
  }
  const auto path = a.out_file.empty() ? std::filesystem::path(a.scenario + ".certificate.json")
                                       : std::filesystem::path(a.out_file);
  {
    std::ofstream f(path);
    f << cert.to_json().dump(2) << "\n";
    if (!f) throw std::runtime_error("cannot write " + path.string());
  }
  out.result["verdict"] = replay::to_string(cert.verdict());
  out.result["certificate_hash"] = cert.hash();
  out.result["certificate_file"] = path.string();
  out.result["failing_nodes"] = cert.failing_nodes();
  out.code = verdict_code(cert.verdict());
  out.text = extra_text + cert.render_text() + "certificate written to " + path.string() + "\n";
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact cohomology of finite permutation groups", "cohomctl"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  RunConfig cfg;
  std::string cache_dir;
  std::string format = "json";
  app.add_option("--cache-dir", cache_dir, std::string("Resolution cache (default $") + kCacheEnv + ")");
  app.add_flag("--no-cache", [&](std::int64_t) { cfg.use_cache = false; }, "Do not read or write the cache");
  app.add_option("--budget", cfg.budget_seconds, "Wall-clock budget in seconds");
  app.add_option("--element-cap", cfg.element_cap, "Largest group order to enumerate");
  app.add_option("--rank-cap", cfg.rank_cap, "Largest free rank per resolution degree");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));

  std::string group;
  std::string ambient;
  std::string subgroup;
  std::string coeff = "Z";
  std::size_t degree = 0;
  bool cx = false;
  bool reps = false;
  std::string backend;

  auto* resolve = app.add_subcommand("resolve", "Build and cache a free resolution");
  resolve->add_option("--group", group, "Group name or generators in cycle notation")->required();
  resolve->add_option("--degree", degree, "Resolution length")->required();

  auto* coho = app.add_subcommand("cohomology", "H^n(G, M) for trivial coefficients");
  coho->add_option("--group", group)->required();
  coho->add_option("--coeff", coeff, "Z, Z/m or Fp");
  coho->add_option("--degree", degree)->required();
  coho->add_flag("--cx", cx, "H^n(G, C^x), computed as H^{n+1}(G, Z)");
  coho->add_flag("--representatives", reps, "Include cocycle representatives");

  auto* homo = app.add_subcommand("homology", "H_n(G, Z)");
  homo->add_option("--group", group)->required();
  homo->add_option("--degree", degree)->required();

  auto* restrict = app.add_subcommand("restrict", "Restriction to a subgroup");
  restrict->add_option("--ambient", ambient)->required();
  restrict->add_option("--subgroup", subgroup)->required();
  restrict->add_option("--coeff", coeff);
  restrict->add_option("--degree", degree)->required();
  restrict->add_option("--backend", backend, "ambient, chainmap or both")
      ->check(CLI::IsMember({"ambient", "chainmap", "both"}));

  auto* transfer = app.add_subcommand("transfer", "Transfer from a subgroup, checking cor o res = index");
  transfer->add_option("--ambient", ambient)->required();
  transfer->add_option("--subgroup", subgroup)->required();
  transfer->add_option("--coeff", coeff);
  transfer->add_option("--degree", degree)->required();

  auto* bock = app.add_subcommand("bockstein", "beta: H^n(G, F2) -> H^{n+1}(G, Z) and Sq1");
  bock->add_option("--group", group)->required();
  bock->add_option("--degree", degree)->required();

  ReplayArgs ra;
  auto* rep = app.add_subcommand("replay", "Run a scenario and write its certificate");
  rep->add_option("scenario", ra.scenario, "lemma-s4, lemma-s8, h4-table, prop-inv or theorem-main")
      ->required()
      ->check(CLI::IsMember({"lemma-s4", "lemma-s8", "h4-table", "prop-inv", "theorem-main"}));
  rep->add_option("--max-n", ra.max_n, "h4-table: largest n (2..6)");
  rep->add_option("--n", ra.n, "prop-inv: n (3..5)");
  rep->add_option("--coeff", ra.coeff, "prop-inv: coefficient group, e.g. Z/2");
  rep->add_option("--out", ra.out_file, "Certificate path (default <scenario>.certificate.json)");
  rep->add_option("--inject-fault", ra.inject, "Corrupt the resolution of this group label (testing)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_code::ok;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return exit_code::ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return exit_code::usage;
  }

  cfg.format = format == "text" ? OutputFormat::text : OutputFormat::json;
  cfg.cache_dir = cache_dir.empty() ? default_cache_dir() : std::filesystem::path(cache_dir);
  if (!backend.empty()) cfg.backend = backend;
  Session s;
  s.cfg = cfg;
  std::string command;
  Outcome o;
  try {
    cfg.validate();
    if (resolve->parsed()) {
      command = "resolve";
      o = cmd_resolve(s, group, degree);
    } else if (coho->parsed()) {
      command = "cohomology";
      o = cmd_cohomology(s, group, coeff, degree, cx, reps);
    } else if (homo->parsed()) {
      command = "homology";
      o = cmd_homology(s, group, degree);
    } else if (restrict->parsed()) {
      command = "restrict";
      o = cmd_restrict(s, ambient, subgroup, coeff, degree, cfg.backend);
    } else if (transfer->parsed()) {
      command = "transfer";
      o = cmd_transfer(s, ambient, subgroup, coeff, degree);
    } else if (bock->parsed()) {
      command = "bockstein";
      o = cmd_bockstein(s, group, degree);
    } else {
      command = "replay";
      o = cmd_replay(s, ra);
    }
  } catch (const ResourceLimit& e) {
    err << "resource cap: " << e.what() << "\n";
    return exit_code::resource_cap;
  } catch (const VerificationFailure& e) {
    err << "verification failed: " << e.what() << "\n";
    return exit_code::fail;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return exit_code::usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::fail;
  }

  if (cfg.format == OutputFormat::text) {
    out << o.text;
  } else {
    json envelope = {{"tool", "cohomctl"},
                     {"tool_version", kToolVersion},
                     {"command", command},
                     {"config", cfg.to_json()},
                     {"inputs", s.inputs},
                     {"input_hash", sha256_hex(s.inputs.dump())},
                     {"exit_code", o.code},
                     {"result", o.result}};
    out << envelope.dump(2) << "\n";
  }
  return o.code;
}

}  // namespace pcoh::cli
