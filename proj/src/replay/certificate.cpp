#include "permcohom/replay/certificate.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

#include "permcohom/digest.hpp"
#include "permcohom/version.hpp"
#include "permcohom_citations.hpp"

namespace pcoh::replay {

using nlohmann::json;

const char* to_string(NodeKind k) { return k == NodeKind::computed ? "COMPUTED" : "CITED"; }

const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "PASS";
    case Status::fail: return "FAIL";
    case Status::partial: return "PARTIAL";
  }
  return "FAIL";
}

Status status_from_string(const std::string& s) {
  if (s == "PASS") return Status::pass;
  if (s == "FAIL") return Status::fail;
  if (s == "PARTIAL") return Status::partial;
  throw std::invalid_argument("unknown status " + s);
}

namespace {

const json& citation_table() {
  static const json table = json::parse(detail::kCitationsJson).at("citations");
  return table;
}

// Worst of two statuses: fail beats partial beats pass.
Status worse(Status a, Status b) {
  auto rank = [](Status s) { return s == Status::fail ? 2 : s == Status::partial ? 1 : 0; };
  return rank(a) >= rank(b) ? a : b;
}

}  // namespace

Citation citation(const std::string& key) {
  const auto& table = citation_table();
  if (!table.contains(key)) throw std::out_of_range("no citation with key " + key);
  const auto& e = table.at(key);
  return Citation{e.at("reference").get<std::string>(), e.at("quote").get<std::string>()};
}

std::vector<std::string> citation_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, v] : citation_table().items()) keys.push_back(k);
  return keys;
}

std::string result_hash(const json& result) { return sha256_hex(result.dump()); }

json without_timings(json j) {
  if (j.is_object()) {
    j.erase("timings");
    for (auto& [k, v] : j.items()) v = without_timings(std::move(v));
  } else if (j.is_array()) {
    for (auto& v : j) v = without_timings(std::move(v));
  }
  return j;
}

Certificate::Certificate(std::string scenario) : scenario_(std::move(scenario)) {}

void Certificate::set_input(const std::string& key, json value) { inputs_[key] = std::move(value); }

Node& Certificate::push(Node n) {
  if (find(n.id) != nullptr) throw std::invalid_argument("Certificate: duplicate node id " + n.id);
  nodes_.push_back(std::move(n));
  return nodes_.back();
}

Node& Certificate::add_computed(const std::string& id, const std::string& statement, json result, Status status,
                                std::string note) {
  Node n;
  n.id = id;
  n.statement = statement;
  n.kind = NodeKind::computed;
  n.status = status;
  n.result = std::move(result);
  n.hash = result_hash(n.result);
  n.note = std::move(note);
  return push(std::move(n));
}

Node& Certificate::add_cited(const std::string& id, const std::string& statement, const Citation& c) {
  Node n;
  n.id = id;
  n.statement = statement;
  n.kind = NodeKind::cited;
  n.status = c.quote.empty() ? Status::fail : Status::pass;
  n.reference = c.reference;
  n.quote = c.quote;
  if (c.quote.empty()) n.note = "missing quote";
  return push(std::move(n));
}

Node& Certificate::add_certificate(const std::string& id, const std::string& statement, const Certificate& sub) {
  json result = {{"certificate", sub.to_json()}, {"scenario", sub.scenario()}, {"verdict", to_string(sub.verdict())}};
  result["certificate"].erase("timings");
  std::string note;
  for (const auto& f : sub.failing_nodes()) note += (note.empty() ? "failing: " : ", ") + f;
  auto& n = add_computed(id, statement, std::move(result), sub.verdict(), note);
  for (const auto& [k, s] : sub.timings()) timings_[id + "/" + k] = s;
  return n;
}

Node& Certificate::conclude(const std::string& id, const std::string& statement,
                            const std::vector<std::string>& premises, bool holds, json extra) {
  Status s = holds ? Status::pass : Status::fail;
  json listed = json::array();
  std::string note;
  for (const auto& p : premises) {
    const auto ps = status_of(p);
    s = worse(s, ps);
    listed.push_back({{"id", p}, {"status", to_string(ps)}});
    if (ps != Status::pass) note += (note.empty() ? "" : ", ") + p + " is " + to_string(ps);
  }
  if (!holds) note += std::string(note.empty() ? "" : "; ") + "the inference check failed";
  extra["premises"] = std::move(listed);
  extra["holds"] = holds;
  auto& n = add_computed(id, statement, std::move(extra), s, note);
  for (const auto& p : premises) depends(id, p);
  return n;
}

void Certificate::depends(const std::string& from, const std::string& to) {
  if (find(from) == nullptr || find(to) == nullptr) {
    throw std::invalid_argument("Certificate: edge " + from + " -> " + to + " names an unknown node");
  }
  const Edge e{from, to};
  if (std::find(edges_.begin(), edges_.end(), e) == edges_.end()) edges_.push_back(e);
}

const Node* Certificate::find(const std::string& id) const {
  for (const auto& n : nodes_) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

Status Certificate::status_of(const std::string& id) const {
  const auto* n = find(id);
  if (n == nullptr) throw std::invalid_argument("Certificate: unknown node " + id);
  return n->status;
}

namespace {

// Kahn's algorithm with ties broken by insertion order; dependencies come
// first. Returns fewer ids than nodes when there is a cycle.
std::vector<std::size_t> dependency_order(const std::vector<Node>& nodes, const std::vector<Edge>& edges) {
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < nodes.size(); ++i) pos[nodes[i].id] = i;
  std::vector<std::size_t> pending(nodes.size(), 0);
  std::vector<std::vector<std::size_t>> dependents(nodes.size());
  for (const auto& e : edges) {
    const auto f = pos.find(e.from);
    const auto t = pos.find(e.to);
    if (f == pos.end() || t == pos.end()) continue;
    ++pending[f->second];
    dependents[t->second].push_back(f->second);
  }
  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (pending[i] == 0) ready.insert(i);
  }
  std::vector<std::size_t> out;
  while (!ready.empty()) {
    const auto i = *ready.begin();
    ready.erase(ready.begin());
    out.push_back(i);
    for (const auto d : dependents[i]) {
      if (--pending[d] == 0) ready.insert(d);
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> Certificate::problems() const {
  std::vector<std::string> out;
  std::set<std::string> ids;
  for (const auto& n : nodes_) {
    if (!ids.insert(n.id).second) out.push_back("duplicate node id " + n.id);
    if (n.kind == NodeKind::computed) {
      if (n.hash != result_hash(n.result)) out.push_back("node " + n.id + ": result does not match its hash");
      if (n.result.is_object() && n.result.contains("certificate")) {
        try {
          const auto sub = from_json(n.result.at("certificate"));
          for (const auto& p : sub.problems()) out.push_back("node " + n.id + ": " + p);
          if (to_string(sub.verdict()) != n.result.value("verdict", std::string{})) {
            out.push_back("node " + n.id + ": recorded verdict differs from the embedded certificate");
          }
          if (sub.verdict() != n.status) out.push_back("node " + n.id + ": status differs from the embedded verdict");
        } catch (const std::exception& e) {
          out.push_back("node " + n.id + ": " + e.what());
        }
      }
    } else if (n.quote.empty()) {
      out.push_back("cited node " + n.id + " has no quote");
    }
  }
  for (const auto& e : edges_) {
    if (ids.count(e.from) == 0 || ids.count(e.to) == 0) out.push_back("dangling edge " + e.from + " -> " + e.to);
  }
  if (dependency_order(nodes_, edges_).size() != nodes_.size()) out.push_back("dependency graph has a cycle");
  return out;
}

Verdict Certificate::verdict() const {
  if (!problems().empty()) return Status::fail;
  Status v = Status::pass;
  for (const auto& n : nodes_) v = worse(v, n.status);
  return v;
}

std::vector<std::string> Certificate::failing_nodes() const {
  std::vector<std::string> out;
  for (const auto& n : nodes_) {
    if (n.status == Status::fail) out.push_back(n.id);
  }
  return out;
}

json Certificate::hashed_content() const {
  json nodes = json::array();
  for (const auto& n : nodes_) {
    json j = {{"id", n.id}, {"statement", n.statement}, {"kind", to_string(n.kind)}, {"status", to_string(n.status)}};
    if (n.kind == NodeKind::computed) {
      j["evidence"] = {{"hash", n.hash}, {"result", n.result}};
    } else {
      j["evidence"] = {{"reference", n.reference}, {"quote", n.quote}};
    }
    if (!n.note.empty()) j["note"] = n.note;
    nodes.push_back(std::move(j));
  }
  json edges = json::array();
  for (const auto& e : edges_) edges.push_back({{"from", e.from}, {"to", e.to}});
  return {{"schema", "permcohom.certificate"},
          {"schema_version", kCertificateSchemaVersion},
          {"tool_version", kToolVersion},
          {"scenario", scenario_},
          {"inputs", inputs_},
          {"nodes", std::move(nodes)},
          {"edges", std::move(edges)}};
}

std::string Certificate::hash() const { return sha256_hex(hashed_content().dump()); }

json Certificate::to_json() const {
  auto j = hashed_content();
  j["verdict"] = to_string(verdict());
  j["hash"] = hash();
  j["timings"] = timings_;
  return j;
}

Certificate Certificate::from_json(const json& j) {
  try {
    if (j.at("schema").get<std::string>() != "permcohom.certificate") throw std::invalid_argument("not a certificate");
    if (j.at("schema_version").get<int>() != kCertificateSchemaVersion) {
      throw std::invalid_argument("unsupported certificate schema version");
    }
    Certificate c(j.at("scenario").get<std::string>());
    c.inputs_ = j.at("inputs");
    for (const auto& jn : j.at("nodes")) {
      Node n;
      n.id = jn.at("id").get<std::string>();
      n.statement = jn.at("statement").get<std::string>();
      const auto kind = jn.at("kind").get<std::string>();
      if (kind != "COMPUTED" && kind != "CITED") throw std::invalid_argument("unknown node kind " + kind);
      n.kind = kind == "COMPUTED" ? NodeKind::computed : NodeKind::cited;
      n.status = status_from_string(jn.at("status").get<std::string>());
      const auto& ev = jn.at("evidence");
      if (n.kind == NodeKind::computed) {
        n.hash = ev.at("hash").get<std::string>();
        n.result = ev.at("result");
      } else {
        n.reference = ev.at("reference").get<std::string>();
        n.quote = ev.at("quote").get<std::string>();
      }
      n.note = jn.value("note", std::string{});
      c.push(std::move(n));
    }
    for (const auto& je : j.at("edges")) c.edges_.push_back(Edge{je.at("from").get<std::string>(), je.at("to").get<std::string>()});
    if (j.contains("timings")) c.timings_ = j.at("timings").get<std::map<std::string, double>>();
    if (j.contains("hash") && j.at("hash").get<std::string>() != c.hash()) {
      throw std::invalid_argument("certificate hash does not match its content");
    }
    // The tool version is part of the hash; a certificate from another
    // version keeps its own.
    if (j.at("tool_version").get<std::string>() != kToolVersion) {
      throw std::invalid_argument("certificate was written by tool version " + j.at("tool_version").get<std::string>());
    }
    return c;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed certificate: ") + e.what());
  }
}

std::string Certificate::render_text() const {
  std::ostringstream os;
  os << "certificate " << scenario_ << "  (tool " << kToolVersion << ", hash " << hash().substr(0, 16) << ")\n";
  for (const auto i : dependency_order(nodes_, edges_)) {
    const auto& n = nodes_[i];
    os << "  [" << std::left << std::setw(7) << to_string(n.status) << "] " << std::setw(24) << n.id << " "
       << std::setw(9) << to_string(n.kind) << " " << n.statement << "\n";
    if (n.kind == NodeKind::computed) {
      os << "            sha256 " << n.hash.substr(0, 16) << "\n";
    } else {
      os << "            " << n.reference << ": \"" << n.quote << "\"\n";
    }
    if (!n.note.empty()) os << "            note: " << n.note << "\n";
    std::string deps;
    for (const auto& e : edges_) {
      if (e.from == n.id) deps += (deps.empty() ? "" : ", ") + e.to;
    }
    if (!deps.empty()) os << "            from: " << deps << "\n";
  }
  for (const auto& p : problems()) os << "  problem: " << p << "\n";
  os << "verdict " << to_string(verdict()) << "\n";
  return os.str();
}

}  // namespace pcoh::replay
