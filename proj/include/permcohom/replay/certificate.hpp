#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace pcoh::replay {

enum class NodeKind { computed, cited };
/// pass / fail for settled nodes; partial when a budget stopped the
/// computation or a dependency is partial.
enum class Status { pass, fail, partial };
using Verdict = Status;

const char* to_string(NodeKind k);
const char* to_string(Status s);
Status status_from_string(const std::string& s);

struct Node {
  std::string id;
  std::string statement;
  NodeKind kind = NodeKind::computed;
  Status status = Status::pass;
  /// COMPUTED: the stored result and the SHA-256 of its canonical dump.
  nlohmann::json result;
  std::string hash;
  /// CITED: where the fact comes from, and the quoted wording.
  std::string reference;
  std::string quote;
  /// Why a node failed or stayed partial.
  std::string note;
};

/// `from` depends on `to`.
struct Edge {
  std::string from;
  std::string to;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Quoted source text for a cited fact, looked up by key in the embedded
/// citation table. Throws std::out_of_range for unknown keys.
struct Citation {
  std::string reference;
  std::string quote;
};
Citation citation(const std::string& key);
std::vector<std::string> citation_keys();

/// A dependency graph of computed and cited facts with a verdict.
///
/// The certificate hash covers the scenario, tool version, inputs, nodes
/// and edges. Wall-clock timings are kept beside it and never hashed.
class Certificate {
 public:
  Certificate() = default;
  explicit Certificate(std::string scenario);

  [[nodiscard]] const std::string& scenario() const noexcept { return scenario_; }
  [[nodiscard]] const std::vector<Node>& nodes() const noexcept { return nodes_; }
  [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }
  [[nodiscard]] const nlohmann::json& inputs() const noexcept { return inputs_; }
  [[nodiscard]] const std::map<std::string, double>& timings() const noexcept { return timings_; }

  void set_input(const std::string& key, nlohmann::json value);
  void set_seconds(const std::string& id, double seconds) { timings_[id] = seconds; }

  /// Throws std::invalid_argument on a duplicate id.
  Node& add_computed(const std::string& id, const std::string& statement, nlohmann::json result, Status status,
                     std::string note = {});
  Node& add_cited(const std::string& id, const std::string& statement, const Citation& c);
  /// Embeds a whole certificate; the node status is its verdict.
  Node& add_certificate(const std::string& id, const std::string& statement, const Certificate& sub);
  /// A computed inference from premises: fail if any premise fails or
  /// `holds` is false, partial if any premise is partial. Adds the edges.
  Node& conclude(const std::string& id, const std::string& statement, const std::vector<std::string>& premises,
                 bool holds = true, nlohmann::json extra = nlohmann::json::object());
  /// Throws std::invalid_argument when either end is unknown.
  void depends(const std::string& from, const std::string& to);

  [[nodiscard]] const Node* find(const std::string& id) const;
  [[nodiscard]] Status status_of(const std::string& id) const;

  /// Structural problems: cycles, dangling edges, hash mismatches, empty
  /// quotes, nested certificates that fail the same checks.
  [[nodiscard]] std::vector<std::string> problems() const;
  /// FAIL on any problem or failing node, else PARTIAL on any partial
  /// node, else PASS.
  [[nodiscard]] Verdict verdict() const;
  /// Ids of failing nodes, in insertion order.
  [[nodiscard]] std::vector<std::string> failing_nodes() const;

  [[nodiscard]] std::string hash() const;
  [[nodiscard]] nlohmann::json to_json() const;
  /// Inverse of to_json. Throws std::invalid_argument on malformed input
  /// or when the recorded hash does not match the content.
  static Certificate from_json(const nlohmann::json& j);
  /// One line per node in dependency order, then the verdict.
  [[nodiscard]] std::string render_text() const;

 private:
  [[nodiscard]] nlohmann::json hashed_content() const;
  Node& push(Node n);

  std::string scenario_;
  nlohmann::json inputs_ = nlohmann::json::object();
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::map<std::string, double> timings_;
};

/// Canonical hash of a result record.
std::string result_hash(const nlohmann::json& result);
/// Removes every "timings" member, recursively.
nlohmann::json without_timings(nlohmann::json j);

}  // namespace pcoh::replay
