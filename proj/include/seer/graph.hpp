#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace seer {

enum class MemberKind { constructor, public_method, private_method, attribute };
enum class EdgeKind { method_call, attribute_access };

std::string_view to_string(MemberKind kind);
std::string_view to_string(EdgeKind kind);
// Throws schema_violation for anything outside the closed set.
MemberKind parse_member_kind(std::string_view text);
EdgeKind parse_edge_kind(std::string_view text);

struct MemberNode {
  std::string id;
  MemberKind kind = MemberKind::public_method;
  std::string label;

  friend bool operator==(const MemberNode&, const MemberNode&) = default;
};

// Undirected: stored with a < b after validation.
struct MemberEdge {
  std::string a;
  std::string b;
  EdgeKind kind = EdgeKind::method_call;

  friend bool operator==(const MemberEdge&, const MemberEdge&) = default;
};

/// Vertex-colored simple undirected graph of one class's members.
///
/// Instances only exist in a validated state. Nodes are kept sorted by id and
/// edges by (a, b) with a < b, so every matrix built from a graph uses the
/// lexicographic id order.
class MemberGraph {
 public:
  static MemberGraph create(std::string class_name, std::vector<MemberNode> nodes,
                            std::vector<MemberEdge> edges);

  const std::string& class_name() const noexcept { return class_name_; }
  const std::vector<MemberNode>& nodes() const noexcept { return nodes_; }
  const std::vector<MemberEdge>& edges() const noexcept { return edges_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  std::optional<std::size_t> index_of(std::string_view id) const;
  const MemberNode* find(std::string_view id) const;
  bool has_edge(std::string_view a, std::string_view b) const;

  friend bool operator==(const MemberGraph&, const MemberGraph&) = default;

 private:
  MemberGraph() = default;

  std::string class_name_;
  std::vector<MemberNode> nodes_;
  std::vector<MemberEdge> edges_;
};

struct LoadOptions {
  // Strict mode rejects unknown fields; lenient mode records them in `warnings`.
  bool strict = true;
  std::vector<std::string>* warnings = nullptr;
};

MemberGraph load_graph(std::string_view json_text, const LoadOptions& options = {});
MemberGraph load_graph_file(const std::string& path, const LoadOptions& options = {});
MemberGraph graph_from_json(const nlohmann::json& doc, const LoadOptions& options = {});
nlohmann::json to_json(const MemberGraph& g);
std::string save_graph(const MemberGraph& g);

// Perturbation operators used by the locality analyses.
namespace perturb {
struct AddNode {
  MemberNode node;
};
struct RemoveNode {
  std::string id;
};
struct AddEdge {
  MemberEdge edge;
};
struct RemoveEdge {
  std::string a;
  std::string b;
};
struct ChangeKind {
  std::string id;
  MemberKind kind;
};
}  // namespace perturb

using Perturbation = std::variant<perturb::AddNode, perturb::RemoveNode, perturb::AddEdge,
                                  perturb::RemoveEdge, perturb::ChangeKind>;

MemberGraph apply_perturbation(const MemberGraph& g, const Perturbation& p);
MemberGraph apply_perturbations(const MemberGraph& g, const std::vector<Perturbation>& ops);

// Operations that undo `p` when applied to apply_perturbation(before, p).
std::vector<Perturbation> invert(const MemberGraph& before, const Perturbation& p);

// Text form, one op: "add_node:id:kind[:label]", "remove_node:id",
// "add_edge:a:b[:kind]", "remove_edge:a:b", "change_kind:id:kind".
// A list is separated by ';'. add_edge without a kind is an attribute_access when
// either endpoint is an attribute in `g`, a method_call otherwise.
Perturbation parse_perturbation(std::string_view text, const MemberGraph* g = nullptr);
std::vector<Perturbation> parse_perturbation_list(std::string_view text,
                                                  const MemberGraph* g = nullptr);
Perturbation perturbation_from_json(const nlohmann::json& j, const MemberGraph* g = nullptr);
std::string describe(const Perturbation& p);

struct AdjacencyDegree {
  Eigen::MatrixXd adjacency;
  Eigen::MatrixXd degree;
};

AdjacencyDegree adjacency_and_degree(const MemberGraph& g);

// Small standard graphs. Node ids are "v00", "v01", ... so that lexicographic
// order equals construction order; the star hub is "v00".
MemberGraph make_edgeless(std::size_t n, std::string class_name = "edgeless");
MemberGraph make_path(std::size_t n, std::string class_name = "path");
MemberGraph make_star(std::size_t n, std::string class_name = "star");
MemberGraph make_cycle(std::size_t n, std::string class_name = "cycle");
MemberGraph make_complete(std::size_t n, std::string class_name = "complete");
// Builds a graph on n vertices with the given undirected index pairs.
MemberGraph make_graph(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                       std::string class_name = "graph");
std::string vertex_id(std::size_t i);

}  // namespace seer
