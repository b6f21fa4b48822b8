#include "seer/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "seer/error.hpp"

namespace seer {

using nlohmann::json;

std::string_view to_string(MemberKind kind) {
  switch (kind) {
    case MemberKind::constructor: return "constructor";
    case MemberKind::public_method: return "public_method";
    case MemberKind::private_method: return "private_method";
    case MemberKind::attribute: return "attribute";
  }
  return "public_method";
}

std::string_view to_string(EdgeKind kind) {
  return kind == EdgeKind::method_call ? "method_call" : "attribute_access";
}

MemberKind parse_member_kind(std::string_view text) {
  if (text == "constructor") return MemberKind::constructor;
  if (text == "public_method") return MemberKind::public_method;
  if (text == "private_method") return MemberKind::private_method;
  if (text == "attribute") return MemberKind::attribute;
  throw Error(ErrorCode::schema_violation, std::string(text), "unknown member kind");
}

EdgeKind parse_edge_kind(std::string_view text) {
  if (text == "method_call") return EdgeKind::method_call;
  if (text == "attribute_access") return EdgeKind::attribute_access;
  throw Error(ErrorCode::schema_violation, std::string(text), "unknown edge kind");
}

MemberGraph MemberGraph::create(std::string class_name, std::vector<MemberNode> nodes,
                                std::vector<MemberEdge> edges) {
  if (nodes.empty()) {
    throw Error(ErrorCode::schema_violation, class_name, "graph needs at least one node");
  }
  std::sort(nodes.begin(), nodes.end(),
            [](const MemberNode& x, const MemberNode& y) { return x.id < y.id; });
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id.empty()) throw Error(ErrorCode::schema_violation, "", "empty node id");
    if (nodes[i].label.empty()) {
      throw Error(ErrorCode::schema_violation, nodes[i].id, "empty label");
    }
    if (i > 0 && nodes[i].id == nodes[i - 1].id) {
      throw Error(ErrorCode::duplicate_id, nodes[i].id);
    }
  }
  MemberGraph g;
  g.class_name_ = std::move(class_name);
  g.nodes_ = std::move(nodes);

  std::set<std::pair<std::string, std::string>> seen;
  for (auto& e : edges) {
    for (const auto* end : {&e.a, &e.b}) {
      if (!g.index_of(*end)) throw Error(ErrorCode::dangling_endpoint, *end);
    }
    if (e.a == e.b) throw Error(ErrorCode::self_loop, e.a);
    if (e.b < e.a) std::swap(e.a, e.b);
    if (!seen.emplace(e.a, e.b).second) {
      throw Error(ErrorCode::parallel_edge, e.a + "--" + e.b);
    }
  }
  std::sort(edges.begin(), edges.end(), [](const MemberEdge& x, const MemberEdge& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  g.edges_ = std::move(edges);
  return g;
}

std::optional<std::size_t> MemberGraph::index_of(std::string_view id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const MemberNode& n, std::string_view v) { return n.id < v; });
  if (it == nodes_.end() || it->id != id) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

const MemberNode* MemberGraph::find(std::string_view id) const {
  auto idx = index_of(id);
  return idx ? &nodes_[*idx] : nullptr;
}

bool MemberGraph::has_edge(std::string_view a, std::string_view b) const {
  if (b < a) std::swap(a, b);
  return std::any_of(edges_.begin(), edges_.end(),
                     [&](const MemberEdge& e) { return e.a == a && e.b == b; });
}

namespace {

void check_fields(const json& obj, std::initializer_list<const char*> allowed,
                  const std::string& where, const LoadOptions& options) {
  for (const auto& [key, _] : obj.items()) {
    bool known = std::any_of(allowed.begin(), allowed.end(),
                             [&](const char* a) { return key == a; });
    if (known) continue;
    if (options.strict) {
      throw Error(ErrorCode::schema_violation, where + "." + key, "unknown field");
    }
    if (options.warnings) options.warnings->push_back("ignored unknown field " + where + "." + key);
  }
}

const std::string& require_string(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw Error(ErrorCode::schema_violation, where + "." + key, "missing or not a string");
  }
  return it->get_ref<const std::string&>();
}

const json& require_array(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_array()) {
    throw Error(ErrorCode::schema_violation, key, "missing or not an array");
  }
  return *it;
}

}  // namespace

MemberGraph graph_from_json(const json& doc, const LoadOptions& options) {
  if (!doc.is_object()) throw Error(ErrorCode::schema_violation, "$", "expected an object");
  check_fields(doc, {"class_name", "nodes", "edges"}, "$", options);
  std::string class_name = require_string(doc, "class_name", "$");

  std::vector<MemberNode> nodes;
  for (const auto& jn : require_array(doc, "nodes")) {
    const std::string where = "nodes[" + std::to_string(nodes.size()) + "]";
    if (!jn.is_object()) throw Error(ErrorCode::schema_violation, where, "expected an object");
    check_fields(jn, {"id", "kind", "label"}, where, options);
    MemberNode n;
    n.id = require_string(jn, "id", where);
    n.kind = parse_member_kind(require_string(jn, "kind", where));
    n.label = require_string(jn, "label", where);
    nodes.push_back(std::move(n));
  }

  std::vector<MemberEdge> edges;
  for (const auto& je : require_array(doc, "edges")) {
    const std::string where = "edges[" + std::to_string(edges.size()) + "]";
    if (!je.is_object()) throw Error(ErrorCode::schema_violation, where, "expected an object");
    check_fields(je, {"a", "b", "kind"}, where, options);
    MemberEdge e;
    e.a = require_string(je, "a", where);
    e.b = require_string(je, "b", where);
    e.kind = parse_edge_kind(require_string(je, "kind", where));
    edges.push_back(std::move(e));
  }
  return MemberGraph::create(std::move(class_name), std::move(nodes), std::move(edges));
}

MemberGraph load_graph(std::string_view json_text, const LoadOptions& options) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::schema_violation, "$", e.what());
  }
  return graph_from_json(doc, options);
}

MemberGraph load_graph_file(const std::string& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_failure, path, "cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_graph(buf.str(), options);
}

json to_json(const MemberGraph& g) {
  json nodes = json::array();
  for (const auto& n : g.nodes()) {
    nodes.push_back({{"id", n.id}, {"kind", to_string(n.kind)}, {"label", n.label}});
  }
  json edges = json::array();
  for (const auto& e : g.edges()) {
    edges.push_back({{"a", e.a}, {"b", e.b}, {"kind", to_string(e.kind)}});
  }
  return {{"class_name", g.class_name()}, {"nodes", nodes}, {"edges", edges}};
}

std::string save_graph(const MemberGraph& g) { return to_json(g).dump(); }

MemberGraph apply_perturbation(const MemberGraph& g, const Perturbation& p) {
  auto nodes = g.nodes();
  auto edges = g.edges();
  auto require_node = [&](const std::string& id) {
    if (!g.index_of(id)) throw Error(ErrorCode::unknown_id, id);
  };

  std::visit(
      [&](const auto& op) {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, perturb::AddNode>) {
          if (g.index_of(op.node.id)) throw Error(ErrorCode::duplicate_id, op.node.id);
          nodes.push_back(op.node);
        } else if constexpr (std::is_same_v<T, perturb::RemoveNode>) {
          require_node(op.id);
          if (g.size() == 1) {
            throw Error(ErrorCode::invalid_parameter, op.id, "cannot remove the last node");
          }
          std::erase_if(nodes, [&](const MemberNode& n) { return n.id == op.id; });
          std::erase_if(edges,
                        [&](const MemberEdge& e) { return e.a == op.id || e.b == op.id; });
        } else if constexpr (std::is_same_v<T, perturb::AddEdge>) {
          require_node(op.edge.a);
          require_node(op.edge.b);
          if (op.edge.a == op.edge.b) throw Error(ErrorCode::self_loop, op.edge.a);
          if (g.has_edge(op.edge.a, op.edge.b)) {
            throw Error(ErrorCode::parallel_edge, op.edge.a + "--" + op.edge.b);
          }
          edges.push_back(op.edge);
        } else if constexpr (std::is_same_v<T, perturb::RemoveEdge>) {
          require_node(op.a);
          require_node(op.b);
          auto [lo, hi] = std::minmax(op.a, op.b);
          auto before = edges.size();
          std::erase_if(edges, [&](const MemberEdge& e) { return e.a == lo && e.b == hi; });
          if (edges.size() == before) throw Error(ErrorCode::unknown_id, lo + "--" + hi, "no such edge");
        } else {
          require_node(op.id);
          for (auto& n : nodes) {
            if (n.id == op.id) n.kind = op.kind;
          }
        }
      },
      p);
  return MemberGraph::create(g.class_name(), std::move(nodes), std::move(edges));
}

MemberGraph apply_perturbations(const MemberGraph& g, const std::vector<Perturbation>& ops) {
  MemberGraph out = g;
  for (const auto& op : ops) out = apply_perturbation(out, op);
  return out;
}

std::vector<Perturbation> invert(const MemberGraph& before, const Perturbation& p) {
  std::vector<Perturbation> inverse;
  std::visit(
      [&](const auto& op) {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, perturb::AddNode>) {
          inverse.push_back(perturb::RemoveNode{op.node.id});
        } else if constexpr (std::is_same_v<T, perturb::RemoveNode>) {
          const MemberNode* n = before.find(op.id);
          if (!n) throw Error(ErrorCode::unknown_id, op.id);
          inverse.push_back(perturb::AddNode{*n});
          for (const auto& e : before.edges()) {
            if (e.a == op.id || e.b == op.id) inverse.push_back(perturb::AddEdge{e});
          }
        } else if constexpr (std::is_same_v<T, perturb::AddEdge>) {
          inverse.push_back(perturb::RemoveEdge{op.edge.a, op.edge.b});
        } else if constexpr (std::is_same_v<T, perturb::RemoveEdge>) {
          auto [lo, hi] = std::minmax(op.a, op.b);
          auto it = std::find_if(before.edges().begin(), before.edges().end(),
                                 [&](const MemberEdge& e) { return e.a == lo && e.b == hi; });
          if (it == before.edges().end()) throw Error(ErrorCode::unknown_id, lo + "--" + hi);
          inverse.push_back(perturb::AddEdge{*it});
        } else {
          const MemberNode* n = before.find(op.id);
          if (!n) throw Error(ErrorCode::unknown_id, op.id);
          inverse.push_back(perturb::ChangeKind{op.id, n->kind});
        }
      },
      p);
  return inverse;
}

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    parts.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

EdgeKind infer_edge_kind(const std::string& a, const std::string& b, const MemberGraph* g) {
  if (g) {
    for (const auto* id : {&a, &b}) {
      const MemberNode* n = g->find(*id);
      if (n && n->kind == MemberKind::attribute) return EdgeKind::attribute_access;
    }
  }
  return EdgeKind::method_call;
}

}  // namespace

Perturbation parse_perturbation(std::string_view text, const MemberGraph* g) {
  auto f = split(trim(text), ':');
  const std::string& op = f[0];
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (f.size() < lo || f.size() > hi) {
      throw Error(ErrorCode::schema_violation, std::string(text), "wrong field count for " + op);
    }
  };
  if (op == "add_node") {
    need(3, 4);
    return perturb::AddNode{{f[1], parse_member_kind(f[2]), f.size() == 4 ? f[3] : f[1]}};
  }
  if (op == "remove_node") {
    need(2, 2);
    return perturb::RemoveNode{f[1]};
  }
  if (op == "add_edge") {
    need(3, 4);
    EdgeKind kind = f.size() == 4 ? parse_edge_kind(f[3]) : infer_edge_kind(f[1], f[2], g);
    return perturb::AddEdge{{f[1], f[2], kind}};
  }
  if (op == "remove_edge") {
    need(3, 3);
    return perturb::RemoveEdge{f[1], f[2]};
  }
  if (op == "change_kind") {
    need(3, 3);
    return perturb::ChangeKind{f[1], parse_member_kind(f[2])};
  }
  throw Error(ErrorCode::schema_violation, op, "unknown perturbation op");
}

std::vector<Perturbation> parse_perturbation_list(std::string_view text, const MemberGraph* g) {
  std::vector<Perturbation> ops;
  // add_edge kind inference must see nodes added earlier in the same list.
  std::optional<MemberGraph> scratch;
  if (g) scratch = *g;
  for (const auto& part : split(text, ';')) {
    if (trim(part).empty()) continue;
    auto op = parse_perturbation(part, scratch ? &*scratch : nullptr);
    if (scratch) {
      try {
        scratch = apply_perturbation(*scratch, op);
      } catch (const Error&) {
        // Reported when the caller actually applies the list.
      }
    }
    ops.push_back(std::move(op));
  }
  return ops;
}

Perturbation perturbation_from_json(const json& j, const MemberGraph* g) {
  if (j.is_string()) return parse_perturbation(j.get<std::string>(), g);
  if (!j.is_object()) throw Error(ErrorCode::schema_violation, "op", "expected object or string");
  const std::string op = require_string(j, "op", "op");
  auto str = [&](const char* key) { return require_string(j, key, op); };
  if (op == "add_node") {
    std::string id = str("id");
    std::string label = j.contains("label") ? str("label") : id;
    return perturb::AddNode{{id, parse_member_kind(str("kind")), label}};
  }
  if (op == "remove_node") return perturb::RemoveNode{str("id")};
  if (op == "add_edge") {
    std::string a = str("a"), b = str("b");
    EdgeKind kind = j.contains("kind") ? parse_edge_kind(str("kind")) : infer_edge_kind(a, b, g);
    return perturb::AddEdge{{a, b, kind}};
  }
  if (op == "remove_edge") return perturb::RemoveEdge{str("a"), str("b")};
  if (op == "change_kind") return perturb::ChangeKind{str("id"), parse_member_kind(str("kind"))};
  throw Error(ErrorCode::schema_violation, op, "unknown perturbation op");
}

std::string describe(const Perturbation& p) {
  return std::visit(
      [](const auto& op) -> std::string {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, perturb::AddNode>) {
          return "add_node:" + op.node.id + ":" + std::string(to_string(op.node.kind));
        } else if constexpr (std::is_same_v<T, perturb::RemoveNode>) {
          return "remove_node:" + op.id;
        } else if constexpr (std::is_same_v<T, perturb::AddEdge>) {
          return "add_edge:" + op.edge.a + ":" + op.edge.b + ":" + std::string(to_string(op.edge.kind));
        } else if constexpr (std::is_same_v<T, perturb::RemoveEdge>) {
          return "remove_edge:" + op.a + ":" + op.b;
        } else {
          return "change_kind:" + op.id + ":" + std::string(to_string(op.kind));
        }
      },
      p);
}

AdjacencyDegree adjacency_and_degree(const MemberGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  AdjacencyDegree out{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
  for (const auto& e : g.edges()) {
    auto i = static_cast<Eigen::Index>(*g.index_of(e.a));
    auto j = static_cast<Eigen::Index>(*g.index_of(e.b));
    out.adjacency(i, j) = 1.0;
    out.adjacency(j, i) = 1.0;
  }
  for (Eigen::Index i = 0; i < n; ++i) out.degree(i, i) = out.adjacency.row(i).sum();
  return out;
}

std::string vertex_id(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "v%02zu", i);
  return buf;
}

MemberGraph make_graph(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                       std::string class_name) {
  std::vector<MemberNode> nodes;
  for (std::size_t i = 0; i < n; ++i) {
    nodes.push_back({vertex_id(i), MemberKind::public_method, vertex_id(i)});
  }
  std::vector<MemberEdge> edges;
  for (auto [a, b] : pairs) edges.push_back({vertex_id(a), vertex_id(b), EdgeKind::method_call});
  return MemberGraph::create(std::move(class_name), std::move(nodes), std::move(edges));
}

MemberGraph make_edgeless(std::size_t n, std::string class_name) {
  return make_graph(n, {}, std::move(class_name));
}

MemberGraph make_path(std::size_t n, std::string class_name) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return make_graph(n, e, std::move(class_name));
}

MemberGraph make_star(std::size_t n, std::string class_name) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 1; i < n; ++i) e.emplace_back(0, i);
  return make_graph(n, e, std::move(class_name));
}

MemberGraph make_cycle(std::size_t n, std::string class_name) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return make_graph(n, e, std::move(class_name));
}

MemberGraph make_complete(std::size_t n, std::string class_name) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return make_graph(n, e, std::move(class_name));
}

}  // namespace seer
