#include <doctest.h>

#include <string>

#include "seer/error.hpp"
#include "seer/graph.hpp"
#include "seer/spectral.hpp"

using namespace seer;

namespace {

const char* kK2 = R"({"class_name":"K2","nodes":[{"id":"m1","kind":"public_method","label":"f"},{"id":"a1","kind":"attribute","label":"x"}],"edges":[{"a":"m1","b":"a1","kind":"attribute_access"}]})";

std::string fixture(const std::string& name) { return std::string(SEER_FIXTURE_DIR) + "/" + name + ".json"; }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::io_failure;
}

std::string subject_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.subject();
  }
  return "<none>";
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("minimal two-node document loads") {
  const MemberGraph g = load_graph(kK2);
  CHECK(g.size() == 2);
  CHECK(g.edges().size() == 1);
  CHECK(g.class_name() == "K2");
  CHECK(g.nodes()[0].id == "a1");  // sorted by id
  CHECK(g.has_edge("a1", "m1"));
  CHECK(g.has_edge("m1", "a1"));
}

TEST_CASE("load errors name the offending element") {
  std::string self_loop = kK2;
  self_loop.replace(self_loop.find(R"("b":"a1")"), 8, R"("b":"m1")");
  CHECK(code_of([&] { load_graph(self_loop); }) == ErrorCode::self_loop);
  CHECK(subject_of([&] { load_graph(self_loop); }) == "m1");

  std::string dangling = kK2;
  dangling.replace(dangling.find(R"("b":"a1")"), 8, R"("b":"zz")");
  CHECK(code_of([&] { load_graph(dangling); }) == ErrorCode::dangling_endpoint);
  CHECK(subject_of([&] { load_graph(dangling); }) == "zz");

  const char* dup = R"({"class_name":"D","nodes":[{"id":"x","kind":"attribute","label":"x"},{"id":"x","kind":"attribute","label":"y"}],"edges":[]})";
  CHECK(code_of([&] { load_graph(dup); }) == ErrorCode::duplicate_id);

  const char* parallel = R"({"class_name":"P","nodes":[{"id":"x","kind":"attribute","label":"x"},{"id":"y","kind":"constructor","label":"y"}],"edges":[{"a":"x","b":"y","kind":"attribute_access"},{"a":"y","b":"x","kind":"attribute_access"}]})";
  CHECK(code_of([&] { load_graph(parallel); }) == ErrorCode::parallel_edge);

  const char* bad_kind = R"({"class_name":"B","nodes":[{"id":"x","kind":"field","label":"x"}],"edges":[]})";
  CHECK(code_of([&] { load_graph(bad_kind); }) == ErrorCode::schema_violation);

  const char* empty = R"({"class_name":"E","nodes":[],"edges":[]})";
  CHECK(code_of([&] { load_graph(empty); }) == ErrorCode::schema_violation);

  CHECK(code_of([&] { load_graph("{not json"); }) == ErrorCode::schema_violation);
  CHECK(code_of([&] { load_graph(R"({"nodes":[],"edges":[]})"); }) == ErrorCode::schema_violation);
}

TEST_CASE("unknown fields: strict rejects, lenient warns") {
  const std::string doc = R"({"class_name":"U","extra":1,"nodes":[{"id":"x","kind":"attribute","label":"x","color":3}],"edges":[]})";
  CHECK(code_of([&] { load_graph(doc); }) == ErrorCode::schema_violation);
  std::vector<std::string> warnings;
  const MemberGraph g = load_graph(doc, {false, &warnings});
  CHECK(g.size() == 1);
  CHECK(warnings.size() == 2);
}

TEST_CASE("round trip is canonical") {
  const MemberGraph g = load_graph_file(fixture("AuthManager"));
  const MemberGraph back = load_graph(save_graph(g));
  CHECK(back == g);
  CHECK(save_graph(back) == save_graph(g));
}

TEST_CASE("AuthManager fixture member counts") {
  const MemberGraph g = load_graph_file(fixture("AuthManager"));
  int ctor = 0, methods = 0, attrs = 0;
  for (const auto& n : g.nodes()) {
    if (n.kind == MemberKind::constructor) ++ctor;
    else if (n.kind == MemberKind::attribute) ++attrs;
    else ++methods;
  }
  CHECK(ctor == 1);
  CHECK(methods == 5);
  CHECK(attrs == 3);
  CHECK(g.edges().size() == 12);
}

TEST_CASE("all fixtures load with degree sum 2|E|") {
  for (const char* name : {"AuthManager", "InMemoryCache", "UserController", "AppLogger", "UserRepository", "PaymentService"}) {
    CAPTURE(name);
    const MemberGraph g = load_graph_file(fixture(name));
    const auto ad = adjacency_and_degree(g);
    CHECK(ad.degree.sum() == doctest::Approx(2.0 * g.edges().size()));
    CHECK((ad.adjacency - ad.adjacency.transpose()).norm() == 0.0);
    CHECK(ad.adjacency.diagonal().norm() == 0.0);
  }
}

TEST_CASE("adjacency and degree of small graphs") {
  const auto k2 = adjacency_and_degree(load_graph(kK2));
  CHECK(k2.adjacency(0, 1) == 1.0);
  CHECK(k2.adjacency(1, 0) == 1.0);
  CHECK(k2.degree(0, 0) == 1.0);
  CHECK(k2.degree(1, 1) == 1.0);

  const auto e3 = adjacency_and_degree(make_edgeless(3));
  CHECK(e3.adjacency.norm() == 0.0);
  CHECK(e3.degree.norm() == 0.0);

  const auto s5 = adjacency_and_degree(make_star(5));
  CHECK(s5.degree(0, 0) == 4.0);  // hub v00 sorts first
  for (int i = 1; i < 5; ++i) CHECK(s5.degree(i, i) == 1.0);
  CHECK(s5.degree.sum() == 8.0);
}

TEST_CASE("perturbations") {
  const MemberGraph p3 = make_path(3);
  const MemberGraph c3 = apply_perturbation(p3, parse_perturbation("add_edge:v00:v02"));
  CHECK(c3.edges().size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(adjacency_and_degree(c3).degree(i, i) == 2.0);
  CHECK(are_isomorphic(c3, make_cycle(3)));

  const MemberGraph single = apply_perturbation(load_graph(kK2), parse_perturbation("remove_node:a1"));
  CHECK(single.size() == 1);
  CHECK(single.edges().empty());

  const MemberGraph auth = load_graph_file(fixture("AuthManager"));
  const auto ops = parse_perturbation_list("add_node:refresh:public_method;add_edge:refresh:session", &auth);
  const MemberGraph grown = apply_perturbations(auth, ops);
  CHECK(grown.size() == auth.size() + 1);
  CHECK(grown.edges().size() == auth.edges().size() + 1);
  CHECK(std::get<perturb::AddEdge>(ops[1]).edge.kind == EdgeKind::attribute_access);
  CHECK(auth.size() == 9);  // input untouched

  CHECK(code_of([&] { apply_perturbation(auth, parse_perturbation("remove_node:ghost")); }) == ErrorCode::unknown_id);
  CHECK(code_of([&] { apply_perturbation(auth, parse_perturbation("add_node:login:public_method")); }) == ErrorCode::duplicate_id);
  CHECK(code_of([&] { apply_perturbation(auth, parse_perturbation("add_edge:login:login")); }) == ErrorCode::self_loop);
  CHECK(code_of([&] { apply_perturbation(auth, parse_perturbation("add_edge:login:session")); }) == ErrorCode::parallel_edge);
  CHECK(code_of([&] { parse_perturbation("explode:x"); }) == ErrorCode::schema_violation);
}

TEST_CASE("perturbation followed by its inverse restores the graph") {
  const MemberGraph auth = load_graph_file(fixture("AuthManager"));
  for (const char* text : {"add_node:refresh:public_method", "remove_node:session", "add_edge:logout:user_store",
                           "remove_edge:login:session", "change_kind:_log_event:public_method"}) {
    CAPTURE(text);
    const Perturbation p = parse_perturbation(text, &auth);
    const MemberGraph after = apply_perturbation(auth, p);
    CHECK(apply_perturbations(after, invert(auth, p)) == auth);
  }
}

TEST_CASE("perturbation json form") {
  const MemberGraph auth = load_graph_file(fixture("AuthManager"));
  const auto p = perturbation_from_json(nlohmann::json::parse(R"({"op":"add_edge","a":"logout","b":"_hash_password"})"), &auth);
  CHECK(std::get<perturb::AddEdge>(p).edge.kind == EdgeKind::method_call);
}

}  // TEST_SUITE
