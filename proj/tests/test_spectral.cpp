#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "seer/error.hpp"
#include "seer/graph.hpp"
#include "seer/rng.hpp"
#include "seer/spectral.hpp"

using namespace seer;

namespace {

std::string fixture(const std::string& name) { return std::string(SEER_FIXTURE_DIR) + "/" + name + ".json"; }

// Golden value, confirmed by the Jacobi oracle below.
constexpr double kAuthManagerEntropy = 2.6889415433623869;

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("laplacian of small graphs") {
  Eigen::MatrixXd k2(2, 2);
  k2 << 1, -1, -1, 1;
  CHECK(laplacian(make_complete(2)) == k2);
  CHECK(laplacian(make_edgeless(3)).norm() == 0.0);
  Eigen::MatrixXd p3(3, 3);
  p3 << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  CHECK(laplacian(make_path(3)) == p3);
  const auto l = laplacian(load_graph_file(fixture("UserRepository")));
  CHECK(l.rowwise().sum().norm() == 0.0);
}

TEST_CASE("closed-form spectra") {
  const auto s5 = spectrum(laplacian(make_star(5)));
  const double want_s5[] = {0, 1, 1, 1, 5};
  for (int i = 0; i < 5; ++i) CHECK(s5[i] == doctest::Approx(want_s5[i]).epsilon(1e-12));

  const auto p4 = spectrum(laplacian(make_path(4)));
  const double r2 = std::sqrt(2.0);
  const double want_p4[] = {0, 2 - r2, 2, 2 + r2};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(p4[i] - want_p4[i]) <= 1e-9);

  const auto z = spectrum(Eigen::MatrixXd::Zero(3, 3));
  CHECK(z == std::vector<double>{0, 0, 0});
  CHECK(s5[0] == 0.0);  // clamped exactly
}

TEST_CASE("spectrum rejects asymmetric input") {
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 0, 1;
  CHECK_THROWS_AS(spectrum(m), Error);
}

TEST_CASE("entropy values") {
  CHECK(std::abs(spectral_entropy(std::vector<double>{0, 1, 1, 1, 5}) - 1.549) <= 5e-4);
  std::vector<double> s13(13, 1.0);
  s13.front() = 0;
  s13.back() = 13;
  CHECK(std::abs(spectral_entropy(s13) - 2.581) <= 5e-4);
  CHECK(spectral_entropy(std::vector<double>{0, 2}) == 0.0);
  CHECK(spectral_entropy(std::vector<double>{0, 0, 0}) == 0.0);
  CHECK(std::abs(profile(make_path(4)).entropy_bits - 1.319) <= 5e-4);
  CHECK_THROWS_AS(spectral_entropy(std::vector<double>{-1.0, 1.0, 2.0}), Error);
  // negatives within tolerance are clamped
  CHECK(spectral_entropy(std::vector<double>{-1e-12, 1.0, 1.0}) == doctest::Approx(1.0));
}

TEST_CASE("profile invariants on random graphs against the Jacobi oracle") {
  for (std::uint64_t i = 0; i < 200; ++i) {
    const std::size_t n = 3 + i % 14;
    const MemberGraph g = random_graph(n, 0.35, derive_seed(11, i));
    const auto p = profile(g);
    const auto ev = oracle::jacobi_eigenvalues(oracle::dense_laplacian(g));
    REQUIRE(p.eigenvalues.size() == n);
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(p.eigenvalues[k] - ev[k]) <= 1e-9);
    CHECK(std::abs(p.entropy_bits - oracle::entropy_bits(ev)) <= 1e-9);
    CHECK(p.entropy_bits >= 0.0);
    CHECK(p.entropy_bits <= std::log2(double(n)) + 1e-12);
    const double trace = std::accumulate(p.eigenvalues.begin(), p.eigenvalues.end(), 0.0);
    CHECK(std::abs(trace - 2.0 * g.edges().size()) <= 1e-9 * std::max(1.0, trace));
    if (trace > 0) CHECK(std::accumulate(p.distribution.begin(), p.distribution.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("relabeling leaves the spectrum unchanged") {
  const MemberGraph g = random_graph(9, 0.4, 5);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> perm(9);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(3);
  std::shuffle(perm.begin(), perm.end(), rng);
  for (const auto& e : g.edges()) pairs.emplace_back(perm[*g.index_of(e.a)], perm[*g.index_of(e.b)]);
  const MemberGraph h = make_graph(9, pairs);
  const auto a = profile(g), b = profile(h);
  for (std::size_t i = 0; i < 9; ++i) CHECK(std::abs(a.eigenvalues[i] - b.eigenvalues[i]) <= 1e-9);
  CHECK(std::abs(a.entropy_bits - b.entropy_bits) <= 1e-9);
}

TEST_CASE("AuthManager golden entropy") {
  const MemberGraph g = load_graph_file(fixture("AuthManager"));
  const double h = profile(g).entropy_bits;
  CHECK(h > 0.0);
  CHECK(h <= std::log2(9.0));
  CHECK(std::abs(h - oracle::graph_entropy(g)) <= 1e-9);
  CHECK(std::abs(h - kAuthManagerEntropy) <= 1e-12);
}

TEST_CASE("AppLogger is the static-utility star") {
  const MemberGraph g = load_graph_file(fixture("AppLogger"));
  CHECK(std::abs(profile(g).entropy_bits - anchor_table().static_utility) <= 1e-12);
}

TEST_CASE("micrographs and anchors") {
  CHECK(profile(canonical_micrograph(AnchorRole::interface)).entropy_bits == 0.0);
  CHECK(canonical_micrograph(AnchorRole::interface).edges().empty());
  CHECK(std::abs(profile(canonical_micrograph(AnchorRole::static_utility)).entropy_bits - 1.549) <= 5e-4);
  CHECK(std::abs(profile(canonical_micrograph(AnchorRole::abstract_superclass)).entropy_bits - 1.319) <= 5e-4);
  CHECK(profile(canonical_micrograph(AnchorRole::main_orchestrator, {5, 2, 4})).entropy_bits == 0.0);
  CHECK_THROWS_AS(canonical_micrograph(AnchorRole::static_utility, {1, 13, 4}), Error);
  CHECK_THROWS_AS(canonical_micrograph(AnchorRole::abstract_superclass, {5, 13, 1}), Error);

  const AnchorTable t = anchor_table();
  CHECK(t.interface == 0.001);
  CHECK(std::abs(t.abstract_superclass - 1.319) <= 5e-4);
  CHECK(std::abs(t.static_utility - 1.549) <= 5e-4);
  CHECK(std::abs(t.main_orchestrator - 2.581) <= 5e-4);
  CHECK(t.value(AnchorRole::main_orchestrator) == t.main_orchestrator);

  CHECK(std::abs(anchor_table({7, 13, 4}).static_utility - oracle::star_entropy(7)) <= 1e-12);
}

TEST_CASE("weyl check") {
  const MemberGraph p3 = make_path(3);
  const WeylReport same = weyl_check(p3, p3);
  CHECK(same.max_eig_shift == 0.0);
  CHECK(same.operator_norm_bound == 0.0);
  CHECK(same.satisfied);

  const WeylReport tri = weyl_check(p3, apply_perturbation(p3, parse_perturbation("add_edge:v00:v02")));
  CHECK(std::abs(tri.operator_norm_bound - 2.0) <= 1e-12);
  CHECK(tri.max_eig_shift <= 2.0 + 1e-9);
  CHECK(tri.satisfied);

  CHECK_THROWS_AS(weyl_check(p3, make_path(4)), Error);
}

TEST_CASE("entropy stability check") {
  const MemberGraph s5 = make_star(5);
  const StabilityReport same = entropy_stability_check(s5, s5);
  CHECK(same.entropy_delta == 0.0);
  CHECK(same.l1_dist == 0.0);

  const auto r = entropy_stability_check(s5, apply_perturbation(s5, parse_perturbation("add_edge:v01:v02")));
  REQUIRE(r.theorem3_bound.has_value());
  CHECK(r.entropy_delta > 0.0);
  CHECK(*r.satisfied);

  const auto d = entropy_stability_check(make_complete(2), make_edgeless(2));
  CHECK_FALSE(d.theorem3_bound.has_value());
  CHECK_FALSE(d.satisfied.has_value());
  CHECK(d.entropy_delta == 0.0);
}

TEST_CASE("node-set alignment pads with isolated vertices") {
  const MemberGraph auth = load_graph_file(fixture("AuthManager"));
  const MemberGraph grown = apply_perturbations(auth, parse_perturbation_list("add_node:refresh:public_method;add_edge:refresh:session", &auth));
  const auto [a, b] = align_node_sets(auth, grown);
  CHECK(a.size() == 10);
  CHECK(b.size() == 10);
  CHECK(profile(a).entropy_bits == doctest::Approx(profile(auth).entropy_bits).epsilon(1e-12));
  CHECK(weyl_check(a, b).satisfied);
}

TEST_CASE("isomorphism and cospectral scan") {
  CHECK(are_isomorphic(make_path(4), make_graph(4, {{2, 0}, {0, 3}, {3, 1}})));
  CHECK_FALSE(are_isomorphic(make_path(4), make_star(4)));
  CHECK_FALSE(are_isomorphic(make_path(4), make_path(5)));

  // the same graph twice: one cospectral pair, isomorphic
  const MemberGraph g = random_graph(7, 0.3, 99);
  const auto twice = cospectrality_scan(std::vector<MemberGraph>{g, random_graph(7, 0.3, 99)});
  CHECK(twice.pairs_checked == 1);
  CHECK(twice.isomorphic_pairs == 1);
  CHECK(twice.collision_rate == 0.0);

  // star S_5 vs C_4 plus an isolated vertex: different spectra, no collision
  MemberGraph c4i = make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  const auto neg = cospectrality_scan(std::vector<MemberGraph>{make_star(5), c4i});
  CHECK(neg.pairs_checked == 0);
  CHECK(neg.cospectral_noniso_pairs == 0);

  CospectralScanParams p;
  p.n_graphs = 300;
  const auto r1 = cospectrality_scan(p);
  const auto r2 = cospectrality_scan(p);
  CHECK(r1.graphs == 300);
  CHECK(r1.pairs_checked == r2.pairs_checked);
  CHECK(r1.collision_rate == r2.collision_rate);
  CHECK(r1.isomorphic_pairs + r1.cospectral_noniso_pairs == r1.pairs_checked);

  p.n_min = 2;
  CHECK_THROWS_AS(cospectrality_scan(p), Error);
}

}  // TEST_SUITE
