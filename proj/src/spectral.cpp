#include "seer/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "seer/error.hpp"
#include "seer/rng.hpp"

namespace seer {

Eigen::MatrixXd laplacian(const MemberGraph& g) {
  auto [a, d] = adjacency_and_degree(g);
  return d - a;
}

double zero_tolerance(double lambda_max) { return 1e-9 * std::max(1.0, lambda_max); }

std::vector<double> spectrum(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::shape_mismatch, "L", "matrix is not square");
  if (m.size() == 0) return {};
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw Error(ErrorCode::invalid_parameter, "L", "matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::eigensolver_failure, "L", "symmetric eigensolver did not converge");
  }
  std::vector<double> ev(solver.eigenvalues().data(),
                         solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(ev.begin(), ev.end());
  const double tol = zero_tolerance(ev.back());
  for (double& x : ev) {
    if (std::abs(x) <= tol) x = 0.0;
  }
  return ev;
}

namespace {

// Validates and clamps; returns the sum of the clamped list.
double clamped_sum(std::span<const double> ev, std::vector<double>& out) {
  out.assign(ev.begin(), ev.end());
  if (out.empty()) return 0.0;
  const double tol = zero_tolerance(*std::max_element(out.begin(), out.end()));
  double sum = 0.0;
  for (double& x : out) {
    if (!std::isfinite(x)) throw Error(ErrorCode::non_finite, "eigenvalue");
    if (x < -tol) throw Error(ErrorCode::negative_eigenvalue, std::to_string(x));
    if (x < 0.0) x = 0.0;
    sum += x;
  }
  return sum;
}

}  // namespace

std::vector<double> normalized_spectrum(std::span<const double> eigenvalues) {
  std::vector<double> p;
  const double sum = clamped_sum(eigenvalues, p);
  if (sum == 0.0) return std::vector<double>(p.size(), 0.0);
  for (double& x : p) x /= sum;
  return p;
}

double spectral_entropy(std::span<const double> eigenvalues) {
  const auto p = normalized_spectrum(eigenvalues);
  double h = 0.0;
  for (double pi : p) {
    if (pi > 0.0) h -= pi * std::log2(pi);
  }
  // -0.0 and tiny negative rounding for one-point distributions
  return h > 0.0 ? h : 0.0;
}

SpectralProfile profile(const MemberGraph& g) {
  SpectralProfile out;
  out.eigenvalues = spectrum(laplacian(g));
  out.distribution = normalized_spectrum(out.eigenvalues);
  out.entropy_bits = spectral_entropy(out.eigenvalues);
  return out;
}

double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::eigensolver_failure, "norm");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

MemberGraph canonical_micrograph(AnchorRole role, const MicrographParams& params) {
  auto need = [](int value, int min, const char* name) {
    if (value < min) {
      throw Error(ErrorCode::invalid_parameter, name,
                  "must be >= " + std::to_string(min) + ", got " + std::to_string(value));
    }
    return static_cast<std::size_t>(value);
  };
  switch (role) {
    case AnchorRole::interface:
      // Four members with no internal interaction; any size gives entropy 0.
      return make_edgeless(4, "interface");
    case AnchorRole::static_utility:
      return make_star(need(params.n_static, 2, "n_static"), "static_utility");
    case AnchorRole::main_orchestrator:
      return make_star(need(params.n_main, 2, "n_main"), "main_orchestrator");
    case AnchorRole::abstract_superclass:
      return make_path(need(params.k_abs, 2, "k_abs"), "abstract_superclass");
  }
  throw Error(ErrorCode::invalid_parameter, "role");
}

double AnchorTable::value(AnchorRole role) const {
  switch (role) {
    case AnchorRole::interface: return interface;
    case AnchorRole::abstract_superclass: return abstract_superclass;
    case AnchorRole::main_orchestrator: return main_orchestrator;
    case AnchorRole::static_utility: return static_utility;
  }
  return 0.0;
}

AnchorTable anchor_table(const MicrographParams& params) {
  AnchorTable t;
  // The edgeless micrograph has entropy 0; the table reports the nominal value.
  t.interface = kInterfaceNominalEntropy;
  t.abstract_superclass =
      profile(canonical_micrograph(AnchorRole::abstract_superclass, params)).entropy_bits;
  t.main_orchestrator =
      profile(canonical_micrograph(AnchorRole::main_orchestrator, params)).entropy_bits;
  t.static_utility = profile(canonical_micrograph(AnchorRole::static_utility, params)).entropy_bits;
  return t;
}

namespace {

void require_same_nodes(const MemberGraph& g, const MemberGraph& g2) {
  if (g.size() != g2.size()) {
    throw Error(ErrorCode::node_set_mismatch, g2.class_name(),
                std::to_string(g.size()) + " vs " + std::to_string(g2.size()) + " nodes");
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.nodes()[i].id != g2.nodes()[i].id) {
      throw Error(ErrorCode::node_set_mismatch, g.nodes()[i].id);
    }
  }
}

}  // namespace

WeylReport weyl_check(const MemberGraph& g, const MemberGraph& g2) {
  require_same_nodes(g, g2);
  const Eigen::MatrixXd l1 = laplacian(g);
  const Eigen::MatrixXd l2 = laplacian(g2);
  const auto e1 = spectrum(l1);
  const auto e2 = spectrum(l2);
  WeylReport r;
  for (std::size_t i = 0; i < e1.size(); ++i) {
    r.max_eig_shift = std::max(r.max_eig_shift, std::abs(e1[i] - e2[i]));
  }
  r.operator_norm_bound = spectral_norm(l1 - l2);
  r.satisfied = r.max_eig_shift <= r.operator_norm_bound + 1e-9;
  return r;
}

StabilityReport entropy_stability_check(const MemberGraph& g, const MemberGraph& g2) {
  require_same_nodes(g, g2);
  const auto a = profile(g);
  const auto b = profile(g2);
  StabilityReport r;
  r.entropy_delta = std::abs(a.entropy_bits - b.entropy_bits);
  for (std::size_t i = 0; i < a.distribution.size(); ++i) {
    r.l1_dist += std::abs(a.distribution[i] - b.distribution[i]);
  }
  auto degenerate = [](const SpectralProfile& p) {
    return std::all_of(p.distribution.begin(), p.distribution.end(),
                       [](double x) { return x == 0.0; });
  };
  if (degenerate(a) || degenerate(b)) return r;

  double min_positive = 1.0;
  for (double x : a.distribution) {
    if (x > 0.0) min_positive = std::min(min_positive, x);
  }
  const double n = static_cast<double>(g.size());
  r.theorem3_bound = std::log2(n / min_positive) * r.l1_dist;
  r.satisfied = r.entropy_delta <= *r.theorem3_bound + 1e-12;
  return r;
}

std::pair<MemberGraph, MemberGraph> align_node_sets(const MemberGraph& g, const MemberGraph& g2) {
  auto pad = [](const MemberGraph& target, const MemberGraph& other) {
    std::vector<Perturbation> ops;
    for (const auto& n : other.nodes()) {
      if (!target.index_of(n.id)) ops.push_back(perturb::AddNode{n});
    }
    return apply_perturbations(target, ops);
  };
  return {pad(g, g2), pad(g2, g)};
}

MemberGraph random_graph(std::size_t n, double edge_prob, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(edge_prob);
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coin(rng)) e.emplace_back(i, j);
  return make_graph(n, e, "random");
}

namespace {

struct Adjacency {
  std::size_t n = 0;
  std::vector<std::vector<bool>> adj;
  std::vector<int> degree;
  std::vector<MemberKind> kind;
};

Adjacency to_adjacency(const MemberGraph& g) {
  Adjacency a;
  a.n = g.size();
  a.adj.assign(a.n, std::vector<bool>(a.n, false));
  a.degree.assign(a.n, 0);
  for (const auto& node : g.nodes()) a.kind.push_back(node.kind);
  for (const auto& e : g.edges()) {
    auto i = *g.index_of(e.a), j = *g.index_of(e.b);
    a.adj[i][j] = a.adj[j][i] = true;
    ++a.degree[i];
    ++a.degree[j];
  }
  return a;
}

bool extend(const Adjacency& x, const Adjacency& y, bool colors, std::vector<int>& map,
            std::vector<bool>& used, std::size_t k) {
  if (k == x.n) return true;
  for (std::size_t cand = 0; cand < y.n; ++cand) {
    if (used[cand] || x.degree[k] != y.degree[cand]) continue;
    if (colors && x.kind[k] != y.kind[cand]) continue;
    bool ok = true;
    for (std::size_t prev = 0; prev < k && ok; ++prev) {
      ok = x.adj[k][prev] == y.adj[cand][static_cast<std::size_t>(map[prev])];
    }
    if (!ok) continue;
    map[k] = static_cast<int>(cand);
    used[cand] = true;
    if (extend(x, y, colors, map, used, k + 1)) return true;
    used[cand] = false;
  }
  return false;
}

}  // namespace

bool are_isomorphic(const MemberGraph& g1, const MemberGraph& g2, bool respect_colors) {
  if (g1.size() != g2.size() || g1.edges().size() != g2.edges().size()) return false;
  const auto x = to_adjacency(g1);
  const auto y = to_adjacency(g2);
  auto dx = x.degree, dy = y.degree;
  std::sort(dx.begin(), dx.end());
  std::sort(dy.begin(), dy.end());
  if (dx != dy) return false;
  std::vector<int> map(x.n, -1);
  std::vector<bool> used(y.n, false);
  return extend(x, y, respect_colors, map, used, 0);
}

CospectralReport cospectrality_scan(const std::vector<MemberGraph>& graphs) {
  std::map<std::vector<long long>, std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    std::vector<long long> key;
    key.push_back(static_cast<long long>(graphs[i].size()));
    for (double ev : spectrum(laplacian(graphs[i]))) {
      key.push_back(std::llround(ev / kSpectrumBucket));
    }
    buckets[std::move(key)].push_back(i);
  }

  CospectralReport r;
  r.graphs = graphs.size();
  for (const auto& [_, members] : buckets) {
    if (members.size() < 2) continue;
    std::vector<std::vector<std::size_t>> classes;
    for (std::size_t idx : members) {
      auto it = std::find_if(classes.begin(), classes.end(), [&](const auto& cls) {
        return are_isomorphic(graphs[cls.front()], graphs[idx]);
      });
      if (it == classes.end()) {
        classes.push_back({idx});
      } else {
        it->push_back(idx);
      }
    }
    const std::size_t k = members.size();
    r.pairs_checked += k * (k - 1) / 2;
    for (const auto& cls : classes) r.isomorphic_pairs += cls.size() * (cls.size() - 1) / 2;
  }
  r.cospectral_noniso_pairs = r.pairs_checked - r.isomorphic_pairs;
  const double all_pairs =
      static_cast<double>(graphs.size()) * static_cast<double>(graphs.size() - 1) / 2.0;
  r.collision_rate = all_pairs > 0 ? static_cast<double>(r.cospectral_noniso_pairs) / all_pairs : 0.0;
  return r;
}

CospectralReport cospectrality_scan(const CospectralScanParams& params) {
  if (params.n_min < 3 || params.n_max > 24 || params.n_min > params.n_max) {
    throw Error(ErrorCode::invalid_parameter, "n_nodes_range", "must lie within [3, 24]");
  }
  if (params.n_graphs < 0 || params.edge_prob < 0.0 || params.edge_prob > 1.0) {
    throw Error(ErrorCode::invalid_parameter, "n_graphs/edge_prob");
  }
  std::vector<MemberGraph> graphs;
  graphs.reserve(static_cast<std::size_t>(params.n_graphs));
  for (int i = 0; i < params.n_graphs; ++i) {
    const std::uint64_t s = derive_seed(params.seed, static_cast<std::uint64_t>(i));
    std::mt19937_64 rng(s);
    std::uniform_int_distribution<int> size_dist(params.n_min, params.n_max);
    const auto n = static_cast<std::size_t>(size_dist(rng));
    graphs.push_back(random_graph(n, params.edge_prob, derive_seed(s, "edges")));
  }
  return cospectrality_scan(graphs);
}

}  // namespace seer
