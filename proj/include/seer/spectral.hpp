#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "seer/graph.hpp"

namespace seer {

// Unnormalized Laplacian L = D - A in lexicographic node order.
Eigen::MatrixXd laplacian(const MemberGraph& g);

// Clamping threshold for the zero eigenvalue: 1e-9 * max(1, lambda_max).
double zero_tolerance(double lambda_max);

// Ascending eigenvalues of a symmetric matrix. Values within zero_tolerance of 0
// are clamped to exactly 0. Throws invalid_parameter when the input is not
// symmetric within 1e-12 and eigensolver_failure when the solver does not converge.
std::vector<double> spectrum(const Eigen::MatrixXd& symmetric);

// p_i = lambda_i / sum(lambda). Empty distribution (all zeros) when the sum is 0.
std::vector<double> normalized_spectrum(std::span<const double> eigenvalues);

// Shannon entropy in bits of the normalized spectrum, with 0 log 0 = 0.
// Returns exactly 0 when every eigenvalue is 0.
double spectral_entropy(std::span<const double> eigenvalues);

struct SpectralProfile {
  std::vector<double> eigenvalues;
  std::vector<double> distribution;
  double entropy_bits = 0.0;
};

SpectralProfile profile(const MemberGraph& g);

// Largest singular value of a symmetric matrix (= max |eigenvalue|).
double spectral_norm(const Eigen::MatrixXd& symmetric);

enum class AnchorRole { interface, abstract_superclass, main_orchestrator, static_utility };

struct MicrographParams {
  int n_static = 5;
  int n_main = 13;
  int k_abs = 4;
};

// interface -> edgeless graph, static -> S_{n_static}, main -> S_{n_main},
// abstract -> P_{k_abs}. Stars need n >= 2, paths k >= 2.
MemberGraph canonical_micrograph(AnchorRole role, const MicrographParams& params = {});

inline constexpr double kInterfaceNominalEntropy = 0.001;

struct AnchorTable {
  double interface = kInterfaceNominalEntropy;
  double abstract_superclass = 0.0;
  double main_orchestrator = 0.0;
  double static_utility = 0.0;

  double value(AnchorRole role) const;
};

// Generic objects A..Z carry their own measured entropy.
inline constexpr const char* kGenericRoleMarker = "role-specific";

AnchorTable anchor_table(const MicrographParams& params = {});

struct WeylReport {
  double max_eig_shift = 0.0;
  double operator_norm_bound = 0.0;
  bool satisfied = true;
};

// Both graphs must have the same node ids.
WeylReport weyl_check(const MemberGraph& g, const MemberGraph& g2);

struct StabilityReport {
  double entropy_delta = 0.0;
  double l1_dist = 0.0;
  std::optional<double> theorem3_bound;
  std::optional<bool> satisfied;
};

// Bound log2(n / min p_i) * ||p - q||_1 over strictly positive p_i of `g`;
// left empty when either graph has an all-zero spectrum.
StabilityReport entropy_stability_check(const MemberGraph& g, const MemberGraph& g2);

// Pads both graphs with isolated copies of the other's missing nodes so that a
// node-set-preserving comparison is possible after add/remove perturbations.
std::pair<MemberGraph, MemberGraph> align_node_sets(const MemberGraph& g, const MemberGraph& g2);

// Erdos-Renyi G(n, p) with a seeded generator.
MemberGraph random_graph(std::size_t n, double edge_prob, std::uint64_t seed);

bool are_isomorphic(const MemberGraph& g1, const MemberGraph& g2, bool respect_colors = false);

struct CospectralScanParams {
  int n_graphs = 1000;
  int n_min = 6;
  int n_max = 10;
  double edge_prob = 0.3;
  std::uint64_t seed = 42;
};

struct CospectralReport {
  std::size_t graphs = 0;
  std::size_t pairs_checked = 0;       // pairs sharing a rounded spectrum
  std::size_t isomorphic_pairs = 0;
  std::size_t cospectral_noniso_pairs = 0;
  double collision_rate = 0.0;         // noniso pairs / all unordered pairs
};

inline constexpr double kSpectrumBucket = 1e-6;

CospectralReport cospectrality_scan(const CospectralScanParams& params);
CospectralReport cospectrality_scan(const std::vector<MemberGraph>& graphs);

}  // namespace seer
