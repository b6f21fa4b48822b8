#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "seer/bss.hpp"
#include "seer/metrics.hpp"
#include "seer/model.hpp"

namespace seer {

// Distinct labels in canonical GoF order. Throws schema_violation on an
// unlabeled sequence.
std::vector<std::string> label_set(const std::vector<BssSequence>& corpus);

struct TrainedModel {
  ToyModel model;
  Vocabulary vocab;
  std::vector<std::string> labels;
};

struct TrainReport {
  double initial_loss = 0.0;  // mean training loss before the first update, no dropout
  std::vector<double> epoch_losses;
  Metrics metrics;
  std::vector<std::string> labels;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  double omega = 0.0;
};

nlohmann::json to_json(const TrainReport& r);

struct TrainResult {
  TrainedModel trained;
  TrainReport report;
};

inline constexpr double kTestFraction = 0.25;

/// Adam on mean cross-entropy over mini-batches. Everything random (init,
/// per-epoch order, dropout) derives from config.seed. config.n_classes is
/// replaced by the number of labels present in the split.
TrainResult train(const CorpusSplit& split, ClassifierConfig config);
// Source-level 75/25 split, then train.
TrainResult train(const std::vector<BssSequence>& corpus, const ClassifierConfig& config);

std::vector<int> predict_all(const TrainedModel& m, const std::vector<BssSequence>& set);
std::vector<int> label_indices(const TrainedModel& m, const std::vector<BssSequence>& set);
Metrics evaluate(const TrainedModel& m, const std::vector<BssSequence>& test_set);

struct LabeledSample {
  TokenizedSequence tokens;
  int label = 0;
};

struct GradCheckReport {
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  std::size_t checked = 0;
  std::string worst_tensor;
};

// Denominator floor of the relative error: below it the absolute difference counts.
inline constexpr double kGradCheckFloor = 1e-7;

// Analytic gradient (dropout off) against central differences on
// `n_params` parameters drawn uniformly from the tensors whose name starts
// with `tensor_prefix` (all tensors when empty).
GradCheckReport grad_check(const ToyModel& model, const LabeledSample& sample,
                           double epsilon = 1e-5, std::size_t n_params = 200,
                           std::uint64_t seed = 0, const std::string& tensor_prefix = "");

struct AblationRow {
  std::string variant;
  bool roles = false;
  bool time = false;
  Metrics metrics;
};

// {baseline, time-only, roles-only, both}, same split and seed for each.
inline constexpr const char* kAblationVariants[4] = {"baseline", "time-only", "roles-only", "both"};

std::vector<AblationRow> ablate(const CorpusSplit& split, const ClassifierConfig& config,
                                const std::vector<std::string>& variants = {});
nlohmann::json to_json(const std::vector<AblationRow>& rows);

}  // namespace seer
