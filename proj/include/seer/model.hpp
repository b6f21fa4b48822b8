#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "seer/fusion.hpp"
#include "seer/tensor.hpp"

namespace seer {

struct ClassifierConfig {
  int d_model = 64;
  int n_heads = 4;
  int n_layers = 2;
  int d_ff = 256;
  double dropout = 0.1;
  int n_classes = 4;
  double lr = 1e-3;
  int batch_size = 32;
  int epochs = 30;
  std::uint64_t seed = 7;
  std::size_t max_len = 151;  // 1 + 3 * 50 events
  double omega = 0.0;         // <= 0: chosen from training data
  // Ablation switches for the frequential path.
  bool use_roles = true;
  bool use_time = true;
  double layer_norm_eps = 1e-5;

  static ClassifierConfig toy_scale();
  static ClassifierConfig paper_scale();
  void validate() const;
};

nlohmann::json to_json(const ClassifierConfig& c);
// Missing keys keep the values of `base`; unknown keys are rejected.
ClassifierConfig classifier_config_from_json(const nlohmann::json& j,
                                             ClassifierConfig base = ClassifierConfig::toy_scale());

struct EncoderLayerParams {
  Mat wq, bq, wk, bk, wv, bv, wo, bo;
  Mat ln1_gain, ln1_bias;
  Mat ff1_w, ff1_b, ff2_w, ff2_b;
  Mat ln2_gain, ln2_bias;
};

struct HeadParams {
  Mat w;  // n_classes x d_model
  Mat b;  // 1 x n_classes
};

struct ModelParams {
  FusionParams fusion;
  std::vector<EncoderLayerParams> layers;
  HeadParams head;
};

struct NamedTensor {
  std::string name;
  Mat* value;
};

struct ConstNamedTensor {
  std::string name;
  const Mat* value;
};

std::vector<NamedTensor> tensors(ModelParams& p);
std::vector<ConstNamedTensor> tensors(const ModelParams& p);
std::size_t parameter_count(const ModelParams& p);

ModelParams zero_params(const ClassifierConfig& config, std::size_t vocab_size);
ModelParams init_params(const ClassifierConfig& config, std::size_t vocab_size, std::uint64_t seed);

/// Encoder classifier over fused token inputs. Sequence representation is the
/// encoder output at the CLS position.
struct ToyModel {
  ClassifierConfig config;
  FusionConfig fusion;
  ModelParams params;

  static ToyModel create(const ClassifierConfig& config, std::size_t vocab_size, double omega,
                         std::uint64_t seed);
};

// Inverted-dropout source. A null pointer or rate 0 disables dropout.
struct DropoutContext {
  double rate = 0.0;
  std::mt19937_64 rng;
};

// Post-norm encoder stack. Masked positions are never attended; masked query
// rows attend to nothing. `attention` (optional) receives per layer, per head
// the L x L attention weights.
Mat encoder_forward(const std::vector<EncoderLayerParams>& layers, int n_heads, const Mat& input,
                    const std::vector<std::uint8_t>& mask, double layer_norm_eps = 1e-5,
                    std::vector<std::vector<Mat>>* attention = nullptr);

// Frequential-path inputs after applying the ablation switches.
TokenizedSequence apply_feature_switches(const TokenizedSequence& seq, const ClassifierConfig& c);

std::vector<double> logits(const ToyModel& model, const TokenizedSequence& seq);
std::vector<double> softmax(const std::vector<double>& logits);
// Probability vector over n_classes.
std::vector<double> classify(const ToyModel& model, const TokenizedSequence& seq);
int predict(const ToyModel& model, const TokenizedSequence& seq);

// Cross-entropy of one sample. When `grad` is non-null, d loss / d params is
// added into it (same layout as model.params).
double loss_and_grad(const ToyModel& model, const TokenizedSequence& seq, int label,
                     ModelParams* grad, DropoutContext* dropout = nullptr);

}  // namespace seer
