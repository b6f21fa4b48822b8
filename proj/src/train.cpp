#include "seer/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "seer/error.hpp"
#include "seer/rng.hpp"

namespace seer {

using nlohmann::json;

std::vector<std::string> label_set(const std::vector<BssSequence>& corpus) {
  std::vector<bool> present(kGofCount, false);
  for (const auto& s : corpus) {
    if (!s.label) throw Error(ErrorCode::schema_violation, s.source, "unlabeled sequence");
    auto it = std::find(kGofPatterns.begin(), kGofPatterns.end(), *s.label);
    if (it == kGofPatterns.end()) throw Error(ErrorCode::schema_violation, *s.label, "unknown label");
    present[static_cast<std::size_t>(it - kGofPatterns.begin())] = true;
  }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < kGofCount; ++i) {
    if (present[i]) labels.emplace_back(kGofPatterns[i]);
  }
  return labels;
}

json to_json(const TrainReport& r) {
  return {{"initial_loss", r.initial_loss}, {"epoch_losses", r.epoch_losses},
          {"metrics", to_json(r.metrics, r.labels)}, {"labels", r.labels},
          {"train_size", r.train_size}, {"test_size", r.test_size}, {"omega", r.omega}};
}

namespace {

int label_index(const std::vector<std::string>& labels, const BssSequence& s) {
  if (!s.label) throw Error(ErrorCode::schema_violation, s.source, "unlabeled sequence");
  auto it = std::find(labels.begin(), labels.end(), *s.label);
  if (it == labels.end()) throw Error(ErrorCode::class_absent, *s.label);
  return static_cast<int>(it - labels.begin());
}

struct AdamState {
  std::vector<Mat> m, v;
  long step = 0;
};

void adam_step(ModelParams& params, const ModelParams& grad, AdamState& st, double lr) {
  constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  auto p = tensors(params);
  auto g = tensors(grad);
  if (st.m.empty()) {
    for (const auto& t : p) {
      st.m.push_back(Mat::Zero(t.value->rows(), t.value->cols()));
      st.v.push_back(Mat::Zero(t.value->rows(), t.value->cols()));
    }
  }
  ++st.step;
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(st.step));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(st.step));
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Mat& gi = *g[i].value;
    st.m[i] = beta1 * st.m[i] + (1.0 - beta1) * gi;
    st.v[i] = beta2 * st.v[i] + (1.0 - beta2) * gi.cwiseProduct(gi);
    p[i].value->array() -=
        lr * (st.m[i].array() / c1) / ((st.v[i].array() / c2).sqrt() + eps);
  }
}

void zero(ModelParams& g) {
  for (auto& t : tensors(g)) t.value->setZero();
}

std::vector<LabeledSample> prepare(const std::vector<BssSequence>& set, const Vocabulary& vocab,
                                   const std::vector<std::string>& labels, std::size_t max_len) {
  std::vector<LabeledSample> out;
  out.reserve(set.size());
  for (const auto& s : set) out.push_back({tokenize(s, vocab, max_len), label_index(labels, s)});
  return out;
}

}  // namespace

TrainResult train(const CorpusSplit& split, ClassifierConfig config) {
  if (split.train.empty()) throw Error(ErrorCode::empty_input, "train split");
  if (split.test.empty()) throw Error(ErrorCode::empty_input, "test split");
  const auto labels = label_set(split.train);
  for (const auto& l : label_set(split.test)) {
    if (std::find(labels.begin(), labels.end(), l) == labels.end()) {
      throw Error(ErrorCode::class_absent, l, "class missing from training split");
    }
  }
  config.n_classes = static_cast<int>(labels.size());
  config.validate();

  Vocabulary vocab = build_vocab(split.train);
  const double omega = choose_omega(corpus_stats(split.train),
                                    config.omega > 0.0 ? std::optional(config.omega) : std::nullopt);
  TrainResult result;
  result.trained = {ToyModel::create(config, vocab.size(), omega, derive_seed(config.seed, "init")),
                    vocab, labels};
  ToyModel& model = result.trained.model;

  const auto train_set = prepare(split.train, vocab, labels, config.max_len);

  TrainReport& report = result.report;
  report.labels = labels;
  report.train_size = split.train.size();
  report.test_size = split.test.size();
  report.omega = omega;
  for (const auto& s : train_set) report.initial_loss += loss_and_grad(model, s.tokens, s.label, nullptr);
  report.initial_loss /= static_cast<double>(train_set.size());

  ModelParams grad = zero_params(config, vocab.size());
  AdamState adam;
  DropoutContext dropout{config.dropout, std::mt19937_64(derive_seed(config.seed, "dropout"))};
  std::vector<std::size_t> order(train_set.size());
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 shuffle_rng(derive_seed(config.seed, static_cast<std::uint64_t>(epoch)));
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      zero(grad);
      for (std::size_t i = start; i < end; ++i) {
        const auto& s = train_set[order[i]];
        epoch_loss += loss_and_grad(model, s.tokens, s.label, &grad, &dropout);
      }
      const double inv = 1.0 / static_cast<double>(end - start);
      for (auto& t : tensors(grad)) *t.value *= inv;
      adam_step(model.params, grad, adam, config.lr);
    }
    report.epoch_losses.push_back(epoch_loss / static_cast<double>(train_set.size()));
  }
  report.metrics = evaluate(result.trained, split.test);
  return result;
}

TrainResult train(const std::vector<BssSequence>& corpus, const ClassifierConfig& config) {
  return train(split_by_source(corpus, kTestFraction, derive_seed(config.seed, "split")), config);
}

std::vector<int> predict_all(const TrainedModel& m, const std::vector<BssSequence>& set) {
  std::vector<int> out;
  out.reserve(set.size());
  for (const auto& s : set) out.push_back(predict(m.model, tokenize(s, m.vocab, m.model.config.max_len)));
  return out;
}

std::vector<int> label_indices(const TrainedModel& m, const std::vector<BssSequence>& set) {
  std::vector<int> out;
  out.reserve(set.size());
  for (const auto& s : set) out.push_back(label_index(m.labels, s));
  return out;
}

Metrics evaluate(const TrainedModel& m, const std::vector<BssSequence>& test_set) {
  if (test_set.empty()) throw Error(ErrorCode::empty_input, "test set");
  const auto truth = label_indices(m, test_set);
  const auto pred = predict_all(m, test_set);
  return compute_metrics(truth, pred, m.model.config.n_classes);
}

GradCheckReport grad_check(const ToyModel& model, const LabeledSample& sample, double epsilon,
                           std::size_t n_params, std::uint64_t seed,
                           const std::string& tensor_prefix) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::invalid_parameter, "epsilon");
  ModelParams grad = zero_params(model.config, model.fusion.vocab_size);
  loss_and_grad(model, sample.tokens, sample.label, &grad, nullptr);
  for (const auto& t : tensors(grad)) {
    if (!t.value->allFinite()) throw Error(ErrorCode::non_finite, t.name, "analytic gradient");
  }

  ToyModel probe = model;
  auto params = tensors(probe.params);
  auto grads = tensors(grad);
  std::vector<std::pair<std::size_t, Eigen::Index>> all;
  for (std::size_t t = 0; t < params.size(); ++t) {
    if (!params[t].name.starts_with(tensor_prefix)) continue;
    for (Eigen::Index i = 0; i < params[t].value->size(); ++i) all.emplace_back(t, i);
  }
  std::mt19937_64 rng(seed);
  if (all.empty()) throw Error(ErrorCode::invalid_parameter, tensor_prefix, "no matching tensor");
  std::shuffle(all.begin(), all.end(), rng);
  if (all.size() > n_params) all.resize(n_params);

  GradCheckReport r;
  for (auto [t, i] : all) {
    double& w = params[t].value->data()[i];
    const double saved = w;
    w = saved + epsilon;
    const double up = loss_and_grad(probe, sample.tokens, sample.label, nullptr);
    w = saved - epsilon;
    const double down = loss_and_grad(probe, sample.tokens, sample.label, nullptr);
    w = saved;
    const double numeric = (up - down) / (2.0 * epsilon);
    const double analytic = grads[t].value->data()[i];
    if (!std::isfinite(numeric)) throw Error(ErrorCode::non_finite, params[t].name, "numeric gradient");
    const double abs_err = std::abs(analytic - numeric);
    const double rel = abs_err / std::max({std::abs(analytic), std::abs(numeric), kGradCheckFloor});
    r.max_abs_error = std::max(r.max_abs_error, abs_err);
    if (rel > r.max_rel_error) {
      r.max_rel_error = rel;
      r.worst_tensor = params[t].name;
    }
    ++r.checked;
  }
  return r;
}

std::vector<AblationRow> ablate(const CorpusSplit& split, const ClassifierConfig& config,
                                const std::vector<std::string>& variants) {
  std::vector<std::string> wanted = variants;
  if (wanted.empty()) wanted.assign(std::begin(kAblationVariants), std::end(kAblationVariants));
  std::vector<AblationRow> rows;
  for (const auto& v : wanted) {
    AblationRow row;
    row.variant = v;
    if (v == "baseline") {
    } else if (v == "time-only") {
      row.time = true;
    } else if (v == "roles-only") {
      row.roles = true;
    } else if (v == "both") {
      row.roles = row.time = true;
    } else {
      throw Error(ErrorCode::invalid_parameter, v, "unknown ablation variant");
    }
    ClassifierConfig c = config;
    c.use_roles = row.roles;
    c.use_time = row.time;
    row.metrics = train(split, c).report.metrics;
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const std::vector<AblationRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"variant", r.variant},
                   {"roles", r.roles},
                   {"time", r.time},
                   {"accuracy", r.metrics.accuracy},
                   {"macro_f1", r.metrics.macro_f1},
                   {"precision", r.metrics.macro_precision},
                   {"recall", r.metrics.macro_recall}});
  }
  return out;
}

}  // namespace seer
