#include "seer/metrics.hpp"

#include <sstream>

#include "seer/error.hpp"

namespace seer {

Metrics compute_metrics(std::span<const int> truth, std::span<const int> predicted, int n_classes) {
  if (truth.size() != predicted.size()) {
    throw Error(ErrorCode::shape_mismatch, "predictions", "truth and prediction lengths differ");
  }
  if (truth.empty()) throw Error(ErrorCode::empty_input, "test set");
  const auto k = static_cast<std::size_t>(n_classes);
  Metrics m;
  m.confusion.assign(k, std::vector<std::size_t>(k, 0));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= n_classes || predicted[i] < 0 || predicted[i] >= n_classes) {
      throw Error(ErrorCode::out_of_range, std::to_string(i), "class index");
    }
    ++m.confusion[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(predicted[i])];
    if (truth[i] == predicted[i]) ++correct;
  }
  m.accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());

  for (std::size_t c = 0; c < k; ++c) {
    std::size_t tp = m.confusion[c][c], row = 0, col = 0;
    for (std::size_t j = 0; j < k; ++j) {
      row += m.confusion[c][j];
      col += m.confusion[j][c];
    }
    ClassMetrics cm;
    cm.support = row;
    if (col == 0) {
      m.warnings.push_back("class " + std::to_string(c) + ": precision undefined (no predictions), scored 0");
    } else {
      cm.precision = static_cast<double>(tp) / static_cast<double>(col);
    }
    if (row == 0) {
      m.warnings.push_back("class " + std::to_string(c) + ": recall undefined (no support), scored 0");
    } else {
      cm.recall = static_cast<double>(tp) / static_cast<double>(row);
    }
    if (cm.precision + cm.recall > 0.0) {
      cm.f1 = 2.0 * cm.precision * cm.recall / (cm.precision + cm.recall);
    }
    m.per_class.push_back(cm);
    m.macro_precision += cm.precision;
    m.macro_recall += cm.recall;
    m.macro_f1 += cm.f1;
  }
  m.macro_precision /= static_cast<double>(k);
  m.macro_recall /= static_cast<double>(k);
  m.macro_f1 /= static_cast<double>(k);
  return m;
}

nlohmann::json to_json(const Metrics& m, const std::vector<std::string>& labels) {
  nlohmann::json per_class = nlohmann::json::array();
  for (std::size_t c = 0; c < m.per_class.size(); ++c) {
    const auto& cm = m.per_class[c];
    per_class.push_back({{"label", c < labels.size() ? labels[c] : std::to_string(c)},
                         {"precision", cm.precision},
                         {"recall", cm.recall},
                         {"f1", cm.f1},
                         {"support", cm.support}});
  }
  return {{"accuracy", m.accuracy},
          {"macro_precision", m.macro_precision},
          {"macro_recall", m.macro_recall},
          {"macro_f1", m.macro_f1},
          {"per_class", per_class},
          {"confusion", m.confusion},
          {"warnings", m.warnings}};
}

std::string confusion_csv(const Metrics& m, const std::vector<std::string>& labels) {
  auto name = [&](std::size_t c) { return c < labels.size() ? labels[c] : std::to_string(c); };
  std::ostringstream out;
  out << "true\\predicted";
  for (std::size_t c = 0; c < m.confusion.size(); ++c) out << ',' << name(c);
  out << '\n';
  for (std::size_t r = 0; r < m.confusion.size(); ++r) {
    out << name(r);
    for (auto v : m.confusion[r]) out << ',' << v;
    out << '\n';
  }
  return out.str();
}

}  // namespace seer
