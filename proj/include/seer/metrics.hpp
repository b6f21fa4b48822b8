#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace seer {

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct Metrics {
  double accuracy = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;  // mean of per-class F1
  std::vector<ClassMetrics> per_class;
  // confusion[true][predicted]
  std::vector<std::vector<std::size_t>> confusion;
  std::vector<std::string> warnings;
};

// Classes with a zero denominator score 0 and add a warning.
// Throws empty_input when there are no samples.
Metrics compute_metrics(std::span<const int> truth, std::span<const int> predicted, int n_classes);

nlohmann::json to_json(const Metrics& m, const std::vector<std::string>& labels);
std::string confusion_csv(const Metrics& m, const std::vector<std::string>& labels);

}  // namespace seer
