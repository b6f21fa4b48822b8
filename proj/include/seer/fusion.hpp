#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "seer/bss.hpp"
#include "seer/tensor.hpp"

namespace seer {

struct FusionConfig {
  int d_model = 64;
  double omega = 1.0;
  std::size_t max_len = 151;
  std::size_t vocab_size = 0;

  void validate() const;  // d_model even and positive, omega > 0
};

/// Parameters of the dual-path input: token table on the symbol path, W/b for
/// the 6 -> d_model projection of the circular vector, W2/b2 for the
/// 2*d_model -> d_model re-projection of the concatenation.
struct FusionParams {
  Mat token_table;  // vocab_size x d_model
  Mat w;            // d_model x 6
  Mat b;            // 1 x d_model
  Mat w2;           // d_model x 2*d_model
  Mat b2;           // 1 x d_model

  static FusionParams zeros(const FusionConfig& config);
  // Uniform in +-1/sqrt(fan_in). A table lookup is a one-hot product with a
  // single active input, so the token table uses fan_in = 1.
  static FusionParams init(const FusionConfig& config, std::uint64_t seed);
  void check_shapes(const FusionConfig& config) const;
};

using CircularVector = std::array<double, 6>;

// [sin wH1, cos wH1, sin wH2, cos wH2, sin wt, cos wt]; throws non_finite.
CircularVector circular_embed(double h1, double h2, double t, double omega);

// Fixed sinusoidal encoding: pair k uses rate 10000^(-2k/d_model),
// entry 2k = sin, entry 2k+1 = cos. Throws out_of_range when position >= max_len.
RowVec positional_encoding(std::size_t position, int d_model, std::size_t max_len);
RowVec positional_encoding(std::size_t position, int d_model);

// W2 (token_table[id] + PE(position) || W v + b) + b2
RowVec fuse(int token_id, std::size_t position, double h1, double h2, double t,
            const FusionParams& params, const FusionConfig& config);

// Row-wise fuse over a whole tokenized sequence (first `rows` positions).
Mat fuse_sequence(const TokenizedSequence& seq, std::size_t rows, const FusionParams& params,
                  const FusionConfig& config);

struct CorpusStats {
  double max_h = 0.0;
  double max_t = 0.0;
};

CorpusStats corpus_stats(const std::vector<BssSequence>& corpus);

// pi / max(max_h, max_t): every observed phase stays inside [0, pi].
// A configured value takes precedence.
double choose_omega(const CorpusStats& stats, std::optional<double> configured = std::nullopt);

}  // namespace seer
