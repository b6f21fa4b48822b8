#include "seer/fusion.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "seer/error.hpp"

namespace seer {

void FusionConfig::validate() const {
  if (d_model <= 0 || d_model % 2 != 0) {
    throw Error(ErrorCode::invalid_parameter, "d_model", "must be positive and even");
  }
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw Error(ErrorCode::invalid_parameter, "omega", "must be > 0");
  }
}

FusionParams FusionParams::zeros(const FusionConfig& c) {
  const auto d = static_cast<Eigen::Index>(c.d_model);
  FusionParams p;
  p.token_table = Mat::Zero(static_cast<Eigen::Index>(c.vocab_size), d);
  p.w = Mat::Zero(d, 6);
  p.b = Mat::Zero(1, d);
  p.w2 = Mat::Zero(d, 2 * d);
  p.b2 = Mat::Zero(1, d);
  return p;
}

FusionParams FusionParams::init(const FusionConfig& c, std::uint64_t seed) {
  FusionParams p = zeros(c);
  std::mt19937_64 rng(seed);
  auto fill = [&](Mat& m, double fan_in) {
    std::uniform_real_distribution<double> u(-1.0 / std::sqrt(fan_in), 1.0 / std::sqrt(fan_in));
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  };
  fill(p.token_table, 1.0);
  fill(p.w, 6.0);
  fill(p.b, 6.0);
  fill(p.w2, 2.0 * c.d_model);
  fill(p.b2, 2.0 * c.d_model);
  return p;
}

void FusionParams::check_shapes(const FusionConfig& c) const {
  const auto d = static_cast<Eigen::Index>(c.d_model);
  auto need = [](const Mat& m, Eigen::Index r, Eigen::Index cols, const char* name) {
    if (m.rows() != r || m.cols() != cols) {
      throw Error(ErrorCode::shape_mismatch, name,
                  std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected " +
                      std::to_string(r) + "x" + std::to_string(cols));
    }
  };
  need(token_table, static_cast<Eigen::Index>(c.vocab_size), d, "token_table");
  need(w, d, 6, "W");
  need(b, 1, d, "b");
  need(w2, d, 2 * d, "W2");
  need(b2, 1, d, "b2");
}

CircularVector circular_embed(double h1, double h2, double t, double omega) {
  for (double x : {h1, h2, t, omega}) {
    if (!std::isfinite(x)) throw Error(ErrorCode::non_finite, "circular_embed input");
  }
  return {std::sin(omega * h1), std::cos(omega * h1), std::sin(omega * h2),
          std::cos(omega * h2), std::sin(omega * t),  std::cos(omega * t)};
}

RowVec positional_encoding(std::size_t position, int d_model) {
  if (d_model <= 0 || d_model % 2 != 0) {
    throw Error(ErrorCode::invalid_parameter, "d_model", "must be positive and even");
  }
  RowVec pe(d_model);
  const double pos = static_cast<double>(position);
  for (int k = 0; k < d_model / 2; ++k) {
    const double rate = std::pow(10000.0, -2.0 * k / d_model);
    pe(2 * k) = std::sin(pos * rate);
    pe(2 * k + 1) = std::cos(pos * rate);
  }
  return pe;
}

RowVec positional_encoding(std::size_t position, int d_model, std::size_t max_len) {
  if (position >= max_len) {
    throw Error(ErrorCode::out_of_range, std::to_string(position),
                "position must be < max_len " + std::to_string(max_len));
  }
  return positional_encoding(position, d_model);
}

RowVec fuse(int token_id, std::size_t position, double h1, double h2, double t,
            const FusionParams& params, const FusionConfig& config) {
  if (token_id < 0 || static_cast<std::size_t>(token_id) >= config.vocab_size) {
    throw Error(ErrorCode::out_of_range, std::to_string(token_id), "token id");
  }
  const auto v = circular_embed(h1, h2, t, config.omega);
  const Eigen::Map<const RowVec> circ(v.data(), 6);
  const auto d = config.d_model;
  RowVec concat(2 * d);
  concat.head(d) = params.token_table.row(token_id) +
                   positional_encoding(position, d, config.max_len);
  concat.tail(d) = circ * params.w.transpose() + params.b;
  return concat * params.w2.transpose() + params.b2;
}

Mat fuse_sequence(const TokenizedSequence& seq, std::size_t rows, const FusionParams& params,
                  const FusionConfig& config) {
  Mat out(static_cast<Eigen::Index>(rows), config.d_model);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& s = seq.side_channel[i];
    out.row(static_cast<Eigen::Index>(i)) = fuse(seq.ids[i], i, s[0], s[1], s[2], params, config);
  }
  return out;
}

CorpusStats corpus_stats(const std::vector<BssSequence>& corpus) {
  CorpusStats s;
  for (const auto& seq : corpus) {
    for (const auto& e : seq.events) {
      s.max_h = std::max({s.max_h, e.h_caller, e.h_callee});
      s.max_t = std::max(s.max_t, e.t);
    }
  }
  return s;
}

double choose_omega(const CorpusStats& stats, std::optional<double> configured) {
  if (configured) {
    if (!(*configured > 0.0)) throw Error(ErrorCode::invalid_parameter, "omega", "must be > 0");
    return *configured;
  }
  if (!(stats.max_h > 0.0) || !(stats.max_t > 0.0)) {
    throw Error(ErrorCode::nonpositive_value, "max_h/max_t");
  }
  return std::numbers::pi / std::max(stats.max_h, stats.max_t);
}

}  // namespace seer
