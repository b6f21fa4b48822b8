#include "seer/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "seer/error.hpp"
#include "seer/rng.hpp"

namespace seer {

using nlohmann::json;

ClassifierConfig ClassifierConfig::toy_scale() { return {}; }

ClassifierConfig ClassifierConfig::paper_scale() {
  ClassifierConfig c;
  c.d_model = 512;
  c.n_heads = 16;
  c.n_layers = 8;
  c.d_ff = 4 * 512;
  c.dropout = 0.5;
  c.n_classes = 23;
  c.lr = 1e-4;
  c.batch_size = 64;
  c.epochs = 160;
  return c;
}

void ClassifierConfig::validate() const {
  auto bad = [](const char* name, const char* why) {
    throw Error(ErrorCode::invalid_parameter, name, why);
  };
  if (d_model <= 0 || d_model % 2 != 0) bad("d_model", "must be positive and even");
  if (n_heads <= 0 || d_model % n_heads != 0) bad("n_heads", "must divide d_model");
  if (n_layers < 0) bad("n_layers", "must be >= 0");
  if (d_ff <= 0) bad("d_ff", "must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) bad("dropout", "must be in [0, 1)");
  if (n_classes < 1 || n_classes > 23) bad("n_classes", "must be in [1, 23]");
  if (!(lr >= 0.0)) bad("lr", "must be >= 0");
  if (batch_size < 1) bad("batch_size", "must be positive");
  if (epochs < 0) bad("epochs", "must be >= 0");
  if (max_len < 2) bad("max_len", "must be >= 2");
  if (!(layer_norm_eps > 0.0)) bad("layer_norm_eps", "must be > 0");
}

json to_json(const ClassifierConfig& c) {
  return {{"d_model", c.d_model},     {"n_heads", c.n_heads},   {"n_layers", c.n_layers},
          {"d_ff", c.d_ff},           {"dropout", c.dropout},   {"n_classes", c.n_classes},
          {"lr", c.lr},               {"batch_size", c.batch_size}, {"epochs", c.epochs},
          {"seed", c.seed},           {"max_len", c.max_len},   {"omega", c.omega},
          {"use_roles", c.use_roles}, {"use_time", c.use_time}, {"layer_norm_eps", c.layer_norm_eps}};
}

ClassifierConfig classifier_config_from_json(const json& j, ClassifierConfig c) {
  if (!j.is_object()) throw Error(ErrorCode::schema_violation, "classifier", "expected an object");
  for (const auto& [key, v] : j.items()) {
    try {
      if (key == "d_model") c.d_model = v.get<int>();
      else if (key == "n_heads") c.n_heads = v.get<int>();
      else if (key == "n_layers") c.n_layers = v.get<int>();
      else if (key == "d_ff") c.d_ff = v.get<int>();
      else if (key == "dropout") c.dropout = v.get<double>();
      else if (key == "n_classes") c.n_classes = v.get<int>();
      else if (key == "lr") c.lr = v.get<double>();
      else if (key == "batch_size") c.batch_size = v.get<int>();
      else if (key == "epochs") c.epochs = v.get<int>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "max_len") c.max_len = v.get<std::size_t>();
      else if (key == "omega") c.omega = v.get<double>();
      else if (key == "use_roles") c.use_roles = v.get<bool>();
      else if (key == "use_time") c.use_time = v.get<bool>();
      else if (key == "layer_norm_eps") c.layer_norm_eps = v.get<double>();
      else if (key == "scale") {
        const auto s = v.get<std::string>();
        if (s == "paper") c = ClassifierConfig::paper_scale();
        else if (s == "toy") c = ClassifierConfig::toy_scale();
        else throw Error(ErrorCode::schema_violation, "scale", "expected toy or paper");
      } else {
        throw Error(ErrorCode::schema_violation, key, "unknown classifier field");
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::schema_violation, key, e.what());
    }
  }
  c.validate();
  return c;
}

std::vector<NamedTensor> tensors(ModelParams& p) {
  std::vector<NamedTensor> out = {{"fusion.token_table", &p.fusion.token_table},
                                  {"fusion.w", &p.fusion.w},
                                  {"fusion.b", &p.fusion.b},
                                  {"fusion.w2", &p.fusion.w2},
                                  {"fusion.b2", &p.fusion.b2}};
  for (std::size_t i = 0; i < p.layers.size(); ++i) {
    auto& l = p.layers[i];
    const std::string pre = "layer" + std::to_string(i) + ".";
    for (auto [name, m] : std::initializer_list<std::pair<const char*, Mat*>>{
             {"wq", &l.wq},           {"bq", &l.bq},         {"wk", &l.wk},
             {"bk", &l.bk},           {"wv", &l.wv},         {"bv", &l.bv},
             {"wo", &l.wo},           {"bo", &l.bo},         {"ln1_gain", &l.ln1_gain},
             {"ln1_bias", &l.ln1_bias}, {"ff1_w", &l.ff1_w}, {"ff1_b", &l.ff1_b},
             {"ff2_w", &l.ff2_w},     {"ff2_b", &l.ff2_b},   {"ln2_gain", &l.ln2_gain},
             {"ln2_bias", &l.ln2_bias}}) {
      out.push_back({pre + name, m});
    }
  }
  out.push_back({"head.w", &p.head.w});
  out.push_back({"head.b", &p.head.b});
  return out;
}

std::vector<ConstNamedTensor> tensors(const ModelParams& p) {
  std::vector<ConstNamedTensor> out;
  for (auto& t : tensors(const_cast<ModelParams&>(p))) out.push_back({t.name, t.value});
  return out;
}

std::size_t parameter_count(const ModelParams& p) {
  std::size_t n = 0;
  for (const auto& t : tensors(p)) n += static_cast<std::size_t>(t.value->size());
  return n;
}

namespace {

FusionConfig fusion_config(const ClassifierConfig& c, std::size_t vocab_size, double omega) {
  FusionConfig f;
  f.d_model = c.d_model;
  f.omega = omega;
  f.max_len = c.max_len;
  f.vocab_size = vocab_size;
  return f;
}

}  // namespace

ModelParams zero_params(const ClassifierConfig& c, std::size_t vocab_size) {
  c.validate();
  const Eigen::Index d = c.d_model, ff = c.d_ff, k = c.n_classes;
  ModelParams p;
  p.fusion = FusionParams::zeros(fusion_config(c, vocab_size, 1.0));
  for (int i = 0; i < c.n_layers; ++i) {
    EncoderLayerParams l;
    for (Mat* m : {&l.wq, &l.wk, &l.wv, &l.wo}) *m = Mat::Zero(d, d);
    for (Mat* m : {&l.bq, &l.bk, &l.bv, &l.bo, &l.ln1_bias, &l.ln2_bias, &l.ff2_b}) {
      *m = Mat::Zero(1, d);
    }
    l.ln1_gain = Mat::Zero(1, d);
    l.ln2_gain = Mat::Zero(1, d);
    l.ff1_w = Mat::Zero(ff, d);
    l.ff1_b = Mat::Zero(1, ff);
    l.ff2_w = Mat::Zero(d, ff);
    p.layers.push_back(std::move(l));
  }
  p.head.w = Mat::Zero(k, d);
  p.head.b = Mat::Zero(1, k);
  return p;
}

ModelParams init_params(const ClassifierConfig& c, std::size_t vocab_size, std::uint64_t seed) {
  ModelParams p = zero_params(c, vocab_size);
  p.fusion = FusionParams::init(fusion_config(c, vocab_size, 1.0), derive_seed(seed, "fusion"));
  std::mt19937_64 rng(derive_seed(seed, "encoder"));
  auto fill = [&](Mat& m, double fan_in) {
    const double r = 1.0 / std::sqrt(fan_in);
    std::uniform_real_distribution<double> u(-r, r);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  };
  for (auto& l : p.layers) {
    for (auto [w, b] : {std::pair{&l.wq, &l.bq}, {&l.wk, &l.bk}, {&l.wv, &l.bv}, {&l.wo, &l.bo}}) {
      fill(*w, c.d_model);
      fill(*b, c.d_model);
    }
    fill(l.ff1_w, c.d_model);
    fill(l.ff1_b, c.d_model);
    fill(l.ff2_w, c.d_ff);
    fill(l.ff2_b, c.d_ff);
    l.ln1_gain.setOnes();
    l.ln2_gain.setOnes();
  }
  // Head starts narrower (+-1/fan_in, zero bias): the post-norm CLS features
  // have unit variance, and the wider range puts the initial loss well above ln k.
  fill(p.head.w, static_cast<double>(c.d_model) * c.d_model);
  return p;
}

ToyModel ToyModel::create(const ClassifierConfig& config, std::size_t vocab_size, double omega,
                          std::uint64_t seed) {
  config.validate();
  ToyModel m;
  m.config = config;
  m.fusion = fusion_config(config, vocab_size, omega);
  m.fusion.validate();
  m.params = init_params(config, vocab_size, seed);
  return m;
}

namespace {

void add_bias(Mat& y, const Mat& b) { y.rowwise() += b.row(0); }

Mat linear(const Mat& x, const Mat& w, const Mat& b) {
  Mat y = x * w.transpose();
  add_bias(y, b);
  return y;
}

// dW += dy^T x, db += colsum(dy), returns dy W.
Mat linear_backward(const Mat& dy, const Mat& x, const Mat& w, Mat& dw, Mat& db) {
  dw.noalias() += dy.transpose() * x;
  db += dy.colwise().sum();
  return dy * w;
}

struct NormCache {
  Mat xhat;
  Eigen::VectorXd inv_std;
};

Mat layer_norm(const Mat& x, const Mat& gain, const Mat& bias, double eps, NormCache* cache) {
  const auto n = static_cast<double>(x.cols());
  Mat xhat(x.rows(), x.cols());
  Eigen::VectorXd inv_std(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double mu = x.row(i).sum() / n;
    const double var = (x.row(i).array() - mu).square().sum() / n;
    inv_std(i) = 1.0 / std::sqrt(var + eps);
    xhat.row(i) = (x.row(i).array() - mu) * inv_std(i);
  }
  Mat y = xhat.array().rowwise() * gain.row(0).array();
  add_bias(y, bias);
  if (cache) *cache = {std::move(xhat), std::move(inv_std)};
  return y;
}

Mat layer_norm_backward(const Mat& dy, const NormCache& c, const Mat& gain, Mat& dgain,
                        Mat& dbias) {
  dgain += (dy.array() * c.xhat.array()).matrix().colwise().sum();
  dbias += dy.colwise().sum();
  const auto n = static_cast<double>(dy.cols());
  Mat dxhat = dy.array().rowwise() * gain.row(0).array();
  Mat dx(dy.rows(), dy.cols());
  for (Eigen::Index i = 0; i < dy.rows(); ++i) {
    const double s1 = dxhat.row(i).sum();
    const double s2 = dxhat.row(i).dot(c.xhat.row(i));
    dx.row(i) = (c.inv_std(i) / n) *
                (n * dxhat.row(i).array() - s1 - c.xhat.row(i).array() * s2);
  }
  return dx;
}

// Empty when dropout is off.
Mat dropout_mask(Eigen::Index rows, Eigen::Index cols, DropoutContext* ctx) {
  if (!ctx || ctx->rate <= 0.0) return {};
  std::bernoulli_distribution keep(1.0 - ctx->rate);
  const double scale = 1.0 / (1.0 - ctx->rate);
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = keep(ctx->rng) ? scale : 0.0;
  return m;
}

void apply_mask(Mat& x, const Mat& mask) {
  if (mask.size() != 0) x.array() *= mask.array();
}

struct LayerCache {
  Mat x, q, k, v;
  std::vector<Mat> probs;
  Mat concat;
  Mat drop1;
  NormCache ln1;
  Mat y1, h_pre, h;
  Mat drop2;
  NormCache ln2;
};

Mat layer_forward(const EncoderLayerParams& p, int n_heads, const Mat& x,
                  const std::vector<std::uint8_t>& mask, double eps, DropoutContext* drop,
                  LayerCache* cache, std::vector<Mat>* attention) {
  const Eigen::Index rows = x.rows();
  const Eigen::Index d = x.cols();
  const Eigen::Index dh = d / n_heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

  Mat q = linear(x, p.wq, p.bq);
  Mat k = linear(x, p.wk, p.bk);
  Mat v = linear(x, p.wv, p.bv);
  Mat concat = Mat::Zero(rows, d);
  std::vector<Mat> probs;
  for (int h = 0; h < n_heads; ++h) {
    Mat s = q.middleCols(h * dh, dh) * k.middleCols(h * dh, dh).transpose() * scale;
    Mat pr = Mat::Zero(rows, rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (!mask[static_cast<std::size_t>(i)]) continue;
      double mx = -std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < rows; ++j) {
        if (mask[static_cast<std::size_t>(j)]) mx = std::max(mx, s(i, j));
      }
      double z = 0.0;
      for (Eigen::Index j = 0; j < rows; ++j) {
        if (!mask[static_cast<std::size_t>(j)]) continue;
        pr(i, j) = std::exp(s(i, j) - mx);
        z += pr(i, j);
      }
      pr.row(i) /= z;
    }
    concat.middleCols(h * dh, dh).noalias() = pr * v.middleCols(h * dh, dh);
    probs.push_back(std::move(pr));
  }
  Mat attn = linear(concat, p.wo, p.bo);
  Mat drop1 = dropout_mask(rows, d, drop);
  apply_mask(attn, drop1);
  NormCache ln1;
  Mat y1 = layer_norm(x + attn, p.ln1_gain, p.ln1_bias, eps, cache ? &ln1 : nullptr);

  Mat h_pre = linear(y1, p.ff1_w, p.ff1_b);
  Mat h = h_pre.cwiseMax(0.0);
  Mat ff = linear(h, p.ff2_w, p.ff2_b);
  Mat drop2 = dropout_mask(rows, d, drop);
  apply_mask(ff, drop2);
  NormCache ln2;
  Mat y2 = layer_norm(y1 + ff, p.ln2_gain, p.ln2_bias, eps, cache ? &ln2 : nullptr);

  if (attention) *attention = probs;
  if (cache) {
    *cache = {x,  std::move(q), std::move(k), std::move(v), std::move(probs), std::move(concat),
              std::move(drop1), std::move(ln1), std::move(y1), std::move(h_pre), std::move(h),
              std::move(drop2), std::move(ln2)};
  }
  return y2;
}

// Returns d loss / d x for the layer input.
Mat layer_backward(const EncoderLayerParams& p, EncoderLayerParams& g, int n_heads,
                   const LayerCache& c, const Mat& dy2) {
  const Eigen::Index d = c.x.cols();
  const Eigen::Index dh = d / n_heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

  Mat dr2 = layer_norm_backward(dy2, c.ln2, p.ln2_gain, g.ln2_gain, g.ln2_bias);
  Mat dff = dr2;
  apply_mask(dff, c.drop2);
  Mat dh_act = linear_backward(dff, c.h, p.ff2_w, g.ff2_w, g.ff2_b);
  Mat dh_pre = (c.h_pre.array() > 0.0).select(dh_act, 0.0);
  Mat dy1 = dr2 + linear_backward(dh_pre, c.y1, p.ff1_w, g.ff1_w, g.ff1_b);

  Mat dr1 = layer_norm_backward(dy1, c.ln1, p.ln1_gain, g.ln1_gain, g.ln1_bias);
  Mat dattn = dr1;
  apply_mask(dattn, c.drop1);
  Mat dconcat = linear_backward(dattn, c.concat, p.wo, g.wo, g.bo);

  Mat dq(c.q.rows(), d), dk(c.k.rows(), d), dv(c.v.rows(), d);
  for (int h = 0; h < n_heads; ++h) {
    const Mat& pr = c.probs[static_cast<std::size_t>(h)];
    const auto da = dconcat.middleCols(h * dh, dh);
    Mat dp = da * c.v.middleCols(h * dh, dh).transpose();
    dv.middleCols(h * dh, dh).noalias() = pr.transpose() * da;
    Eigen::VectorXd row_dot = (dp.array() * pr.array()).rowwise().sum();
    Mat ds = pr.array() * (dp.array().colwise() - row_dot.array());
    ds *= scale;
    dq.middleCols(h * dh, dh).noalias() = ds * c.k.middleCols(h * dh, dh);
    dk.middleCols(h * dh, dh).noalias() = ds.transpose() * c.q.middleCols(h * dh, dh);
  }
  Mat dx = dr1;
  dx += linear_backward(dq, c.x, p.wq, g.wq, g.bq);
  dx += linear_backward(dk, c.x, p.wk, g.wk, g.bk);
  dx += linear_backward(dv, c.x, p.wv, g.wv, g.bv);
  return dx;
}

struct ForwardCache {
  std::size_t rows = 0;
  Mat circ;    // rows x 6
  Mat concat;  // rows x 2d
  Mat drop0;
  std::vector<LayerCache> layers;
  RowVec pooled;
};

std::size_t active_rows(const TokenizedSequence& seq, std::size_t max_len) {
  if (seq.ids.size() != seq.attention_mask.size() || seq.ids.size() != seq.side_channel.size()) {
    throw Error(ErrorCode::shape_mismatch, "tokenized sequence", "ids/mask/side lengths differ");
  }
  if (seq.ids.size() > max_len) {
    throw Error(ErrorCode::shape_mismatch, "tokenized sequence",
                "length " + std::to_string(seq.ids.size()) + " > max_len " + std::to_string(max_len));
  }
  if (seq.ids.empty() || !seq.attention_mask[0]) {
    throw Error(ErrorCode::shape_mismatch, "tokenized sequence", "position 0 must be a real token");
  }
  // Rows after the last real token cannot influence real rows.
  std::size_t rows = 0;
  for (std::size_t i = 0; i < seq.attention_mask.size(); ++i) {
    if (seq.attention_mask[i]) rows = i + 1;
  }
  return rows;
}

std::vector<double> forward(const ToyModel& m, const TokenizedSequence& raw, DropoutContext* drop,
                            ForwardCache* cache) {
  const TokenizedSequence seq = apply_feature_switches(raw, m.config);
  const std::size_t rows = active_rows(seq, m.config.max_len);
  const Eigen::Index r = static_cast<Eigen::Index>(rows);
  const Eigen::Index d = m.config.d_model;
  const FusionParams& fp = m.params.fusion;

  Mat circ(r, 6);
  Mat concat(r, 2 * d);
  for (Eigen::Index i = 0; i < r; ++i) {
    const auto pos = static_cast<std::size_t>(i);
    const int id = seq.ids[pos];
    if (id < 0 || static_cast<std::size_t>(id) >= m.fusion.vocab_size) {
      throw Error(ErrorCode::out_of_range, std::to_string(id), "token id");
    }
    const auto& s = seq.side_channel[pos];
    const auto v = circular_embed(s[0], s[1], s[2], m.fusion.omega);
    for (int k = 0; k < 6; ++k) circ(i, k) = v[static_cast<std::size_t>(k)];
    concat.row(i).head(d) = fp.token_table.row(id) + positional_encoding(pos, m.config.d_model);
  }
  concat.rightCols(d) = linear(circ, fp.w, fp.b);
  Mat x = linear(concat, fp.w2, fp.b2);
  Mat drop0 = dropout_mask(r, d, drop);
  apply_mask(x, drop0);

  std::vector<std::uint8_t> mask(seq.attention_mask.begin(),
                                 seq.attention_mask.begin() + static_cast<std::ptrdiff_t>(rows));
  if (cache) cache->layers.resize(m.params.layers.size());
  for (std::size_t l = 0; l < m.params.layers.size(); ++l) {
    x = layer_forward(m.params.layers[l], m.config.n_heads, x, mask, m.config.layer_norm_eps, drop,
                      cache ? &cache->layers[l] : nullptr, nullptr);
  }
  RowVec pooled = x.row(0);
  RowVec out = pooled * m.params.head.w.transpose() + m.params.head.b;
  if (cache) {
    cache->rows = rows;
    cache->circ = std::move(circ);
    cache->concat = std::move(concat);
    cache->drop0 = std::move(drop0);
    cache->pooled = std::move(pooled);
  }
  return {out.data(), out.data() + out.size()};
}

void backward(const ToyModel& m, const TokenizedSequence& seq, const ForwardCache& c,
              const std::vector<double>& dlogits, ModelParams& g) {
  const Eigen::Index d = m.config.d_model;
  const Eigen::Index r = static_cast<Eigen::Index>(c.rows);
  const Eigen::Map<const RowVec> dl(dlogits.data(), static_cast<Eigen::Index>(dlogits.size()));
  g.head.w.noalias() += dl.transpose() * c.pooled;
  g.head.b += dl;

  Mat dx = Mat::Zero(r, d);
  dx.row(0) = dl * m.params.head.w;
  for (std::size_t l = m.params.layers.size(); l-- > 0;) {
    dx = layer_backward(m.params.layers[l], g.layers[l], m.config.n_heads, c.layers[l], dx);
  }
  apply_mask(dx, c.drop0);

  const FusionParams& fp = m.params.fusion;
  FusionParams& gf = g.fusion;
  Mat dconcat = linear_backward(dx, c.concat, fp.w2, gf.w2, gf.b2);
  Mat dfreq = dconcat.rightCols(d);
  linear_backward(dfreq, c.circ, fp.w, gf.w, gf.b);
  for (Eigen::Index i = 0; i < r; ++i) {
    gf.token_table.row(seq.ids[static_cast<std::size_t>(i)]) += dconcat.row(i).head(d);
  }
}

}  // namespace

Mat encoder_forward(const std::vector<EncoderLayerParams>& layers, int n_heads, const Mat& input,
                    const std::vector<std::uint8_t>& mask, double layer_norm_eps,
                    std::vector<std::vector<Mat>>* attention) {
  if (static_cast<std::size_t>(input.rows()) != mask.size()) {
    throw Error(ErrorCode::shape_mismatch, "mask", "mask length must equal input rows");
  }
  if (n_heads <= 0 || input.cols() % n_heads != 0) {
    throw Error(ErrorCode::shape_mismatch, "n_heads", "must divide d_model");
  }
  for (const auto& l : layers) {
    if (l.wq.cols() != input.cols()) {
      throw Error(ErrorCode::shape_mismatch, "input", "width differs from d_model");
    }
  }
  Mat x = input;
  if (attention) attention->clear();
  for (const auto& l : layers) {
    std::vector<Mat> probs;
    x = layer_forward(l, n_heads, x, mask, layer_norm_eps, nullptr, nullptr,
                      attention ? &probs : nullptr);
    if (attention) attention->push_back(std::move(probs));
  }
  return x;
}

TokenizedSequence apply_feature_switches(const TokenizedSequence& seq, const ClassifierConfig& c) {
  if (c.use_roles && c.use_time) return seq;
  TokenizedSequence out = seq;
  for (auto& s : out.side_channel) {
    if (!c.use_roles) s[0] = s[1] = 0.0;
    if (!c.use_time) s[2] = 0.0;
  }
  return out;
}

std::vector<double> logits(const ToyModel& model, const TokenizedSequence& seq) {
  return forward(model, seq, nullptr, nullptr);
}

std::vector<double> softmax(const std::vector<double>& z) {
  const double mx = *std::max_element(z.begin(), z.end());
  std::vector<double> p(z.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) sum += (p[i] = std::exp(z[i] - mx));
  for (double& x : p) x /= sum;
  return p;
}

std::vector<double> classify(const ToyModel& model, const TokenizedSequence& seq) {
  return softmax(logits(model, seq));
}

int predict(const ToyModel& model, const TokenizedSequence& seq) {
  const auto z = logits(model, seq);
  return static_cast<int>(std::max_element(z.begin(), z.end()) - z.begin());
}

double loss_and_grad(const ToyModel& model, const TokenizedSequence& seq, int label,
                     ModelParams* grad, DropoutContext* dropout) {
  if (label < 0 || label >= model.config.n_classes) {
    throw Error(ErrorCode::out_of_range, std::to_string(label), "class label");
  }
  ForwardCache cache;
  const auto z = forward(model, seq, dropout, grad ? &cache : nullptr);
  auto p = softmax(z);
  const double mx = *std::max_element(z.begin(), z.end());
  double lse = 0.0;
  for (double v : z) lse += std::exp(v - mx);
  const double loss = mx + std::log(lse) - z[static_cast<std::size_t>(label)];
  if (grad) {
    p[static_cast<std::size_t>(label)] -= 1.0;
    backward(model, seq, cache, p, *grad);
  }
  return loss;
}

}  // namespace seer
