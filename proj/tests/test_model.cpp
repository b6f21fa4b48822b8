#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "seer/bss.hpp"
#include "seer/error.hpp"
#include "seer/model.hpp"
#include "seer/synth.hpp"

using namespace seer;

namespace {

ClassifierConfig small(int layers = 1, int heads = 2) {
  ClassifierConfig c;
  c.d_model = 8;
  c.n_heads = heads;
  c.n_layers = layers;
  c.d_ff = 32;
  c.dropout = 0.0;
  c.n_classes = 4;
  c.max_len = 40;
  return c;
}

TokenizedSequence short_sequence(const Vocabulary& v) {
  SynthSpec spec;
  spec.per_class = 1;
  spec.bounds = {8, 12};
  return tokenize(synth_corpus(spec)[1], v, 40);
}

std::vector<std::uint8_t> mask_prefix(std::size_t len, std::size_t real) {
  std::vector<std::uint8_t> m(len, 0);
  std::fill(m.begin(), m.begin() + static_cast<long>(real), 1);
  return m;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("config defaults and validation") {
  const auto toy = ClassifierConfig::toy_scale();
  CHECK(toy.d_model == 64);
  CHECK(toy.n_heads == 4);
  CHECK(toy.n_layers == 2);
  CHECK(toy.dropout == 0.1);
  CHECK(toy.lr == 1e-3);
  CHECK(toy.batch_size == 32);
  CHECK(toy.epochs == 30);
  const auto paper = ClassifierConfig::paper_scale();
  CHECK(paper.d_model == 512);
  CHECK(paper.n_heads == 16);
  CHECK(paper.n_layers == 8);
  CHECK(paper.dropout == 0.5);
  CHECK(paper.lr == 1e-4);
  CHECK(paper.batch_size == 64);
  CHECK(paper.epochs == 160);
  CHECK_NOTHROW(paper.validate());

  ClassifierConfig bad = toy;
  bad.n_heads = 5;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = toy;
  bad.n_classes = 24;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = toy;
  bad.dropout = 1.0;
  CHECK_THROWS_AS(bad.validate(), Error);

  const auto back = classifier_config_from_json(to_json(paper));
  CHECK(to_json(back) == to_json(paper));
  CHECK(classifier_config_from_json(nlohmann::json::parse(R"({"scale":"paper"})")).d_model == 512);
  CHECK_THROWS_AS(classifier_config_from_json(nlohmann::json::parse(R"({"widht":3})")), Error);
}

TEST_CASE("parameter shapes") {
  const ClassifierConfig c = small(2);
  const ModelParams p = init_params(c, 40, 1);
  CHECK(p.layers.size() == 2);
  CHECK(p.head.w.rows() == 4);
  CHECK(p.head.w.cols() == 8);
  CHECK(p.layers[0].ff1_w.rows() == 32);
  const std::size_t fusion = 40 * 8 + 8 * 6 + 8 + 8 * 16 + 8;
  const std::size_t layer = 4 * (64 + 8) + 4 * 8 + (32 * 8 + 32) + (8 * 32 + 8);
  CHECK(parameter_count(p) == fusion + 2 * layer + 4 * 8 + 4);
  for (const auto& t : tensors(p)) CHECK(t.value->allFinite());
  CHECK(p.layers[1].ln2_gain.isOnes());
}

TEST_CASE("zero layers is the identity") {
  Mat x = Mat::Random(5, 8);
  CHECK(encoder_forward({}, 2, x, mask_prefix(5, 3)) == x);
}

TEST_CASE("uniform inputs attend uniformly") {
  ClassifierConfig c = small(1, 1);
  ModelParams p = init_params(c, 10, 2);
  Mat x = Mat::Zero(6, 8);
  x.rowwise() = RowVec::LinSpaced(8, -1, 1);
  std::vector<std::vector<Mat>> att;
  encoder_forward(p.layers, 1, x, mask_prefix(6, 4), 1e-5, &att);
  REQUIRE(att.size() == 1);
  const Mat& a = att[0][0];
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) CHECK(a(i, j) == doctest::Approx(0.25).epsilon(1e-12));
    for (int j = 4; j < 6; ++j) CHECK(a(i, j) == 0.0);
  }
}

TEST_CASE("attention rows sum to one over unmasked keys") {
  ClassifierConfig c = small(2, 2);
  const ModelParams p = init_params(c, 10, 3);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n01;
  Mat x(10, 8);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = n01(rng);
  std::vector<std::vector<Mat>> att;
  encoder_forward(p.layers, 2, x, mask_prefix(10, 7), 1e-5, &att);
  REQUIRE(att.size() == 2);
  for (const auto& layer : att) {
    for (const auto& head : layer) {
      for (int i = 0; i < 7; ++i) {
        CHECK(head.row(i).head(7).sum() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(head.row(i).tail(3).sum() == 0.0);
        CHECK(head.row(i).minCoeff() >= 0.0);
      }
      for (int i = 7; i < 10; ++i) CHECK(head.row(i).sum() == 0.0);
    }
  }
}

TEST_CASE("softmax") {
  const auto p = softmax({1.0, 1.0});
  CHECK(p[0] == 0.5);
  CHECK(p[1] == 0.5);
  const auto a = softmax({0.3, -2.0, 5.0, 1.0});
  const auto b = softmax({100.3, 98.0, 105.0, 101.0});
  for (int i = 0; i < 4; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-9);
  CHECK(std::accumulate(a.begin(), a.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero head gives the uniform distribution") {
  const Vocabulary v = full_vocabulary();
  ToyModel m = ToyModel::create(small(), v.size(), 1.0, 4);
  m.params.head.w.setZero();
  m.params.head.b.setZero();
  const auto p = classify(m, short_sequence(v));
  for (double x : p) CHECK(x == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("probabilities are a distribution") {
  const Vocabulary v = full_vocabulary();
  const ToyModel m = ToyModel::create(small(2), v.size(), 1.0, 5);
  const auto p = classify(m, short_sequence(v));
  CHECK(p.size() == 4);
  CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
  for (double x : p) CHECK(x >= 0.0);
  CHECK(predict(m, short_sequence(v)) == int(std::max_element(p.begin(), p.end()) - p.begin()));
}

TEST_CASE("masked positions do not affect logits") {
  const Vocabulary v = full_vocabulary();
  const ToyModel m = ToyModel::create(small(2), v.size(), 1.0, 6);
  const TokenizedSequence s = short_sequence(v);
  TokenizedSequence t = s;
  for (std::size_t i = s.real_length(); i < t.ids.size(); ++i) {
    t.ids[i] = static_cast<int>(i % v.size());
    t.side_channel[i] = {9.0, -3.0, 100.0};
  }
  CHECK(logits(m, s) == logits(m, t));
}

TEST_CASE("feature switches") {
  const Vocabulary v = full_vocabulary();
  const TokenizedSequence s = short_sequence(v);
  ClassifierConfig c = small();
  c.use_roles = false;
  auto r = apply_feature_switches(s, c);
  CHECK(r.side_channel[1][0] == 0.0);
  CHECK(r.side_channel[1][2] == s.side_channel[1][2]);
  c.use_roles = true;
  c.use_time = false;
  r = apply_feature_switches(s, c);
  CHECK(r.side_channel[1][0] == s.side_channel[1][0]);
  CHECK(r.side_channel[1][2] == 0.0);
}

TEST_CASE("dropout is seeded and only active when requested") {
  const Vocabulary v = full_vocabulary();
  ClassifierConfig c = small(1);
  c.dropout = 0.3;
  const ToyModel m = ToyModel::create(c, v.size(), 1.0, 8);
  const TokenizedSequence s = short_sequence(v);
  const double clean = loss_and_grad(m, s, 1, nullptr);
  CHECK(clean == loss_and_grad(m, s, 1, nullptr));
  DropoutContext d1{0.3, std::mt19937_64(1)}, d2{0.3, std::mt19937_64(1)};
  const double a = loss_and_grad(m, s, 1, nullptr, &d1);
  CHECK(a == loss_and_grad(m, s, 1, nullptr, &d2));
  CHECK(a != clean);
  DropoutContext off{0.0, std::mt19937_64(1)};
  CHECK(loss_and_grad(m, s, 1, nullptr, &off) == clean);
}

}  // TEST_SUITE
