#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "topo/common.hpp"
#include "topo/netlab.hpp"

using namespace topo;

namespace {

NetworkSpec two_layer_net() {
  // Hidden relu layer: h = relu([[1, -1], [0, 2]] x + [0, -1])
  // Readout:           o = [[1, 0], [0, 1]] h
  NetworkSpec net;
  Layer h;
  h.W = Mat(2, 2);
  h.W(0, 0) = 1.0; h.W(0, 1) = -1.0;
  h.W(1, 0) = 0.0; h.W(1, 1) = 2.0;
  h.b = Vec{0.0, -1.0};
  h.act = Activation::relu;
  Layer o;
  o.W = Mat(2, 2);
  o.W(0, 0) = 1.0; o.W(1, 1) = 1.0;
  o.b = Vec{0.0, 0.0};
  o.act = Activation::identity;
  net.layers = {h, o};
  net.output_rule = OutputRule::argmax;
  return net;
}

}  // namespace

TEST_CASE("eval_network computes a hand-checked forward pass") {
  NetworkSpec net = two_layer_net();
  // x = (3, 1): z = (3-1, 2-1) = (2, 1) -> relu (2, 1); readout (2, 1) -> class 0
  EvalResult r = eval_network(net, Vec{3.0, 1.0});
  REQUIRE(r.activations.size() == 2);
  CHECK(r.activations[0] == doctest::Approx(2.0));
  CHECK(r.activations[1] == doctest::Approx(1.0));
  CHECK(r.prediction == 0);
  // x = (0, 2): z = (-2, 3) -> relu (0, 3) -> class 1
  r = eval_network(net, Vec{0.0, 2.0});
  CHECK(r.activations[0] == doctest::Approx(0.0));
  CHECK(r.activations[1] == doctest::Approx(3.0));
  CHECK(r.prediction == 1);
}

TEST_CASE("argmax ties resolve to the lower class index") {
  NetworkSpec net = two_layer_net();
  // x = (1, 1): z = (0, 1) -> relu (0, 1); readout gives (0, 1)... use a tie input.
  // x = (2, 1): z = (1, 1) -> (1, 1): tie between classes 0 and 1.
  EvalResult r = eval_network(net, Vec{2.0, 1.0});
  CHECK(r.activations[0] == r.activations[1]);
  CHECK(r.prediction == 0);
}

TEST_CASE("hidden bookkeeping distinguishes readout from hidden layers") {
  NetworkSpec net = two_layer_net();
  CHECK(net.hidden_layer_count() == 1);
  CHECK(net.hidden_count() == 2);
  CHECK(net.hidden_layer_of() == std::vector<int>{0, 0});
  net.output_rule = OutputRule::identity;
  CHECK(net.hidden_layer_count() == 2);
  CHECK(net.hidden_count() == 4);
  CHECK(net.hidden_layer_of() == std::vector<int>{0, 0, 1, 1});
}

TEST_CASE("eval_network rejects bad inputs") {
  NetworkSpec net = two_layer_net();
  CHECK_THROWS_AS(eval_network(net, Vec{1.0}), Error);
  CHECK_THROWS_AS(eval_network(net, Vec{1.0, std::nan("")}), Error);
  NetworkSpec broken = two_layer_net();
  broken.layers[0].W(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(eval_network(broken, Vec{1.0, 1.0}), Error);
}

TEST_CASE("theorem network f1 is the sign classifier") {
  auto [f1, f2] = build_theorem_networks(2);
  (void)f2;
  CHECK(f1.hidden_count() == 8);
  CHECK(f1.hidden_layer_count() == 2);
  for (double x1 : {-5.0, -1.0, -0.25, 0.25, 1.0, 5.0}) {
    for (double x2 : {-3.0, 0.0, 3.0}) {
      int want = x1 < 0.0 ? 1 : 0;
      CHECK(eval_network(f1, Vec{x1, x2}).prediction == want);
    }
  }
}

TEST_CASE("theorem network f2 is the product-sign classifier") {
  auto [f1, f2] = build_theorem_networks(2);
  (void)f1;
  CHECK(f2.hidden_count() == 8);
  for (double x1 : {-4.0, -0.5, 0.5, 4.0}) {
    for (double x2 : {-4.0, -0.5, 0.5, 4.0}) {
      int want = x1 * x2 >= 0.0 ? 1 : 0;
      CHECK(eval_network(f2, Vec{x1, x2}).prediction == want);
    }
  }
}

TEST_CASE("theorem networks embed into higher input dimensions") {
  auto [f1, f2] = build_theorem_networks(6);
  CHECK(f1.input_dim() == 6);
  // Extra coordinates are ignored by the zero-padded hyperplanes.
  CHECK(eval_network(f1, Vec{-1.0, 2.0, 9.0, -9.0, 3.0, 7.0}).prediction == 1);
  CHECK(eval_network(f2, Vec{-1.0, -2.0, 9.0, -9.0, 3.0, 7.0}).prediction == 1);
  CHECK(eval_network(f2, Vec{-1.0, 2.0, 9.0, -9.0, 3.0, 7.0}).prediction == 0);
}

TEST_CASE("gaussian_mean places the four corners") {
  GaussianPairConfig cfg;
  cfg.sigma = 1.0;
  cfg.eta = 0.05;
  cfg.input_dim = 3;
  double c = std::sqrt(std::log(1.0 / 0.05));
  Vec m1 = gaussian_mean(cfg, 1);
  Vec m4 = gaussian_mean(cfg, 4);
  CHECK(m1[0] == doctest::Approx(-2.0 * c));
  CHECK(m1[1] == doctest::Approx(-2.0 * c));
  CHECK(m1[2] == doctest::Approx(0.0));
  CHECK(m4[0] == doctest::Approx(2.0 * c));
  CHECK(m4[1] == doctest::Approx(2.0 * c));
  CHECK(gaussian_mean(cfg, 2)[0] == doctest::Approx(2.0 * c));
  CHECK(gaussian_mean(cfg, 3)[1] == doctest::Approx(2.0 * c));
  CHECK_THROWS_AS(gaussian_mean(cfg, 0), Error);
  CHECK_THROWS_AS(gaussian_mean(cfg, 5), Error);
}

TEST_CASE("sample_gaussian_pair is deterministic and label-consistent") {
  GaussianPairConfig cfg;
  cfg.which = GaussianVariant::d1;
  cfg.sample_count = 4000;
  cfg.seed = 123;
  Dataset a = sample_gaussian_pair(cfg);
  Dataset b = sample_gaussian_pair(cfg);
  REQUIRE(a.size() == 4000);
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].y == b[i].y);
  }
  // D1: label 1 on the negative-x1 cluster; cluster spacing makes sign flips rare.
  int agree = 0;
  for (const Sample& s : a) agree += (s.x[0] < 0.0) == (s.y == 1);
  CHECK(agree > 3800);
  // Both D1 clusters sit at x2 = -2c; positive x2 should almost never appear.
  int x2pos = 0;
  for (const Sample& s : a) x2pos += s.x[1] > 0.0;
  CHECK(x2pos < 40);
}

TEST_CASE("D3 labels follow the product sign of the cluster corner") {
  GaussianPairConfig cfg;
  cfg.which = GaussianVariant::d3;
  cfg.sample_count = 4000;
  cfg.seed = 321;
  Dataset d = sample_gaussian_pair(cfg);
  int agree = 0, pos = 0;
  for (const Sample& s : d) {
    agree += (s.x[0] * s.x[1] > 0.0) == (s.y == 1);
    pos += s.y;
  }
  CHECK(agree > 3800);
  // All four clusters drawn uniformly: labels near balance.
  CHECK(pos > 1800);
  CHECK(pos < 2200);
}

TEST_CASE("D2 uses all four clusters with the sign labels") {
  GaussianPairConfig cfg;
  cfg.which = GaussianVariant::d2;
  cfg.sample_count = 4000;
  cfg.seed = 77;
  Dataset d = sample_gaussian_pair(cfg);
  int quad[4] = {0, 0, 0, 0};
  int agree = 0;
  for (const Sample& s : d) {
    int q = (s.x[0] > 0.0 ? 1 : 0) + (s.x[1] > 0.0 ? 2 : 0);
    ++quad[q];
    agree += (s.x[0] < 0.0) == (s.y == 1);
  }
  for (int q = 0; q < 4; ++q) CHECK(quad[q] > 800);
  CHECK(agree > 3800);
}

TEST_CASE("sample_gaussian_pair validates its config") {
  GaussianPairConfig cfg;
  cfg.sigma = 0.0;
  CHECK_THROWS_AS(sample_gaussian_pair(cfg), Error);
  cfg = {};
  cfg.eta = 1.5;
  CHECK_THROWS_AS(sample_gaussian_pair(cfg), Error);
  cfg = {};
  cfg.input_dim = 1;
  CHECK_THROWS_AS(sample_gaussian_pair(cfg), Error);
}

TEST_CASE("overlay_trigger blends by the mask and is idempotent when binary") {
  TriggerSpec trig;
  trig.mask = Vec{0.0, 1.0, 0.5};
  trig.pattern = Vec{9.0, 7.0, 4.0};
  Vec x{1.0, 2.0, 2.0};
  Vec t = overlay_trigger(x, trig);
  CHECK(t[0] == doctest::Approx(1.0));
  CHECK(t[1] == doctest::Approx(7.0));
  CHECK(t[2] == doctest::Approx(3.0));
  TriggerSpec binary;
  binary.mask = Vec{0.0, 1.0};
  binary.pattern = Vec{5.0, -5.0};
  Vec once = overlay_trigger(Vec{1.0, 1.0}, binary);
  Vec twice = overlay_trigger(once, binary);
  CHECK(once == twice);
  TriggerSpec bad;
  bad.mask = Vec{1.0};
  bad.pattern = Vec{1.0, 2.0};
  CHECK_THROWS_AS(overlay_trigger(x, bad), Error);
}

TEST_CASE("perturb_pixelwise rewrites exactly one contiguous patch per copy") {
  std::vector<Vec> X{{0.0, 0.0, 0.0, 0.0}, {5.0, 5.0, 5.0, 5.0}};
  PerturbConfig cfg;
  cfg.trials_per_image = 25;
  cfg.patch_size = 2;
  cfg.seed = 5;
  cfg.ranges = {{Vec(4, 10.0), Vec(4, 11.0)}, {Vec(4, -2.0), Vec(4, -1.0)}};
  std::vector<Vec> out = perturb_pixelwise(X, cfg);
  REQUIRE(out.size() == 50);
  for (size_t k = 0; k < out.size(); ++k) {
    const Vec& base = X[k / 25];
    double lo = k / 25 == 0 ? 10.0 : -2.0;
    double hi = lo + 1.0;
    int first = -1, changed = 0;
    for (int i = 0; i < 4; ++i) {
      if (out[k][i] != base[i]) {
        if (first < 0) first = i;
        ++changed;
        CHECK(out[k][i] >= lo);
        CHECK(out[k][i] < hi);
      }
    }
    // Ranges are disjoint from the originals, so every patched entry changes.
    CHECK(changed == 2);
    REQUIRE(first >= 0);
    CHECK(first + 1 < 4 + 1);
    CHECK(out[k][first + 1] != base[first + 1]);
  }
  std::vector<Vec> again = perturb_pixelwise(X, cfg);
  CHECK(out == again);
}

TEST_CASE("perturb_pixelwise validates patch size and ranges") {
  std::vector<Vec> X{{0.0, 0.0}};
  PerturbConfig cfg;
  cfg.trials_per_image = 1;
  cfg.patch_size = 3;
  cfg.ranges = {{Vec(2, 0.0), Vec(2, 1.0)}};
  CHECK_THROWS_AS(perturb_pixelwise(X, cfg), Error);
  cfg.patch_size = 0;
  CHECK_THROWS_AS(perturb_pixelwise(X, cfg), Error);
  cfg.patch_size = 1;
  cfg.ranges.clear();
  CHECK_THROWS_AS(perturb_pixelwise(X, cfg), Error);
}

TEST_CASE("train_mlp_classifier learns a separable task deterministically") {
  GaussianPairConfig gcfg;
  gcfg.which = GaussianVariant::d1;
  gcfg.sample_count = 300;
  gcfg.seed = 9;
  Dataset train = sample_gaussian_pair(gcfg);
  MlpTrainConfig tcfg;
  tcfg.hidden_sizes = {6};
  tcfg.epochs = 300;
  tcfg.seed = 4;
  NetworkSpec net = train_mlp_classifier(train, tcfg);
  NetworkSpec net2 = train_mlp_classifier(train, tcfg);
  REQUIRE(net.layers.size() == net2.layers.size());
  for (size_t l = 0; l < net.layers.size(); ++l) {
    CHECK(net.layers[l].W.a == net2.layers[l].W.a);
    CHECK(net.layers[l].b == net2.layers[l].b);
  }
  gcfg.seed = 10;
  Dataset test = sample_gaussian_pair(gcfg);
  int err = 0;
  for (const Sample& s : test) err += eval_network(net, s.x).prediction != s.y;
  CHECK(err < 30);
}

TEST_CASE("weight decay shrinks the trained weights") {
  GaussianPairConfig gcfg;
  gcfg.which = GaussianVariant::d1;
  gcfg.sample_count = 200;
  gcfg.seed = 15;
  Dataset train = sample_gaussian_pair(gcfg);
  MlpTrainConfig plain;
  plain.hidden_sizes = {8};
  plain.epochs = 200;
  plain.seed = 2;
  MlpTrainConfig decayed = plain;
  decayed.weight_decay = 0.05;
  NetworkSpec a = train_mlp_classifier(train, plain);
  NetworkSpec b = train_mlp_classifier(train, decayed);
  double na = 0.0, nb = 0.0;
  for (size_t l = 0; l < a.layers.size(); ++l) {
    for (double w : a.layers[l].W.a) na += w * w;
    for (double w : b.layers[l].W.a) nb += w * w;
  }
  CHECK(nb < na);
}

TEST_CASE("train_mlp_classifier rejects malformed data") {
  MlpTrainConfig cfg;
  CHECK_THROWS_AS(train_mlp_classifier(Dataset{}, cfg), Error);
  Dataset ragged{{Vec{1.0, 2.0}, 0}, {Vec{1.0}, 1}};
  CHECK_THROWS_AS(train_mlp_classifier(ragged, cfg), Error);
  Dataset badlabel{{Vec{1.0, 2.0}, 0}, {Vec{1.0, 2.0}, 7}};
  CHECK_THROWS_AS(train_mlp_classifier(badlabel, cfg), Error);
}
