#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "topo/common.hpp"
#include "topo/netlab.hpp"
#include "topo/trace.hpp"

using namespace topo;

namespace {

// Identity-activation net exposing its two inputs as two hidden neurons, so a
// trace over chosen inputs is exactly the matrix we write down.
NetworkSpec passthrough_net(int width) {
  NetworkSpec net;
  Layer h;
  h.W = Mat(width, width);
  for (int i = 0; i < width; ++i) h.W(i, i) = 1.0;
  h.b = Vec(width, 0.0);
  h.act = Activation::identity;
  Layer o;
  o.W = Mat(2, width);
  o.b = Vec(2, 0.0);
  net.layers = {h, o};
  return net;
}

ActivationTrace trace_of(const std::vector<Vec>& rows) {
  NetworkSpec net = passthrough_net(static_cast<int>(rows[0].size()));
  return record_activations(net, rows);
}

}  // namespace

TEST_CASE("record_activations lays rows out in input order") {
  NetworkSpec net = passthrough_net(3);
  std::vector<Vec> X{{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}};
  ActivationTrace tr = record_activations(net, X);
  CHECK(tr.n() == 2);
  CHECK(tr.m() == 3);
  CHECK(tr.layer_of == std::vector<int>{0, 0, 0});
  CHECK(tr.at(0, 0) == doctest::Approx(1.0));
  CHECK(tr.at(0, 2) == doctest::Approx(3.0));
  CHECK(tr.at(1, 1) == doctest::Approx(5.0));
  CHECK(tr.neuron_ids == std::vector<int>{0, 1, 2});
}

TEST_CASE("record_activations spans multiple hidden layers") {
  auto [f1, f2] = build_theorem_networks(2);
  (void)f2;
  std::vector<Vec> X{{1.0, 1.0}, {-1.0, -1.0}, {0.5, -2.0}};
  ActivationTrace tr = record_activations(f1, X);
  CHECK(tr.n() == 3);
  CHECK(tr.m() == 8);
  CHECK(tr.layer_of == std::vector<int>{0, 0, 0, 0, 1, 1, 1, 1});
}

TEST_CASE("pearson correlation matches hand-computed values") {
  // Neuron 0 and 1 perfectly anticorrelated, neuron 2 independent-ish.
  ActivationTrace tr = trace_of({{1.0, -1.0, 0.0},
                                 {2.0, -2.0, 1.0},
                                 {3.0, -3.0, 0.0},
                                 {4.0, -4.0, 1.0}});
  CorrelationMatrix M = correlation_matrix(tr, Kernel::pearson);
  REQUIRE(M.m == 3);
  CHECK(M.kernel == Kernel::pearson);
  CHECK(M.at(0, 0) == doctest::Approx(1.0));
  CHECK(M.at(0, 1) == doctest::Approx(-1.0));
  CHECK(M.at(1, 0) == doctest::Approx(-1.0));
  // cov(x, z) with x = 1..4, z = 0,1,0,1: cov = 0.25, sd_x = sqrt(1.25), sd_z = 0.5
  double want = 0.25 / (std::sqrt(1.25) * 0.5);
  CHECK(M.at(0, 2) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("cosine correlation matches hand-computed values") {
  // cos(u, v) = <u,v>/n over rms(u) rms(v); u = (1,1,1,1), v = (1,0,1,0):
  // mean product 0.5, rms(u) = 1, rms(v) = sqrt(0.5) -> 0.5/sqrt(0.5) = sqrt(0.5).
  ActivationTrace tr = trace_of({{1.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}, {1.0, 0.0}});
  CorrelationMatrix M = correlation_matrix(tr, Kernel::cosine);
  REQUIRE(M.m == 2);
  CHECK(M.at(0, 1) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(M.at(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("constant neurons are dropped under pearson, dead ones under cosine") {
  ActivationTrace tr = trace_of({{1.0, 7.0, 0.0}, {2.0, 7.0, 1.0}, {3.0, 7.0, 0.0}});
  CorrelationMatrix P = correlation_matrix(tr, Kernel::pearson);
  // Neuron 1 is constant: zero variance, dropped under pearson only.
  REQUIRE(P.m == 2);
  CHECK(P.kept_neurons == std::vector<int>{0, 2});
  CorrelationMatrix C = correlation_matrix(tr, Kernel::cosine);
  // Cosine only needs a nonzero second moment, so the constant neuron stays.
  REQUIRE(C.m == 3);
  CHECK(C.kept_neurons == std::vector<int>{0, 1, 2});
  CHECK(C.layer_of.size() == 3);
}

TEST_CASE("correlation entries are clamped into [-1, 1] and symmetric") {
  GaussianPairConfig gcfg;
  gcfg.which = GaussianVariant::d2;
  gcfg.sample_count = 64;
  gcfg.seed = 3;
  Dataset d = sample_gaussian_pair(gcfg);
  std::vector<Vec> X;
  for (const Sample& s : d) X.push_back(s.x);
  auto [f1, f2] = build_theorem_networks(2);
  (void)f1;
  CorrelationMatrix M = correlation_matrix(record_activations(f2, X), Kernel::pearson);
  for (size_t i = 0; i < M.m; ++i) {
    CHECK(M.at(i, i) == doctest::Approx(1.0));
    for (size_t j = 0; j < M.m; ++j) {
      CHECK(M.at(i, j) == M.at(j, i));
      CHECK(M.at(i, j) <= 1.0);
      CHECK(M.at(i, j) >= -1.0);
    }
  }
}

TEST_CASE("dissimilarity flips correlation into a [0, 2] distance") {
  ActivationTrace tr = trace_of({{1.0, -1.0}, {2.0, -2.0}, {3.0, -3.5}});
  CorrelationMatrix M = correlation_matrix(tr, Kernel::pearson);
  DissimilarityMatrix W = dissimilarity(M);
  REQUIRE(W.m == M.m);
  for (size_t i = 0; i < W.m; ++i) {
    CHECK(W.at(i, i) == 0.0);
    for (size_t j = 0; j < W.m; ++j) {
      CHECK(W.at(i, j) == doctest::Approx(1.0 - M.at(i, j)));
      CHECK(W.at(i, j) >= 0.0);
      CHECK(W.at(i, j) <= 2.0);
    }
  }
  CHECK(W.layer_of == M.layer_of);
}

TEST_CASE("analytic theorem matrices have the documented block structure") {
  auto [M1, M2] = analytic_theorem_matrices(Kernel::pearson);
  REQUIRE(M1.m == 8);
  REQUIRE(M2.m == 8);
  for (size_t i = 0; i < 8; ++i) {
    CHECK(M1.at(i, i) == doctest::Approx(1.0));
    CHECK(M2.at(i, i) == doctest::Approx(1.0));
    for (size_t j = 0; j < 8; ++j) {
      CHECK(M1.at(i, j) == doctest::Approx(M1.at(j, i)));
      CHECK(M2.at(i, j) == doctest::Approx(M2.at(j, i)));
    }
  }
  // f1's paired indicator units (x1 >= 0 vs x1 < 0) are mutually exclusive
  // under D2, so their pearson correlation is exactly -1.
  CHECK(M1.at(0, 1) == doctest::Approx(-1.0));
  // f2's first layer holds the four quadrant-adjacent half-plane indicators;
  // opposite half-planes anticorrelate, orthogonal ones are independent.
  CHECK(M2.at(0, 1) == doctest::Approx(-1.0));
  CHECK(M2.at(0, 2) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("sampled correlations converge to the analytic matrices") {
  auto [M1a, M2a] = analytic_theorem_matrices(Kernel::pearson);
  (void)M1a;
  GaussianPairConfig gcfg;
  gcfg.which = GaussianVariant::d2;
  gcfg.sample_count = 60000;
  gcfg.seed = 17;
  Dataset d = sample_gaussian_pair(gcfg);
  std::vector<Vec> X;
  for (const Sample& s : d) X.push_back(s.x);
  auto [f1, f2] = build_theorem_networks(2);
  (void)f1;
  CorrelationMatrix M2s = correlation_matrix(record_activations(f2, X), Kernel::pearson);
  REQUIRE(M2s.m == 8);
  double worst = 0.0;
  for (size_t i = 0; i < 8; ++i)
    for (size_t j = 0; j < 8; ++j)
      worst = std::max(worst, std::abs(M2s.at(i, j) - M2a.at(i, j)));
  CHECK(worst < 0.02);
}

TEST_CASE("correlation_matrix needs at least two kept neurons") {
  ActivationTrace tr = trace_of({{1.0, 5.0}, {2.0, 5.0}, {3.0, 5.0}});
  CHECK_THROWS_AS(correlation_matrix(tr, Kernel::pearson), Error);
}
