#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "topo/common.hpp"

namespace topo {

enum class Activation { indicator, relu, identity };

enum class OutputRule { argmax, identity };

// One affine layer: out = act(W x + b), W is rows x cols (cols = input width).
struct Layer {
  Mat W;
  Vec b;
  Activation act = Activation::identity;
};

// Feed-forward network. Under OutputRule::argmax the final layer is a readout:
// its outputs vote for the class (ties go to the lower index) and do not count
// as hidden neurons. Under OutputRule::identity every layer counts as hidden
// and the prediction is the argmax of the last layer's activations.
struct NetworkSpec {
  std::vector<Layer> layers;
  OutputRule output_rule = OutputRule::argmax;

  int input_dim() const { return layers.empty() ? 0 : static_cast<int>(layers.front().W.cols); }
  size_t hidden_layer_count() const {
    if (layers.empty()) return 0;
    return output_rule == OutputRule::argmax ? layers.size() - 1 : layers.size();
  }
  size_t hidden_count() const;
  std::vector<int> hidden_layer_of() const;  // 0-based hidden-layer index per neuron
};

struct EvalResult {
  Vec activations;  // hidden activations, concatenated in layer order
  int prediction = 0;
};

// Forward pass. Throws a data error naming the offending layer on a dimension
// mismatch, and a data error on non-finite weights or inputs.
EvalResult eval_network(const NetworkSpec& net, const Vec& x);

// The two constructive example networks: two hidden indicator layers of four
// neurons each plus an argmax readout, embedded in input dimension d >= 2
// (hyperplane rows e1, -e1, e2, -e2 zero-padded beyond coordinate 2).
// f1 computes 1{x.e1 < 0}; f2 computes 1{(x.e1)(x.e2) >= 0}.
std::pair<NetworkSpec, NetworkSpec> build_theorem_networks(int input_dim = 2);

struct Sample {
  Vec x;
  int y = 0;
};
using Dataset = std::vector<Sample>;

// Mix-Gaussian pair of Definition-style tasks. Cluster means are
//   mu_j = 2c(+-e2 +- e1),  c = sigma * sqrt(log(1/eta)):
//   mu1 = 2c(-e2-e1)  mu2 = 2c(-e2+e1)  mu3 = 2c(e2-e1)  mu4 = 2c(e2+e1)
// embedded in dimension d; every coordinate gets N(0, sigma^2) noise.
// Variants:
//   D1: j ~ unif{1,2},       y = j mod 2   (clean task, sign of x.e1)
//   D2: j ~ unif{1,2,3,4},   y = j mod 2
//   D3: j ~ unif{1,2,3,4},   y = 1{j in {1,4}}  (Trojan task, sign of x1*x2;
//       the trigger shifts mu1->mu3 and mu2->mu4 with labels flipped)
enum class GaussianVariant { d1, d2, d3 };

struct GaussianPairConfig {
  double sigma = 1.0;       // > 0
  double eta = 0.05;        // in (0, 1)
  int input_dim = 2;        // >= 2
  GaussianVariant which = GaussianVariant::d2;
  size_t sample_count = 1;  // >= 1
  uint64_t seed = 0;
};

// Per sample the draw order is fixed (cluster index, then d normals) so the
// output is bit-reproducible under a fixed seed.
Dataset sample_gaussian_pair(const GaussianPairConfig& cfg);

Vec gaussian_mean(const GaussianPairConfig& cfg, int j);  // j in {1,2,3,4}

struct TriggerSpec {
  Vec mask;     // entries in [0, 1]
  Vec pattern;  // trigger content
  int target_label = 0;
};

// x~_k = (1 - m_k) x_k + m_k delta_k, elementwise.
Vec overlay_trigger(const Vec& x, const TriggerSpec& trig);

struct PerturbConfig {
  size_t trials_per_image = 1;
  std::vector<std::pair<Vec, Vec>> ranges;  // one (lower, upper) pair per image
  int patch_size = 1;
  uint64_t seed = 0;
};

// For each image, trials_per_image copies; each copy differs from its original
// in exactly one contiguous patch of patch_size coordinates, every patched
// coordinate redrawn uniformly from [l_i, u_i]. |result| = |X| * trials.
std::vector<Vec> perturb_pixelwise(const std::vector<Vec>& X, const PerturbConfig& cfg);

// Tiny seeded relu-MLP trainer (softmax cross-entropy, full-batch gradient
// descent); builds the model-zoo populations without any external framework.
struct MlpTrainConfig {
  std::vector<int> hidden_sizes{8, 8};
  int classes = 2;
  int epochs = 400;
  double learning_rate = 0.05;
  double weight_decay = 0.0;  // L2 penalty on weights, biases exempt
  uint64_t seed = 0;
};

NetworkSpec train_mlp_classifier(const Dataset& data, const MlpTrainConfig& cfg);

}  // namespace topo
