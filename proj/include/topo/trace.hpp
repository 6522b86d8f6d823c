#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "topo/common.hpp"
#include "topo/netlab.hpp"

namespace topo {

// Per-neuron activation vectors over an input set, row-major samples x neurons.
struct ActivationTrace {
  std::vector<double> values;  // n * m, row-major
  std::vector<int> layer_of;   // 0-based hidden-layer index per neuron
  std::vector<int> neuron_ids;

  size_t n() const { return layer_of.empty() ? 0 : values.size() / layer_of.size(); }
  size_t m() const { return layer_of.size(); }
  double at(size_t row, size_t col) const { return values[row * m() + col]; }
};

enum class Kernel { pearson, cosine };

struct CorrelationMatrix {
  size_t m = 0;
  std::vector<double> rho;  // m * m, symmetric, unit diagonal
  Kernel kernel = Kernel::pearson;
  std::vector<int> kept_neurons;  // indices into the source trace
  std::vector<int> layer_of;      // per kept neuron

  double at(size_t i, size_t j) const { return rho[i * m + j]; }
  double& at(size_t i, size_t j) { return rho[i * m + j]; }
};

struct DissimilarityMatrix {
  size_t m = 0;
  std::vector<double> w;  // m * m, symmetric, zero diagonal, entries in [0, 2]
  std::vector<int> layer_of;

  double at(size_t i, size_t j) const { return w[i * m + j]; }
  double& at(size_t i, size_t j) { return w[i * m + j]; }
};

// Row k = hidden activations of net on X[k].
ActivationTrace record_activations(const NetworkSpec& net, const std::vector<Vec>& X);

// pearson: population (1/n) covariance over population stds; cosine: mean
// elementwise product over root mean squares. Neurons whose variance (pearson)
// or second moment (cosine) falls below 1e-12 are dropped first; kept_neurons
// records the survivors. Accumulation is Kahan-compensated.
CorrelationMatrix correlation_matrix(const ActivationTrace& trace, Kernel kernel);

// w_ij = 1 - rho_ij, diagonal forced to exactly 0.
DissimilarityMatrix dissimilarity(const CorrelationMatrix& M);

// Exact 8x8 correlation matrices of the two constructive networks' hidden
// neurons under the four-cluster distribution D2, assembled from the
// closed-form second-moment blocks (no sampling). Cosine uses the moments
// directly; pearson combines them with the closed-form means.
std::pair<CorrelationMatrix, CorrelationMatrix> analytic_theorem_matrices(Kernel kernel);

}  // namespace topo
