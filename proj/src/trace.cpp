#include "topo/trace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace topo {

namespace {
constexpr double kDegenerateTol = 1e-12;
}

ActivationTrace record_activations(const NetworkSpec& net, const std::vector<Vec>& X) {
  if (X.size() < 2) fail_data("record_activations: need at least 2 samples");
  ActivationTrace tr;
  tr.layer_of = net.hidden_layer_of();
  size_t m = tr.layer_of.size();
  if (m == 0) fail_data("record_activations: network has no hidden neurons");
  tr.neuron_ids.resize(m);
  for (size_t k = 0; k < m; ++k) tr.neuron_ids[k] = static_cast<int>(k);
  tr.values.reserve(X.size() * m);
  for (const Vec& x : X) {
    EvalResult r = eval_network(net, x);
    tr.values.insert(tr.values.end(), r.activations.begin(), r.activations.end());
  }
  return tr;
}

CorrelationMatrix correlation_matrix(const ActivationTrace& trace, Kernel kernel) {
  const size_t n = trace.n(), m = trace.m();
  if (n < 2) fail_data("correlation_matrix: trace needs at least 2 samples");
  const double inv_n = 1.0 / static_cast<double>(n);

  // Column means and (uncentered) second moments, compensated.
  Vec mean(m, 0.0), moment(m, 0.0);
  for (size_t j = 0; j < m; ++j) {
    Accum s, s2;
    for (size_t i = 0; i < n; ++i) {
      double v = trace.at(i, j);
      if (!std::isfinite(v)) fail_data("correlation_matrix: non-finite activation value");
      s.add(v);
      s2.add(v * v);
    }
    mean[j] = s.value() * inv_n;
    moment[j] = s2.value() * inv_n;
  }

  std::vector<int> kept;
  for (size_t j = 0; j < m; ++j) {
    double scale = kernel == Kernel::pearson ? moment[j] - mean[j] * mean[j] : moment[j];
    if (scale >= kDegenerateTol) kept.push_back(static_cast<int>(j));
  }
  if (kept.size() < 2)
    fail_data("correlation_matrix: fewer than 2 non-degenerate neurons survive");

  CorrelationMatrix M;
  M.m = kept.size();
  M.kernel = kernel;
  M.kept_neurons = kept;
  M.layer_of.resize(M.m);
  for (size_t k = 0; k < M.m; ++k) M.layer_of[k] = trace.layer_of[kept[k]];
  M.rho.assign(M.m * M.m, 0.0);

  for (size_t a = 0; a < M.m; ++a) {
    M.at(a, a) = 1.0;
    size_t i = kept[a];
    for (size_t b = a + 1; b < M.m; ++b) {
      size_t j = kept[b];
      double r;
      if (kernel == Kernel::pearson) {
        Accum cross;
        for (size_t row = 0; row < n; ++row)
          cross.add((trace.at(row, i) - mean[i]) * (trace.at(row, j) - mean[j]));
        double var_i = moment[i] - mean[i] * mean[i];
        double var_j = moment[j] - mean[j] * mean[j];
        r = cross.value() * inv_n / std::sqrt(var_i * var_j);
      } else {
        Accum cross;
        for (size_t row = 0; row < n; ++row) cross.add(trace.at(row, i) * trace.at(row, j));
        r = cross.value() * inv_n / std::sqrt(moment[i] * moment[j]);
      }
      r = std::clamp(r, -1.0, 1.0);  // guard roundoff at the boundary
      M.at(a, b) = M.at(b, a) = r;
    }
  }
  return M;
}

DissimilarityMatrix dissimilarity(const CorrelationMatrix& M) {
  DissimilarityMatrix W;
  W.m = M.m;
  W.layer_of = M.layer_of;
  W.w.assign(M.m * M.m, 0.0);
  for (size_t i = 0; i < M.m; ++i)
    for (size_t j = 0; j < M.m; ++j) W.at(i, j) = i == j ? 0.0 : 1.0 - M.at(i, j);
  return W;
}

namespace {

// Second-moment matrix A = E[a a^T] and mean of the 8 hidden activations under
// the four-cluster distribution: each quadrant has mass 1/4 and the indicator
// products reduce to quadrant probabilities.
void theorem_moments(bool trojan_net, Mat& A, Vec& mu) {
  A = Mat(8, 8, 0.0);
  mu = Vec(8, 0.0);
  if (!trojan_net) {
    // p = (1{x1>=0}, 1{x1<=0}, 1{x1>=0}, 1{x1<=0}) and q = p: every block is
    // the same parity pattern with mass 1/2.
    for (int i = 0; i < 8; ++i) {
      mu[i] = 0.5;
      for (int j = 0; j < 8; ++j) A(i, j) = (i % 2 == j % 2) ? 0.5 : 0.0;
    }
    return;
  }
  // p = half-plane indicators (x1>=0, x1<=0, x2>=0, x2<=0), q = quadrant
  // indicators (I, IV, II, III).
  const double pp[4][4] = {{0.50, 0.00, 0.25, 0.25},
                           {0.00, 0.50, 0.25, 0.25},
                           {0.25, 0.25, 0.50, 0.00},
                           {0.25, 0.25, 0.00, 0.50}};
  const double pq[4][4] = {{0.25, 0.25, 0.00, 0.00},
                           {0.00, 0.00, 0.25, 0.25},
                           {0.25, 0.00, 0.25, 0.00},
                           {0.00, 0.25, 0.00, 0.25}};
  for (int i = 0; i < 4; ++i) {
    mu[i] = 0.5;
    mu[4 + i] = 0.25;
    for (int j = 0; j < 4; ++j) {
      A(i, j) = pp[i][j];
      A(i, 4 + j) = pq[i][j];
      A(4 + j, i) = pq[i][j];
      A(4 + i, 4 + j) = i == j ? 0.25 : 0.0;
    }
  }
}

CorrelationMatrix normalize_moments(const Mat& A, const Vec& mu, Kernel kernel) {
  CorrelationMatrix M;
  M.m = 8;
  M.kernel = kernel;
  M.kept_neurons.resize(8);
  M.layer_of.resize(8);
  for (int k = 0; k < 8; ++k) {
    M.kept_neurons[k] = k;
    M.layer_of[k] = k < 4 ? 0 : 1;
  }
  M.rho.assign(64, 0.0);
  for (size_t i = 0; i < 8; ++i) {
    for (size_t j = 0; j < 8; ++j) {
      double r;
      if (kernel == Kernel::cosine) {
        r = A(i, j) / std::sqrt(A(i, i) * A(j, j));
      } else {
        double vi = A(i, i) - mu[i] * mu[i];
        double vj = A(j, j) - mu[j] * mu[j];
        r = (A(i, j) - mu[i] * mu[j]) / std::sqrt(vi * vj);
      }
      M.at(i, j) = i == j ? 1.0 : std::clamp(r, -1.0, 1.0);
    }
  }
  return M;
}

}  // namespace

std::pair<CorrelationMatrix, CorrelationMatrix> analytic_theorem_matrices(Kernel kernel) {
  Mat A;
  Vec mu;
  theorem_moments(false, A, mu);
  CorrelationMatrix M1 = normalize_moments(A, mu, kernel);
  theorem_moments(true, A, mu);
  CorrelationMatrix M2 = normalize_moments(A, mu, kernel);
  return {M1, M2};
}

}  // namespace topo
