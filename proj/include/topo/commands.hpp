#pragma once

#include <cstdint>
#include <vector>

#include "topo/detector.hpp"
#include "topo/netlab.hpp"
#include "topo/persistence.hpp"
#include "topo/trace.hpp"

namespace topo {

// Everything the theorem1 subcommand prints, for one kernel: full diagrams of
// the two constructive networks from the closed-form correlation matrices,
// the dim-1 bottleneck distance between them, and the same distance with the
// matrices estimated from n samples of the four-cluster distribution.
struct KernelTheoremResult {
  PersistenceDiagram analytic_f1, analytic_f2;
  double analytic_db = 0.0;
  double sampled_db = 0.0;
};

struct Theorem1Report {
  KernelTheoremResult cosine, pearson;
  double risk_f1_d1 = 0.0;  // empirical risk of f1 on its own task
  double risk_f2_d3 = 0.0;  // empirical risk of f2 on the Trojan task
  double risk_f2_d2 = 0.0;  // f2 on the mixed task; provably about 1/2
  double claimed_bound = 0.9;
  bool claim_met_cosine = false;
  bool claim_met_pearson = false;
};

Theorem1Report theorem1_report(size_t n, double sigma, double eta, int dim, uint64_t seed);

// Misclassification fraction of a network over a labeled dataset.
double network_risk(const NetworkSpec& net, const Dataset& data);

struct ConvergencePoint {
  size_t n = 0;
  std::vector<double> db;  // one entry per repetition
  double median_db = 0.0;
};

// Median sampled-vs-analytic bottleneck distance per sample count, plus the
// log-log least-squares slope of the medians. decreasing_ok needs the last
// median <= the first; slope_ok needs the slope inside [-0.75, -0.25] and is
// only enforced from 4 grid points up. sample_budget is the theoretical
// requirement 16 R^6 (log N + 2 log m* + log(1/delta)) / (r^4 eps^2) at
// R = 1, r = 1/4, eps = 0.1, delta = 0.05, N = 1, m* = 8.
struct ConvergenceReport {
  std::vector<ConvergencePoint> points;
  double slope = 0.0;
  double sample_budget = 0.0;
  bool decreasing_ok = false;
  bool slope_ok = false;
};

ConvergenceReport convergence_report(const std::vector<size_t>& n_grid, uint64_t seed,
                                     int reps = 5, double sigma = 1.0, double eta = 0.05,
                                     int dim = 2, Kernel kernel = Kernel::cosine);

struct ZooConfig {
  int clean_count = 40;
  int trojan_count = 40;
  int train_samples = 600;
  int epochs = 3000;
  double learning_rate = 0.05;
  double weight_decay = 0.03;
  double sigma = 1.0;
  double eta = 0.05;
  int input_dim = 4;
  uint64_t seed = 0;
};

// Two architecture-matched populations of tiny relu {10,10} MLPs: clean
// members learn the two-cluster sign task, Trojaned members the four-cluster
// product-sign task. Weight decay prunes stray weights so each member settles
// into a canonical circuit; member k trains on its own data stream (clean:
// cfg.seed + 1000 + k, Trojaned: cfg.seed + 2000 + k).
std::vector<LabeledNetwork> make_zoo(const ZooConfig& cfg);

// Inputs for the perturbation stage: points drawn from the clean two-cluster
// distribution, the only inputs a deployed model would be probed with.
std::vector<Vec> make_clean_samples(const ZooConfig& cfg, size_t count, uint64_t seed);

// One flat [lo, hi] range per coordinate of every sample; patches span the
// whole input so every trial varies all coordinates jointly.
PerturbConfig make_perturb_config(const std::vector<Vec>& samples, size_t trials, double lo,
                                  double hi, uint64_t seed);

// The [lo, hi] that covers every cluster of the Gaussian pair: cluster
// centers sit at +-2c, c = sigma sqrt(log(1/eta)), so 2c + 3 sigma suffices.
double perturb_range_bound(double sigma, double eta);

}  // namespace topo
