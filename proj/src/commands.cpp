#include "topo/commands.hpp"

#include <algorithm>
#include <cmath>

#include "topo/complex.hpp"
#include "topo/rng.hpp"

namespace topo {

namespace {

// 0D and 1D dots of the clique filtration of W at the full cutoff.
PersistenceDiagram full_diagram(const DissimilarityMatrix& W) {
  Filtration F = build_filtration(W, 2.0);
  PersistenceDiagram dg = zero_dim_diagram(F);
  PersistenceDiagram dg1 = one_dim_diagram(F);
  dg.dots.insert(dg.dots.end(), dg1.dots.begin(), dg1.dots.end());
  return dg;
}

PersistenceDiagram diagram_of_corr(const CorrelationMatrix& M) {
  return full_diagram(dissimilarity(M));
}

std::vector<Vec> dataset_inputs(const Dataset& data) {
  std::vector<Vec> xs;
  xs.reserve(data.size());
  for (const Sample& s : data) xs.push_back(s.x);
  return xs;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void check_gaussian_params(double sigma, double eta, int dim) {
  if (!(sigma > 0.0)) fail_usage("sigma must be > 0");
  if (!(eta > 0.0 && eta < 1.0)) fail_usage("eta must lie in (0, 1)");
  if (dim < 2) fail_usage("dim must be >= 2");
}

}  // namespace

double network_risk(const NetworkSpec& net, const Dataset& data) {
  if (data.empty()) fail_data("network_risk: empty dataset");
  size_t wrong = 0;
  for (const Sample& s : data)
    if (eval_network(net, s.x).prediction != s.y) ++wrong;
  return static_cast<double>(wrong) / static_cast<double>(data.size());
}

Theorem1Report theorem1_report(size_t n, double sigma, double eta, int dim, uint64_t seed) {
  if (n < 2) fail_usage("theorem1: n must be >= 2");
  check_gaussian_params(sigma, eta, dim);
  auto nets = build_theorem_networks(dim);
  const NetworkSpec& f1 = nets.first;
  const NetworkSpec& f2 = nets.second;

  Theorem1Report report;

  GaussianPairConfig gcfg;
  gcfg.sigma = sigma;
  gcfg.eta = eta;
  gcfg.input_dim = dim;
  gcfg.sample_count = n;

  gcfg.which = GaussianVariant::d1;
  gcfg.seed = seed + 1;
  report.risk_f1_d1 = network_risk(f1, sample_gaussian_pair(gcfg));

  gcfg.which = GaussianVariant::d3;
  gcfg.seed = seed + 2;
  report.risk_f2_d3 = network_risk(f2, sample_gaussian_pair(gcfg));

  gcfg.which = GaussianVariant::d2;
  gcfg.seed = seed + 3;
  Dataset d2 = sample_gaussian_pair(gcfg);
  report.risk_f2_d2 = network_risk(f2, d2);

  // The sampled matrices reuse the same four-cluster draw for both networks.
  std::vector<Vec> xs = dataset_inputs(d2);
  ActivationTrace trace_f1 = record_activations(f1, xs);
  ActivationTrace trace_f2 = record_activations(f2, xs);

  for (Kernel kernel : {Kernel::cosine, Kernel::pearson}) {
    KernelTheoremResult result;
    auto analytic = analytic_theorem_matrices(kernel);
    result.analytic_f1 = diagram_of_corr(analytic.first);
    result.analytic_f2 = diagram_of_corr(analytic.second);
    result.analytic_db = bottleneck_distance(result.analytic_f1, result.analytic_f2, 1);
    result.sampled_db =
        bottleneck_distance(diagram_of_corr(correlation_matrix(trace_f1, kernel)),
                            diagram_of_corr(correlation_matrix(trace_f2, kernel)), 1);
    if (kernel == Kernel::cosine) {
      report.cosine = result;
      report.claim_met_cosine = result.analytic_db >= report.claimed_bound;
    } else {
      report.pearson = result;
      report.claim_met_pearson = result.analytic_db >= report.claimed_bound;
    }
  }
  return report;
}

ConvergenceReport convergence_report(const std::vector<size_t>& n_grid, uint64_t seed, int reps,
                                     double sigma, double eta, int dim, Kernel kernel) {
  if (n_grid.size() < 2) fail_usage("convergence: need at least 2 grid points");
  for (size_t g = 0; g + 1 < n_grid.size(); ++g)
    if (n_grid[g] >= n_grid[g + 1]) fail_usage("convergence: n grid must be increasing");
  if (n_grid.front() < 2) fail_usage("convergence: n must be >= 2");
  if (reps < 1) fail_usage("convergence: reps must be >= 1");
  check_gaussian_params(sigma, eta, dim);

  NetworkSpec f2 = build_theorem_networks(dim).second;
  PersistenceDiagram target = diagram_of_corr(analytic_theorem_matrices(kernel).second);

  ConvergenceReport report;
  for (size_t g = 0; g < n_grid.size(); ++g) {
    ConvergencePoint point;
    point.n = n_grid[g];
    for (int rep = 0; rep < reps; ++rep) {
      GaussianPairConfig gcfg;
      gcfg.sigma = sigma;
      gcfg.eta = eta;
      gcfg.input_dim = dim;
      gcfg.which = GaussianVariant::d2;
      gcfg.sample_count = n_grid[g];
      gcfg.seed = seed + static_cast<uint64_t>(rep) * n_grid.size() + g;
      std::vector<Vec> xs = dataset_inputs(sample_gaussian_pair(gcfg));
      ActivationTrace trace = record_activations(f2, xs);
      PersistenceDiagram dg = diagram_of_corr(correlation_matrix(trace, kernel));
      point.db.push_back(bottleneck_distance(dg, target, 1));
    }
    point.median_db = median(point.db);
    report.points.push_back(std::move(point));
  }

  // Log-log least squares over the medians.
  size_t gp = report.points.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const ConvergencePoint& p : report.points) {
    double x = std::log(static_cast<double>(p.n));
    double y = std::log(std::max(p.median_db, 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double denom = static_cast<double>(gp) * sxx - sx * sx;
  report.slope = denom != 0.0 ? (static_cast<double>(gp) * sxy - sx * sy) / denom : 0.0;
  report.decreasing_ok = report.points.back().median_db <= report.points.front().median_db;
  report.slope_ok = gp < 4 || (report.slope >= -0.75 && report.slope <= -0.25);

  double big_r = 1.0, r = 0.25, eps = 0.1, delta = 0.05, count_n = 1.0, m_star = 8.0;
  report.sample_budget = 16.0 * std::pow(big_r, 6.0) *
                         (std::log(count_n) + 2.0 * std::log(m_star) + std::log(1.0 / delta)) /
                         (std::pow(r, 4.0) * eps * eps);
  return report;
}

std::vector<LabeledNetwork> make_zoo(const ZooConfig& cfg) {
  if (cfg.clean_count < 0 || cfg.trojan_count < 0) fail_usage("zoo: counts must be >= 0");
  if (cfg.train_samples < 8) fail_usage("zoo: train_samples must be >= 8");
  if (cfg.epochs < 1 || !(cfg.learning_rate > 0.0)) fail_usage("zoo: bad training parameters");
  check_gaussian_params(cfg.sigma, cfg.eta, cfg.input_dim);

  auto member = [&](GaussianVariant which, uint64_t member_seed) {
    GaussianPairConfig gcfg;
    gcfg.sigma = cfg.sigma;
    gcfg.eta = cfg.eta;
    gcfg.input_dim = cfg.input_dim;
    gcfg.which = which;
    gcfg.sample_count = static_cast<size_t>(cfg.train_samples);
    gcfg.seed = cfg.seed + member_seed;

    MlpTrainConfig tcfg;
    tcfg.hidden_sizes = {10, 10};
    tcfg.classes = 2;
    tcfg.epochs = cfg.epochs;
    tcfg.learning_rate = cfg.learning_rate;
    tcfg.weight_decay = cfg.weight_decay;
    tcfg.seed = cfg.seed + member_seed + 500000;
    return train_mlp_classifier(sample_gaussian_pair(gcfg), tcfg);
  };

  std::vector<LabeledNetwork> zoo;
  zoo.reserve(static_cast<size_t>(cfg.clean_count + cfg.trojan_count));
  for (int k = 0; k < cfg.clean_count; ++k)
    zoo.push_back({member(GaussianVariant::d1, 1000 + static_cast<uint64_t>(k)), 0});
  for (int k = 0; k < cfg.trojan_count; ++k)
    zoo.push_back({member(GaussianVariant::d3, 2000 + static_cast<uint64_t>(k)), 1});
  return zoo;
}

std::vector<Vec> make_clean_samples(const ZooConfig& cfg, size_t count, uint64_t seed) {
  GaussianPairConfig gcfg;
  gcfg.sigma = cfg.sigma;
  gcfg.eta = cfg.eta;
  gcfg.input_dim = cfg.input_dim;
  gcfg.which = GaussianVariant::d1;
  gcfg.sample_count = count;
  gcfg.seed = seed;
  return dataset_inputs(sample_gaussian_pair(gcfg));
}

PerturbConfig make_perturb_config(const std::vector<Vec>& samples, size_t trials, double lo,
                                  double hi, uint64_t seed) {
  if (!(lo < hi)) fail_usage("perturb: lo must be < hi");
  if (samples.empty()) fail_data("perturb: no samples");
  PerturbConfig pcfg;
  pcfg.trials_per_image = trials;
  pcfg.patch_size = static_cast<int>(samples[0].size());
  pcfg.seed = seed;
  pcfg.ranges.reserve(samples.size());
  for (const Vec& x : samples)
    pcfg.ranges.emplace_back(Vec(x.size(), lo), Vec(x.size(), hi));
  return pcfg;
}

double perturb_range_bound(double sigma, double eta) {
  check_gaussian_params(sigma, eta, 2);
  return 2.0 * sigma * std::sqrt(std::log(1.0 / eta)) + 3.0 * sigma;
}

}  // namespace topo
