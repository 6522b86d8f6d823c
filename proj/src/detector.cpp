#include "topo/detector.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "topo/rng.hpp"
#include "topo/trace.hpp"

namespace topo {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + e^z), overflow-safe; -log sigmoid(z) = softplus(-z).
double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

void check_config(const DetectorConfig& cfg) {
  if (cfg.hidden_size < 1) fail_usage("detector: hidden_size must be >= 1");
  if (cfg.epochs < 1) fail_usage("detector: epochs must be >= 1");
  if (!(cfg.learning_rate > 0.0)) fail_usage("detector: learning_rate must be > 0");
  if (cfg.l2 < 0.0) fail_usage("detector: l2 must be >= 0");
  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0))
    fail_usage("detector: train_fraction must lie in (0, 1)");
}

// Hidden activations for one standardized row.
void forward_hidden(const DetectorModel& model, const Vec& z, Vec& h) {
  size_t hs = model.b1.size(), k = model.kept.size();
  h.resize(hs);
  for (size_t u = 0; u < hs; ++u) {
    double s = model.b1[u];
    for (size_t f = 0; f < k; ++f) s += model.w1(u, f) * z[f];
    h[u] = std::tanh(s);
  }
}

double forward_score(const DetectorModel& model, const Vec& z, Vec& h) {
  forward_hidden(model, z, h);
  double s = model.b2;
  for (size_t u = 0; u < h.size(); ++u) s += model.w2[u] * h[u];
  return sigmoid(s);
}

void standardize_row(const DetectorModel& model, const double* row, Vec& z) {
  z.resize(model.kept.size());
  for (size_t f = 0; f < model.kept.size(); ++f)
    z[f] = (row[model.kept[f]] - model.mean[f]) / model.std[f];
}

}  // namespace

DetectorModel train_detector_rows(const Mat& X, const std::vector<int>& labels,
                                  const DetectorConfig& cfg) {
  check_config(cfg);
  if (X.rows != labels.size()) fail_data("train_detector: row/label count mismatch");
  size_t n = X.rows;
  size_t pos = 0, neg = 0;
  for (int y : labels) {
    if (y != 0 && y != 1) fail_data("train_detector: labels must be 0 or 1");
    (y == 1 ? pos : neg) += 1;
  }
  if (pos < 2 || neg < 2) fail_data("train_detector: need at least 2 examples per class");

  DetectorModel model;
  model.input_dim = X.cols;

  // Variance screen + standardization parameters, population moments.
  for (size_t f = 0; f < X.cols; ++f) {
    Accum s;
    for (size_t i = 0; i < n; ++i) s.add(X(i, f));
    double mu = s.value() / static_cast<double>(n);
    Accum s2;
    for (size_t i = 0; i < n; ++i) s2.add((X(i, f) - mu) * (X(i, f) - mu));
    double sd = std::sqrt(std::max(0.0, s2.value() / static_cast<double>(n)));
    if (sd > 1e-12) {
      model.kept.push_back(static_cast<int>(f));
      model.mean.push_back(mu);
      model.std.push_back(sd);
    }
  }
  size_t k = model.kept.size();
  size_t hs = static_cast<size_t>(cfg.hidden_size);

  Mat Z(n, k);
  Vec zrow;
  for (size_t i = 0; i < n; ++i) {
    standardize_row(model, &X.a[i * X.cols], zrow);
    for (size_t f = 0; f < k; ++f) Z(i, f) = zrow[f];
  }

  Rng rng(cfg.seed);
  auto glorot = [&rng](size_t fan_in, size_t fan_out) {
    double r = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    return rng.uniform(-r, r);
  };
  model.w1 = Mat(hs, k);
  for (size_t u = 0; u < hs; ++u)
    for (size_t f = 0; f < k; ++f) model.w1(u, f) = glorot(k == 0 ? 1 : k, hs);
  model.b1.assign(hs, 0.0);
  model.w2.resize(hs);
  for (size_t u = 0; u < hs; ++u) model.w2[u] = glorot(hs, 1);
  model.b2 = 0.0;

  double lr = cfg.learning_rate;
  Mat gw1(hs, k);
  Vec gb1(hs), gw2(hs), h(hs), dh(hs);
  model.loss_log.reserve(static_cast<size_t>(cfg.epochs));

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::fill(gw1.a.begin(), gw1.a.end(), 0.0);
    std::fill(gb1.begin(), gb1.end(), 0.0);
    std::fill(gw2.begin(), gw2.end(), 0.0);
    double gb2 = 0.0;
    Accum loss;

    for (size_t i = 0; i < n; ++i) {
      const double* z = &Z.a[i * k];
      for (size_t u = 0; u < hs; ++u) {
        double s = model.b1[u];
        for (size_t f = 0; f < k; ++f) s += model.w1(u, f) * z[f];
        h[u] = std::tanh(s);
      }
      double logit = model.b2;
      for (size_t u = 0; u < hs; ++u) logit += model.w2[u] * h[u];
      double y = static_cast<double>(labels[i]);
      // Cross-entropy straight from the logit: softplus keeps it finite.
      loss.add(softplus(logit) - y * logit);

      double dz = (sigmoid(logit) - y) / static_cast<double>(n);
      for (size_t u = 0; u < hs; ++u) {
        gw2[u] += dz * h[u];
        dh[u] = dz * model.w2[u] * (1.0 - h[u] * h[u]);
      }
      gb2 += dz;
      for (size_t u = 0; u < hs; ++u) {
        if (dh[u] == 0.0) continue;
        for (size_t f = 0; f < k; ++f) gw1(u, f) += dh[u] * z[f];
        gb1[u] += dh[u];
      }
    }

    double penalty = 0.0;
    for (double wv : model.w1.a) penalty += wv * wv;
    for (double wv : model.w2) penalty += wv * wv;
    double total = loss.value() / static_cast<double>(n) + cfg.l2 * penalty;
    model.loss_log.push_back(total);
    size_t e = model.loss_log.size() - 1;
    if (e >= 50 && model.loss_log[e] > model.loss_log[e - 50]) lr *= 0.5;

    for (size_t u = 0; u < hs; ++u) {
      for (size_t f = 0; f < k; ++f)
        model.w1(u, f) -= lr * (gw1(u, f) + 2.0 * cfg.l2 * model.w1(u, f));
      model.b1[u] -= lr * gb1[u];
      model.w2[u] -= lr * (gw2[u] + 2.0 * cfg.l2 * model.w2[u]);
    }
    model.b2 -= lr * gb2;
  }
  return model;
}

DetectorModel train_detector(const std::vector<FeatureVector>& feats, const DetectorConfig& cfg) {
  Mat X = feature_matrix(feats);
  std::vector<int> labels(feats.size());
  for (size_t i = 0; i < feats.size(); ++i) {
    if (feats[i].model_label < 0) fail_data("train_detector: unlabeled feature vector");
    labels[i] = feats[i].model_label;
  }
  return train_detector_rows(X, labels, cfg);
}

double predict(const DetectorModel& model, const Vec& feat) {
  if (feat.size() != model.input_dim) fail_data("predict: feature length mismatch");
  Vec z, h;
  standardize_row(model, feat.data(), z);
  return forward_score(model, z, h);
}

double predict(const DetectorModel& model, const FeatureVector& feat) {
  return predict(model, Vec(feat.values.begin(), feat.values.end()));
}

double auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) fail_data("auc: score/label count mismatch");
  size_t pos = 0, neg = 0;
  for (int y : labels) {
    if (y != 0 && y != 1) fail_data("auc: labels must be 0 or 1");
    (y == 1 ? pos : neg) += 1;
  }
  if (pos == 0 || neg == 0) fail_data("auc: both classes must be present");
  double wins = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      if (scores[i] > scores[j])
        wins += 1.0;
      else if (scores[i] == scores[j])
        wins += 0.5;
    }
  }
  return wins / (static_cast<double>(pos) * static_cast<double>(neg));
}

PipelineFeatures pipeline_features(const std::vector<LabeledNetwork>& models,
                                   const std::vector<Vec>& clean_samples,
                                   const PerturbConfig& pcfg, int jobs) {
  if (jobs < 1) fail_usage("pipeline: jobs must be >= 1");
  size_t n = models.size();
  PipelineFeatures out;
  out.topo.resize(n);
  out.baseline.resize(n);
  out.labels.resize(n);

  struct Failure {
    bool set = false;
    ErrorKind kind = ErrorKind::numeric;
    std::string msg;
  };
  std::vector<Failure> failures(n);
  std::atomic<size_t> next{0};

  auto worker = [&]() {
    Vec zrow;
    for (;;) {
      size_t idx = next.fetch_add(1);
      if (idx >= n) return;
      try {
        PerturbConfig local = pcfg;
        local.seed = pcfg.seed + idx;
        std::vector<Vec> perturbed = perturb_pixelwise(clean_samples, local);
        ActivationTrace trace = record_activations(models[idx].net, perturbed);
        CorrelationMatrix C = correlation_matrix(trace, Kernel::pearson);
        DissimilarityMatrix W = dissimilarity(C);
        Filtration F = build_filtration(W, 2.0);
        PersistenceDiagram dg0 = zero_dim_diagram(F);
        PersistenceDiagram dg1 = one_dim_diagram(F);
        out.topo[idx] = topo_features(dg0, dg1);
        out.topo[idx].model_label = models[idx].label;
        out.baseline[idx] = corr_baseline_features(C);
        out.labels[idx] = models[idx].label;
      } catch (const Error& e) {
        failures[idx] = {true, e.kind(), e.what()};
      } catch (const std::exception& e) {
        failures[idx] = {true, ErrorKind::numeric, e.what()};
      }
    }
  };

  if (jobs == 1 || n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    size_t count = std::min(static_cast<size_t>(jobs), n);
    pool.reserve(count);
    for (size_t t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (size_t idx = 0; idx < n; ++idx)
    if (failures[idx].set)
      throw Error(failures[idx].kind, "model " + std::to_string(idx) + ": " + failures[idx].msg);
  return out;
}

Mat feature_matrix(const std::vector<FeatureVector>& feats) {
  Mat X(feats.size(), kTopoFeatureCount);
  for (size_t i = 0; i < feats.size(); ++i)
    for (size_t f = 0; f < kTopoFeatureCount; ++f) X(i, f) = feats[i].values[f];
  return X;
}

Mat baseline_matrix(const std::vector<CorrBaselineVector>& feats) {
  Mat X(feats.size(), kBaselineFeatureCount);
  for (size_t i = 0; i < feats.size(); ++i) {
    for (size_t f = 0; f < 5; ++f) X(i, f) = feats[i].singular[f];
    for (size_t f = 0; f < 3; ++f) X(i, 5 + f) = feats[i].frob[f];
  }
  return X;
}

EvalReport evaluate_features(const Mat& X, const std::vector<int>& labels,
                             const DetectorConfig& cfg) {
  check_config(cfg);
  if (X.rows != labels.size()) fail_data("evaluate_features: row/label count mismatch");

  std::vector<size_t> train_idx, test_idx;
  for (int cls = 0; cls <= 1; ++cls) {
    std::vector<size_t> members;
    for (size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cls) members.push_back(i);
    Rng rng = Rng(cfg.seed).split(static_cast<uint64_t>(cls));
    rng.shuffle(members);
    size_t n_train =
        static_cast<size_t>(cfg.train_fraction * static_cast<double>(members.size()));
    for (size_t p = 0; p < members.size(); ++p)
      (p < n_train ? train_idx : test_idx).push_back(members[p]);
  }
  if (test_idx.empty()) fail_data("evaluate_features: test split is empty");

  Mat Xtr(train_idx.size(), X.cols);
  std::vector<int> ytr(train_idx.size());
  for (size_t p = 0; p < train_idx.size(); ++p) {
    for (size_t f = 0; f < X.cols; ++f) Xtr(p, f) = X(train_idx[p], f);
    ytr[p] = labels[train_idx[p]];
  }
  DetectorModel model = train_detector_rows(Xtr, ytr, cfg);

  std::vector<double> scores(test_idx.size());
  std::vector<int> yte(test_idx.size());
  size_t correct = 0;
  for (size_t p = 0; p < test_idx.size(); ++p) {
    Vec row(X.cols);
    for (size_t f = 0; f < X.cols; ++f) row[f] = X(test_idx[p], f);
    scores[p] = predict(model, row);
    yte[p] = labels[test_idx[p]];
    int call = scores[p] >= 0.5 ? 1 : 0;
    if (call == yte[p]) ++correct;
  }

  EvalReport report;
  report.n_test = test_idx.size();
  report.acc = static_cast<double>(correct) / static_cast<double>(test_idx.size());
  report.auc = auc(scores, yte);
  report.threshold = 0.5;
  return report;
}

EvalReport run_pipeline(const std::vector<LabeledNetwork>& models,
                        const std::vector<Vec>& clean_samples, const PerturbConfig& pcfg,
                        const DetectorConfig& cfg, int jobs) {
  size_t pos = 0, neg = 0;
  for (const LabeledNetwork& m : models) (m.label == 1 ? pos : neg) += 1;
  if (pos < 4 || neg < 4) fail_data("run_pipeline: need at least 4 models per class");
  PipelineFeatures feats = pipeline_features(models, clean_samples, pcfg, jobs);
  return evaluate_features(feature_matrix(feats.topo), feats.labels, cfg);
}

}  // namespace topo
