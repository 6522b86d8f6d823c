#pragma once

#include <cstdint>
#include <vector>

#include "topo/features.hpp"
#include "topo/netlab.hpp"

namespace topo {

struct DetectorConfig {
  int hidden_size = 32;
  int epochs = 500;
  double learning_rate = 0.01;
  double l2 = 1e-4;  // applied to weights only, never biases
  uint64_t seed = 0;
  double train_fraction = 0.8;
};

// Standardize -> tanh hidden layer -> sigmoid scalar. Features whose training
// standard deviation vanishes are dropped; kept lists the survivors. The loss
// log holds the pre-step training loss of every epoch.
struct DetectorModel {
  size_t input_dim = 0;   // feature count before the variance screen
  std::vector<int> kept;  // surviving feature indices, ascending
  Vec mean, std;          // per kept feature, from the training set
  Mat w1;                 // hidden_size x kept.size()
  Vec b1;                 // hidden_size
  Vec w2;                 // hidden_size
  double b2 = 0.0;
  std::vector<double> loss_log;
};

struct EvalReport {
  double acc = 0.0;
  double auc = 0.0;
  size_t n_test = 0;
  double threshold = 0.5;
};

// Full-batch gradient descent on cross-entropy plus cfg.l2 * (sum of squared
// weights). Whenever the loss exceeds its value 50 epochs earlier the
// learning rate is halved and training continues. Deterministic under
// cfg.seed. Labels must be 0/1 with at least two examples of each.
DetectorModel train_detector_rows(const Mat& X, const std::vector<int>& labels,
                                  const DetectorConfig& cfg);

DetectorModel train_detector(const std::vector<FeatureVector>& feats, const DetectorConfig& cfg);

// Sigmoid score in [0, 1]; classification = score >= 0.5.
double predict(const DetectorModel& model, const Vec& feat);
double predict(const DetectorModel& model, const FeatureVector& feat);

// Mann-Whitney with half ties: P(score_pos > score_neg) + P(equal)/2 over all
// positive-negative pairs. Both classes must be present.
double auc(const std::vector<double>& scores, const std::vector<int>& labels);

struct LabeledNetwork {
  NetworkSpec net;
  int label = 0;  // 0 clean, 1 Trojaned
};

struct PipelineFeatures {
  std::vector<FeatureVector> topo;
  std::vector<CorrBaselineVector> baseline;
  std::vector<int> labels;
};

// Stage 1 for every model: pixel-wise perturbation of the clean samples with a
// per-model stream (pcfg.seed + model index), activation trace, pearson
// correlation, filtration at cutoff 2.0, both diagrams, the 12 topological
// features and the correlation baseline. jobs > 1 fans models out over
// threads; the output never depends on the job count. Stage errors propagate
// with the model index attached.
PipelineFeatures pipeline_features(const std::vector<LabeledNetwork>& models,
                                   const std::vector<Vec>& clean_samples,
                                   const PerturbConfig& pcfg, int jobs = 1);

Mat feature_matrix(const std::vector<FeatureVector>& feats);
Mat baseline_matrix(const std::vector<CorrBaselineVector>& feats);

// Stratified split under cfg.seed (per class: shuffle, first
// floor(train_fraction * count) rows train), training on the train rows and
// reporting test accuracy at the 0.5 threshold plus AUC.
EvalReport evaluate_features(const Mat& X, const std::vector<int>& labels,
                             const DetectorConfig& cfg);

// The detection pipeline end to end; needs at least 4 models per class so the
// stratified split leaves both classes testable.
EvalReport run_pipeline(const std::vector<LabeledNetwork>& models,
                        const std::vector<Vec>& clean_samples, const PerturbConfig& pcfg,
                        const DetectorConfig& cfg, int jobs = 1);

}  // namespace topo
