#pragma once

#include <array>
#include <string>

#include "topo/persistence.hpp"
#include "topo/trace.hpp"

namespace topo {

// The 12 topological features, 6 per homology dimension (dim 0 then dim 1):
// max persistence, mean persistence, mean birth, mean death, mean midlife,
// persistence standard deviation (population). The order is a versioned
// contract; the CSV header names are f01..f06 and f11..f16.
constexpr size_t kTopoFeatureCount = 12;

struct FeatureVector {
  std::array<double, kTopoFeatureCount> values{};
  int model_label = -1;  // -1 = unlabeled
};

const std::array<std::string, kTopoFeatureCount>& topo_feature_names();

// Statistics run over finite, positive-persistence dots of the matching
// dimension only; essential dots never contribute; an empty selection yields
// zeros for that dimension's six features.
FeatureVector topo_features(const PersistenceDiagram& dg0, const PersistenceDiagram& dg1);

struct CorrBaselineVector {
  std::array<double, 5> singular{};  // descending, nonnegative
  std::array<double, 3> frob{};      // thresholded at the 25/50/75 percentiles
};

constexpr size_t kBaselineFeatureCount = 8;
const std::array<std::string, kBaselineFeatureCount>& baseline_feature_names();

// Top-5 singular values by power iteration with deflation (tolerance 1e-10,
// at most 10000 iterations per value, deterministic internal start vectors),
// plus Frobenius norms of M after zeroing entries whose absolute value falls
// below the 25/50/75th percentile of the off-diagonal absolute entries
// (linear-interpolation percentile).
CorrBaselineVector corr_baseline_features(const CorrelationMatrix& M);

}  // namespace topo
