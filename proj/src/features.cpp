#include "topo/features.hpp"

#include <algorithm>
#include <cmath>

#include "topo/rng.hpp"

namespace topo {

const std::array<std::string, kTopoFeatureCount>& topo_feature_names() {
  static const std::array<std::string, kTopoFeatureCount> names{
      "f01", "f02", "f03", "f04", "f05", "f06",
      "f11", "f12", "f13", "f14", "f15", "f16"};
  return names;
}

const std::array<std::string, kBaselineFeatureCount>& baseline_feature_names() {
  static const std::array<std::string, kBaselineFeatureCount> names{
      "s1", "s2", "s3", "s4", "s5", "fr25", "fr50", "fr75"};
  return names;
}

namespace {

void dim_stats(const PersistenceDiagram& dg, int dim, double* out6) {
  double max_pers = 0.0;
  Accum pers, birth, death, mid, pers2;
  size_t n = 0;
  for (const Dot& d : dg.dots) {
    if (d.dim != dim || d.essential() || !(d.death > d.birth)) continue;
    ++n;
    double p = d.death - d.birth;
    max_pers = std::max(max_pers, p);
    pers.add(p);
    birth.add(d.birth);
    death.add(d.death);
    mid.add((d.birth + d.death) / 2.0);
    pers2.add(p * p);
  }
  if (n == 0) {
    std::fill(out6, out6 + 6, 0.0);
    return;
  }
  double inv = 1.0 / static_cast<double>(n);
  double mean_pers = pers.value() * inv;
  double var = std::max(0.0, pers2.value() * inv - mean_pers * mean_pers);
  out6[0] = max_pers;
  out6[1] = mean_pers;
  out6[2] = birth.value() * inv;
  out6[3] = death.value() * inv;
  out6[4] = mid.value() * inv;
  out6[5] = std::sqrt(var);
}

}  // namespace

FeatureVector topo_features(const PersistenceDiagram& dg0, const PersistenceDiagram& dg1) {
  FeatureVector f;
  dim_stats(dg0, 0, f.values.data());
  dim_stats(dg1, 1, f.values.data() + 6);
  return f;
}

CorrBaselineVector corr_baseline_features(const CorrelationMatrix& M) {
  const size_t m = M.m;
  if (m < 5) fail_data("corr_baseline_features: need at least 5 neurons");

  CorrBaselineVector out;

  // Power iteration with deflation on the symmetric matrix; each singular
  // value is |lambda| of the current dominant eigenpair.
  Mat A(m, m);
  for (size_t k = 0; k < m * m; ++k) A.a[k] = M.rho[k];
  constexpr double kTol = 1e-10;
  constexpr int kMaxIter = 10000;
  for (int s = 0; s < 5; ++s) {
    Rng rng(0x5eedULL + static_cast<uint64_t>(s));  // deterministic start
    Vec v(m);
    double norm = 0.0;
    for (size_t k = 0; k < m; ++k) norm += (v[k] = rng.uniform(-1.0, 1.0)) * v[k];
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;

    double lambda = 0.0;
    for (int it = 0; it < kMaxIter; ++it) {
      Vec av(m, 0.0);
      for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) av[i] += A(i, j) * v[j];
      double an = 0.0;
      for (double x : av) an += x * x;
      an = std::sqrt(an);
      if (an < 1e-14) {  // matrix annihilates the iterate: remaining spectrum 0
        lambda = 0.0;
        break;
      }
      lambda = 0.0;
      for (size_t k = 0; k < m; ++k) lambda += v[k] * av[k];  // Rayleigh quotient
      double resid = 0.0;
      for (size_t k = 0; k < m; ++k) resid = std::max(resid, std::abs(av[k] - lambda * v[k]));
      for (size_t k = 0; k < m; ++k) v[k] = av[k] / an;
      if (resid <= kTol) break;
    }
    out.singular[s] = std::abs(lambda);
    for (size_t i = 0; i < m; ++i)
      for (size_t j = 0; j < m; ++j) A(i, j) -= lambda * v[i] * v[j];
  }
  std::sort(out.singular.begin(), out.singular.end(), std::greater<double>());

  // Percentiles over off-diagonal absolute entries, linear interpolation.
  std::vector<double> off;
  off.reserve(m * (m - 1) / 2);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i + 1; j < m; ++j) off.push_back(std::abs(M.at(i, j)));
  std::sort(off.begin(), off.end());
  auto percentile = [&off](double p) {
    double h = p / 100.0 * static_cast<double>(off.size() - 1);
    size_t lo = static_cast<size_t>(h);
    if (lo + 1 >= off.size()) return off.back();
    return off[lo] + (h - static_cast<double>(lo)) * (off[lo + 1] - off[lo]);
  };
  const double pcts[3] = {25.0, 50.0, 75.0};
  for (int k = 0; k < 3; ++k) {
    double thresh = percentile(pcts[k]);
    Accum sum;
    for (size_t i = 0; i < m; ++i)
      for (size_t j = 0; j < m; ++j) {
        double v = M.at(i, j);
        if (std::abs(v) >= thresh) sum.add(v * v);
      }
    out.frob[k] = std::sqrt(sum.value());
  }
  return out;
}

}  // namespace topo
