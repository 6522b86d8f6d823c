#include "topo/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace topo {

int edge_length(int i, int j, const std::vector<int>& layer_of) {
  if (i < 0 || j < 0 || static_cast<size_t>(i) >= layer_of.size() ||
      static_cast<size_t>(j) >= layer_of.size())
    fail_data("edge_length: neuron index out of range");
  return std::abs(layer_of[j] - layer_of[i]);
}

std::vector<int> death_edge_lengths(const Filtration& F, const PersistenceDiagram& dg0,
                                    size_t top_k) {
  size_t finite = 0;
  for (const Dot& d : dg0.dots)
    if (d.dim == 0 && !d.essential()) ++finite;

  std::vector<MergeEdge> merges = zero_dim_death_edges(F);
  // The diagram may exclude zero-persistence dots; the merge list never does.
  if (finite > merges.size())
    fail_data("death_edge_lengths: diagram does not match the filtration");

  std::vector<int> out;
  size_t take = std::min(top_k, merges.size());
  for (size_t k = 0; k < take; ++k) {
    const MergeEdge& e = merges[merges.size() - 1 - k];  // latest death first
    out.push_back(edge_length(e.i, e.j, F.layer_of));
  }
  return out;
}

std::vector<int> longest_cycle_edge_lengths(const std::vector<CycleRepresentative>& cycles,
                                            size_t top_k) {
  std::vector<int> out;
  size_t take = std::min(top_k, cycles.size());
  for (size_t c = 0; c < take; ++c) {
    int longest = 0;
    for (const CycleEdge& e : cycles[c].edges)
      longest = std::max(longest, std::abs(e.layer_j - e.layer_i));
    out.push_back(longest);
  }
  return out;
}

namespace {
double mean_of(const std::vector<int>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (int x : v) s += x;
  return s / static_cast<double>(v.size());
}
}  // namespace

ShortcutStats shortcut_stats(const Filtration& F, const PersistenceDiagram& dg0,
                             const std::vector<CycleRepresentative>& cycles,
                             size_t top_k_edges, size_t top_k_cycles) {
  ShortcutStats s;
  s.death_lengths = death_edge_lengths(F, dg0, top_k_edges);
  s.cycle_lengths = longest_cycle_edge_lengths(cycles, top_k_cycles);
  s.mean_death_edge_length = mean_of(s.death_lengths);
  s.mean_longest_cycle_edge_length = mean_of(s.cycle_lengths);
  return s;
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  // Lentz's continued fraction for the incomplete beta; switch to the
  // symmetric form when x is past the distribution bulk so it converges fast.
  if (x > (a + 1.0) / (a + b + 2.0)) return 1.0 - regularized_incomplete_beta(b, a, 1.0 - x);

  double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                    a * std::log(x) + b * std::log1p(-x);
  const double tiny = 1e-300;
  double c = 1.0, d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    double dm = static_cast<double>(m);
    double num = dm * (b - dm) * x / ((a + 2.0 * dm - 1.0) * (a + 2.0 * dm));
    d = 1.0 + num * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    num = -(a + dm) * (a + b + dm) * x / ((a + 2.0 * dm) * (a + 2.0 * dm + 1.0));
    d = 1.0 + num * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-14) break;
  }
  return std::exp(ln_front) * h / a;
}

double student_t_two_sided_p(double t, double dof) {
  if (!(dof > 0.0)) fail_numeric("student_t_two_sided_p: dof must be > 0");
  if (std::isinf(t)) return 0.0;
  double x = dof / (dof + t * t);
  return regularized_incomplete_beta(dof / 2.0, 0.5, x);
}

TTestResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2) fail_data("welch_t_test: need at least 2 values per sample");
  auto moments = [](const std::vector<double>& v, double& mean, double& var) {
    Accum s;
    for (double x : v) s.add(x);
    mean = s.value() / static_cast<double>(v.size());
    Accum s2;
    for (double x : v) s2.add((x - mean) * (x - mean));
    var = s2.value() / static_cast<double>(v.size() - 1);  // unbiased
  };
  TTestResult r;
  double va, vb;
  moments(a, r.mean_a, va);
  moments(b, r.mean_b, vb);
  double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  double se2 = va / na + vb / nb;
  if (se2 <= 0.0) {
    r.dof = na + nb - 2.0;
    if (r.mean_a == r.mean_b) {
      r.t_stat = 0.0;
      r.p_value = 1.0;
    } else {
      r.t_stat = r.mean_a > r.mean_b ? std::numeric_limits<double>::infinity()
                                     : -std::numeric_limits<double>::infinity();
      r.p_value = 0.0;
    }
    return r;
  }
  r.t_stat = (r.mean_a - r.mean_b) / std::sqrt(se2);
  r.dof = se2 * se2 /
          ((va / na) * (va / na) / (na - 1.0) + (vb / nb) * (vb / nb) / (nb - 1.0));
  r.p_value = student_t_two_sided_p(r.t_stat, r.dof);
  return r;
}

}  // namespace topo
