#pragma once

#include <vector>

#include "topo/persistence.hpp"

namespace topo {

// Number of layers an edge crosses: |layer_of[j] - layer_of[i]|.
int edge_length(int i, int j, const std::vector<int>& layer_of);

// Lengths of the 0D death (spanning forest) edges, top_k by death time
// descending; fewer when the diagram is smaller. dg0 must come from F.
std::vector<int> death_edge_lengths(const Filtration& F, const PersistenceDiagram& dg0,
                                    size_t top_k);

// Longest edge length within each of the top_k cycles; the input must already
// be sorted by persistence descending (extract_cycles emits that order).
std::vector<int> longest_cycle_edge_lengths(const std::vector<CycleRepresentative>& cycles,
                                            size_t top_k);

struct ShortcutStats {
  double mean_death_edge_length = 0.0;
  double mean_longest_cycle_edge_length = 0.0;
  std::vector<int> death_lengths;
  std::vector<int> cycle_lengths;
};

ShortcutStats shortcut_stats(const Filtration& F, const PersistenceDiagram& dg0,
                             const std::vector<CycleRepresentative>& cycles,
                             size_t top_k_edges, size_t top_k_cycles);

struct TTestResult {
  double t_stat = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
  double mean_a = 0.0, mean_b = 0.0;
};

// Welch two-sample t-test with the Welch-Satterthwaite degrees of freedom and
// a two-sided p-value from the regularized incomplete beta function. The
// degenerate case (both variances zero) maps to t=0, p=1 on equal means and
// t=+-inf, p=0 otherwise.
TTestResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b);

// P(|T| > t) for Student's t with dof degrees of freedom; abs error < 1e-10.
double student_t_two_sided_p(double t, double dof);

// Continued-fraction regularized incomplete beta I_x(a, b).
double regularized_incomplete_beta(double a, double b, double x);

}  // namespace topo
