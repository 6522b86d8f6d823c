#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "topo/complex.hpp"

namespace topo {

constexpr double kInfDeath = std::numeric_limits<double>::infinity();

struct Dot {
  int dim = 0;
  double birth = 0.0;
  double death = 0.0;  // kInfDeath for essential classes

  double persistence() const { return death - birth; }
  bool essential() const { return death == kInfDeath; }
};

// The diagonal {(b, b)} is implicit for matching purposes. Zero-persistence
// dots are computed but excluded unless keep_zero_persistence is set.
struct PersistenceDiagram {
  std::vector<Dot> dots;
};

// 0D via union-find (union by rank, path compression, elder rule: the
// later-born component dies). All births are 0; deaths are the minimum
// spanning forest edge weights in filtration order; one infinite dot per
// component at cutoff.
PersistenceDiagram zero_dim_diagram(const Filtration& F, bool keep_zero_persistence = false);

// The 0D death events (minimum spanning forest edges) in filtration order;
// feeds the death-edge length analysis.
struct MergeEdge {
  int i = 0, j = 0;
  double w = 0.0;
};
std::vector<MergeEdge> zero_dim_death_edges(const Filtration& F);

// 1D by reducing the coboundary matrix (the boundary matrix anti-transposed,
// simplex order reversed) with the clearing rule: edge cocolumns whose edge
// already died as a 0D pair (a spanning-forest edge) are skipped. The working
// column is a bit-indexed dense accumulator with O(1) flip and O(word ops)
// max-index queries. Pairs map back to (edge, triangle) in the original
// order; unpaired uncleared edges yield essential (birth, inf) dots.
PersistenceDiagram one_dim_diagram(const Filtration& F, bool keep_zero_persistence = false);

// Textbook left-to-right reduction of the full boundary matrix; the testing
// oracle for the two functions above and for extract_cycles. Returns 0D and
// 1D dots together.
PersistenceDiagram naive_reduce(const Filtration& F, bool keep_zero_persistence = false);

struct CycleEdge {
  int i = 0, j = 0;
  double w = 0.0;
  int layer_i = 0, layer_j = 0;
};

struct CycleRepresentative {
  Dot dot;  // dim 1, finite
  std::vector<CycleEdge> edges;
};

// Either the k highest-persistence dots or every dot with death <= cutoff.
struct CycleSelection {
  static CycleSelection top_k(size_t k) { return {k, 0.0, true}; }
  static CycleSelection death_cutoff(double d) { return {0, d, false}; }

  size_t k = 0;
  double cutoff = 0.0;
  bool by_count = true;
};

// Two-phase scheme: phase 1 (coboundary reduction) yields the pairs and the
// maximum finite 1D death eps*; phase 2 reduces the boundary matrix restricted
// to filter values <= eps* + 1e-9 keeping whole columns, and each selected
// dot's cycle is the reduced column at its death triangle. Every finite 1D
// class dies by eps*, so the pruning is exact. Results are sorted by
// persistence descending (ties: birth, then filtration order).
std::vector<CycleRepresentative> extract_cycles(const Filtration& F, const CycleSelection& sel);

// Exact bottleneck distance restricted to dots of the given dimension.
// Essential dots must match in multiplicity (else +inf) and pair up in sorted
// birth order; finite dots go through a binary search over the candidate
// distance set with a bipartite matching feasibility test, the diagonal
// available to both sides at cost (death - birth) / 2.
double bottleneck_distance(const PersistenceDiagram& A, const PersistenceDiagram& B, int dim);

struct StabilityCheck {
  double db = 0.0;    // bottleneck distance between the 1D diagrams
  double winf = 0.0;  // max absolute entry difference of the inputs
};

StabilityCheck diagram_stability_check(const DissimilarityMatrix& W1,
                                       const DissimilarityMatrix& W2, double cutoff);

// One full two-phase run on W at cutoff 2.0 with reduction timings; backs the
// bench subcommand's table.
struct BenchResult {
  double phase2_cutoff = 0.0;     // eps* derived by phase 1
  size_t num_simplices = 0;       // simplex count at the phase-1 cutoff
  double cobd_seconds = 0.0;      // phase-1 coboundary reduction time
  double bd_seconds = 0.0;        // phase-2 pruned boundary reduction time
  size_t pruned_nonzero = 0;      // nonzeros of the pruned boundary matrix
  size_t finite_pairs = 0;        // finite positive-persistence 1D dots
};

BenchResult bench_reduction(const DissimilarityMatrix& W);

}  // namespace topo
