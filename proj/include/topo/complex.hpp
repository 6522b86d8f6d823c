#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "topo/trace.hpp"

namespace topo {

// Vertex, edge, or triangle; unused vertex slots hold -1. Vertices enter at 0,
// edges at w_ij, triangles at the max of their three edge values.
struct Simplex {
  std::array<int, 3> v{-1, -1, -1};  // strictly increasing
  double filter = 0.0;

  int dim() const { return v[2] >= 0 ? 2 : (v[1] >= 0 ? 1 : 0); }
};

// Simplices sorted by (filter_value, dimension, lexicographic vertices); the
// tie order is deterministic and part of the contract, so every face precedes
// its cofaces and diagrams are reproducible across runs.
struct Filtration {
  std::vector<Simplex> simplices;
  int neuron_count = 0;
  double cutoff = 0.0;
  std::vector<int> layer_of;
};

// All m vertices at 0, all edges with w <= cutoff, all triangles whose max
// edge is <= cutoff. Triangles are found by intersecting adjacency bitsets
// per edge, so no C(m,3) candidate sweep is materialized.
Filtration build_filtration(const DissimilarityMatrix& W, double cutoff);

struct SimplexCounts {
  size_t v = 0, e = 0, t = 0;
};

SimplexCounts simplex_counts(const Filtration& F);

// Same counts without materializing the filtration; keeps the large-m
// combinatorial checks cheap on memory.
SimplexCounts count_simplices_under(const DissimilarityMatrix& W, double cutoff);

}  // namespace topo
