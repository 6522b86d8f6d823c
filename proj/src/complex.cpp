#include "topo/complex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace topo {

namespace {

// Calls fn(i, j, k, filter) once per triangle i<j<k under the cutoff.
// Adjacency bitsets restrict the scan to common neighbors above j, so each
// triangle is produced exactly once, from its lexicographically least edge.
template <class Fn>
void enumerate_triangles(const DissimilarityMatrix& W, double cutoff, Fn&& fn) {
  const size_t m = W.m;
  const size_t words = (m + 63) / 64;
  std::vector<uint64_t> adj(m * words, 0);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i + 1; j < m; ++j)
      if (W.at(i, j) <= cutoff) {
        adj[i * words + j / 64] |= uint64_t(1) << (j % 64);
        adj[j * words + i / 64] |= uint64_t(1) << (i % 64);
      }
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = i + 1; j < m; ++j) {
      double wij = W.at(i, j);
      if (wij > cutoff) continue;
      const uint64_t* ai = &adj[i * words];
      const uint64_t* aj = &adj[j * words];
      for (size_t w = (j + 1) / 64; w < words; ++w) {
        uint64_t common = ai[w] & aj[w];
        if (w == (j + 1) / 64 && (j + 1) % 64 != 0)
          common &= ~uint64_t(0) << ((j + 1) % 64);  // keep k > j only
        while (common) {
          size_t k = w * 64 + static_cast<size_t>(__builtin_ctzll(common));
          common &= common - 1;
          fn(i, j, k, std::max(wij, std::max(W.at(i, k), W.at(j, k))));
        }
      }
    }
  }
}

void validate(const DissimilarityMatrix& W, double cutoff) {
  if (W.m < 2) fail_data("build_filtration: need at least 2 neurons");
  if (!(cutoff > 0.0)) fail_data("build_filtration: cutoff must be > 0");
  for (double v : W.w)
    if (!std::isfinite(v) || v < 0.0) fail_data("build_filtration: weights must be finite and >= 0");
}

}  // namespace

Filtration build_filtration(const DissimilarityMatrix& W, double cutoff) {
  validate(W, cutoff);
  const size_t m = W.m;

  Filtration F;
  F.neuron_count = static_cast<int>(m);
  F.cutoff = cutoff;
  F.layer_of = W.layer_of;

  for (size_t i = 0; i < m; ++i) {
    Simplex s;
    s.v[0] = static_cast<int>(i);
    s.filter = 0.0;
    F.simplices.push_back(s);
  }
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i + 1; j < m; ++j) {
      double w = W.at(i, j);
      if (w <= cutoff) {
        Simplex s;
        s.v[0] = static_cast<int>(i);
        s.v[1] = static_cast<int>(j);
        s.filter = w;
        F.simplices.push_back(s);
      }
    }
  enumerate_triangles(W, cutoff, [&F](size_t i, size_t j, size_t k, double f) {
    Simplex s;
    s.v = {static_cast<int>(i), static_cast<int>(j), static_cast<int>(k)};
    s.filter = f;
    F.simplices.push_back(s);
  });

  std::sort(F.simplices.begin(), F.simplices.end(), [](const Simplex& a, const Simplex& b) {
    if (a.filter != b.filter) return a.filter < b.filter;
    int da = a.dim(), db = b.dim();
    if (da != db) return da < db;
    return a.v < b.v;
  });
  return F;
}

SimplexCounts simplex_counts(const Filtration& F) {
  SimplexCounts c;
  for (const Simplex& s : F.simplices) {
    int d = s.dim();
    if (d == 0) ++c.v;
    else if (d == 1) ++c.e;
    else ++c.t;
  }
  return c;
}

SimplexCounts count_simplices_under(const DissimilarityMatrix& W, double cutoff) {
  validate(W, cutoff);
  SimplexCounts c;
  c.v = W.m;
  for (size_t i = 0; i < W.m; ++i)
    for (size_t j = i + 1; j < W.m; ++j)
      if (W.at(i, j) <= cutoff) ++c.e;
  enumerate_triangles(W, cutoff, [&c](size_t, size_t, size_t, double) { ++c.t; });
  return c;
}

}  // namespace topo
