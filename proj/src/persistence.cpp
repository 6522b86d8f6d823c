#include "topo/persistence.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>

namespace topo {

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

// ---------------------------------------------------------------------------
// Positional index over a filtration: edges and triangles in filtration order
// plus an endpoint -> edge-rank lookup. Vertices occupy positions 0..m-1 in id
// order (all enter at filter 0 and ties sort by dimension then vertex).

struct EdgeRec {
  int i, j;
  double w;
  uint32_t pos;  // position in F.simplices
};

struct TriRec {
  int a, b, c;
  double w;
};

struct Mesh {
  int m = 0;
  std::vector<EdgeRec> edges;
  std::vector<TriRec> tris;
  std::vector<int32_t> edge_rank;  // m*m lookup, -1 when absent

  int32_t edge_of(int i, int j) const { return edge_rank[static_cast<size_t>(i) * m + j]; }
};

Mesh index_filtration(const Filtration& F) {
  Mesh mesh;
  mesh.m = F.neuron_count;
  mesh.edge_rank.assign(static_cast<size_t>(mesh.m) * mesh.m, -1);
  for (uint32_t p = 0; p < F.simplices.size(); ++p) {
    const Simplex& s = F.simplices[p];
    int d = s.dim();
    if (d == 1) {
      int32_t rank = static_cast<int32_t>(mesh.edges.size());
      mesh.edge_rank[static_cast<size_t>(s.v[0]) * mesh.m + s.v[1]] = rank;
      mesh.edge_rank[static_cast<size_t>(s.v[1]) * mesh.m + s.v[0]] = rank;
      mesh.edges.push_back({s.v[0], s.v[1], s.filter, p});
    } else if (d == 2) {
      mesh.tris.push_back({s.v[0], s.v[1], s.v[2], s.filter});
    }
  }
  return mesh;
}

// ---------------------------------------------------------------------------
// Union-find with union by rank and path compression.

struct UnionFind {
  std::vector<int> parent, rank_;

  explicit UnionFind(int n) : parent(n), rank_(n, 0) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }
};

// Spanning-forest membership per edge rank; these edges are exactly the 0D
// death events, which the clearing rule skips in the coboundary reduction.
std::vector<char> forest_edges(const Mesh& mesh, std::vector<MergeEdge>* merges,
                               int* component_count) {
  UnionFind uf(mesh.m);
  std::vector<char> in_forest(mesh.edges.size(), 0);
  int components = mesh.m;
  for (size_t e = 0; e < mesh.edges.size(); ++e) {
    const EdgeRec& r = mesh.edges[e];
    if (uf.unite(r.i, r.j)) {
      in_forest[e] = 1;
      --components;
      if (merges) merges->push_back({r.i, r.j, r.w});
    }
  }
  if (component_count) *component_count = components;
  return in_forest;
}

// ---------------------------------------------------------------------------
// Bit-indexed dense accumulator for the working column: a complete 64-ary
// occupancy tree over a fixed capacity. flip is O(depth) only when a word
// changes emptiness, max_index walks one root-to-leaf path.

class BitTreeColumn {
 public:
  explicit BitTreeColumn(size_t n) {
    size_t sz = std::max<size_t>(n, 1);
    do {
      sz = (sz + 63) / 64;
      levels_.emplace_back(sz, 0);
    } while (sz > 1);
  }

  bool empty() const { return levels_.back()[0] == 0; }

  void flip(uint32_t idx) {
    size_t word = idx >> 6;
    uint64_t bit = uint64_t(1) << (idx & 63);
    uint64_t before = levels_[0][word];
    levels_[0][word] ^= bit;
    if (before == 0) {
      propagate_set(word);
    } else if (levels_[0][word] == 0) {
      propagate_clear(word);
    }
  }

  uint32_t max_index() const {
    size_t idx = top_bit(levels_.back()[0]);
    for (size_t lvl = levels_.size() - 1; lvl-- > 0;)
      idx = (idx << 6) | top_bit(levels_[lvl][idx]);
    return static_cast<uint32_t>(idx);
  }

  uint32_t pop_max() {
    uint32_t idx = max_index();
    flip(idx);
    return idx;
  }

 private:
  static size_t top_bit(uint64_t w) { return 63 - static_cast<size_t>(__builtin_clzll(w)); }

  void propagate_set(size_t word) {
    for (size_t lvl = 1; lvl < levels_.size(); ++lvl) {
      size_t parent = word >> 6;
      uint64_t bit = uint64_t(1) << (word & 63);
      uint64_t before = levels_[lvl][parent];
      levels_[lvl][parent] |= bit;
      if (before != 0) return;  // ancestors already marked occupied
      word = parent;
    }
  }
  void propagate_clear(size_t word) {
    for (size_t lvl = 1; lvl < levels_.size(); ++lvl) {
      size_t parent = word >> 6;
      levels_[lvl][parent] &= ~(uint64_t(1) << (word & 63));
      if (levels_[lvl][parent] != 0) return;
      word = parent;
    }
  }

  std::vector<std::vector<uint64_t>> levels_;  // [0] = leaves, back = root
};

// ---------------------------------------------------------------------------
// Phase 1: coboundary reduction. Edge e's cocolumn lists the triangles
// containing e; positions are reversed (rpos = T-1-t) so the standard
// max-index pivot picks the earliest triangle in original filtration order.
// Only columns whose pivot is contested get stored, keyed by pivot.

struct CobdResult {
  std::vector<std::pair<uint32_t, uint32_t>> pairs;  // (edge rank, triangle rank)
  std::vector<uint32_t> essential_edges;             // uncleared, zero cocolumn
  double seconds = 0.0;
};

CobdResult reduce_coboundary(const Mesh& mesh, const std::vector<char>& cleared) {
  const size_t E = mesh.edges.size(), T = mesh.tris.size();

  // CSR edge -> coface triangle ranks.
  std::vector<uint32_t> head(E + 1, 0);
  for (const TriRec& t : mesh.tris) {
    ++head[mesh.edge_of(t.a, t.b) + 1];
    ++head[mesh.edge_of(t.a, t.c) + 1];
    ++head[mesh.edge_of(t.b, t.c) + 1];
  }
  for (size_t e = 0; e < E; ++e) head[e + 1] += head[e];
  std::vector<uint32_t> cofaces(head[E]);
  {
    std::vector<uint32_t> fill(head.begin(), head.end() - 1);
    for (uint32_t t = 0; t < T; ++t) {
      const TriRec& tr = mesh.tris[t];
      cofaces[fill[mesh.edge_of(tr.a, tr.b)]++] = t;
      cofaces[fill[mesh.edge_of(tr.a, tr.c)]++] = t;
      cofaces[fill[mesh.edge_of(tr.b, tr.c)]++] = t;
    }
  }

  CobdResult res;
  double t0 = now_seconds();
  BitTreeColumn work(T);
  std::vector<int32_t> claim_of(T, -1);           // pivot rpos -> stored column id
  std::vector<std::vector<uint32_t>> stored;      // reduced columns, rpos entries
  std::vector<uint32_t> claimed_pivot_edge(0);
  stored.reserve(1024);

  for (size_t e = E; e-- > 0;) {
    if (cleared[e]) continue;
    for (uint32_t c = head[e]; c < head[e + 1]; ++c)
      work.flip(static_cast<uint32_t>(T - 1) - cofaces[c]);
    bool paired = false;
    while (!work.empty()) {
      uint32_t pivot = work.max_index();
      int32_t owner = claim_of[pivot];
      if (owner < 0) {
        std::vector<uint32_t> col;
        while (!work.empty()) col.push_back(work.pop_max());
        claim_of[pivot] = static_cast<int32_t>(stored.size());
        stored.push_back(std::move(col));
        res.pairs.emplace_back(static_cast<uint32_t>(e),
                               static_cast<uint32_t>(T - 1) - pivot);
        paired = true;
        break;
      }
      for (uint32_t r : stored[owner]) work.flip(r);
    }
    if (!paired) res.essential_edges.push_back(static_cast<uint32_t>(e));
  }
  res.seconds = now_seconds() - t0;
  return res;
}

// ---------------------------------------------------------------------------
// Phase 2: boundary reduction restricted to simplices with filter <= limit
// (a prefix of the edge and triangle orders). Whole reduced columns are kept
// so any pair's cycle can be read back.

struct BdResult {
  std::vector<std::pair<uint32_t, uint32_t>> pairs;  // (edge rank, triangle rank)
  std::vector<std::vector<uint32_t>> columns;        // reduced column per pair
  double seconds = 0.0;
  size_t nonzero = 0;  // input nonzeros of the pruned matrix
  size_t pruned_edges = 0, pruned_tris = 0;
};

BdResult reduce_pruned_boundary(const Mesh& mesh, double limit) {
  size_t Ep = 0, Tp = 0;
  while (Ep < mesh.edges.size() && mesh.edges[Ep].w <= limit) ++Ep;
  while (Tp < mesh.tris.size() && mesh.tris[Tp].w <= limit) ++Tp;

  BdResult res;
  res.pruned_edges = Ep;
  res.pruned_tris = Tp;
  res.nonzero = 3 * Tp;

  double t0 = now_seconds();
  BitTreeColumn work(std::max<size_t>(Ep, 1));
  std::vector<int32_t> claim_of(Ep, -1);  // pivot edge rank -> pair id
  for (uint32_t t = 0; t < Tp; ++t) {
    const TriRec& tr = mesh.tris[t];
    work.flip(static_cast<uint32_t>(mesh.edge_of(tr.a, tr.b)));
    work.flip(static_cast<uint32_t>(mesh.edge_of(tr.a, tr.c)));
    work.flip(static_cast<uint32_t>(mesh.edge_of(tr.b, tr.c)));
    while (!work.empty()) {
      uint32_t pivot = work.max_index();
      int32_t owner = claim_of[pivot];
      if (owner < 0) {
        std::vector<uint32_t> col;
        while (!work.empty()) col.push_back(work.pop_max());
        claim_of[pivot] = static_cast<int32_t>(res.pairs.size());
        res.pairs.emplace_back(pivot, t);
        res.columns.push_back(std::move(col));
        break;
      }
      for (uint32_t r : res.columns[owner]) work.flip(r);
    }
    // Zero column: the triangle creates a 2-cycle; nothing to record at dim 1.
  }
  res.seconds = now_seconds() - t0;
  return res;
}

void append_dot(PersistenceDiagram& dg, int dim, double birth, double death, bool keep_zero) {
  if (death == birth && !keep_zero) return;
  dg.dots.push_back({dim, birth, death});
}

}  // namespace

// ---------------------------------------------------------------------------

PersistenceDiagram zero_dim_diagram(const Filtration& F, bool keep_zero_persistence) {
  Mesh mesh = index_filtration(F);
  std::vector<MergeEdge> merges;
  int components = 0;
  forest_edges(mesh, &merges, &components);
  PersistenceDiagram dg;
  for (const MergeEdge& me : merges) append_dot(dg, 0, 0.0, me.w, keep_zero_persistence);
  for (int c = 0; c < components; ++c) dg.dots.push_back({0, 0.0, kInfDeath});
  return dg;
}

std::vector<MergeEdge> zero_dim_death_edges(const Filtration& F) {
  Mesh mesh = index_filtration(F);
  std::vector<MergeEdge> merges;
  forest_edges(mesh, &merges, nullptr);
  return merges;
}

PersistenceDiagram one_dim_diagram(const Filtration& F, bool keep_zero_persistence) {
  Mesh mesh = index_filtration(F);
  std::vector<char> cleared = forest_edges(mesh, nullptr, nullptr);
  CobdResult red = reduce_coboundary(mesh, cleared);
  PersistenceDiagram dg;
  for (auto [e, t] : red.pairs)
    append_dot(dg, 1, mesh.edges[e].w, mesh.tris[t].w, keep_zero_persistence);
  for (uint32_t e : red.essential_edges) dg.dots.push_back({1, mesh.edges[e].w, kInfDeath});
  return dg;
}

PersistenceDiagram naive_reduce(const Filtration& F, bool keep_zero_persistence) {
  const size_t N = F.simplices.size();
  Mesh mesh = index_filtration(F);

  // Facet positions per simplex; vertices sit at positions 0..m-1 in id order.
  std::vector<std::vector<uint32_t>> column(N);
  for (uint32_t p = 0; p < N; ++p) {
    const Simplex& s = F.simplices[p];
    if (s.dim() == 1) {
      column[p] = {static_cast<uint32_t>(s.v[0]), static_cast<uint32_t>(s.v[1])};
    } else if (s.dim() == 2) {
      column[p] = {mesh.edges[mesh.edge_of(s.v[0], s.v[1])].pos,
                   mesh.edges[mesh.edge_of(s.v[0], s.v[2])].pos,
                   mesh.edges[mesh.edge_of(s.v[1], s.v[2])].pos};
    }
    std::sort(column[p].begin(), column[p].end());
  }

  auto add_into = [](std::vector<uint32_t>& dst, const std::vector<uint32_t>& src) {
    std::vector<uint32_t> out;
    out.reserve(dst.size() + src.size());
    std::set_symmetric_difference(dst.begin(), dst.end(), src.begin(), src.end(),
                                  std::back_inserter(out));
    dst = std::move(out);
  };

  std::vector<int64_t> pivot_owner(N, -1);
  std::vector<char> is_death(N, 0);
  PersistenceDiagram dg;
  for (uint32_t p = 0; p < N; ++p) {
    auto& col = column[p];
    while (!col.empty()) {
      uint32_t pivot = col.back();
      int64_t owner = pivot_owner[pivot];
      if (owner < 0) {
        pivot_owner[pivot] = p;
        is_death[p] = 1;
        const Simplex& bs = F.simplices[pivot];
        const Simplex& ds = F.simplices[p];
        append_dot(dg, bs.dim(), bs.filter, ds.filter, keep_zero_persistence);
        break;
      }
      add_into(col, column[static_cast<uint32_t>(owner)]);
    }
  }
  // Essential classes: never paired as birth, not a death column themselves.
  for (uint32_t p = 0; p < N; ++p) {
    const Simplex& s = F.simplices[p];
    if (s.dim() <= 1 && pivot_owner[p] < 0 && !is_death[p])
      dg.dots.push_back({s.dim(), s.filter, kInfDeath});
  }
  return dg;
}

std::vector<CycleRepresentative> extract_cycles(const Filtration& F, const CycleSelection& sel) {
  Mesh mesh = index_filtration(F);
  std::vector<char> cleared = forest_edges(mesh, nullptr, nullptr);
  CobdResult phase1 = reduce_coboundary(mesh, cleared);

  double eps_star = -kInfDeath;
  for (auto [e, t] : phase1.pairs) eps_star = std::max(eps_star, mesh.tris[t].w);
  if (phase1.pairs.empty()) return {};

  BdResult phase2 = reduce_pruned_boundary(mesh, eps_star + 1e-9);

  std::vector<size_t> order;
  for (size_t k = 0; k < phase2.pairs.size(); ++k) {
    auto [e, t] = phase2.pairs[k];
    if (mesh.tris[t].w > mesh.edges[e].w) order.push_back(k);
  }
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    auto [ea, ta] = phase2.pairs[a];
    auto [eb, tb] = phase2.pairs[b];
    double pa = mesh.tris[ta].w - mesh.edges[ea].w;
    double pb = mesh.tris[tb].w - mesh.edges[eb].w;
    if (pa != pb) return pa > pb;
    if (mesh.edges[ea].w != mesh.edges[eb].w) return mesh.edges[ea].w < mesh.edges[eb].w;
    return ea < eb;
  });

  std::vector<CycleRepresentative> out;
  for (size_t k : order) {
    auto [e, t] = phase2.pairs[k];
    double birth = mesh.edges[e].w, death = mesh.tris[t].w;
    if (sel.by_count) {
      if (out.size() >= sel.k) break;
    } else if (death > sel.cutoff) {
      continue;
    }
    CycleRepresentative cyc;
    cyc.dot = {1, birth, death};
    std::vector<uint32_t> ranks = phase2.columns[k];
    std::sort(ranks.begin(), ranks.end());
    for (uint32_t r : ranks) {
      const EdgeRec& er = mesh.edges[r];
      cyc.edges.push_back({er.i, er.j, er.w, F.layer_of.empty() ? 0 : F.layer_of[er.i],
                           F.layer_of.empty() ? 0 : F.layer_of[er.j]});
    }
    out.push_back(std::move(cyc));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bottleneck distance.

namespace {

struct FlatDot {
  double b, d;
  double radius() const { return (d - b) / 2.0; }  // distance to the diagonal
};

double linf(const FlatDot& x, const FlatDot& y) {
  return std::max(std::abs(x.b - y.b), std::abs(x.d - y.d));
}

// Kuhn augmenting-path matching on the doubled diagram graph: left = A dots
// plus |B| diagonal slots, right = B dots plus |A| diagonal slots. Any
// diagonal-diagonal pairing is free, so a perfect matching exists exactly when
// the bottleneck cost is <= c.
bool feasible(const std::vector<FlatDot>& A, const std::vector<FlatDot>& B, double c) {
  const size_t nl = A.size() + B.size();
  const size_t nr = B.size() + A.size();
  auto allowed = [&](size_t l, size_t r) {
    bool l_dot = l < A.size(), r_dot = r < B.size();
    if (l_dot && r_dot) return linf(A[l], B[r]) <= c;
    if (l_dot) return A[l].radius() <= c;
    if (r_dot) return B[r].radius() <= c;
    return true;
  };
  std::vector<int64_t> match_r(nr, -1);
  std::vector<char> seen(nr);
  std::function<bool(size_t)> try_augment = [&](size_t l) -> bool {
    for (size_t r = 0; r < nr; ++r) {
      if (seen[r] || !allowed(l, r)) continue;
      seen[r] = 1;
      if (match_r[r] < 0 || try_augment(static_cast<size_t>(match_r[r]))) {
        match_r[r] = static_cast<int64_t>(l);
        return true;
      }
    }
    return false;
  };
  for (size_t l = 0; l < nl; ++l) {
    std::fill(seen.begin(), seen.end(), 0);
    if (!try_augment(l)) return false;
  }
  return true;
}

}  // namespace

double bottleneck_distance(const PersistenceDiagram& A, const PersistenceDiagram& B, int dim) {
  std::vector<FlatDot> fa, fb;
  std::vector<double> ia, ib;  // essential births
  for (const Dot& d : A.dots) {
    if (d.dim != dim) continue;
    if (d.essential()) ia.push_back(d.birth);
    else fa.push_back({d.birth, d.death});
  }
  for (const Dot& d : B.dots) {
    if (d.dim != dim) continue;
    if (d.essential()) ib.push_back(d.birth);
    else fb.push_back({d.birth, d.death});
  }

  if (ia.size() != ib.size()) return kInfDeath;
  double essential_part = 0.0;
  std::sort(ia.begin(), ia.end());
  std::sort(ib.begin(), ib.end());
  for (size_t k = 0; k < ia.size(); ++k)
    essential_part = std::max(essential_part, std::abs(ia[k] - ib[k]));

  if (fa.empty() && fb.empty()) return essential_part;

  std::vector<double> cand{0.0};
  for (const FlatDot& x : fa) cand.push_back(x.radius());
  for (const FlatDot& y : fb) cand.push_back(y.radius());
  for (const FlatDot& x : fa)
    for (const FlatDot& y : fb) cand.push_back(linf(x, y));
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  // Smallest feasible candidate; ties resolve to the smaller value by search.
  size_t lo = 0, hi = cand.size() - 1;
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    if (feasible(fa, fb, cand[mid])) hi = mid;
    else lo = mid + 1;
  }
  return std::max(essential_part, cand[lo]);
}

StabilityCheck diagram_stability_check(const DissimilarityMatrix& W1,
                                       const DissimilarityMatrix& W2, double cutoff) {
  if (W1.m != W2.m) fail_data("diagram_stability_check: dimension mismatch");
  StabilityCheck res;
  for (size_t k = 0; k < W1.w.size(); ++k)
    res.winf = std::max(res.winf, std::abs(W1.w[k] - W2.w[k]));
  PersistenceDiagram a = one_dim_diagram(build_filtration(W1, cutoff));
  PersistenceDiagram b = one_dim_diagram(build_filtration(W2, cutoff));
  res.db = bottleneck_distance(a, b, 1);
  return res;
}

BenchResult bench_reduction(const DissimilarityMatrix& W) {
  Filtration F = build_filtration(W, 2.0);
  Mesh mesh = index_filtration(F);
  std::vector<char> cleared = forest_edges(mesh, nullptr, nullptr);

  BenchResult res;
  res.num_simplices = F.simplices.size();

  CobdResult phase1 = reduce_coboundary(mesh, cleared);
  res.cobd_seconds = phase1.seconds;
  double eps_star = 0.0;
  for (auto [e, t] : phase1.pairs) {
    if (mesh.tris[t].w > mesh.edges[e].w) ++res.finite_pairs;
    eps_star = std::max(eps_star, mesh.tris[t].w);
  }
  res.phase2_cutoff = eps_star;

  BdResult phase2 = reduce_pruned_boundary(mesh, eps_star + 1e-9);
  res.bd_seconds = phase2.seconds;
  res.pruned_nonzero = phase2.nonzero;
  return res;
}

}  // namespace topo
