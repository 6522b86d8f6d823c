#include "topo/netlab.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "topo/rng.hpp"

namespace topo {

namespace {

double apply_act(Activation act, double z) {
  switch (act) {
    case Activation::indicator: return z >= 0.0 ? 1.0 : 0.0;
    case Activation::relu: return z > 0.0 ? z : 0.0;
    case Activation::identity: return z;
  }
  return z;
}

int argmax_low_tie(const Vec& v) {
  int best = 0;
  for (size_t k = 1; k < v.size(); ++k)
    if (v[k] > v[best]) best = static_cast<int>(k);
  return best;
}

}  // namespace

size_t NetworkSpec::hidden_count() const {
  size_t n = 0;
  for (size_t l = 0; l < hidden_layer_count(); ++l) n += layers[l].W.rows;
  return n;
}

std::vector<int> NetworkSpec::hidden_layer_of() const {
  std::vector<int> out;
  for (size_t l = 0; l < hidden_layer_count(); ++l)
    out.insert(out.end(), layers[l].W.rows, static_cast<int>(l));
  return out;
}

EvalResult eval_network(const NetworkSpec& net, const Vec& x) {
  if (net.layers.empty()) fail_data("eval_network: network has no layers");
  for (double v : x)
    if (!std::isfinite(v)) fail_data("eval_network: non-finite input coordinate");

  EvalResult res;
  res.activations.reserve(net.hidden_count());
  Vec cur = x;
  for (size_t l = 0; l < net.layers.size(); ++l) {
    const Layer& lay = net.layers[l];
    if (lay.W.cols != cur.size())
      fail_data("eval_network: layer " + std::to_string(l) + " expects input of size " +
                std::to_string(lay.W.cols) + ", got " + std::to_string(cur.size()));
    if (lay.b.size() != lay.W.rows)
      fail_data("eval_network: layer " + std::to_string(l) + " bias size mismatch");
    Vec next(lay.W.rows);
    for (size_t r = 0; r < lay.W.rows; ++r) {
      double z = lay.b[r];
      for (size_t c = 0; c < lay.W.cols; ++c) z += lay.W(r, c) * cur[c];
      if (!std::isfinite(z))
        fail_data("eval_network: layer " + std::to_string(l) + " produced a non-finite value");
      next[r] = apply_act(lay.act, z);
    }
    cur = std::move(next);
    if (l < net.hidden_layer_count())
      res.activations.insert(res.activations.end(), cur.begin(), cur.end());
  }
  res.prediction = argmax_low_tie(cur);
  return res;
}

std::pair<NetworkSpec, NetworkSpec> build_theorem_networks(int input_dim) {
  if (input_dim < 2) fail_data("build_theorem_networks: input dimension must be >= 2");
  const size_t d = static_cast<size_t>(input_dim);

  // Shared first layer: indicator hyperplanes. f1 stacks (e1, -e1, e1, -e1);
  // f2 stacks (e1, -e1, e2, -e2). Rows are zero-padded beyond coordinate 2.
  auto hyperplanes = [d](std::vector<std::pair<int, double>> rows) {
    Mat W(rows.size(), d, 0.0);
    for (size_t r = 0; r < rows.size(); ++r) W(r, rows[r].first) = rows[r].second;
    return W;
  };

  NetworkSpec f1;
  {
    Layer u;
    u.W = hyperplanes({{0, 1.0}, {0, -1.0}, {0, 1.0}, {0, -1.0}});
    u.b = Vec(4, 0.0);
    u.act = Activation::indicator;
    Layer v;
    v.W = Mat(4, 4, 0.0);
    for (int k = 0; k < 4; ++k) v.W(k, k) = 1.0;  // identity: q copies p
    v.b = Vec(4, -1.0);
    v.act = Activation::indicator;
    Layer w;  // readout realizing 1{x.e1 < 0} under argmax with low-index ties
    w.W = Mat(2, 4, 0.0);
    w.W(0, 0) = 1.0;  // q1 = 1{x1 >= 0} votes class 0
    w.W(1, 1) = 1.0;  // q2 = 1{x1 <= 0} votes class 1
    w.W(0, 2) = 1.0;
    w.W(1, 3) = 1.0;
    w.b = Vec(2, 0.0);
    w.act = Activation::identity;
    f1.layers = {u, v, w};
    f1.output_rule = OutputRule::argmax;
  }

  NetworkSpec f2;
  {
    Layer u;
    u.W = hyperplanes({{0, 1.0}, {0, -1.0}, {1, 1.0}, {1, -1.0}});
    u.b = Vec(4, 0.0);
    u.act = Activation::indicator;
    Layer v;  // pairwise AND of half-plane indicators: q_k = quadrant indicator
    v.W = Mat(4, 4, 0.0);
    // q1 = p1 AND p3 (quadrant I), q2 = p1 AND p4 (IV),
    // q3 = p2 AND p3 (II),         q4 = p2 AND p4 (III)
    v.W(0, 0) = 1.0; v.W(0, 2) = 1.0;
    v.W(1, 0) = 1.0; v.W(1, 3) = 1.0;
    v.W(2, 1) = 1.0; v.W(2, 2) = 1.0;
    v.W(3, 1) = 1.0; v.W(3, 3) = 1.0;
    v.b = Vec(4, -2.0);
    v.act = Activation::indicator;
    Layer w;  // readout realizing 1{(x.e1)(x.e2) >= 0}: quadrants I, III vote 1
    w.W = Mat(2, 4, 0.0);
    w.W(1, 0) = 1.0;  // I
    w.W(0, 1) = 1.0;  // IV
    w.W(0, 2) = 1.0;  // II
    w.W(1, 3) = 1.0;  // III
    w.b = Vec(2, 0.0);
    w.act = Activation::identity;
    f2.layers = {u, v, w};
    f2.output_rule = OutputRule::argmax;
  }
  return {f1, f2};
}

Vec gaussian_mean(const GaussianPairConfig& cfg, int j) {
  if (j < 1 || j > 4) fail_data("gaussian_mean: cluster index out of range");
  double c = cfg.sigma * std::sqrt(std::log(1.0 / cfg.eta));
  Vec mu(cfg.input_dim, 0.0);
  mu[0] = (j == 2 || j == 4) ? 2.0 * c : -2.0 * c;  // e1 component
  mu[1] = (j == 3 || j == 4) ? 2.0 * c : -2.0 * c;  // e2 component
  return mu;
}

Dataset sample_gaussian_pair(const GaussianPairConfig& cfg) {
  if (!(cfg.sigma > 0.0)) fail_data("sample_gaussian_pair: sigma must be > 0");
  if (!(cfg.eta > 0.0 && cfg.eta < 1.0)) fail_data("sample_gaussian_pair: eta must be in (0,1)");
  if (cfg.input_dim < 2) fail_data("sample_gaussian_pair: input dimension must be >= 2");
  if (cfg.sample_count < 1) fail_data("sample_gaussian_pair: sample count must be >= 1");

  Rng rng(cfg.seed);
  Dataset out;
  out.reserve(cfg.sample_count);
  for (size_t s = 0; s < cfg.sample_count; ++s) {
    int j = cfg.which == GaussianVariant::d1 ? 1 + static_cast<int>(rng.index(2))
                                             : 1 + static_cast<int>(rng.index(4));
    Vec mu = gaussian_mean(cfg, j);
    Sample smp;
    smp.x.resize(cfg.input_dim);
    for (int k = 0; k < cfg.input_dim; ++k) smp.x[k] = mu[k] + cfg.sigma * rng.normal();
    smp.y = cfg.which == GaussianVariant::d3 ? ((j == 1 || j == 4) ? 1 : 0) : j % 2;
    out.push_back(std::move(smp));
  }
  return out;
}

Vec overlay_trigger(const Vec& x, const TriggerSpec& trig) {
  if (trig.mask.size() != x.size() || trig.pattern.size() != x.size())
    fail_data("overlay_trigger: mask/pattern dimension mismatch");
  Vec out(x.size());
  for (size_t k = 0; k < x.size(); ++k)
    out[k] = (1.0 - trig.mask[k]) * x[k] + trig.mask[k] * trig.pattern[k];
  return out;
}

std::vector<Vec> perturb_pixelwise(const std::vector<Vec>& X, const PerturbConfig& cfg) {
  if (X.empty()) return {};
  if (cfg.ranges.size() != X.size())
    fail_data("perturb_pixelwise: need one range pair per image");
  if (cfg.patch_size < 1) fail_data("perturb_pixelwise: patch size must be >= 1");

  Rng rng(cfg.seed);
  std::vector<Vec> out;
  out.reserve(X.size() * cfg.trials_per_image);
  for (size_t img = 0; img < X.size(); ++img) {
    const Vec& x = X[img];
    const auto& [lo, hi] = cfg.ranges[img];
    size_t d = x.size();
    if (lo.size() != d || hi.size() != d)
      fail_data("perturb_pixelwise: range dimension mismatch at image " + std::to_string(img));
    for (size_t k = 0; k < d; ++k)
      if (lo[k] > hi[k]) fail_data("perturb_pixelwise: lower > upper in range");
    if (static_cast<size_t>(cfg.patch_size) > d)
      fail_data("perturb_pixelwise: patch size exceeds image dimension");
    size_t starts = d - cfg.patch_size + 1;  // contiguous patch start positions
    for (size_t t = 0; t < cfg.trials_per_image; ++t) {
      Vec copy = x;
      size_t s = rng.index(starts);
      for (size_t k = s; k < s + static_cast<size_t>(cfg.patch_size); ++k)
        copy[k] = rng.uniform(lo[k], hi[k]);
      out.push_back(std::move(copy));
    }
  }
  return out;
}

NetworkSpec train_mlp_classifier(const Dataset& data, const MlpTrainConfig& cfg) {
  if (data.size() < 2) fail_data("train_mlp_classifier: need at least 2 samples");
  if (cfg.classes < 2) fail_data("train_mlp_classifier: need at least 2 classes");
  const size_t n = data.size();
  const size_t d = data[0].x.size();
  for (const Sample& s : data) {
    if (s.x.size() != d) fail_data("train_mlp_classifier: ragged sample dimensions");
    if (s.y < 0 || s.y >= cfg.classes) fail_data("train_mlp_classifier: label out of range");
  }

  std::vector<size_t> widths{d};
  for (int h : cfg.hidden_sizes) {
    if (h < 1) fail_data("train_mlp_classifier: hidden size must be >= 1");
    widths.push_back(static_cast<size_t>(h));
  }
  widths.push_back(static_cast<size_t>(cfg.classes));

  Rng rng(cfg.seed);
  NetworkSpec net;
  net.output_rule = OutputRule::argmax;
  for (size_t l = 0; l + 1 < widths.size(); ++l) {
    Layer lay;
    lay.W = Mat(widths[l + 1], widths[l]);
    double r = std::sqrt(6.0 / static_cast<double>(widths[l] + widths[l + 1]));
    for (double& w : lay.W.a) w = rng.uniform(-r, r);
    lay.b = Vec(widths[l + 1], 0.0);
    lay.act = l + 2 < widths.size() ? Activation::relu : Activation::identity;
    net.layers.push_back(std::move(lay));
  }

  const size_t L = net.layers.size();
  std::vector<Mat> grad_w(L);
  std::vector<Vec> grad_b(L);
  std::vector<Vec> act(L + 1);  // per-sample forward values, act[0] = input
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (size_t l = 0; l < L; ++l) {
      grad_w[l] = Mat(net.layers[l].W.rows, net.layers[l].W.cols);
      grad_b[l] = Vec(net.layers[l].b.size(), 0.0);
    }
    for (const Sample& smp : data) {
      act[0] = smp.x;
      for (size_t l = 0; l < L; ++l) {
        const Layer& lay = net.layers[l];
        act[l + 1].assign(lay.W.rows, 0.0);
        for (size_t r = 0; r < lay.W.rows; ++r) {
          double z = lay.b[r];
          for (size_t c = 0; c < lay.W.cols; ++c) z += lay.W(r, c) * act[l][c];
          act[l + 1][r] = apply_act(lay.act, z);
        }
      }
      // Softmax cross-entropy gradient at the readout.
      Vec& logits = act[L];
      double mx = *std::max_element(logits.begin(), logits.end());
      double zsum = 0.0;
      Vec p(logits.size());
      for (size_t k = 0; k < logits.size(); ++k) zsum += (p[k] = std::exp(logits[k] - mx));
      Vec delta(logits.size());
      for (size_t k = 0; k < logits.size(); ++k)
        delta[k] = p[k] / zsum - (static_cast<int>(k) == smp.y ? 1.0 : 0.0);
      for (size_t l = L; l-- > 0;) {
        const Layer& lay = net.layers[l];
        for (size_t r = 0; r < lay.W.rows; ++r) {
          grad_b[l][r] += delta[r];
          for (size_t c = 0; c < lay.W.cols; ++c) grad_w[l](r, c) += delta[r] * act[l][c];
        }
        if (l == 0) break;
        Vec prev(lay.W.cols, 0.0);
        for (size_t c = 0; c < lay.W.cols; ++c) {
          double g = 0.0;
          for (size_t r = 0; r < lay.W.rows; ++r) g += lay.W(r, c) * delta[r];
          // relu derivative read off the stored activation (> 0 iff pass-through)
          prev[c] = act[l][c] > 0.0 ? g : 0.0;
        }
        delta = std::move(prev);
      }
    }
    double step = cfg.learning_rate / static_cast<double>(n);
    for (size_t l = 0; l < L; ++l) {
      for (size_t k = 0; k < net.layers[l].W.a.size(); ++k) {
        double g = grad_w[l].a[k] + 2.0 * cfg.weight_decay * n * net.layers[l].W.a[k];
        net.layers[l].W.a[k] -= step * g;
      }
      for (size_t k = 0; k < net.layers[l].b.size(); ++k)
        net.layers[l].b[k] -= step * grad_b[l][k];
    }
  }
  return net;
}

}  // namespace topo
