#include "topo/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

namespace topo {

namespace {

std::string fmt(double v) { return format_real(v); }

std::ifstream open_in(const std::string& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) fail_data("cannot open for reading: " + path);
  return in;
}

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) fail_data("cannot open for writing: " + path);
  return out;
}

void finish_write(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) fail_data("write failed: " + path);
}

// All text lines flow through here so CRLF input behaves.
bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  for (size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == sep) {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

double parse_real(const std::string& tok, const std::string& where) {
  const char* s = tok.c_str();
  char* end = nullptr;
  double v = std::strtod(s, &end);
  if (end == s || *end != '\0') fail_data(where + ": not a number: '" + tok + "'");
  return v;
}

long parse_int(const std::string& tok, const std::string& where) {
  const char* s = tok.c_str();
  char* end = nullptr;
  long v = std::strtol(s, &end, 10);
  if (end == s || *end != '\0') fail_data(where + ": not an integer: '" + tok + "'");
  return v;
}

std::string at_line(const std::string& path, size_t lineno) {
  return path + ":" + std::to_string(lineno);
}

// Key=value field of a space-separated header line.
std::string field_value(const std::string& tok, const std::string& key, const std::string& where) {
  std::string prefix = key + "=";
  if (tok.compare(0, prefix.size(), prefix) != 0)
    fail_data(where + ": expected " + key + "=..., got '" + tok + "'");
  return tok.substr(prefix.size());
}

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::indicator: return "indicator";
    case Activation::relu: return "relu";
    case Activation::identity: return "identity";
  }
  return "identity";
}

Activation parse_activation(const std::string& name, const std::string& where) {
  if (name == "indicator") return Activation::indicator;
  if (name == "relu") return Activation::relu;
  if (name == "identity") return Activation::identity;
  fail_data(where + ": unknown activation '" + name + "'");
}

struct BinWriter {
  std::ofstream out;
  std::string path;

  explicit BinWriter(const std::string& p) : out(open_out(p, true)), path(p) {}
  void bytes(const void* p, size_t n) { out.write(static_cast<const char*>(p), n); }
  void u32(uint32_t v) { bytes(&v, sizeof v); }
  void u64(uint64_t v) { bytes(&v, sizeof v); }
  void f64(double v) { bytes(&v, sizeof v); }
  void done() { finish_write(out, path); }
};

struct BinReader {
  std::ifstream in;
  std::string path;

  explicit BinReader(const std::string& p) : in(open_in(p, true)), path(p) {}
  void bytes(void* p, size_t n) {
    in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<size_t>(in.gcount()) != n) fail_data("truncated file: " + path);
  }
  uint32_t u32() {
    uint32_t v;
    bytes(&v, sizeof v);
    return v;
  }
  uint64_t u64() {
    uint64_t v;
    bytes(&v, sizeof v);
    return v;
  }
  double f64() {
    double v;
    bytes(&v, sizeof v);
    return v;
  }
};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::string format_real(double v) {
  if (v == kInfDeath) return "inf";
  if (v == -kInfDeath) return "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void save_network(const NetworkSpec& net, const std::string& path) {
  if (net.layers.empty()) fail_data("save_network: empty network");
  std::ofstream out = open_out(path);
  out << "NET v1 layers=" << net.layers.size() << " input=" << net.input_dim() << "\n";
  for (const Layer& layer : net.layers) {
    out << "LAYER " << layer.W.rows << " " << layer.W.cols
        << " activation=" << activation_name(layer.act) << "\n";
    for (size_t r = 0; r < layer.W.rows; ++r) {
      for (size_t c = 0; c < layer.W.cols; ++c) out << (c ? " " : "") << fmt(layer.W(r, c));
      out << "\n";
    }
    for (size_t r = 0; r < layer.b.size(); ++r) out << (r ? " " : "") << fmt(layer.b[r]);
    out << "\n";
  }
  out << "OUTPUT " << (net.output_rule == OutputRule::argmax ? "argmax" : "identity") << "\n";
  finish_write(out, path);
}

NetworkSpec load_network(const std::string& path) {
  std::ifstream in = open_in(path);
  size_t lineno = 0;
  std::string line;
  auto need_line = [&](const char* what) {
    while (next_line(in, line)) {
      ++lineno;
      if (!line.empty()) return;
    }
    fail_data(path + ": unexpected end of file, expected " + what);
  };

  need_line("NET header");
  std::vector<std::string> head = split_ws(line);
  if (head.size() != 4 || head[0] != "NET" || head[1] != "v1")
    fail_data(at_line(path, lineno) + ": expected 'NET v1 layers=<L> input=<d>'");
  long n_layers = parse_int(field_value(head[2], "layers", at_line(path, lineno)),
                            at_line(path, lineno));
  long input = parse_int(field_value(head[3], "input", at_line(path, lineno)),
                         at_line(path, lineno));
  if (n_layers < 1 || input < 1) fail_data(at_line(path, lineno) + ": bad layer/input count");

  NetworkSpec net;
  long prev_rows = input;
  for (long l = 0; l < n_layers; ++l) {
    need_line("LAYER header");
    std::vector<std::string> tok = split_ws(line);
    if (tok.size() != 4 || tok[0] != "LAYER")
      fail_data(at_line(path, lineno) + ": expected 'LAYER rows cols activation=...'");
    long rows = parse_int(tok[1], at_line(path, lineno));
    long cols = parse_int(tok[2], at_line(path, lineno));
    if (rows < 1 || cols < 1) fail_data(at_line(path, lineno) + ": bad layer shape");
    if (cols != prev_rows)
      fail_data(at_line(path, lineno) + ": layer " + std::to_string(l) + " expects " +
                std::to_string(prev_rows) + " inputs, header says " + std::to_string(cols));
    Layer layer;
    layer.act = parse_activation(field_value(tok[3], "activation", at_line(path, lineno)),
                                 at_line(path, lineno));
    layer.W = Mat(static_cast<size_t>(rows), static_cast<size_t>(cols));
    for (long r = 0; r < rows; ++r) {
      need_line("weight row");
      std::vector<std::string> w = split_ws(line);
      if (static_cast<long>(w.size()) != cols)
        fail_data(at_line(path, lineno) + ": expected " + std::to_string(cols) + " weights");
      for (long c = 0; c < cols; ++c) {
        double v = parse_real(w[static_cast<size_t>(c)], at_line(path, lineno));
        if (!std::isfinite(v)) fail_data(at_line(path, lineno) + ": non-finite weight");
        layer.W(static_cast<size_t>(r), static_cast<size_t>(c)) = v;
      }
    }
    need_line("bias row");
    std::vector<std::string> b = split_ws(line);
    if (static_cast<long>(b.size()) != rows)
      fail_data(at_line(path, lineno) + ": expected " + std::to_string(rows) + " biases");
    layer.b.resize(static_cast<size_t>(rows));
    for (long r = 0; r < rows; ++r) {
      double v = parse_real(b[static_cast<size_t>(r)], at_line(path, lineno));
      if (!std::isfinite(v)) fail_data(at_line(path, lineno) + ": non-finite bias");
      layer.b[static_cast<size_t>(r)] = v;
    }
    net.layers.push_back(std::move(layer));
    prev_rows = rows;
  }

  need_line("OUTPUT line");
  std::vector<std::string> tail = split_ws(line);
  if (tail.size() != 2 || tail[0] != "OUTPUT" || (tail[1] != "argmax" && tail[1] != "identity"))
    fail_data(at_line(path, lineno) + ": expected 'OUTPUT argmax' or 'OUTPUT identity'");
  net.output_rule = tail[1] == "argmax" ? OutputRule::argmax : OutputRule::identity;
  return net;
}

void save_dataset(const Dataset& data, const std::string& path) {
  if (data.empty()) fail_data("save_dataset: empty dataset");
  size_t d = data.front().x.size();
  std::ofstream out = open_out(path);
  for (size_t c = 0; c < d; ++c) out << "x_" << (c + 1) << ",";
  out << "y\n";
  for (const Sample& s : data) {
    if (s.x.size() != d) fail_data("save_dataset: ragged rows");
    for (size_t c = 0; c < d; ++c) out << fmt(s.x[c]) << ",";
    out << s.y << "\n";
  }
  finish_write(out, path);
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  size_t lineno = 0;
  if (!next_line(in, line)) fail_data(path + ": empty file");
  ++lineno;
  std::vector<std::string> head = split(line, ',');
  if (head.size() < 2 || head.back() != "y")
    fail_data(at_line(path, lineno) + ": expected header x_1..x_d,y");
  size_t d = head.size() - 1;

  Dataset data;
  while (next_line(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> tok = split(line, ',');
    if (tok.size() != d + 1)
      fail_data(at_line(path, lineno) + ": expected " + std::to_string(d + 1) + " columns");
    Sample s;
    s.x.resize(d);
    for (size_t c = 0; c < d; ++c) s.x[c] = parse_real(tok[c], at_line(path, lineno));
    s.y = static_cast<int>(parse_int(tok[d], at_line(path, lineno)));
    data.push_back(std::move(s));
  }
  if (data.empty()) fail_data(path + ": no samples");
  return data;
}

void save_points(const std::vector<Vec>& X, const std::string& path) {
  if (X.empty()) fail_data("save_points: empty point set");
  size_t d = X.front().size();
  std::ofstream out = open_out(path);
  for (size_t c = 0; c < d; ++c) out << (c ? "," : "") << "x_" << (c + 1);
  out << "\n";
  for (const Vec& x : X) {
    if (x.size() != d) fail_data("save_points: ragged rows");
    for (size_t c = 0; c < d; ++c) out << (c ? "," : "") << fmt(x[c]);
    out << "\n";
  }
  finish_write(out, path);
}

std::vector<Vec> load_points(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  size_t lineno = 0;
  if (!next_line(in, line)) fail_data(path + ": empty file");
  ++lineno;
  std::vector<std::string> head = split(line, ',');
  bool has_y = head.back() == "y";
  size_t d = head.size() - (has_y ? 1 : 0);
  if (d < 1) fail_data(at_line(path, lineno) + ": no coordinate columns");

  std::vector<Vec> X;
  while (next_line(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> tok = split(line, ',');
    if (tok.size() != head.size())
      fail_data(at_line(path, lineno) + ": expected " + std::to_string(head.size()) + " columns");
    Vec x(d);
    for (size_t c = 0; c < d; ++c) x[c] = parse_real(tok[c], at_line(path, lineno));
    X.push_back(std::move(x));
  }
  if (X.empty()) fail_data(path + ": no points");
  return X;
}

namespace {

void save_trace_binary(const ActivationTrace& trace, const std::string& path) {
  BinWriter w(path);
  w.bytes("ATRC", 4);
  w.u32(1);
  w.u64(trace.n());
  w.u64(trace.m());
  for (int layer : trace.layer_of) w.u32(static_cast<uint32_t>(layer));
  for (double v : trace.values) w.f64(v);
  w.done();
}

ActivationTrace load_trace_binary(const std::string& path) {
  BinReader r(path);
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, "ATRC", 4) != 0) fail_data(path + ": not an ATRC file");
  uint32_t version = r.u32();
  if (version != 1) fail_data(path + ": unsupported ATRC version " + std::to_string(version));
  uint64_t n = r.u64(), m = r.u64();
  if (m == 0 || n * m > (1ull << 30)) fail_data(path + ": implausible trace dimensions");
  ActivationTrace trace;
  trace.layer_of.resize(m);
  for (uint64_t j = 0; j < m; ++j) trace.layer_of[j] = static_cast<int>(r.u32());
  trace.neuron_ids.resize(m);
  std::iota(trace.neuron_ids.begin(), trace.neuron_ids.end(), 0);
  trace.values.resize(n * m);
  for (uint64_t i = 0; i < n * m; ++i) trace.values[i] = r.f64();
  return trace;
}

void save_trace_csv(const ActivationTrace& trace, const std::string& path) {
  std::ofstream out = open_out(path);
  for (size_t j = 0; j < trace.m(); ++j) out << (j ? "," : "") << trace.neuron_ids[j];
  out << "\n";
  for (size_t j = 0; j < trace.m(); ++j) out << (j ? "," : "") << trace.layer_of[j];
  out << "\n";
  for (size_t i = 0; i < trace.n(); ++i) {
    for (size_t j = 0; j < trace.m(); ++j) out << (j ? "," : "") << fmt(trace.at(i, j));
    out << "\n";
  }
  finish_write(out, path);
}

ActivationTrace load_trace_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  size_t lineno = 0;
  if (!next_line(in, line)) fail_data(path + ": empty file");
  ++lineno;
  std::vector<std::string> head = split(line, ',');
  size_t m = head.size();
  ActivationTrace trace;
  trace.neuron_ids.resize(m);
  for (size_t j = 0; j < m; ++j)
    trace.neuron_ids[j] = static_cast<int>(parse_int(head[j], at_line(path, lineno)));

  if (!next_line(in, line)) fail_data(path + ": missing layer row");
  ++lineno;
  std::vector<std::string> layers = split(line, ',');
  if (layers.size() != m) fail_data(at_line(path, lineno) + ": layer row width mismatch");
  trace.layer_of.resize(m);
  for (size_t j = 0; j < m; ++j)
    trace.layer_of[j] = static_cast<int>(parse_int(layers[j], at_line(path, lineno)));

  while (next_line(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> tok = split(line, ',');
    if (tok.size() != m) fail_data(at_line(path, lineno) + ": value row width mismatch");
    for (size_t j = 0; j < m; ++j)
      trace.values.push_back(parse_real(tok[j], at_line(path, lineno)));
  }
  return trace;
}

}  // namespace

void save_trace(const ActivationTrace& trace, const std::string& path) {
  if (ends_with(path, ".atrc"))
    save_trace_binary(trace, path);
  else
    save_trace_csv(trace, path);
}

ActivationTrace load_trace(const std::string& path) {
  return ends_with(path, ".atrc") ? load_trace_binary(path) : load_trace_csv(path);
}

void save_corr(const CorrelationMatrix& M, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "kernel," << (M.kernel == Kernel::pearson ? "pearson" : "cosine") << "\n";
  out << "layers";
  for (int layer : M.layer_of) out << "," << layer;
  out << "\n";
  for (size_t i = 0; i < M.m; ++i) {
    for (size_t j = 0; j < M.m; ++j) out << (j ? "," : "") << fmt(M.at(i, j));
    out << "\n";
  }
  finish_write(out, path);
}

CorrelationMatrix load_corr(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  size_t lineno = 0;

  if (!next_line(in, line)) fail_data(path + ": empty file");
  ++lineno;
  std::vector<std::string> k = split(line, ',');
  if (k.size() != 2 || k[0] != "kernel" || (k[1] != "pearson" && k[1] != "cosine"))
    fail_data(at_line(path, lineno) + ": expected 'kernel,pearson' or 'kernel,cosine'");
  CorrelationMatrix M;
  M.kernel = k[1] == "pearson" ? Kernel::pearson : Kernel::cosine;

  if (!next_line(in, line)) fail_data(path + ": missing layers line");
  ++lineno;
  std::vector<std::string> lay = split(line, ',');
  if (lay.empty() || lay[0] != "layers") fail_data(at_line(path, lineno) + ": expected 'layers,...'");
  for (size_t j = 1; j < lay.size(); ++j)
    M.layer_of.push_back(static_cast<int>(parse_int(lay[j], at_line(path, lineno))));
  size_t m = M.layer_of.size();
  if (m < 2) fail_data(at_line(path, lineno) + ": need at least 2 neurons");

  M.m = m;
  M.rho.reserve(m * m);
  for (size_t i = 0; i < m; ++i) {
    if (!next_line(in, line)) fail_data(path + ": matrix row " + std::to_string(i) + " missing");
    ++lineno;
    std::vector<std::string> tok = split(line, ',');
    if (tok.size() != m) fail_data(at_line(path, lineno) + ": expected " + std::to_string(m) + " entries");
    for (size_t j = 0; j < m; ++j) {
      double v = parse_real(tok[j], at_line(path, lineno));
      if (!std::isfinite(v) || v < -1.0 - 1e-9 || v > 1.0 + 1e-9)
        fail_data(at_line(path, lineno) + ": correlation out of [-1, 1]");
      M.rho.push_back(std::min(1.0, std::max(-1.0, v)));
    }
  }
  for (size_t i = 0; i < m; ++i) {
    if (std::abs(M.at(i, i) - 1.0) > 1e-9) fail_data(path + ": diagonal entry differs from 1");
    for (size_t j = i + 1; j < m; ++j)
      if (std::abs(M.at(i, j) - M.at(j, i)) > 1e-9) fail_data(path + ": matrix is not symmetric");
  }
  M.kept_neurons.resize(m);
  std::iota(M.kept_neurons.begin(), M.kept_neurons.end(), 0);
  return M;
}

void save_filtration_csv(const Filtration& F, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "dim,v0,v1,v2,filter\n";
  for (const Simplex& s : F.simplices) {
    int dim = s.dim();
    out << dim;
    for (int slot = 0; slot < 3; ++slot) {
      out << ",";
      if (slot <= dim) out << s.v[static_cast<size_t>(slot)];
    }
    out << "," << fmt(s.filter) << "\n";
  }
  finish_write(out, path);
}

void save_diagram(const PersistenceDiagram& dg, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "dim,birth,death\n";
  for (const Dot& d : dg.dots)
    out << d.dim << "," << fmt(d.birth) << "," << fmt(d.death) << "\n";
  finish_write(out, path);
}

PersistenceDiagram load_diagram(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  size_t lineno = 0;
  if (!next_line(in, line)) fail_data(path + ": empty file");
  ++lineno;
  if (line != "dim,birth,death") fail_data(at_line(path, lineno) + ": expected 'dim,birth,death'");

  PersistenceDiagram dg;
  while (next_line(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> tok = split(line, ',');
    if (tok.size() != 3) fail_data(at_line(path, lineno) + ": expected 3 columns");
    Dot d;
    d.dim = static_cast<int>(parse_int(tok[0], at_line(path, lineno)));
    if (d.dim < 0 || d.dim > 2) fail_data(at_line(path, lineno) + ": dim must be 0, 1, or 2");
    d.birth = parse_real(tok[1], at_line(path, lineno));
    d.death = parse_real(tok[2], at_line(path, lineno));
    if (!std::isfinite(d.birth) || std::isnan(d.death) || d.death < d.birth)
      fail_data(at_line(path, lineno) + ": bad dot");
    dg.dots.push_back(d);
  }
  return dg;
}

void save_cycles(const std::vector<CycleRepresentative>& cycles, const std::string& path) {
  std::ofstream out = open_out(path);
  for (size_t k = 0; k < cycles.size(); ++k) {
    const CycleRepresentative& c = cycles[k];
    out << "CYCLE id=" << k << " birth=" << fmt(c.dot.birth) << " death=" << fmt(c.dot.death)
        << "\n";
    for (const CycleEdge& e : c.edges)
      out << "EDGE " << e.i << " " << e.j << " " << fmt(e.w) << " " << e.layer_i << " "
          << e.layer_j << "\n";
  }
  finish_write(out, path);
}

std::vector<CycleRepresentative> load_cycles(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  size_t lineno = 0;
  std::vector<CycleRepresentative> cycles;
  while (next_line(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> tok = split_ws(line);
    if (tok[0] == "CYCLE") {
      if (tok.size() != 4) fail_data(at_line(path, lineno) + ": bad CYCLE header");
      CycleRepresentative c;
      c.dot.dim = 1;
      c.dot.birth = parse_real(field_value(tok[2], "birth", at_line(path, lineno)),
                               at_line(path, lineno));
      c.dot.death = parse_real(field_value(tok[3], "death", at_line(path, lineno)),
                               at_line(path, lineno));
      cycles.push_back(std::move(c));
    } else if (tok[0] == "EDGE") {
      if (cycles.empty()) fail_data(at_line(path, lineno) + ": EDGE before any CYCLE");
      if (tok.size() != 6) fail_data(at_line(path, lineno) + ": bad EDGE line");
      CycleEdge e;
      e.i = static_cast<int>(parse_int(tok[1], at_line(path, lineno)));
      e.j = static_cast<int>(parse_int(tok[2], at_line(path, lineno)));
      e.w = parse_real(tok[3], at_line(path, lineno));
      e.layer_i = static_cast<int>(parse_int(tok[4], at_line(path, lineno)));
      e.layer_j = static_cast<int>(parse_int(tok[5], at_line(path, lineno)));
      cycles.back().edges.push_back(e);
    } else {
      fail_data(at_line(path, lineno) + ": expected CYCLE or EDGE");
    }
  }
  return cycles;
}

Vec FeatureTable::column(const std::string& name) const {
  for (size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] != name) continue;
    Vec out(rows.size());
    for (size_t r = 0; r < rows.size(); ++r) out[r] = rows[r].values[c];
    return out;
  }
  fail_data("feature table has no column '" + name + "'");
}

void save_feature_table(const FeatureTable& table, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "model,label";
  for (const std::string& c : table.columns) out << "," << c;
  out << "\n";
  for (const FeatureRow& r : table.rows) {
    if (r.values.size() != table.columns.size()) fail_data("save_feature_table: ragged row");
    out << r.model << "," << r.label;
    for (double v : r.values) out << "," << fmt(v);
    out << "\n";
  }
  finish_write(out, path);
}

FeatureTable load_feature_table(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  size_t lineno = 0;
  if (!next_line(in, line)) fail_data(path + ": empty file");
  ++lineno;
  std::vector<std::string> head = split(line, ',');
  if (head.size() < 3 || head[0] != "model" || head[1] != "label")
    fail_data(at_line(path, lineno) + ": expected header model,label,...");
  FeatureTable table;
  table.columns.assign(head.begin() + 2, head.end());

  while (next_line(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> tok = split(line, ',');
    if (tok.size() != head.size())
      fail_data(at_line(path, lineno) + ": expected " + std::to_string(head.size()) + " columns");
    FeatureRow row;
    row.model = tok[0];
    row.label = static_cast<int>(parse_int(tok[1], at_line(path, lineno)));
    row.values.resize(table.columns.size());
    for (size_t c = 0; c < table.columns.size(); ++c)
      row.values[c] = parse_real(tok[c + 2], at_line(path, lineno));
    table.rows.push_back(std::move(row));
  }
  return table;
}

void save_detector(const DetectorModel& model, const std::string& path) {
  BinWriter w(path);
  w.bytes("TDET", 4);
  w.u32(1);
  w.u64(model.input_dim);
  w.u64(model.kept.size());
  for (int f : model.kept) w.u32(static_cast<uint32_t>(f));
  for (double v : model.mean) w.f64(v);
  for (double v : model.std) w.f64(v);
  w.u64(model.b1.size());
  for (double v : model.w1.a) w.f64(v);
  for (double v : model.b1) w.f64(v);
  for (double v : model.w2) w.f64(v);
  w.f64(model.b2);
  w.u64(model.loss_log.size());
  for (double v : model.loss_log) w.f64(v);
  w.done();
}

DetectorModel load_detector(const std::string& path) {
  BinReader r(path);
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, "TDET", 4) != 0) fail_data(path + ": not a TDET file");
  uint32_t version = r.u32();
  if (version != 1) fail_data(path + ": unsupported TDET version " + std::to_string(version));

  DetectorModel model;
  model.input_dim = r.u64();
  uint64_t k = r.u64();
  if (k > model.input_dim || model.input_dim > (1u << 20)) fail_data(path + ": implausible sizes");
  model.kept.resize(k);
  for (uint64_t f = 0; f < k; ++f) model.kept[f] = static_cast<int>(r.u32());
  model.mean.resize(k);
  for (uint64_t f = 0; f < k; ++f) model.mean[f] = r.f64();
  model.std.resize(k);
  for (uint64_t f = 0; f < k; ++f) model.std[f] = r.f64();
  uint64_t h = r.u64();
  if (h == 0 || h > (1u << 20)) fail_data(path + ": implausible hidden size");
  model.w1 = Mat(h, k);
  for (double& v : model.w1.a) v = r.f64();
  model.b1.resize(h);
  for (double& v : model.b1) v = r.f64();
  model.w2.resize(h);
  for (double& v : model.w2) v = r.f64();
  model.b2 = r.f64();
  uint64_t losses = r.u64();
  if (losses > (1u << 24)) fail_data(path + ": implausible loss log");
  model.loss_log.resize(losses);
  for (double& v : model.loss_log) v = r.f64();
  return model;
}

void save_zoo(const std::vector<ZooEntry>& zoo, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "net_path,label\n";
  for (const ZooEntry& e : zoo) out << e.net_path << "," << e.label << "\n";
  finish_write(out, path);
}

std::vector<ZooEntry> load_zoo(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  size_t lineno = 0;
  if (!next_line(in, line)) fail_data(path + ": empty file");
  ++lineno;
  if (line != "net_path,label") fail_data(at_line(path, lineno) + ": expected 'net_path,label'");

  std::string dir;
  size_t slash = path.find_last_of('/');
  if (slash != std::string::npos) dir = path.substr(0, slash + 1);

  std::vector<ZooEntry> zoo;
  while (next_line(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> tok = split(line, ',');
    if (tok.size() != 2) fail_data(at_line(path, lineno) + ": expected 'net_path,label'");
    ZooEntry e;
    e.net_path = (!tok[0].empty() && tok[0][0] == '/') ? tok[0] : dir + tok[0];
    e.label = static_cast<int>(parse_int(tok[1], at_line(path, lineno)));
    zoo.push_back(std::move(e));
  }
  if (zoo.empty()) fail_data(path + ": no zoo entries");
  return zoo;
}

}  // namespace topo
