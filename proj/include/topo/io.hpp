#pragma once

#include <string>
#include <utility>
#include <vector>

#include "topo/complex.hpp"
#include "topo/detector.hpp"
#include "topo/netlab.hpp"
#include "topo/persistence.hpp"
#include "topo/trace.hpp"

// File formats. Text formats are line-oriented with %.17g reals so every
// round-trip is exact; binary formats assume a little-endian host. Readers
// raise data errors with the offending file and line; writers raise data
// errors when the stream fails.
//
//   NET v1      text   network weights (header, LAYER blocks, OUTPUT line)
//   dataset     CSV    x_1..x_d,y
//   points      CSV    x_1..x_d (a trailing y column is accepted and ignored)
//   ATRC v1     binary activation trace; .atrc extension selects it
//   trace CSV   text   header = neuron ids, first row = layer indices
//   CORR v1     CSV    kernel line, layers line, m rows of m entries
//   filtration  CSV    dim,v0,v1,v2,filter (blank unused vertex slots)
//   diagram     CSV    dim,birth,death ("inf" for essential dots)
//   CYCLES v1   text   CYCLE headers with EDGE lines
//   features    CSV    model,label,<named feature columns>
//   TDET v1     binary detector model
//   ZOO v1      CSV    net_path,label (paths resolve against the manifest dir)

namespace topo {

void save_network(const NetworkSpec& net, const std::string& path);
NetworkSpec load_network(const std::string& path);

void save_dataset(const Dataset& data, const std::string& path);
Dataset load_dataset(const std::string& path);

void save_points(const std::vector<Vec>& X, const std::string& path);
std::vector<Vec> load_points(const std::string& path);

// Binary when the path ends in .atrc, CSV otherwise.
void save_trace(const ActivationTrace& trace, const std::string& path);
ActivationTrace load_trace(const std::string& path);

void save_corr(const CorrelationMatrix& M, const std::string& path);
CorrelationMatrix load_corr(const std::string& path);

void save_filtration_csv(const Filtration& F, const std::string& path);

void save_diagram(const PersistenceDiagram& dg, const std::string& path);
PersistenceDiagram load_diagram(const std::string& path);

void save_cycles(const std::vector<CycleRepresentative>& cycles, const std::string& path);
std::vector<CycleRepresentative> load_cycles(const std::string& path);

struct FeatureRow {
  std::string model;
  int label = -1;
  Vec values;
};

struct FeatureTable {
  std::vector<std::string> columns;  // value column names, f01.. and friends
  std::vector<FeatureRow> rows;

  // One named column over all rows; unknown name is a data error.
  Vec column(const std::string& name) const;
};

void save_feature_table(const FeatureTable& table, const std::string& path);
FeatureTable load_feature_table(const std::string& path);

void save_detector(const DetectorModel& model, const std::string& path);
DetectorModel load_detector(const std::string& path);

struct ZooEntry {
  std::string net_path;  // resolved: relative manifest entries get the manifest's directory
  int label = 0;
};

void save_zoo(const std::vector<ZooEntry>& zoo, const std::string& path);
std::vector<ZooEntry> load_zoo(const std::string& path);

// %.17g, the shortest representation that round-trips a double exactly.
std::string format_real(double v);

}  // namespace topo
