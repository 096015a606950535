#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "kinlab/field.hpp"

namespace kinlab {

// Snapshot layout (little-endian):
//   int64  dx, dv, K, N_v
//   f64    V, time_tag
//   f64[2] payload, row-major (k-major, v-minor), re/im interleaved.
void save_field(const std::string& path, const KvField& f, double time_tag = 0.0);
KvField load_field(const std::string& path, double* time_tag = nullptr);

std::string fmt_g(double x);  // shortest round-trippable decimal

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& cols);
  void row(const std::vector<double>& vals);
  void row(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
  std::size_t ncols_;
};

void write_text_file(const std::string& path, const std::string& content);

}  // namespace kinlab
