#include "kinlab/io.hpp"

#include <bit>
#include <cinttypes>
#include <cstdio>

namespace kinlab {

namespace {

void check_le() {
  require(std::endian::native == std::endian::little,
          "snapshot io: little-endian host required");
}

void put_i64(std::ofstream& o, std::int64_t v) { o.write(reinterpret_cast<const char*>(&v), 8); }
void put_f64(std::ofstream& o, double v) { o.write(reinterpret_cast<const char*>(&v), 8); }

std::int64_t get_i64(std::ifstream& i) {
  std::int64_t v = 0;
  i.read(reinterpret_cast<char*>(&v), 8);
  require(bool(i), "snapshot io: truncated header");
  return v;
}
double get_f64(std::ifstream& i) {
  double v = 0;
  i.read(reinterpret_cast<char*>(&v), 8);
  require(bool(i), "snapshot io: truncated header");
  return v;
}

}  // namespace

void save_field(const std::string& path, const KvField& f, double time_tag) {
  check_le();
  std::ofstream o(path, std::ios::binary | std::ios::trunc);
  require(bool(o), "save_field: cannot open " + path);
  put_i64(o, f.grid.dx);
  put_i64(o, f.grid.dv);
  put_i64(o, f.grid.K);
  put_i64(o, f.grid.N_v);
  put_f64(o, f.grid.V);
  put_f64(o, time_tag);
  o.write(reinterpret_cast<const char*>(f.data.data()),
          std::streamsize(f.data.size() * sizeof(cplx)));
  require(bool(o), "save_field: write failed for " + path);
}

KvField load_field(const std::string& path, double* time_tag) {
  check_le();
  std::ifstream i(path, std::ios::binary);
  require(bool(i), "load_field: cannot open " + path);
  GridSpec g;
  g.dx = int(get_i64(i));
  g.dv = int(get_i64(i));
  g.K = int(get_i64(i));
  g.N_v = int(get_i64(i));
  g.V = get_f64(i);
  double tt = get_f64(i);
  g.validate();
  KvField f(g);
  i.read(reinterpret_cast<char*>(f.data.data()), std::streamsize(f.data.size() * sizeof(cplx)));
  require(bool(i) && std::size_t(i.gcount()) == f.data.size() * sizeof(cplx),
          "load_field: truncated payload in " + path);
  i.peek();
  require(i.eof(), "load_field: trailing bytes in " + path);
  if (time_tag) *time_tag = tt;
  return f;
}

std::string fmt_g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& cols)
    : out_(path, std::ios::trunc), ncols_(cols.size()) {
  require(bool(out_), "CsvWriter: cannot open " + path);
  for (std::size_t i = 0; i < cols.size(); ++i) out_ << (i ? "," : "") << cols[i];
  out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& vals) {
  require(vals.size() == ncols_, "CsvWriter: wrong column count");
  for (std::size_t i = 0; i < vals.size(); ++i) out_ << (i ? "," : "") << fmt_g(vals[i]);
  out_ << "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  require(cells.size() == ncols_, "CsvWriter: wrong column count");
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
  out_ << "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream o(path, std::ios::trunc);
  require(bool(o), "write_text_file: cannot open " + path);
  o << content;
  require(bool(o), "write_text_file: write failed for " + path);
}

}  // namespace kinlab
