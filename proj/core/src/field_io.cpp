#include "semiflow/field_io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace semiflow {
namespace {

void write_header(std::ostream& os, const TorusGrid& grid) {
  os << grid.dim() << ',' << grid.points_per_dim() << ',' << TorusGrid::kPeriod << '\n';
}

std::vector<double> split_doubles(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t pos = 0;
    out.push_back(std::stod(cell, &pos));
  }
  return out;
}

TorusGrid read_header(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("field file: missing header");
  const auto h = split_doubles(line);
  if (h.size() != 3) throw std::runtime_error("field file: header must be dim,n,period");
  if (h[2] != TorusGrid::kPeriod) throw std::runtime_error("field file: unsupported period");
  return TorusGrid::make(static_cast<int>(h[0]), static_cast<int>(h[1]));
}

std::vector<std::vector<double>> read_rows(std::istream& is, const TorusGrid& grid, int width) {
  std::vector<std::vector<double>> cols(width, std::vector<double>(grid.size()));
  std::string line;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::getline(is, line)) throw std::runtime_error("field file: truncated node list");
    const auto row = split_doubles(line);
    if (static_cast<int>(row.size()) != width) {
      throw std::runtime_error("field file: row " + std::to_string(i) + " has wrong width");
    }
    for (int c = 0; c < width; ++c) cols[c][i] = row[c];
  }
  return cols;
}

template <typename Field, typename Writer>
void write_to_path(const std::filesystem::path& path, const Field& f, Writer writer) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  writer(os, f);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return is;
}

}  // namespace

void write_field(std::ostream& os, const ScalarField& f) {
  write_header(os, f.grid());
  os << std::setprecision(17);
  for (double v : f.values()) os << v << '\n';
}

void write_field(std::ostream& os, const VectorField& f) {
  write_header(os, f.grid());
  os << std::setprecision(17);
  for (std::size_t i = 0; i < f.grid().size(); ++i) {
    for (int c = 0; c < f.dim(); ++c) os << (c ? "," : "") << f.component(c)[i];
    os << '\n';
  }
}

ScalarField read_scalar_field(std::istream& is) {
  const TorusGrid grid = read_header(is);
  auto cols = read_rows(is, grid, 1);
  return ScalarField(grid, std::move(cols[0]));
}

VectorField read_vector_field(std::istream& is) {
  const TorusGrid grid = read_header(is);
  auto cols = read_rows(is, grid, grid.dim());
  std::vector<ScalarField> comps;
  for (auto& c : cols) comps.emplace_back(grid, std::move(c));
  return VectorField(std::move(comps));
}

void write_field(const std::filesystem::path& path, const ScalarField& f) {
  write_to_path(path, f, [](std::ostream& os, const ScalarField& g) { write_field(os, g); });
}

void write_field(const std::filesystem::path& path, const VectorField& f) {
  write_to_path(path, f, [](std::ostream& os, const VectorField& g) { write_field(os, g); });
}

ScalarField read_scalar_field(const std::filesystem::path& path) {
  auto is = open_input(path);
  return read_scalar_field(is);
}

VectorField read_vector_field(const std::filesystem::path& path) {
  auto is = open_input(path);
  return read_vector_field(is);
}

}  // namespace semiflow
