#include "helmbem/io.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace helmbem {
namespace io {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::string& tool_line,
                     const std::vector<std::string>& columns)
    : path_(path) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[64];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%S", std::gmtime(&now));
  body_ = "# " + tool_line + " generated " + stamp + "Z\n";
  for (std::size_t i = 0; i < columns.size(); ++i)
    body_ += columns[i] + (i + 1 < columns.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i)
    body_ += format_full(values[i]) + (i + 1 < values.size() ? "," : "\n");
}

void CsvWriter::flush() {
  std::ofstream out(path_);
  if (!out) throw std::runtime_error("cannot write " + path_);
  out << body_;
}

void write_vtk_structured_points(const std::string& path, const std::string& name,
                                 const std::array<int, 3>& dims, const Vec3& origin,
                                 const Vec3& spacing, const std::vector<double>& values) {
  if (static_cast<std::size_t>(dims[0]) * dims[1] * dims[2] != values.size())
    throw std::invalid_argument("vtk: dims do not match value count");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "# vtk DataFile Version 3.0\n" << name << "\nASCII\nDATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << dims[0] << " " << dims[1] << " " << dims[2] << "\n";
  out << "ORIGIN " << format_full(origin[0]) << " " << format_full(origin[1]) << " "
      << format_full(origin[2]) << "\n";
  out << "SPACING " << format_full(spacing[0]) << " " << format_full(spacing[1]) << " "
      << format_full(spacing[2]) << "\n";
  out << "POINT_DATA " << values.size() << "\n";
  out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (const double v : values) out << format_full(v) << "\n";
}

void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& [k, v] : entries) out << k << ": " << v << "\n";
}

} // namespace io
} // namespace helmbem
