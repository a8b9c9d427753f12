#pragma once

#include <map>
#include <string>
#include <vector>

#include "helmbem/types.hpp"

namespace helmbem {
namespace io {

/// CSV with full double precision (17 significant digits). The header
/// comment line carries a timestamp and is the only line allowed to
/// differ between reruns of the same configuration.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& tool_line,
            const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  void flush();

 private:
  std::string path_;
  std::string body_;
};

/// Legacy-VTK ASCII STRUCTURED_POINTS file with a single SCALARS array.
void write_vtk_structured_points(const std::string& path, const std::string& name,
                                 const std::array<int, 3>& dims, const Vec3& origin,
                                 const Vec3& spacing, const std::vector<double>& values);

/// Plain key: value run manifest.
void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& entries);

std::string format_full(double v); // 17 significant digits

} // namespace io
} // namespace helmbem
