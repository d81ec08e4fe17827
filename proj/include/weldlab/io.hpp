#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "weldlab/capacity.hpp"
#include "weldlab/circle_homeo.hpp"
#include "weldlab/polygon.hpp"

namespace weldlab {

struct CheckLine {
  std::string name;
  double value = 0.0;
  double budget = 0.0;
  bool pass = false;
};

struct RunReport {
  std::string command;
  std::uint64_t digest = 0;
  std::vector<std::pair<std::string, std::string>> info;
  std::vector<CheckLine> checks;
  bool usage_error = false;

  void add_info(std::string key, std::string value);
  void add_info(std::string key, double value);
  void add_check(std::string name, double value, double budget, bool pass);
  /// 0 when every check passes, 1 when any fails, 2 on usage errors.
  int exit_status() const;
};

/// FNV-1a over the bytes, continuing from h.
std::uint64_t fnv1a(const std::string& bytes, std::uint64_t h = 0xcbf29ce484222325ULL);

/// %.17g, which round-trips every double.
std::string format_real(double x);

std::string to_text(const CircleHomeo& h);
std::string to_text(const DiscreteMeasure& mu);
std::string to_text(const PolygonCurve& P);
std::string to_text(const RunReport& r);

CircleHomeo homeo_from_text(const std::string& text);
DiscreteMeasure measure_from_text(const std::string& text);
PolygonCurve polygon_from_text(const std::string& text);
RunReport report_from_text(const std::string& text);

/// Sample pairs (z, w) for the Möbius detector: `SAMPLES 1 <n>` then `<re z> <im z> <re w> <im w>`.
std::string samples_to_text(const std::vector<std::pair<Complex, Complex>>& s);
std::vector<std::pair<Complex, Complex>> samples_from_text(const std::string& text);

/// Throws std::runtime_error when the file cannot be read or written.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

template <class T>
void serialize(const T& obj, const std::string& path) {
  write_file(path, to_text(obj));
}

CircleHomeo read_homeo(const std::string& path);
DiscreteMeasure read_measure(const std::string& path);
PolygonCurve read_polygon(const std::string& path);

/// Two-column table: angle and lifted h value at each grid angle.
std::string plot_table(const CircleHomeo& h, const SampleGrid& grid);
/// Two-column table from parallel arrays.
std::string plot_table(const std::vector<double>& angles, const std::vector<double>& values);
void export_plot_table(const CircleHomeo& h, const SampleGrid& grid, const std::string& path);
void export_plot_table(const std::vector<double>& angles, const std::vector<double>& values,
                       const std::string& path);

}  // namespace weldlab
