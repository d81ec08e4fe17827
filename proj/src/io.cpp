#include "weldlab/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace weldlab {

namespace {

std::vector<std::vector<std::string>> records(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    std::string t;
    while (ls >> t) tok.push_back(t);
    if (!tok.empty()) out.push_back(std::move(tok));
  }
  return out;
}

double parse_real(const std::string& s) {
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw std::invalid_argument("parse: not a number: " + s);
  return x;
}

std::size_t parse_count(const std::string& s) {
  char* end = nullptr;
  const long long n = std::strtoll(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0' || n < 0) {
    throw std::invalid_argument("parse: bad count: " + s);
  }
  return static_cast<std::size_t>(n);
}

std::vector<std::vector<std::string>> counted_body(const std::string& text, const std::string& tag,
                                                   std::size_t width) {
  auto rec = records(text);
  if (rec.empty() || rec[0][0] != tag || rec[0].size() != 3 || rec[0][1] != "1") {
    throw std::invalid_argument("parse: expected `" + tag + " 1 <n>` header");
  }
  const std::size_t n = parse_count(rec[0][2]);
  rec.erase(rec.begin());
  if (rec.size() != n) throw std::invalid_argument("parse: " + tag + " record count mismatch");
  for (const auto& r : rec) {
    if (r.size() != width) throw std::invalid_argument("parse: malformed " + tag + " record");
  }
  return rec;
}

}  // namespace

void RunReport::add_info(std::string key, std::string value) {
  info.emplace_back(std::move(key), std::move(value));
}

void RunReport::add_info(std::string key, double value) {
  info.emplace_back(std::move(key), format_real(value));
}

void RunReport::add_check(std::string name, double value, double budget, bool pass) {
  checks.push_back({std::move(name), value, budget, pass});
}

int RunReport::exit_status() const {
  if (usage_error) return 2;
  for (const auto& c : checks) {
    if (!c.pass) return 1;
  }
  return 0;
}

std::uint64_t fnv1a(const std::string& bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string to_text(const CircleHomeo& h) {
  std::string s = "CIRCLEHOMEO 1\n";
  for (const auto& b : h.breakpoints()) s += format_real(b.theta) + " " + format_real(b.psi) + "\n";
  return s;
}

std::string to_text(const DiscreteMeasure& mu) {
  std::string s = "MEASURE 1 " + std::to_string(mu.size()) + "\n";
  for (std::size_t k = 0; k < mu.size(); ++k) {
    s += format_real(mu.support()[k]) + " " + format_real(mu.weights()[k]) + "\n";
  }
  return s;
}

std::string to_text(const PolygonCurve& P) {
  std::string s = "POLYGON 1 " + std::to_string(P.size()) + "\n";
  for (const Complex& v : P.vertices()) s += format_real(v.real()) + " " + format_real(v.imag()) + "\n";
  return s;
}

std::string to_text(const RunReport& r) {
  char digest[24];
  std::snprintf(digest, sizeof digest, "%016" PRIx64, r.digest);
  std::string s = "REPORT 1 " + r.command + "\n";
  s += "digest " + std::string(digest) + "\n";
  for (const auto& [k, v] : r.info) s += "info " + k + " " + v + "\n";
  for (const auto& c : r.checks) {
    s += "check " + c.name + " " + format_real(c.value) + " " + format_real(c.budget) + " " +
         (c.pass ? "PASS" : "FAIL") + "\n";
  }
  s += "status " + std::to_string(r.exit_status()) + "\n";
  return s;
}

CircleHomeo homeo_from_text(const std::string& text) {
  auto rec = records(text);
  if (rec.empty() || rec[0].size() != 2 || rec[0][0] != "CIRCLEHOMEO" || rec[0][1] != "1") {
    throw std::invalid_argument("parse: expected `CIRCLEHOMEO 1` header");
  }
  std::vector<Breakpoint> bp;
  bp.reserve(rec.size() - 1);
  for (std::size_t k = 1; k < rec.size(); ++k) {
    if (rec[k].size() != 2) throw std::invalid_argument("parse: malformed CIRCLEHOMEO record");
    bp.push_back({parse_real(rec[k][0]), parse_real(rec[k][1])});
  }
  return CircleHomeo(std::move(bp));
}

DiscreteMeasure measure_from_text(const std::string& text) {
  const auto rec = counted_body(text, "MEASURE", 2);
  std::vector<double> t, w;
  for (const auto& r : rec) {
    t.push_back(parse_real(r[0]));
    w.push_back(parse_real(r[1]));
  }
  return DiscreteMeasure(std::move(t), std::move(w));
}

PolygonCurve polygon_from_text(const std::string& text) {
  const auto rec = counted_body(text, "POLYGON", 2);
  std::vector<Complex> v;
  for (const auto& r : rec) v.emplace_back(parse_real(r[0]), parse_real(r[1]));
  return PolygonCurve(std::move(v));
}

RunReport report_from_text(const std::string& text) {
  const auto rec = records(text);
  if (rec.empty() || rec[0].size() != 3 || rec[0][0] != "REPORT" || rec[0][1] != "1") {
    throw std::invalid_argument("parse: expected `REPORT 1 <command>` header");
  }
  RunReport r;
  r.command = rec[0][2];
  int status = -1;
  for (std::size_t k = 1; k < rec.size(); ++k) {
    const auto& t = rec[k];
    if (t[0] == "digest" && t.size() == 2) {
      r.digest = std::strtoull(t[1].c_str(), nullptr, 16);
    } else if (t[0] == "info" && t.size() >= 3) {
      std::string v = t[2];
      for (std::size_t j = 3; j < t.size(); ++j) v += " " + t[j];
      r.add_info(t[1], v);
    } else if (t[0] == "check" && t.size() == 5 && (t[4] == "PASS" || t[4] == "FAIL")) {
      r.add_check(t[1], parse_real(t[2]), parse_real(t[3]), t[4] == "PASS");
    } else if (t[0] == "status" && t.size() == 2) {
      status = static_cast<int>(parse_count(t[1]));
    } else {
      throw std::invalid_argument("parse: malformed REPORT record");
    }
  }
  if (status == 2) r.usage_error = true;
  if (status != r.exit_status()) throw std::invalid_argument("parse: REPORT status disagrees with checks");
  return r;
}

std::string samples_to_text(const std::vector<std::pair<Complex, Complex>>& s) {
  std::string out = "SAMPLES 1 " + std::to_string(s.size()) + "\n";
  for (const auto& [z, w] : s) {
    out += format_real(z.real()) + " " + format_real(z.imag()) + " " + format_real(w.real()) + " " +
           format_real(w.imag()) + "\n";
  }
  return out;
}

std::vector<std::pair<Complex, Complex>> samples_from_text(const std::string& text) {
  const auto rec = counted_body(text, "SAMPLES", 4);
  std::vector<std::pair<Complex, Complex>> s;
  for (const auto& r : rec) {
    s.emplace_back(Complex(parse_real(r[0]), parse_real(r[1])), Complex(parse_real(r[2]), parse_real(r[3])));
  }
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("cannot write " + path);
}

CircleHomeo read_homeo(const std::string& path) { return homeo_from_text(read_file(path)); }
DiscreteMeasure read_measure(const std::string& path) { return measure_from_text(read_file(path)); }
PolygonCurve read_polygon(const std::string& path) { return polygon_from_text(read_file(path)); }

std::string plot_table(const CircleHomeo& h, const SampleGrid& grid) {
  std::vector<double> t(grid.count), v(grid.count);
  for (int k = 0; k < grid.count; ++k) {
    t[k] = grid.angle(k);
    v[k] = h.evaluate_lift(t[k]);
  }
  return plot_table(t, v);
}

std::string plot_table(const std::vector<double>& angles, const std::vector<double>& values) {
  if (angles.size() != values.size()) throw std::invalid_argument("plot_table: size mismatch");
  std::string s = "# angle value\n";
  for (std::size_t k = 0; k < angles.size(); ++k) s += format_real(angles[k]) + " " + format_real(values[k]) + "\n";
  return s;
}

void export_plot_table(const CircleHomeo& h, const SampleGrid& grid, const std::string& path) {
  write_file(path, plot_table(h, grid));
}

void export_plot_table(const std::vector<double>& angles, const std::vector<double>& values,
                       const std::string& path) {
  write_file(path, plot_table(angles, values));
}

}  // namespace weldlab
