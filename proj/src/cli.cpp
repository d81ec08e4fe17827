#include "weldlab/cli.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "CLI11.hpp"

#include "weldlab/capacity.hpp"
#include "weldlab/detectors.hpp"
#include "weldlab/equivariant.hpp"
#include "weldlab/logsingular.hpp"
#include "weldlab/welding.hpp"

namespace weldlab::cli {

namespace {

struct Common {
  std::string out;
  std::uint64_t seed = 0;
  std::optional<double> tol;
  std::vector<std::string> inputs;  ///< files read, folded into the digest

  double tol_or(double fallback) const { return tol.value_or(fallback); }
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out", c.out, "Output path");
  sub->add_option("--seed", c.seed, "Seed for stochastic restarts");
  sub->add_option("--tol", c.tol, "Check tolerance");
}

Arc parse_arc(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw CLI::ValidationError("--arc", "expected start:end, got " + text);
  double a = 0.0, b = 0.0;
  try {
    a = std::stod(text.substr(0, colon));
    b = std::stod(text.substr(colon + 1));
  } catch (const std::exception&) {
    throw CLI::ValidationError("--arc", "expected start:end, got " + text);
  }
  if (!(b > a) || b - a > kTwoPi) throw CLI::ValidationError("--arc", "need start < end <= start + 2pi");
  return {wrap_angle(a), b - a};
}

std::string read_input(Common& c, const std::string& path) {
  std::string text = read_file(path);
  c.inputs.push_back(text);
  return text;
}

// ---- cap -----------------------------------------------------------------

struct CapArgs {
  std::vector<std::string> arcs;
  bool full = false;
  int points = 256;
};

void run_cap(const CapArgs& a, Common& c, RunReport& r) {
  if (a.full == !a.arcs.empty()) throw CLI::ValidationError("cap", "give either --full or at least one --arc");
  ArcSet E = ArcSet::full_circle();
  if (!a.full) {
    std::vector<Arc> arcs;
    for (const auto& s : a.arcs) arcs.push_back(parse_arc(s));
    E = ArcSet(std::move(arcs));
  }
  const CapacityEstimate est = capacity_estimate(E, a.points, c.seed);
  r.add_info("points", std::to_string(a.points));
  r.add_info("lower", est.lower);
  r.add_info("upper", est.upper);
  r.add_info("fekete_upper", est.fekete_upper);
  r.add_info("potential_upper", est.potential_upper);
  r.add_check("bracket_order", est.lower - est.upper, 0.0, est.lower <= est.upper);

  std::optional<double> exact;
  if (E.is_full_circle()) {
    exact = full_circle_capacity();
  } else if (E.arcs().size() == 1) {
    exact = arc_capacity_closed_form(E.arcs()[0].length);
  }
  if (exact) {
    const double tol = c.tol_or(0.03);
    const double excess = std::max({0.0, est.lower - *exact, *exact - est.upper}) / *exact;
    r.add_info("closed_form", *exact);
    r.add_check("closed_form_in_bracket", excess, tol, excess <= tol);
  }
  if (!c.out.empty()) serialize(equilibrium_measure(E, a.points).measure, c.out);
}

// ---- logsingular -----------------------------------------------------------

struct LogSingularArgs {
  std::string arc = "0:3.141592653589793";
  std::string target;
  int depth = 6;
  int points = 128;
  double slack = 0.05;
  std::string table;
  int grid = 4096;
};

void run_logsingular(const LogSingularArgs& a, Common& c, RunReport& r) {
  const Arc I = parse_arc(a.arc);
  const Arc J = parse_arc(a.target.empty() ? a.arc : a.target);
  LogSingularOptions opt;
  opt.certificate_points = a.points;
  const LogSingularMap m = build_log_singular(I, J, a.depth, opt);
  const CertificateReport cert = certificate_check(m, a.points, a.slack, c.seed);

  r.add_info("requested_depth", std::to_string(m.requested_depth));
  r.add_info("realized_depth", std::to_string(m.realized_depth()));
  r.add_info("tail_bound", cert.tail_bound);
  r.add_info("exceptional_set_bound", m.exceptional_set_bound);
  for (const StageCertificate& s : cert.stages) {
    const double budget = s.budget * (1.0 + a.slack);
    r.add_check("stage" + std::to_string(s.index) + "_red_upper", s.red_upper, budget, s.red_pass);
    r.add_check("stage" + std::to_string(s.index) + "_blue_upper", s.blue_upper, budget, s.blue_pass);
  }
  r.add_check("realized_depth", m.realized_depth(), m.requested_depth,
              m.realized_depth() == m.requested_depth);

  const std::vector<double> profile = convergence_profile(m);
  int violations = 0;
  for (std::size_t k = 0; k < profile.size(); ++k) {
    r.add_info("profile" + std::to_string(k + 1), profile[k]);
    if (k > 0 && !(profile[k] < profile[k - 1])) ++violations;
  }
  r.add_check("profile_decreasing", violations, 0.0, violations == 0);

  if (!c.out.empty()) serialize(m.h, c.out);
  if (!a.table.empty()) export_plot_table(m.h, SampleGrid(a.grid), a.table);
}

// ---- equivariant -----------------------------------------------------------

struct EquivariantArgs {
  double a = 1.0;
  double b = 2.0;
  int depth = 4;
  int orbits = 20;
  double guard = 1e-4;
  std::string seed_kind = "log";
  bool check = false;
  int grid = 10000;
  std::string table;
};

void run_equivariant(const EquivariantArgs& a, Common& c, RunReport& r) {
  EquivariantSpec spec;
  spec.a = a.a;
  spec.b = a.b;
  spec.seed_depth = a.depth;
  spec.orbits = a.orbits;
  spec.guard = a.guard;
  spec.seed = (a.seed_kind == "linear") ? SeedKind::linear : SeedKind::log_singular;
  const EquivariantResult res = build_equivariant(spec);

  r.add_info("breakpoints", std::to_string(res.W.size()));
  r.add_info("window_lo", res.window_lo);
  r.add_info("window_hi", res.window_hi);
  r.add_info("truncated", res.truncated ? "yes" : "no");
  r.add_info("orbit_length_I", res.orbits.total_length_I());
  r.add_info("orbit_deficit", kTwoPi - res.orbits.total_length_I());

  if (a.check) {
    const double tol = c.tol_or(1e-6);
    const double grid_res = functional_equation_residual(res, SampleGrid(a.grid));
    const double bp_res = breakpoint_residual(res);
    r.add_check("grid_residual", grid_res, tol, grid_res <= tol);
    r.add_check("breakpoint_residual", bp_res, 1e-10, bp_res <= 1e-10);
    r.add_check("orbits_disjoint", res.orbits.disjoint() ? 0.0 : 1.0, 0.0, res.orbits.disjoint());
  }
  if (!c.out.empty()) serialize(res.W, c.out);
  if (!a.table.empty()) {
    const SampleGrid g(a.grid);
    std::vector<double> t(g.count);
    for (int k = 0; k < g.count; ++k) t[k] = g.angle(k);
    export_plot_table(t, residual_profile(res.W, res.sigma(), res.tau(), g, {res.window_lo, res.window_hi}),
                      a.table);
  }
}

// ---- weld / assemble ---------------------------------------------------------

struct PolygonArgs {
  std::string polygon;
  int regular = 0;
  int resolution = 2048;
};

void add_polygon_options(CLI::App* sub, PolygonArgs& p) {
  sub->add_option("--polygon", p.polygon, "Polygon file");
  sub->add_option("--regular", p.regular, "Regular N-gon inscribed in the unit circle");
  sub->add_option("--resolution", p.resolution, "Boundary samples per side");
}

PolygonCurve load_polygon(const PolygonArgs& p, Common& c) {
  if (p.polygon.empty() == (p.regular == 0)) {
    throw CLI::ValidationError("--polygon", "give exactly one of --polygon and --regular");
  }
  if (!p.polygon.empty()) return polygon_from_text(read_input(c, p.polygon));
  if (p.regular < 3) throw CLI::ValidationError("--regular", "need N >= 3");
  return PolygonCurve::regular(p.regular);
}

struct WeldArgs {
  PolygonArgs poly;
  bool selftest = false;
  int grid = 4096;
};

void run_weld(const WeldArgs& a, Common& c, RunReport& r) {
  const PolygonCurve P = load_polygon(a.poly, c);
  const WeldingResult w = weld(P, a.poly.resolution);
  r.add_info("vertices", std::to_string(P.size()));
  r.add_info("breakpoints", std::to_string(w.h.size()));
  r.add_check("sample_gap", w.gap ? 1.0 : 0.0, 0.0, !w.gap);
  if (a.selftest) {
    const double tol = c.tol_or(1e-3);
    const double step = kTwoPi / static_cast<double>(P.size());
    const SampleGrid g(a.grid);
    double worst = 0.0;
    for (int k = 0; k < g.count; ++k) {
      const double t = g.angle(k);
      worst = std::max(worst, circle_distance(w.h.evaluate(t + step), w.h.evaluate(t) + step));
    }
    r.add_check("rotation_symmetry", worst, tol, worst <= tol);
  }
  if (!c.out.empty()) serialize(w.h, c.out);
}

struct AssembleArgs {
  PolygonArgs poly;
  double a = 1.0;
  std::optional<double> b;
  std::string expect = "match";
};

void run_assemble(const AssembleArgs& a, Common& c, RunReport& r) {
  const PolygonCurve P = load_polygon(a.poly, c);
  const double b = a.b.value_or(a.a);
  const PiecewiseConformalMap F = assemble_piecewise_map(
      interior_map(P, a.poly.resolution), exterior_map(P, a.poly.resolution), parabolic_disk(a.a),
      parabolic_disk(b));
  r.add_info("sigma_translation", a.a);
  r.add_info("tau_translation", b);
  if (a.expect == "match") {
    const double tol = c.tol_or(5e-3);
    r.add_check("mismatch_below", F.mismatch, tol, F.mismatch <= tol);
  } else {
    const double tol = c.tol_or(0.05);
    r.add_check("mismatch_above", F.mismatch, tol, F.mismatch >= tol);
  }
  if (!c.out.empty()) {
    std::string s = "# re z im z re interior im interior re exterior im exterior\n";
    for (std::size_t k = 0; k < F.mesh.size(); ++k) {
      s += format_real(F.mesh[k].real()) + " " + format_real(F.mesh[k].imag()) + " " +
           format_real(F.interior_images[k].real()) + " " + format_real(F.interior_images[k].imag()) + " " +
           format_real(F.exterior_images[k].real()) + " " + format_real(F.exterior_images[k].imag()) + "\n";
    }
    write_file(c.out, s);
  }
}

// ---- compare / detect ----------------------------------------------------------

struct CompareArgs {
  std::string h1, h2;
  std::string expect = "equivalent";
  int restarts = 20;
  int grid = 512;
};

void run_compare(const CompareArgs& a, Common& c, RunReport& r) {
  const CircleHomeo h1 = homeo_from_text(read_input(c, a.h1));
  const CircleHomeo h2 = homeo_from_text(read_input(c, a.h2));
  EquivalenceOptions opt;
  opt.restarts = a.restarts;
  opt.grid = a.grid;
  opt.seed = c.seed;
  const double tol = c.tol_or(1e-2);
  const EquivalenceResult e = welding_equivalence(h1, h2, tol, opt);
  r.add_info("equivalent", e.equivalent ? "yes" : "no");
  r.add_info("A_alpha", e.A.alpha());
  r.add_info("A_re", e.A.center().real());
  r.add_info("A_im", e.A.center().imag());
  r.add_info("B_alpha", e.B.alpha());
  r.add_info("B_re", e.B.center().real());
  r.add_info("B_im", e.B.center().imag());
  r.add_info("evaluations", std::to_string(e.evaluations));
  const bool want = a.expect == "equivalent";
  r.add_check(want ? "witness_found" : "no_witness", e.residual, tol, e.equivalent == want);
}

struct DetectArgs {
  std::string samples;
  bool piecewise = false;
  double a = 1.0;
  double b = 2.0;
  std::string expect = "mobius";
  int starts = 20;
};

void run_detect(const DetectArgs& a, Common& c, RunReport& r) {
  if (a.samples.empty() == !a.piecewise) {
    throw CLI::ValidationError("detect", "give exactly one of --samples and --piecewise");
  }
  const auto s = a.piecewise ? piecewise_translation_samples(a.a, a.b)
                             : samples_from_text(read_input(c, a.samples));
  MoebiusFitOptions opt;
  opt.starts = a.starts;
  opt.seed = c.seed;
  const MoebiusFit fit = mobius_fit_residual(s, opt);
  r.add_info("samples", std::to_string(s.size()));
  if (a.expect == "mobius") {
    const double tol = c.tol_or(1e-8);
    r.add_check("fit_residual_below", fit.residual, tol, fit.residual <= tol);
  } else {
    const double tol = c.tol_or(0.2);
    r.add_check("fit_residual_above", fit.residual, tol, fit.residual >= tol);
  }
}

}  // namespace

RunReport dispatch(const std::vector<std::string>& argv, std::string* usage) {
  RunReport report;
  CLI::App app{"Conformal welding and log-singular homeomorphism experiments", "weldlab"};
  app.require_subcommand(1);
  Common common;

  CapArgs cap;
  auto* cap_cmd = app.add_subcommand("cap", "Capacity bracket for a union of arcs");
  cap_cmd->add_option("--arc", cap.arcs, "Arc start:end in radians (repeatable)");
  cap_cmd->add_flag("--full", cap.full, "Whole circle");
  cap_cmd->add_option("--points", cap.points, "Discretization size")->check(CLI::Range(4, 1 << 16));

  LogSingularArgs ls;
  auto* ls_cmd = app.add_subcommand("logsingular", "Build a log-singular map and check certificates");
  ls_cmd->add_option("--arc", ls.arc, "Domain arc start:end");
  ls_cmd->add_option("--target", ls.target, "Target arc start:end (default: domain)");
  ls_cmd->add_option("--depth", ls.depth, "Stages")->check(CLI::Range(1, 64));
  ls_cmd->add_option("--points", ls.points, "Capacity points per certificate")->check(CLI::Range(8, 1 << 14));
  ls_cmd->add_option("--slack", ls.slack, "Relative certificate slack")->check(CLI::NonNegativeNumber);
  ls_cmd->add_option("--table", ls.table, "Write a plot table of the map");
  ls_cmd->add_option("--grid", ls.grid, "Plot table rows")->check(CLI::PositiveNumber);

  EquivariantArgs eq;
  auto* eq_cmd = app.add_subcommand("equivariant", "Build W with W∘σ_a = σ_b∘W");
  eq_cmd->add_option("--a", eq.a, "Domain translation")->check(CLI::PositiveNumber);
  eq_cmd->add_option("--b", eq.b, "Target translation")->check(CLI::PositiveNumber);
  eq_cmd->add_option("--depth", eq.depth, "Seed depth")->check(CLI::Range(1, 64));
  eq_cmd->add_option("--orbits", eq.orbits, "Orbit count N")->check(CLI::Range(1, 100000));
  eq_cmd->add_option("--guard", eq.guard, "Guard band")->check(CLI::PositiveNumber);
  eq_cmd->add_option("--seed-kind", eq.seed_kind, "log or linear")->check(CLI::IsMember({"log", "linear"}));
  eq_cmd->add_flag("--check", eq.check, "Verify the functional equation");
  eq_cmd->add_option("--grid", eq.grid, "Residual grid size")->check(CLI::PositiveNumber);
  eq_cmd->add_option("--table", eq.table, "Write the residual profile");

  WeldArgs wd;
  auto* wd_cmd = app.add_subcommand("weld", "Welding homeomorphism of a polygon");
  add_polygon_options(wd_cmd, wd.poly);
  wd_cmd->add_flag("--selftest", wd.selftest, "Check rotation symmetry of a regular polygon");
  wd_cmd->add_option("--grid", wd.grid, "Symmetry grid size")->check(CLI::PositiveNumber);

  CompareArgs cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "Welding equivalence of two homeomorphism files");
  cmp_cmd->add_option("h1", cmp.h1, "First CIRCLEHOMEO file")->required();
  cmp_cmd->add_option("h2", cmp.h2, "Second CIRCLEHOMEO file")->required();
  cmp_cmd->add_option("--expect", cmp.expect, "equivalent or distinct")
      ->check(CLI::IsMember({"equivalent", "distinct"}));
  cmp_cmd->add_option("--restarts", cmp.restarts, "Search restarts")->check(CLI::PositiveNumber);
  cmp_cmd->add_option("--grid", cmp.grid, "Residual grid size")->check(CLI::PositiveNumber);

  DetectArgs det;
  auto* det_cmd = app.add_subcommand("detect", "Möbius fit residual of a sample file");
  det_cmd->add_option("--samples", det.samples, "SAMPLES file");
  det_cmd->add_flag("--piecewise", det.piecewise, "Use the built-in piecewise translation set");
  det_cmd->add_option("--a", det.a, "Inner translation for --piecewise");
  det_cmd->add_option("--b", det.b, "Outer translation for --piecewise");
  det_cmd->add_option("--expect", det.expect, "mobius or non-mobius")
      ->check(CLI::IsMember({"mobius", "non-mobius"}));
  det_cmd->add_option("--starts", det.starts, "Fit restarts")->check(CLI::PositiveNumber);

  AssembleArgs as;
  auto* as_cmd = app.add_subcommand("assemble", "Glue f∘σ∘f⁻¹ and g∘τ∘g⁻¹ on a polygon");
  add_polygon_options(as_cmd, as.poly);
  as_cmd->add_option("--a", as.a, "σ translation")->check(CLI::PositiveNumber);
  as_cmd->add_option("--b", as.b, "τ translation (default: same as --a)")->check(CLI::PositiveNumber);
  as_cmd->add_option("--expect", as.expect, "match or mismatch")->check(CLI::IsMember({"match", "mismatch"}));

  for (auto* sub : {cap_cmd, ls_cmd, eq_cmd, wd_cmd, cmp_cmd, det_cmd, as_cmd}) add_common(sub, common);

  std::vector<std::string> args(argv.rbegin(), argv.rend());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    if (usage) *usage = app.help();
    report.command = "help";
    return report;
  } catch (const CLI::ParseError& e) {
    if (usage) *usage = std::string(e.what()) + "\n\n" + app.help();
    report.command = "usage";
    report.usage_error = true;
    return report;
  }

  CLI::App* chosen = app.get_subcommands().front();
  report.command = chosen->get_name();
  try {
    if (chosen == cap_cmd) run_cap(cap, common, report);
    if (chosen == ls_cmd) run_logsingular(ls, common, report);
    if (chosen == eq_cmd) run_equivariant(eq, common, report);
    if (chosen == wd_cmd) run_weld(wd, common, report);
    if (chosen == cmp_cmd) run_compare(cmp, common, report);
    if (chosen == det_cmd) run_detect(det, common, report);
    if (chosen == as_cmd) run_assemble(as, common, report);
  } catch (const CLI::ValidationError& e) {
    if (usage) *usage = std::string(e.what()) + "\n\n" + chosen->help();
    report.checks.clear();
    report.info.clear();
    report.usage_error = true;
    return report;
  }

  std::string joined;
  for (const auto& s : argv) joined += s + '\0';
  std::uint64_t h = fnv1a(joined);
  for (const auto& text : common.inputs) h = fnv1a(text, h);
  report.digest = h;
  if (!common.out.empty() && (chosen == cmp_cmd || chosen == det_cmd)) {
    write_file(common.out, to_text(report));
  }
  return report;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string usage;
  try {
    const RunReport r = dispatch(args, &usage);
    if (!usage.empty()) std::cerr << usage;
    if (r.command != "help" && !r.usage_error) std::cout << to_text(r);
    return r.exit_status();
  } catch (const std::exception& e) {
    std::cerr << "weldlab: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace weldlab::cli
