// curvlab command-line driver: example evaluation, parameter sweeps, flow
// runs, integral tables and the verification suite. Exit codes: 0 success,
// 2 validation error, 3 numerical error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "curvlab/families.hpp"
#include "curvlab/flows.hpp"
#include "curvlab/io.hpp"
#include "curvlab/norms.hpp"
#include "curvlab/verify.hpp"

using json = nlohmann::json;
using namespace curvlab;
using radial::ExampleFamily;
using radial::FamilyKind;

namespace {

constexpr int kSchemaVersion = 1;

struct FamilyArgs {
  std::string family = "c10";
  int n = 3;
  double i = 10.0;
  double r0 = 1.0;
  double eps = 0.0;
  double alpha = 1.0;
  double side = 2.0;

  ExampleFamily make() const {
    const auto kind = radial::family_from_name(family);
    if (!kind) throw validation_error("unknown family: " + family);
    return ExampleFamily::make(*kind, {.n = n,
                                       .i = i,
                                       .r0 = r0,
                                       .alpha = alpha,
                                       .eps = eps,
                                       .torus_side = side});
  }
};

void add_family_flags(CLI::App* cmd, FamilyArgs& args) {
  cmd->add_option("--family", args.family,
                  "family: below, integral, c10, torus, c21, twodim, boundary");
  cmd->add_option("--n", args.n, "dimension");
  cmd->add_option("--i", args.i, "sequence index (real)");
  cmd->add_option("--r0", args.r0, "inner cutoff radius");
  cmd->add_option("--eps", args.eps, "cutoff transition width (default r0/4)");
  cmd->add_option("--alpha", args.alpha, "below-family constant");
  cmd->add_option("--side", args.side, "torus side length");
}

quad::QuadratureSettings quad_settings(double tol, long budget) {
  quad::QuadratureSettings qs;
  qs.abs_tol = tol;
  qs.max_evaluations = budget;
  return qs;
}

// Plain config-file grammar: one `key = value` per line, '#' starts a
// comment, blank lines ignored. Values are injected as --key flags right
// after the subcommand name; explicit command-line flags win via TakeLast.
std::vector<std::string> config_file_flags(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw validation_error("cannot open config file " + path);
  std::vector<std::string> flags;
  std::string line;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw validation_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw validation_error(path + ":" + std::to_string(lineno) + ": empty key");
    flags.push_back("--" + key);
    flags.push_back(value);
  }
  return flags;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::string item;
  for (char c : text + ",") {
    if (c == ',') {
      if (!item.empty()) out.push_back(std::stod(item));
      item.clear();
    } else {
      item += c;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

int cmd_example(const FamilyArgs& fa, double tol, long budget, int samples,
                const std::string& json_path, const std::string& svg_path) {
  const ExampleFamily family = fa.make();
  const auto qs = quad_settings(tol, budget);
  const auto total = radial::family_total(family, qs);

  json report;
  report["schema_version"] = kSchemaVersion;
  report["command"] = "example";
  report["family"] = radial::family_name(family.kind());
  report["params"] = {{"n", family.n()},     {"i", family.i()},   {"r0", family.r0()},
                      {"eps", family.eps()}, {"alpha", family.alpha()},
                      {"side", family.torus_side()}};
  report["total"] = {{"value", total.value},
                     {"error_estimate", total.abs_error},
                     {"evaluations", total.evaluations}};

  if (family.mode() == geom::ConformalMode::PowerLaw && family.kind() != FamilyKind::Boundary) {
    const auto energy = radial::family_total_energy(family, qs);
    report["energy_total"] = {{"value", energy.value}, {"error_estimate", energy.abs_error}};
  }
  try {
    report["lower_bound"] = radial::family_total_lower_bound(family);
  } catch (const validation_error&) {
    report["lower_bound"] = nullptr;
  }
  if (family.kind() == FamilyKind::TwoDim) {
    report["closed_form"] = radial::twodim_total(family.i());
    report["notes"].push_back(
        "the closed-form moment recombination and the direct quadrature of the integrand "
        "disagree: the integrand is an exact divergence and integrates to zero");
  }
  if (family.kind() == FamilyKind::Below) {
    report["curvature_origin"] = family.scalar_curvature(0.0);
    report["curvature_origin_limit"] = 4.0 * fa.n * (fa.n - 1);
  }
  if (family.kind() == FamilyKind::Boundary) {
    const auto audit = radial::boundary_example_audit(family.n(), family.i(), qs);
    report["boundary"] = {{"flux", audit.boundary_flux},
                          {"interior_energy", audit.interior_energy},
                          {"total_identity", audit.total_identity},
                          {"flux_vanishes", audit.flux_vanishes}};
  }

  std::vector<double> rs, curvature;
  const double r_max = family.support_radius() * 1.05;
  for (int k = 0; k <= samples; ++k) {
    const double r = r_max * k / samples;
    rs.push_back(r);
    curvature.push_back(family.scalar_curvature(r));
    report["samples"].push_back(
        {{"r", r}, {"R", curvature.back()}, {"u", family.factor(r, 0)}});
  }

  std::ofstream out(json_path);
  if (!out) throw validation_error("cannot open " + json_path);
  out << report.dump(2) << "\n";
  std::cout << "example " << radial::family_name(family.kind()) << ": total = " << total.value
            << " (err " << total.abs_error << ") -> " << json_path << "\n";

  if (!svg_path.empty()) {
    io::svg_plot(svg_path, rs, {curvature}, {"R(r)"},
                 std::string("scalar curvature, ") + radial::family_name(family.kind()) +
                     " i=" + std::to_string(family.i()));
    std::cout << "plot -> " << svg_path << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------

int cmd_sweep(const FamilyArgs& fa, const std::string& i_list, const std::string& p_list,
              double tol, long budget, long samples, const std::string& csv_path) {
  const std::vector<double> is = parse_list(i_list);
  if (is.size() < 2) throw validation_error("sweep needs at least 2 values in --i-list");
  const std::vector<double> ps = parse_list(p_list);
  const ExampleFamily proto = fa.make();
  const auto qs = quad_settings(tol, budget);

  double bound = 0.0;
  bool has_bound = true;
  try {
    bound = radial::family_total_lower_bound(proto);
  } catch (const validation_error&) {
    has_bound = false;
  }

  io::CsvTable table;
  std::vector<std::string> header = {"i", "total", "c0", "c1", "c2"};
  for (double p : ps) header.push_back("w1p@" + io::format_double(p));
  header.push_back("bound");
  header.push_back("verdict");
  table.push_back(header);

  for (double i : is) {
    const ExampleFamily fam = proto.with_i(i);
    const auto total = radial::family_total(fam, qs);
    const auto norms_report = norms::metric_difference_norms(fam, ps, samples);
    std::vector<std::string> row = {io::format_double(i), io::format_double(total.value),
                                    io::format_double(norms_report.c0),
                                    io::format_double(norms_report.c1),
                                    io::format_double(norms_report.c2)};
    for (double p : ps) row.push_back(io::format_double(norms_report.w1p.at(p)));
    row.push_back(has_bound ? io::format_double(bound) : "");
    row.push_back(has_bound ? (total.value >= bound ? "above-bound" : "below-bound") : "");
    table.push_back(row);
  }
  io::csv_write(csv_path, table);
  std::cout << "sweep " << radial::family_name(proto.kind()) << ": " << is.size() << " rows -> "
            << csv_path << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

int cmd_flow(const std::string& mode, int n, int res, double side, double amplitude,
             double f_amplitude, double t_end, double dt_opt, int log_every,
             const std::string& csv_path, const std::string& snapshot_prefix) {
  flows::PeriodicGrid grid{n, res, side};
  grid.validate();

  io::CsvTable table;
  table.push_back({"t", "total", "weighted_total", "sup_h", "sup_dh", "cs_min"});

  auto log_state = [&](const flows::FlowState& s) {
    double sup_h = 0.0;
    for (long p = 0; p < grid.points(); ++p)
      for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b)
          sup_h = std::max(sup_h, std::abs(s.g.at(p, flows::sym_index(n, a, b)) -
                                           (a == b ? 1.0 : 0.0)));
    double sup_dh = 0.0;
    std::vector<double> tmp;
    for (int axis = 0; axis < n; ++axis)
      for (int c = 0; c < s.g.ncomp(); ++c) {
        flows::d1_axis(grid, s.g.v, s.g.ncomp(), c, axis, tmp);
        for (double v : tmp) sup_dh = std::max(sup_dh, std::abs(v));
      }
    const auto cs = flows::cauchy_schwarz_audit(s.g);
    flows::FlowState plain = s;
    plain.f.reset();
    table.push_back({io::format_double(s.t), io::format_double(flows::weighted_total(plain)),
                     io::format_double(flows::weighted_total(s)), io::format_double(sup_h),
                     io::format_double(sup_dh), io::format_double(cs.min_value)});
  };

  int snap_index = 0;
  auto snapshot = [&](const flows::FlowState& s) {
    if (snapshot_prefix.empty()) return;
    io::snapshot_write(snapshot_prefix + "_" + std::to_string(snap_index++) + ".snap", s.g, s.t);
  };

  try {
    if (mode == "conformal2d") {
      if (n != 2) throw validation_error("flow: conformal2d requires --n 2");
      flows::GridScalar u(grid);
      const double w = 2.0 * M_PI / side;
      for (long p = 0; p < grid.points(); ++p) {
        const auto q = grid.coords(p);
        u.v[p] = amplitude * std::sin(w * q[0] * grid.h()) * std::cos(w * q[1] * grid.h());
      }
      double t = 0.0;
      int k = 0;
      auto state_of = [&](const flows::GridScalar& uu) {
        auto s = flows::make_flow_state(flows::conformal_metric_from_scalar(uu, true));
        s.t = t;
        return s;
      };
      log_state(state_of(u));
      snapshot(state_of(u));
      while (t < t_end) {
        double dt = dt_opt > 0 ? dt_opt : 0.9 * 0.1 * grid.h() * grid.h() / std::exp(amplitude);
        dt = std::min(dt, t_end - t);
        u = flows::conformal_ricci_flow_2d_step(u, dt);
        t += dt;
        if (++k % log_every == 0 || t >= t_end) log_state(state_of(u));
      }
      snapshot(state_of(u));
    } else {
      auto s = flows::make_flow_state(flows::perturbed_flat_metric(grid, amplitude));
      if (mode == "coupled" || f_amplitude != 0.0)
        s.f = flows::cosine_field(grid, f_amplitude != 0.0 ? f_amplitude : 0.1, 1);
      log_state(s);
      snapshot(s);
      int k = 0;
      while (s.t < t_end) {
        double dt = dt_opt > 0 ? dt_opt : 0.9 * flows::cfl_dt(s.g);
        dt = std::min(dt, t_end - s.t);
        if (mode == "rde")
          s = flows::rde_step(s, dt);
        else if (mode == "ricci")
          s = flows::ricci_flow_step(s, dt);
        else if (mode == "coupled")
          s = flows::coupled_ricci_heat_step(s, dt);
        else
          throw validation_error("flow: unknown --mode " + mode);
        if (++k % log_every == 0 || s.t >= t_end) log_state(s);
      }
      snapshot(s);
    }
  } catch (const numerical_error& e) {
    io::csv_write(csv_path, table);  // keep the partial series for inspection
    const double t_fail = table.size() > 1 ? std::stod(table.back()[0]) : 0.0;
    throw numerical_error("flow failed at t >= " + io::format_double(t_fail) + ": " + e.what());
  }
  io::csv_write(csv_path, table);
  std::cout << "flow " << mode << ": " << table.size() - 1 << " samples -> " << csv_path << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

int cmd_integrals(double i, double r0, int n_max, double tol, long budget,
                  const std::string& csv_path) {
  const auto qs = quad_settings(tol, budget);
  io::CsvTable table;
  table.push_back({"quantity", "recurrence_or_closed", "quadrature", "abs_diff"});
  for (int n = 0; n <= n_max; ++n) {
    const double rec = radial::gaussian_moment(n, i, r0);
    const auto q = quad::integrate(
        [n, i](double r) { return std::pow(r, n + 1) * std::exp(-2.0 * i * r * r); }, 0.0, r0, qs);
    table.push_back({"I_" + std::to_string(n + 1), io::format_double(rec),
                     io::format_double(q.value), io::format_double(std::abs(rec - q.value))});
  }
  const auto i0q = quad::integrate([i](double r) { return std::exp(-2.0 * i * r * r); }, 0.0, r0, qs);
  const double i0_closed = std::sqrt(M_PI / (8.0 * i)) * std::erf(std::sqrt(2.0 * i) * r0);
  table.push_back({"I_0", io::format_double(i0_closed), io::format_double(i0q.value),
                   io::format_double(std::abs(i0_closed - i0q.value))});
  table.push_back({"I_0_lower_bound", io::format_double(radial::gaussian_i0_lower_bound(i, r0)),
                   io::format_double(i0q.value),
                   i0q.value >= radial::gaussian_i0_lower_bound(i, r0) ? "holds" : "violated"});
  const double doubled = std::sqrt(M_PI / 2.0 * (1.0 - std::exp(-2.0 * i * r0 * r0)) / (2.0 * i));
  table.push_back({"I_0_bound_doubled_variant", io::format_double(doubled),
                   io::format_double(i0q.value), i0q.value >= doubled ? "holds" : "violated"});

  const double a = -i, b = -0.5 * i;
  const auto closed = radial::oscillatory_ijkl(a, b);
  const auto quadm = radial::oscillatory_ijkl_quadrature(a, b, qs);
  const double vals[4][2] = {{closed.I, quadm.I}, {closed.J, quadm.J}, {closed.K, quadm.K},
                             {closed.L, quadm.L}};
  const char* names[4] = {"I", "J", "K", "L"};
  for (int k = 0; k < 4; ++k)
    table.push_back({names[k], io::format_double(vals[k][0]), io::format_double(vals[k][1]),
                     io::format_double(std::abs(vals[k][0] - vals[k][1]))});
  table.push_back({"twodim_recombination", io::format_double(radial::twodim_total_from_moments(closed, a, b)),
                   io::format_double(radial::twodim_total_from_moments(quadm, a, b)), ""});
  io::csv_write(csv_path, table);
  std::cout << "integrals: i=" << i << " r0=" << r0 << " -> " << csv_path << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

int cmd_verify(const std::string& filter) {
  const auto results = verify::run_all(filter);
  if (results.empty()) {
    std::cerr << "verify: no criterion matches filter '" << filter << "'\n";
    return 2;
  }
  int failures = 0;
  for (const auto& r : results) {
    std::printf("%s %-22s (%6.2fs)%s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.seconds,
                r.detail.c_str());
    if (!r.passed) ++failures;
  }
  std::printf("%zu criteria, %d failed\n", results.size(), failures);
  return failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvlab: conformal scalar-curvature families and geometric flows on periodic grids"};
  app.require_subcommand(1);

  double tol = 1e-10;
  long budget = 1000000;
  std::string config_path;

  // example
  auto* example = app.add_subcommand("example", "evaluate one family: total, bounds, JSON report");
  example->option_defaults()->take_last();
  FamilyArgs fa_ex;
  int ex_samples = 200;
  std::string ex_json = "example.json", ex_svg;
  double ex_tol = 1e-10;
  long ex_budget = 10000000;
  add_family_flags(example, fa_ex);
  example->add_option("--samples", ex_samples, "number of R(r) samples in the report");
  example->add_option("--json", ex_json, "JSON report path");
  example->add_option("--svg", ex_svg, "optional SVG plot path");
  example->add_option("--tol", ex_tol, "quadrature absolute tolerance");
  example->add_option("--budget", ex_budget, "quadrature evaluation budget");
  example->add_option("--config", config_path, "key = value config file (flags override)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "sweep i: totals, norms and bound verdicts to CSV");
  sweep->option_defaults()->take_last();
  FamilyArgs fa_sw;
  std::string sw_ilist = "10,40,160", sw_plist = "4,8", sw_csv = "sweep.csv";
  double sw_tol = 1e-9;
  long sw_budget = 50000000, sw_samples = 10000;
  add_family_flags(sweep, fa_sw);
  sweep->add_option("--i-list", sw_ilist, "comma-separated sweep values");
  sweep->add_option("--p-list", sw_plist, "comma-separated W^{1,p} exponents");
  sweep->add_option("--csv", sw_csv, "output CSV path");
  sweep->add_option("--tol", sw_tol, "quadrature absolute tolerance");
  sweep->add_option("--budget", sw_budget, "quadrature evaluation budget");
  sweep->add_option("--samples", sw_samples, "radial sample count for sup norms");
  sweep->add_option("--config", config_path, "key = value config file (flags override)");

  // flow
  auto* flow = app.add_subcommand("flow", "run a geometric flow, time series + snapshots");
  flow->option_defaults()->take_last();
  std::string fl_mode = "conformal2d", fl_csv = "flow.csv", fl_snap;
  int fl_n = 2, fl_res = 64, fl_log = 50;
  double fl_side = 1.0, fl_amp = 0.1, fl_famp = 0.0, fl_tend = 0.05, fl_dt = 0.0;
  flow->add_option("--mode", fl_mode, "conformal2d, ricci, rde, coupled");
  flow->add_option("--n", fl_n, "dimension (2 or 3)");
  flow->add_option("--res", fl_res, "grid points per axis");
  flow->add_option("--side", fl_side, "torus side");
  flow->add_option("--amplitude", fl_amp, "initial metric perturbation amplitude");
  flow->add_option("--f-amplitude", fl_famp, "weight-function amplitude (enables the weight)");
  flow->add_option("--t-end", fl_tend, "final time");
  flow->add_option("--dt", fl_dt, "time step (default: 0.9 x CFL limit)");
  flow->add_option("--log-every", fl_log, "log cadence in steps");
  flow->add_option("--csv", fl_csv, "time-series CSV path");
  flow->add_option("--snapshots", fl_snap, "snapshot path prefix (binary)");
  flow->add_option("--config", config_path, "key = value config file (flags override)");

  // integrals
  auto* integrals = app.add_subcommand("integrals", "moment recurrences and oscillatory integrals");
  integrals->option_defaults()->take_last();
  double in_i = 1.0, in_r0 = 1.0;
  int in_nmax = 6;
  std::string in_csv = "integrals.csv";
  integrals->add_option("--i", in_i, "index i");
  integrals->add_option("--r0", in_r0, "upper limit r0");
  integrals->add_option("--n-max", in_nmax, "largest moment order");
  integrals->add_option("--csv", in_csv, "output CSV path");
  integrals->add_option("--tol", tol, "quadrature absolute tolerance");
  integrals->add_option("--budget", budget, "quadrature evaluation budget");
  integrals->add_option("--config", config_path, "key = value config file (flags override)");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "run the acceptance suite (PASS/FAIL per criterion)");
  verify_cmd->option_defaults()->take_last();
  std::string vf_filter;
  verify_cmd->add_option("--filter", vf_filter, "run only criteria whose name contains this");
  verify_cmd->add_option("--config", config_path, "key = value config file (flags override)");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    for (size_t k = 0; k < args.size(); ++k) {
      if (args[k] == "--config" && k + 1 < args.size())
        config_path = args[k + 1];
      else if (args[k].rfind("--config=", 0) == 0)
        config_path = args[k].substr(9);
    }
    if (!config_path.empty() && !args.empty()) {
      const auto file_flags = config_file_flags(config_path);
      args.insert(args.begin() + 1, file_flags.begin(), file_flags.end());
    }
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
    if (example->parsed())
      return cmd_example(fa_ex, ex_tol, ex_budget, ex_samples, ex_json, ex_svg);
    if (sweep->parsed())
      return cmd_sweep(fa_sw, sw_ilist, sw_plist, sw_tol, sw_budget, sw_samples, sw_csv);
    if (flow->parsed())
      return cmd_flow(fl_mode, fl_n, fl_res, fl_side, fl_amp, fl_famp, fl_tend, fl_dt, fl_log,
                      fl_csv, fl_snap);
    if (integrals->parsed()) return cmd_integrals(in_i, in_r0, in_nmax, tol, budget, in_csv);
    if (verify_cmd->parsed()) return cmd_verify(vf_filter);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const validation_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
