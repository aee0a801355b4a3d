#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fraclap/ball_solver.hpp"
#include "fraclap/counterexample.hpp"
#include "fraclap/error.hpp"
#include "fraclap/freespace_solver.hpp"
#include "fraclap/parallel.hpp"
#include "fraclap/verify.hpp"

using namespace fraclap;
using nlohmann::json;

namespace {

// usage problems detected after CLI11 is done parsing
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config_path;
  std::optional<double> rel_tol, abs_tol, far_radius;
  std::optional<int> max_subdiv;
  bool sequential = false;
  std::uint64_t seed = 20240607;
  std::string out;  // empty = stdout
};

QuadSpec spec_from_json(const json& j, QuadSpec s) {
  s.rel_tol = j.value("rel_tol", s.rel_tol);
  s.abs_tol = j.value("abs_tol", s.abs_tol);
  s.max_subdiv = j.value("max_subdiv", s.max_subdiv);
  s.far_radius = j.value("far_radius", s.far_radius);
  s.sphere_nodes = j.value("sphere_nodes", s.sphere_nodes);
  s.sphere_theta = j.value("sphere_theta", s.sphere_theta);
  s.sphere_phi = j.value("sphere_phi", s.sphere_phi);
  return s;
}

json spec_to_json(const QuadSpec& s) {
  return {{"rel_tol", s.rel_tol},         {"abs_tol", s.abs_tol},           {"max_subdiv", s.max_subdiv},
          {"far_radius", s.far_radius},   {"sphere_nodes", s.sphere_nodes}, {"sphere_theta", s.sphere_theta},
          {"sphere_phi", s.sphere_phi}};
}

// defaults, then the config file's "quadrature" block, then FRACLAP_* env, then flags
QuadSpec resolve_spec(const Common& c) {
  QuadSpec s;
  if (!c.config_path.empty()) {
    std::ifstream in(c.config_path);
    if (!in) throw UsageError("cannot read config " + c.config_path);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw UsageError(std::string("bad config JSON: ") + e.what());
    }
    s = spec_from_json(j.contains("quadrature") ? j["quadrature"] : j, s);
  }
  s = spec_with_env(s);
  if (c.rel_tol) s.rel_tol = *c.rel_tol;
  if (c.abs_tol) s.abs_tol = *c.abs_tol;
  if (c.far_radius) s.far_radius = *c.far_radius;
  if (c.max_subdiv) s.max_subdiv = *c.max_subdiv;
  s.validate();
  return s;
}

Point parse_point(const std::string& text, int dim, const char* what) {
  std::vector<double> xs;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      xs.push_back(std::stod(tok, &used));
      if (used != tok.size() && tok.find_first_not_of(' ', used) != std::string::npos) throw 0;
    } catch (...) {
      throw UsageError(std::string("bad coordinate in ") + what + ": '" + tok + "'");
    }
  }
  if (static_cast<int>(xs.size()) != dim)
    throw UsageError(std::string(what) + " needs " + std::to_string(dim) + " comma-separated coordinates");
  Point p = Point::zero(dim);
  for (int i = 0; i < dim; ++i) p[i] = xs[i];
  return p;
}

// a JSON bump given inline or as a file name
RadialPolyBump parse_bump(const std::string& arg) {
  std::string text = arg;
  if (!arg.empty() && arg.front() != '{') {
    std::ifstream in(arg);
    if (!in) throw UsageError("rhs/field must be a built-in name, inline JSON or a JSON file: " + arg);
    std::stringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  try {
    return bump_from_json(text);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw UsageError("cannot write " + path);
    }
  }
  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

json header_json(const std::string& cmd, const json& cfg, const Common& c, const QuadSpec& spec) {
  json h = cfg;
  h["command"] = cmd;
  h["quadrature"] = spec_to_json(spec);
  h["sequential"] = c.sequential;
  return h;
}

void write_header(std::ostream& os, const json& h, const Common& c) {
  os << "# fraclap " << FRACLAP_VERSION << "\n";
  os << "# config: " << h.dump() << "\n";
  os << "# seed: " << c.seed << "\n";
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string point_cols(const std::string& name, int N) {
  if (N == 1) return name;
  std::string s;
  for (int i = 0; i < N; ++i) s += (i ? "," : "") + name + std::to_string(i + 1);
  return s;
}

std::string point_vals(const Point& p) {
  std::string s;
  for (int i = 0; i < p.dim(); ++i) s += (i ? "," : "") + num(p[i]);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fraclap: Green functions, solvers and checks for higher-order fractional Laplacians"};
  app.require_subcommand(1);
  app.set_version_flag("--version", FRACLAP_VERSION);

  Common c;
  int dim = 1;
  double order = 1.5;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", c.config_path, "JSON file; its \"quadrature\" block sets tolerances")
        ->check(CLI::ExistingFile);
    sub->add_option("--rel-tol", c.rel_tol, "relative quadrature tolerance");
    sub->add_option("--abs-tol", c.abs_tol, "absolute quadrature tolerance");
    sub->add_option("--far-radius", c.far_radius, "far-field cutoff radius");
    sub->add_option("--max-subdiv", c.max_subdiv, "adaptive subdivision budget");
    sub->add_flag("--sequential", c.sequential, "single-threaded, bit-exact reruns");
    sub->add_option("--seed", c.seed, "seed echoed in the header and used for random sampling");
  };
  auto add_ns = [&](CLI::App* sub, bool order_required) {
    sub->add_option("--dim", dim, "space dimension (1, 2 or 3)")->check(CLI::Range(1, 3));
    auto o = sub->add_option("--order", order, "order s > 0");
    if (order_required) o->required();
  };

  // green-eval
  auto* green_cmd = app.add_subcommand("green-eval", "Green function of the unit ball at (x, y)");
  std::string gx, gy;
  add_common(green_cmd);
  add_ns(green_cmd, true);
  green_cmd->add_option("--x", gx, "comma-separated point")->required();
  green_cmd->add_option("--y", gy, "comma-separated point")->required();
  green_cmd->add_option("--out", c.out, "CSV path (default stdout)");

  // frac-eval
  auto* frac_cmd = app.add_subcommand("frac-eval", "pointwise (-Delta)^s of a radial polynomial bump");
  std::string fpoint, ffield;
  std::optional<double> ftol, fh;
  add_common(frac_cmd);
  add_ns(frac_cmd, true);
  frac_cmd->add_option("--point", fpoint, "comma-separated point")->required();
  frac_cmd->add_option("--field", ffield, "bump as inline JSON or a JSON file")->required();
  frac_cmd->add_option("--tol", ftol, "relative tolerance (same as --rel-tol)");
  frac_cmd->add_option("--sigma-first", fh, "use sigma quadrature then FD with this step (for low smoothness)");
  frac_cmd->add_option("--out", c.out, "CSV path (default stdout)");

  // solve-ball
  auto* ball_cmd = app.add_subcommand("solve-ball", "solve (-Delta)^s u = f in the unit ball, u = 0 outside");
  std::string brhs = "one";
  int bgrid = 101;
  add_common(ball_cmd);
  add_ns(ball_cmd, true);
  ball_cmd->add_option("--rhs", brhs, "one | bump | inline JSON bump | JSON file")->capture_default_str();
  ball_cmd->add_option("--grid", bgrid, "interior points along the first axis")->check(CLI::Range(1, 1000000));
  ball_cmd->add_option("--out", c.out, "CSV path (default stdout)");

  // solve-free
  auto* free_cmd = app.add_subcommand("solve-free", "F_{N,s} * f on a cube grid");
  std::string frhs = "bump";
  int fgrid = 11;
  double fext = 3.0;
  bool regime_check = false;
  add_common(free_cmd);
  add_ns(free_cmd, true);
  free_cmd->add_option("--rhs", frhs, "bump | inline JSON bump | JSON file")->capture_default_str();
  free_cmd->add_option("--grid", fgrid, "points per axis")->check(CLI::Range(1, 100000));
  free_cmd->add_option("--extent", fext, "cube half-width")->check(CLI::PositiveNumber);
  free_cmd->add_flag("--regime-check", regime_check, "require 2s < N and a strictly positive minimum");
  free_cmd->add_option("--out", c.out, "CSV path (default stdout)");

  // counterexample
  auto* ce_cmd = app.add_subcommand("counterexample", "build and verify the two-ball sign-changing solution");
  std::optional<double> margin;
  std::optional<int> cgrid;
  std::string ce_out = "report.json";
  add_common(ce_cmd);
  add_ns(ce_cmd, false);
  ce_cmd->add_option("--margin", margin, "a = margin * threshold factor (> 1)");
  ce_cmd->add_option("--grid", cgrid, "points per component (N = 1) or per axis");
  ce_cmd->add_option("--out", ce_out, "report path; fields.csv goes next to it")->capture_default_str();

  // verify-all
  auto* ver_cmd = app.add_subcommand("verify-all", "run the identity checks");
  std::optional<int> vdim;
  std::optional<double> vorder;
  std::vector<std::string> checks{"all"};
  std::string report = "report.json";
  add_common(ver_cmd);
  ver_cmd->add_option("--dim", vdim, "restrict to this dimension")->check(CLI::Range(1, 3));
  ver_cmd->add_option("--order", vorder, "restrict to this order");
  ver_cmd->add_option("--checks", checks, "check names, or all")->delimiter(',');
  ver_cmd->add_option("--report", report, "report path")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (ftol) c.rel_tol = ftol;
    set_sequential(c.sequential);
    QuadSpec spec = resolve_spec(c);

    if (*green_cmd) {
      KernelContext ctx(dim, order, spec);
      Point x = parse_point(gx, dim, "--x"), y = parse_point(gy, dim, "--y");
      double G = green(x, y, ctx);
      Output out(c.out);
      write_header(out.os(), header_json("green-eval", {{"dim", dim}, {"order", order}, {"x", gx}, {"y", gy}}, c, spec), c);
      out.os() << point_cols("x", dim) << "," << point_cols("y", dim) << ",G,rho,bracket\n";
      out.os() << point_vals(x) << "," << point_vals(y) << "," << num(G) << "," << num(rho(x, y)) << ","
               << num(bracket(x, y)) << "\n";
      return 0;
    }

    if (*frac_cmd) {
      KernelContext ctx(dim, order, spec);
      Point x = parse_point(fpoint, dim, "--point");
      RadialPolyBump u = parse_bump(ffield);
      if (u.center().dim() != dim) throw UsageError("field dimension does not match --dim");
      FracResult r;
      if (fh)
        r.value = frac_s_sigma_first(EvaluableField::from_bump(u), x, ctx, *fh), r.err = std::nan("");
      else
        r = frac_s_smooth_eval(u, x, ctx);
      Output out(c.out);
      json cfg = {{"dim", dim}, {"order", order}, {"point", fpoint}, {"field", json::parse(to_json(u))}};
      if (fh) cfg["sigma_first_h"] = *fh;
      write_header(out.os(), header_json("frac-eval", cfg, c, spec), c);
      out.os() << point_cols("x", dim) << ",value,err\n" << point_vals(x) << "," << num(r.value) << "," << num(r.err) << "\n";
      return 0;
    }

    if (*ball_cmd) {
      KernelContext ctx(dim, order, spec);
      BallProblem p;
      if (brhs == "one") {
        p = BallProblem::constant(ctx, 1.0);
      } else {
        RadialPolyBump b = brhs == "bump" ? RadialPolyBump::single(Point::zero(dim), 0.5, 2.0) : parse_bump(brhs);
        if (b.center().dim() != dim) throw UsageError("rhs dimension does not match --dim");
        p = BallProblem{ctx, EvaluableField::from_bump(b), brhs == "bump" ? "bump" : "json"};
      }
      // open grid along e1, endpoints excluded so d(x) > 0
      std::vector<Point> xs(bgrid);
      for (int i = 0; i < bgrid; ++i) xs[i] = Point::axis(dim, 0, -1.0 + 2.0 * (i + 1) / (bgrid + 1));
      std::vector<double> u(bgrid);
      parallel_for(xs.size(), [&](std::size_t i) { u[i] = solve_ball(p, xs[i]); });
      Output out(c.out);
      write_header(out.os(), header_json("solve-ball", {{"dim", dim}, {"order", order}, {"rhs", brhs}, {"grid", bgrid}}, c, spec), c);
      out.os() << point_cols("x", dim) << ",u,d_pow_minus_s_u\n";
      for (int i = 0; i < bgrid; ++i) {
        double d = 1.0 - xs[i].norm();
        out.os() << point_vals(xs[i]) << "," << num(u[i]) << "," << num(u[i] / std::pow(d, order)) << "\n";
      }
      return 0;
    }

    if (*free_cmd) {
      KernelContext ctx(dim, order, spec);
      if (frhs == "one") throw UsageError("solve-free needs a compactly supported rhs");
      RadialPolyBump b = frhs == "bump" ? RadialPolyBump::single(Point::zero(dim), 1.0, 2.0) : parse_bump(frhs);
      if (b.center().dim() != dim) throw UsageError("rhs dimension does not match --dim");
      FreeProblem p{ctx, b};
      auto grid = cube_grid(dim, fext, fgrid);
      std::vector<double> u(grid.size());
      double umin = 0;
      if (regime_check) {
        // positivity_scan enforces the regime and nonnegativity of the rhs
        umin = positivity_scan(p, grid);
      }
      parallel_for(grid.size(), [&](std::size_t i) { u[i] = solve_free(p, grid[i]); });
      Output out(c.out);
      json cfg = {{"dim", dim}, {"order", order}, {"rhs", json::parse(to_json(b))}, {"grid", fgrid},
                  {"extent", fext}, {"regime", p.regime()}, {"regime_check", regime_check}};
      if (regime_check) cfg["min_u"] = umin;
      write_header(out.os(), header_json("solve-free", cfg, c, spec), c);
      out.os() << point_cols("x", dim) << ",u\n";
      for (std::size_t i = 0; i < grid.size(); ++i) out.os() << point_vals(grid[i]) << "," << num(u[i]) << "\n";
      if (regime_check && !(umin > 0)) {
        std::cerr << "fraclap: minimum of u is " << umin << ", not strictly positive\n";
        return 1;
      }
      return 0;
    }

    if (*ce_cmd) {
      CEConfig cfg = CEConfig::standard(dim, order);
      if (margin) cfg.margin = *margin;
      if (cgrid) cfg.grid = *cgrid;
      cfg.spec = spec;
      try {
        cfg.validate();
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
      auto res = build(cfg);
      auto rep = verify_ce(res);
      json j = {{"version", FRACLAP_VERSION},
                {"seed", c.seed},
                {"config", header_json("counterexample", {{"dim", dim}, {"order", order}, {"margin", cfg.margin}, {"grid", cfg.grid}}, c, spec)},
                {"C", res.C},
                {"a", res.a},
                {"threshold", res.threshold},
                {"report", json::parse(rep.to_json())}};
      {
        std::ofstream o(ce_out);
        if (!o) throw UsageError("cannot write " + ce_out);
        o << j.dump(2) << "\n";
      }
      auto fields = (std::filesystem::path(ce_out).parent_path() / "fields.csv").string();
      std::ofstream f(fields);
      if (!f) throw UsageError("cannot write " + fields);
      write_header(f, j["config"], c);
      f << point_cols("x", dim) << ",u,f,component\n";
      for (const auto& smp : res.samples)
        f << point_vals(smp.x) << "," << num(smp.u) << "," << num(smp.f) << "," << (smp.component ? "A" : "D") << "\n";
      std::cout << (rep.passed ? "PASS" : "FAIL") << " counterexample a=" << res.a << " f_min=" << rep.f_min
                << " pairing_D=" << rep.pairing_D << " pairing_A=" << rep.pairing_A << "\n";
      return rep.passed ? 0 : 1;
    }

    if (*ver_cmd) {
      SuiteConfig sc;
      sc.seed = c.seed;
      sc.dim = vdim;
      sc.order = vorder;
      sc.spec = spec;
      std::vector<CheckReport> reps;
      try {
        reps = run_suite(checks, sc);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::UnknownCheck) throw UsageError(e.what());
        throw;
      }
      json cfg = {{"checks", checks}};
      if (vdim) cfg["dim"] = *vdim;
      if (vorder) cfg["order"] = *vorder;
      json list = json::array();
      bool ok = true;
      for (const auto& r : reps) {
        list.push_back(to_json(r));
        ok = ok && r.passed;
      }
      json j = {{"version", FRACLAP_VERSION}, {"seed", c.seed}, {"config", header_json("verify-all", cfg, c, spec)},
                {"all_passed", ok}, {"checks", list}};
      std::ofstream o(report);
      if (!o) throw UsageError("cannot write " + report);
      o << j.dump(2) << "\n";
      for (const auto& r : reps)
        if (!r.passed) std::cout << "FAIL " << r.name << " residual=" << r.residual << " tol=" << r.tolerance << "\n";
      std::cout << reps.size() << " checks, " << (ok ? "all passed" : "failures above") << "\n";
      return ok ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << "fraclap: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "fraclap: " << e.what() << "\n";
    bool usage = e.kind() == ErrorKind::Config || e.kind() == ErrorKind::InvalidOrder;
    return usage ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "fraclap: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
