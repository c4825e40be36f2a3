#include <fstream>
#include <functional>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "cli/commands.hpp"

namespace {

// Primary output goes to --out when given, stdout otherwise; diagnostics
// always go to stderr.
int with_output(const std::string& path,
                const std::function<int(std::ostream&)>& fn) {
  if (path.empty()) return fn(std::cout);
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot open " << path << " for writing\n";
    return 1;
  }
  int code = fn(f);
  f.flush();
  if (!f) {
    std::cerr << "error: short write to " << path << '\n';
    return 1;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "superpsc: boundary invariants, defect scans, and model solvers for "
      "strictly pseudoconvex domains"};
  app.require_subcommand(1);

  spc::cli::CheckOptions check_opt;
  std::string check_out;
  CLI::App* check =
      app.add_subcommand("check", "classify a domain from boundary samples");
  check->add_option("--domain", check_opt.domain, "builtin domain name");
  check->add_option("--expr", check_opt.expr,
                    "defining function r(z), negative inside");
  check->add_option("--n", check_opt.n, "ambient complex dimension");
  check->add_option("--samples", check_opt.samples, "boundary sample count");
  check->add_option("--seed", check_opt.seed, "sampling seed");
  check->add_option("--tol-boundary", check_opt.tol_boundary,
                    "boundary residual tolerance");
  check->add_option("--l2-variant", check_opt.l2_variant, "eq311 or def12");
  check->add_option("--threads", check_opt.threads,
                    "worker threads, 0 = logical cores");
  check->add_option("--out", check_out, "write the JSON report to this file");

  spc::cli::ExamplesOptions ex_opt;
  std::string ex_out;
  CLI::App* examples =
      app.add_subcommand("examples", "run the built-in worked examples");
  examples->add_option("--only", ex_opt.only, "example51 or example52");
  examples->add_option("--samples", ex_opt.samples, "boundary sample count");
  examples->add_option("--seed", ex_opt.seed, "sampling seed");
  examples->add_option("--out", ex_out, "write the assertion log to this file");

  spc::cli::ApproxOptions ap_opt;
  std::string ap_out;
  CLI::App* approx = app.add_subcommand(
      "approx", "convergence slopes of the approximate defining functions");
  approx->add_option("--domain", ap_opt.domain, "builtin domain name");
  approx->add_option("--a", ap_opt.axes,
                     "ellipsoid axis coefficients, e.g. 2,1");
  approx->add_option("--n", ap_opt.n, "ambient complex dimension");
  approx->add_option("--rays", ap_opt.rays, "number of boundary rays");
  approx->add_option("--seed", ap_opt.seed, "sampling seed");
  approx->add_option("--out", ap_out, "write the CSV table to this file");

  spc::cli::SolveRadialOptions so_opt;
  std::string so_out;
  CLI::App* solve =
      app.add_subcommand("solve-radial", "solve the radial model problem");
  solve->add_option("--n", so_opt.n, "ambient complex dimension");
  solve->add_option("--nodes", so_opt.nodes, "mesh intervals");
  solve->add_option("--eps", so_opt.eps, "mesh clustering parameter");
  solve->add_option("--tol", so_opt.tol, "scaled residual tolerance");
  solve->add_option("--out", so_out, "write the profile CSV to this file");

  spc::cli::SpectrumOptions sp_opt;
  std::string sp_out;
  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "Rayleigh quotient scan for the model metric");
  spectrum->add_option("--n", sp_opt.n, "ambient complex dimension");
  spectrum->add_option("--s", sp_opt.s_range, "exponent grid lo:hi:step");
  spectrum->add_option("--eps-c", sp_opt.eps_c, "cutoff width");
  spectrum->add_option("--panel", sp_opt.panel_points,
                       "Gauss-Legendre points per panel");
  spectrum->add_option("--out", sp_out, "write the scan CSV to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (check->parsed())
    return with_output(check_out, [&](std::ostream& os) {
      return spc::cli::cmd_check(check_opt, os, std::cerr);
    });
  if (examples->parsed())
    return with_output(ex_out, [&](std::ostream& os) {
      return spc::cli::cmd_examples(ex_opt, os, std::cerr);
    });
  if (approx->parsed())
    return with_output(ap_out, [&](std::ostream& os) {
      return spc::cli::cmd_approx(ap_opt, os, std::cerr);
    });
  if (solve->parsed())
    return with_output(so_out, [&](std::ostream& os) {
      return spc::cli::cmd_solve_radial(so_opt, os, std::cerr);
    });
  if (spectrum->parsed())
    return with_output(sp_out, [&](std::ostream& os) {
      return spc::cli::cmd_spectrum(sp_opt, os, std::cerr);
    });
  return 1;
}
