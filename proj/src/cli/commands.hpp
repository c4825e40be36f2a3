#pragma once

#include <iosfwd>
#include <string>
#include <vector>

// Subcommand entry points for the superpsc tool. They live in the library so
// the test suite can drive them in-process; main.cpp only parses flags and
// routes streams. Every command writes its primary output (report or CSV) to
// `out` and human diagnostics (timing, progress) to `diag`, and returns the
// process exit code: 0 success, 1 usage or input error, 2 inconclusive
// classification, 3 failed example assertion.
//
// Reports depend only on the inputs echoed inside them. Timing never goes
// into the report stream, so two runs with the same inputs and seed produce
// byte-identical reports regardless of thread count or machine load.

namespace spc::cli {

struct CheckOptions {
  std::string domain;      // builtin name; mutually exclusive with expr
  std::string expr;        // defining-function source; requires n
  int n = 0;               // ambient dimension (builtins: optional override)
  int samples = 200;
  unsigned long long seed = 7;
  double tol_boundary = 1e-10;
  std::string l2_variant = "eq311";  // "eq311" (curvature-corrected, the
                                     // default) or "def12" (plain form)
  int threads = 0;         // 0 = logical cores
};

int cmd_check(const CheckOptions& opt, std::ostream& out, std::ostream& diag);

struct ExamplesOptions {
  std::string only;  // "", "example51", or "example52"
  int samples = 500;
  unsigned long long seed = 7;
};

int cmd_examples(const ExamplesOptions& opt, std::ostream& out,
                 std::ostream& diag);

struct ApproxOptions {
  std::string domain = "ellipsoid";
  std::string axes;  // comma list, ellipsoid only: "--a 2,1" sets a1, a2
  int n = 0;
  int rays = 10;
  unsigned long long seed = 7;
};

int cmd_approx(const ApproxOptions& opt, std::ostream& out, std::ostream& diag);

struct SolveRadialOptions {
  int n = 2;
  int nodes = 2000;
  double eps = 1e-2;
  double tol = 1e-9;
};

int cmd_solve_radial(const SolveRadialOptions& opt, std::ostream& out,
                     std::ostream& diag);

struct SpectrumOptions {
  int n = 2;
  std::string s_range;  // "lo:hi:step" inclusive; empty = default grid
  double eps_c = 1e-5;
  int panel_points = 32;
};

int cmd_spectrum(const SpectrumOptions& opt, std::ostream& out,
                 std::ostream& diag);

// "lo:hi:step" -> inclusive grid. Throws std::invalid_argument on bad syntax,
// step <= 0, or hi < lo.
std::vector<double> parse_range(const std::string& text);

}  // namespace spc::cli
