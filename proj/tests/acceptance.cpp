// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "hgmdm/error.hpp"
#include "hgmdm/fourier.hpp"
#include "hgmdm/mdm.hpp"
#include "hgmdm/registry.hpp"
#include "hgmdm/reps.hpp"
#include "hgmdm/symbols.hpp"

using namespace hgmdm;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

GroupPoint random_point(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    const GroupPoint g{radius * u(rng), radius * u(rng), radius * radius * u(rng)};
    if (group::quasi_norm(g) <= radius) return g;
  }
}

const SpatialGrid& spatial() {
  static const SpatialGrid g({8.0, 8.0, 16.0}, {65, 65, 1025});
  return g;
}

PlancherelGrid base_grid(int n_modes) {
  PlancherelConfig c;
  c.n_modes = n_modes;
  c.nodes_per_sign = 64;
  c.lambda_min = 1e-2;
  c.lambda_max = 1e2;
  return PlancherelGrid(c);
}

Outcome plancherel_identity() {
  const auto grid = base_grid(60);
  double worst = 0.0;
  std::string worst_name;
  for (const auto& name : registry::profile_names()) {
    const auto f = registry::profile(name);
    const double direct = f.norm_sq();
    const double err = std::abs(fourier::plancherel_norm(f, grid).value - direct) / direct;
    if (err > worst) worst = err, worst_name = name;
  }
  return {worst < 1e-3, "max rel err " + fmt(worst) + " (" + worst_name + ") vs 1e-3"};
}

Outcome homomorphism() {
  const RepPoint rp(1.0, 40);
  std::mt19937_64 rng(20240607);
  double worst = 0.0;
  int min_block = rp.n_modes;
  for (int p = 0; p < 50; ++p) {
    const GroupPoint g1 = random_point(rng, 2.0), g2 = random_point(rng, 2.0);
    const int b = reps::leading_block(rp, std::max(group::quasi_norm(g1), group::quasi_norm(g2)));
    min_block = std::min(min_block, b);
    if (b == 0) continue;
    const OperatorMatrix d =
        reps::rep_matrix(rp, group::multiply(g1, g2)) - reps::rep_matrix(rp, g1) * reps::rep_matrix(rp, g2);
    worst = std::max(worst, d.topLeftCorner(b, b).operatorNorm());
  }
  return {worst < 1e-8 && min_block > 0,
          "max defect " + fmt(worst) + " vs 1e-8, smallest leading block " + std::to_string(min_block)};
}

Outcome laguerre_identity() {
  const RepPoint rp(1.0, 40);
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int mode = 0; mode <= 3; ++mode)
    for (int i = 0; i < 100; ++i) {
      const GroupPoint g = random_point(rng, 2.0);
      const double rho2 = g.x * g.x + g.y * g.y;
      // e^{it} L_l(rho^2 / 2) with L_l the Laguerre function e^{-s/2} L_l(s).
      const double s = rho2 / 2.0;
      const double poly = std::assoc_laguerre(mode, 0, s);
      const cplx expect = std::exp(cplx(0.0, g.t)) * std::exp(-s / 2.0) * poly;
      worst = std::max(worst, std::abs(reps::matrix_coefficient(rp, mode, g) - expect));
    }
  return {worst < 1e-8, "max abs err " + fmt(worst) + " vs 1e-8 over 400 samples"};
}

Outcome formal_degree() {
  const RepPoint rp(1.0, 40);
  const double exact = 1.0 / (2.0 * std::numbers::pi);
  double worst = 0.0;
  for (int mode : {0, 1}) worst = std::max(worst, std::abs(reps::formal_degree(rp, mode, spatial()).value - exact));
  return {worst < 1e-4, "max |d - 1/(2 pi)| " + fmt(worst) + " vs 1e-4"};
}

QuantizationContext base_context() { return {base_grid(60), spatial()}; }

Outcome concentration() {
  const auto ctx = base_context();
  const auto u1 = registry::profile("gaussian");
  const auto spec = SequenceSpec::concentration(u1);
  std::vector<SeparableSymbol> syms;
  for (const char* s : {"proj:0", "proj:1", "id", "gaussian*id"}) syms.push_back(symbols::parse(s, 60));
  MdmOptions opt;
  opt.tolerance = 5e-2;
  const auto reports = mdm::run_convergence(spec, syms, {1.0, 2.0, 4.0, 8.0}, ctx, opt);
  bool ok = true;
  double worst = 0.0;
  for (const auto& r : reports) {
    ok = ok && r.pass;
    worst = std::max(worst, r.abs_err.back() / r.scale);
  }
  const auto pn = fourier::plancherel_norm(u1, ctx.grid, ctx.transform);
  const double mass = u1.norm_sq();
  const double sum_err = std::abs(pn.value - mass);
  const double slack = 1e-3 * mass + pn.truncation_tail + pn.window_tail;
  ok = ok && sum_err <= slack;
  return {ok, "max err/scale at k=8 " + fmt(worst) + " vs 5e-2, monotone " +
                  (std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.monotone; }) ? "yes"
                                                                                                        : "no") +
                  ", sum rule " + fmt(sum_err) + " vs " + fmt(slack)};
}

Outcome oscillation() {
  const auto ctx = base_context();
  const Factor1D u0 = registry::centre_profile("gaussian");
  const auto spec = SequenceSpec::oscillation(1, u0);
  std::vector<SeparableSymbol> syms;
  for (const char* s : {"proj:0", "proj:1", "proj:2", "proj:3", "t_gaussian*id"}) syms.push_back(symbols::parse(s, 60));
  const auto reports = mdm::run_convergence(spec, syms, {1.0, 2.0, 4.0, 8.0}, ctx);
  const double target = (u0 * u0.conj()).integral().real() / reps::formal_degree_exact(1.0);
  Factor1D phi;
  phi.a = 0.5;
  const double phi_target = (phi * u0 * u0.conj()).integral().real() / reps::formal_degree_exact(1.0);

  const double sel = std::abs(reports[1].values.back() - target) / target;
  double leak = 0.0;
  for (int j : {0, 2, 3}) leak = std::max(leak, std::abs(reports[j].values.back()) / target);
  const double phi_err = std::abs(reports[4].values.back() - phi_target) / phi_target;
  return {sel < 5e-2 && leak < 5e-2 && phi_err < 5e-2,
          "Pi_1 rel err " + fmt(sel) + ", max Pi_j leak " + fmt(leak) + ", phi(t) id rel err " + fmt(phi_err) +
              " vs 5e-2"};
}

Outcome positivity() {
  const auto base = base_context();
  const MdmOptions opt;
  const double k = 8.0;
  std::vector<SequenceSpec> seqs{SequenceSpec::concentration(registry::profile("gaussian")),
                                 SequenceSpec::oscillation(1, registry::centre_profile("gaussian"))};
  const auto dictionary = symbols::expand_specs(
      {"id", "proj:0..3", "sign", "pos", "neg", "mult:bump:0.25:1", "gaussian*id", "X", "R", "unit:0:1"});
  double worst = 0.0;
  for (const auto& spec : seqs) {
    mdm::check_nyquist(spec, k, base.spatial);
    const QuantizationContext ctx{mdm::sequence_grid(spec, k, base.grid, opt), base.spatial, base.transform};
    const auto u = mdm::make_sequence(spec, k);
    for (const auto& s : dictionary) {
      const double v = quantize::positivity_probe(symbols::parse(s, 60), opt.cutoff, u, ctx);
      worst = std::min(worst, v / std::max(1.0, u.norm_sq()));
    }
  }
  const VectorSequence pair{{{1.0, seqs[1]}, {-1.0, seqs[1]}}};
  double gamma_ratio = 0.0;
  for (int sign : {1, -1}) {
    const auto g = mdm::empirical_gamma(pair, 4, sign, k, base, opt);
    gamma_ratio = std::min(gamma_ratio, g.min_eigenvalue / std::max(g.trace, 1e-300));
  }
  return {worst >= -1e-8 && gamma_ratio >= -1e-8,
          "min tau*tau estimate " + fmt(worst) + ", min Gamma eigenvalue/trace " + fmt(gamma_ratio) + " vs -1e-8"};
}

Outcome localization() {
  const auto base = base_context();
  const auto spec = SequenceSpec::oscillation(1, registry::centre_profile("gaussian"));
  const VectorSequence pair{{{1.0, spec}, {-1.0, spec}}};
  const std::vector<SeparableSymbol> p{symbols::parse("X", 4), symbols::parse("X", 4)};
  double residual = 0.0;
  for (int sign : {1, -1}) {
    const auto g = mdm::empirical_gamma(pair, 4, sign, 8.0, base);
    residual = std::max(residual, mdm::localization_check(p, 1, g).residual);
  }
  Eigen::MatrixXcd q(2, 2);
  q << 0.0, -1.0, -1.0, 0.0;
  const auto c = mdm::compensated_liminf_check(pair, q, p, 4, registry::profile("gaussian"), {1.0, 2.0, 4.0, 8.0});
  return {residual < 1e-8 && c.kernel_hypothesis && c.liminf - c.target >= -1e-6,
          "||p0 Gamma p0*|| " + fmt(residual) + " vs 1e-8, liminf " + fmt(c.liminf) + " vs target " +
              fmt(c.target) + " - 1e-6"};
}

Outcome polar() {
  const auto grid = base_grid(60);
  const auto f = registry::profile("gaussian");
  const double direct = fourier::plancherel_norm(f, grid).value;
  const auto p = fourier::polar_dual(
      [&](double lambda) { return fourier::transform(f, RepPoint(lambda, grid.n_modes())).squaredNorm(); }, grid);
  const double err = std::abs(p.total - direct) / direct;
  return {err < 1e-6, "rel diff " + fmt(err) + " vs 1e-6"};
}

Outcome leibniz() {
  const std::array<int, 3> et{0, 0, 1};
  const auto table = symbols::compute_leibniz_coefficients(et);
  std::mt19937_64 rng(11);
  double worst = 0.0;
  for (int p = 0; p < 200; ++p) {
    const GroupPoint g1 = random_point(rng, 2.0), g2 = random_point(rng, 2.0);
    const double lhs = symbols::monomial(group::multiply(g1, g2), et);
    worst = std::max(worst, std::abs(lhs - symbols::leibniz_expand(table, g1, g2)) / std::max(1.0, std::abs(lhs)));
  }
  double xy = 0.0, yx = 0.0;
  for (const auto& e : table) {
    if (e.alpha1 == std::array<int, 3>{1, 0, 0} && e.alpha2 == std::array<int, 3>{0, 1, 0}) xy = e.coefficient;
    if (e.alpha1 == std::array<int, 3>{0, 1, 0} && e.alpha2 == std::array<int, 3>{1, 0, 0}) yx = e.coefficient;
  }
  return {worst <= 1e-15 && xy == 0.5 && yx == -0.5,
          std::to_string(table.size()) + " terms, max rel err " + fmt(worst) + ", cross coefficients " + fmt(xy) +
              ", " + fmt(yx)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double time_limit;  // seconds, 0 for none
  };
  const std::vector<Criterion> criteria{
      {"Plancherel identity, 5 profiles, N=60", plancherel_identity, 120.0},
      {"representation homomorphism, 50 pairs, N=40", homomorphism, 30.0},
      {"Laguerre matrix coefficients, l=0..3", laguerre_identity, 0.0},
      {"formal degree, l=0,1", formal_degree, 0.0},
      {"concentration limits, k=1,2,4,8", concentration, 600.0},
      {"oscillation selectivity, l=1", oscillation, 0.0},
      {"positivity of tau*tau limits and Gamma", positivity, 0.0},
      {"localization and compensated liminf", localization, 0.0},
      {"polar and direct dual integrals", polar, 0.0},
      {"Leibniz table for e_t", leibniz, 0.0},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const Error& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0.0 && secs > c.time_limit) {
      o.pass = false;
      o.detail += ", over the time limit of " + fmt(c.time_limit) + " s";
    }
    if (!o.pass) ++failed;
    std::printf("[%s] criterion %zu: %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, c.name, o.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
