#include "doctest.h"

#include <cmath>
#include <numbers>

#include "hgmdm/error.hpp"
#include "hgmdm/mdm.hpp"
#include "hgmdm/registry.hpp"

using namespace hgmdm;

namespace {

const int N = 24;

const QuantizationContext& ctx() {
  static const QuantizationContext c = [] {
    PlancherelConfig pc;
    pc.n_modes = N;
    pc.nodes_per_sign = 32;
    return QuantizationContext{PlancherelGrid(pc), SpatialGrid({8.0, 8.0, 16.0}, {33, 33, 1025})};
  }();
  return c;
}

SequenceSpec conc() { return SequenceSpec::concentration(registry::profile("gaussian")); }
SequenceSpec osc(int l) { return SequenceSpec::oscillation(l, registry::centre_profile("gaussian")); }

double u0_sq() {
  const auto u0 = registry::centre_profile("gaussian");
  return (u0 * u0.conj()).integral().real();
}

}  // namespace

TEST_CASE("sequence profiles") {
  const GroupPoint g{0.3, -0.4, 0.2};
  CHECK(std::abs(mdm::make_sequence(conc(), 1.0)(g) - registry::profile("gaussian")(g)) < 1e-15);
  const cplx expect = std::exp(cplx(0.0, g.t)) * std::exp(-(g.x * g.x + g.y * g.y) / 4.0) *
                      registry::centre_profile("gaussian")(g.t);
  CHECK(std::abs(mdm::make_sequence(osc(0), 1.0)(g) - expect) < 1e-15);
  // l = 2 at scale k against exp(-r/2) L_2(r), r = k^2 (x^2 + y^2) / 2.
  const double k = 3.0, r = k * k * (g.x * g.x + g.y * g.y) / 2.0;
  const double lag = 1.0 - 2.0 * r + r * r / 2.0;
  const cplx e2 = k * std::exp(cplx(0.0, k * k * g.t)) * std::exp(-r / 2.0) * lag *
                  registry::centre_profile("gaussian")(g.t);
  CHECK(std::abs(mdm::make_sequence(osc(2), k)(g) - e2) < 1e-13);
  CHECK_THROWS_AS(mdm::make_sequence(conc(), 0.5), Error);
  CHECK_THROWS_AS(SequenceSpec::oscillation(-1, registry::centre_profile("gaussian")), Error);
}

TEST_CASE("sequence norms do not depend on k") {
  const double m1 = registry::profile("gaussian").norm_sq();
  for (double k : {1.0, 2.0, 8.0}) {
    CHECK(mdm::make_sequence(conc(), k).norm_sq() == doctest::Approx(m1).epsilon(1e-12));
    for (int l : {0, 1, 3})
      CHECK(mdm::make_sequence(osc(l), k).norm_sq() ==
            doctest::Approx(u0_sq() / reps::formal_degree_exact(1.0)).epsilon(1e-10));
  }
}

TEST_CASE("Nyquist check names the required t-grid") {
  const SpatialGrid coarse({8.0, 8.0, 16.0}, {33, 33, 257});
  CHECK_NOTHROW(mdm::check_nyquist(osc(1), 2.0, coarse));
  try {
    mdm::check_nyquist(osc(1), 8.0, coarse);
    FAIL("expected underresolved-oscillation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnderresolvedOscillation);
    CHECK(std::string(e.what()).find("t-nodes") != std::string::npos);
  }
  CHECK_NOTHROW(mdm::check_nyquist(conc(), 8.0, coarse));
}

TEST_CASE("weak limits vanish") {
  const auto test = registry::profile("gaussian");
  const double v1 = std::abs(mdm::weak_limit_probe(conc(), 1.0, test));
  double prev = v1;
  for (double k : {2.0, 4.0, 8.0}) {
    const double v = std::abs(mdm::weak_limit_probe(conc(), k, test));
    CHECK(v < prev);
    prev = v;
  }
  CHECK(prev < 0.2 * v1);
  CHECK(std::abs(mdm::weak_limit_probe(osc(1), 4.0, test)) < 1e-6);
  CHECK(mdm::weak_limit_probe(conc(), 2.0, ProfileFunction::zero()) == cplx(0.0));
}

TEST_CASE("limit predictions") {
  const double d = reps::formal_degree_exact(1.0);
  for (int l : {0, 1, 2}) {
    CHECK(mdm::predict_limit(osc(l), symbols::parse("proj:" + std::to_string(l), N), ctx()).real() ==
          doctest::Approx(u0_sq() / d));
    CHECK(std::abs(mdm::predict_limit(osc(l), symbols::parse("proj:" + std::to_string(l + 1), N), ctx())) == 0.0);
  }
  // phi(t) I: (1/d) int phi(0, 0, t) |u0|^2 dt.
  const auto u0 = registry::centre_profile("gaussian");
  Factor1D phi_t;
  phi_t.a = 0.5;
  const double expect = (phi_t * u0 * u0.conj()).integral().real() / d;
  CHECK(mdm::predict_limit(osc(1), symbols::parse("t_gaussian*id", N), ctx()).real() == doctest::Approx(expect));

  // Concentration: the projector limits sum to the Plancherel value of u1.
  cplx sum = 0.0;
  for (int j = 0; j < N; ++j) sum += mdm::predict_limit(conc(), symbols::parse("proj:" + std::to_string(j), N), ctx());
  const auto pn = fourier::plancherel_norm(registry::profile("gaussian"), ctx().grid);
  CHECK(sum.real() == doctest::Approx(pn.value).epsilon(1e-12));
  CHECK(mdm::predict_limit(conc(), symbols::parse("gaussian*id", N), ctx()).real() ==
        doctest::Approx(pn.value).epsilon(1e-12));

  try {
    mdm::predict_limit(conc(), symbols::parse("X", N), ctx());
    FAIL("expected invalid-symbol");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidSymbol);
  }
}

TEST_CASE("dual grids follow the sequence") {
  const MdmOptions opt;
  const auto gc = mdm::sequence_grid(conc(), 4.0, ctx().grid, opt);
  CHECK(gc.lambdas().back() == doctest::Approx(16.0 * ctx().grid.lambdas().back()));
  const auto go = mdm::sequence_grid(osc(1), 4.0, ctx().grid, opt);
  double lo = 1e300, hi = 0.0;
  for (double l : go.lambdas()) {
    CHECK(l > 0.0);
    lo = std::min(lo, l);
    hi = std::max(hi, l);
  }
  CHECK(lo < 16.0 - 6.0);
  CHECK(hi > 16.0 + 6.0);
  // k = 1: the window reaches below the floor and gains a negative part.
  const auto g1 = mdm::sequence_grid(osc(1), 1.0, ctx().grid, opt);
  CHECK(*std::min_element(g1.lambdas().begin(), g1.lambdas().end()) < 0.0);
}

TEST_CASE("convergence reports") {
  const std::vector<SeparableSymbol> syms{symbols::parse("proj:0", N), SeparableSymbol::zero()};
  const auto reports = mdm::run_convergence(conc(), syms, {1.0, 2.0, 4.0}, ctx());
  REQUIRE(reports.size() == 2u);
  const auto& r = reports[0];
  CHECK(r.abs_err[1] < r.abs_err[0]);
  CHECK(r.abs_err[2] < r.abs_err[1]);
  CHECK(r.monotone);
  REQUIRE(r.fitted_order.has_value());
  CHECK(*r.fitted_order > 1.0);
  for (const auto& v : reports[1].values) CHECK(v == cplx(0.0));
  CHECK(reports[1].pass);
  const auto j = r.to_json();
  CHECK(j.contains("fitted_order"));
  CHECK(j.at("values").size() == 3u);
  CHECK_THROWS_AS(mdm::run_convergence(conc(), syms, {2.0, 1.0}, ctx()), Error);
  CHECK_THROWS_AS(mdm::run_convergence(conc(), syms, {}, ctx()), Error);

  double res = 1.0;
  const auto p = mdm::fit_order({1, 2, 4, 8}, {1.0, 0.25, 0.0625, 0.015625}, 0.0, &res);
  REQUIRE(p.has_value());
  CHECK(*p == doctest::Approx(2.0));
  CHECK(res < 1e-12);
  CHECK_FALSE(mdm::fit_order({1, 2}, {0.0, 0.0}, 1e-10).has_value());
}

TEST_CASE("joint measures of synthetic pairs") {
  const std::vector<SeparableSymbol> syms{symbols::parse("proj:1", N)};
  const VectorSequence same{{{1.0, osc(1)}, {1.0, osc(1)}}};
  const VectorSequence opposite{{{1.0, osc(1)}, {-1.0, osc(1)}}};
  const auto a = mdm::joint_mdm(same, syms, {4.0}, ctx()).front().values.front();
  const auto b = mdm::joint_mdm(opposite, syms, {4.0}, ctx()).front().values.front();
  CHECK(std::abs(a[0] - a[1]) < 1e-12 * std::abs(a[0]));
  CHECK(std::abs(a[0] - a[3]) < 1e-12 * std::abs(a[0]));
  CHECK(std::abs(b[1] + b[0]) < 1e-12 * std::abs(b[0]));

  // Distinct dual atoms: the cross term decays.
  const VectorSequence mixed{{{1.0, osc(1)}, {1.0, conc()}}};
  const auto m = mdm::joint_mdm(mixed, {SeparableSymbol::identity()}, {1.0, 4.0}, ctx()).front().values;
  CHECK(std::abs(m[1][1]) < 0.25 * std::abs(m[0][1]));
}

TEST_CASE("Gamma blocks, localization and the compensated check") {
  const VectorSequence pair{{{1.0, osc(1)}, {-1.0, osc(1)}}};
  const auto gam = mdm::empirical_gamma(pair, 4, 1, 4.0, ctx());
  CHECK(gam.gamma.rows() == 8);
  CHECK(gam.min_eigenvalue >= -1e-8 * gam.trace);
  CHECK(gam.trace > 0.0);
  CHECK((gam.gamma - gam.gamma.adjoint()).norm() < 1e-10 * gam.trace);

  const std::vector<SeparableSymbol> p{symbols::parse("X", 4), symbols::parse("X", 4)};
  CHECK(mdm::localization_check(p, 1, gam).residual < 1e-10 * gam.trace);
  const std::vector<SeparableSymbol> zero{SeparableSymbol::zero(), SeparableSymbol::zero()};
  CHECK(mdm::localization_check(zero, 0, gam).residual == 0.0);
  const std::vector<SeparableSymbol> pmix{symbols::parse("X", 4), symbols::parse("Y", 4)};
  CHECK(mdm::localization_check(pmix, 1, gam).residual > 1e-3 * gam.trace);

  const auto phi = registry::profile("gaussian");
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(2, 2);
  const auto c1 = mdm::compensated_liminf_check(pair, id, p, 4, phi, {1.0, 2.0, 4.0});
  for (double v : c1.values) CHECK(v >= 0.0);
  CHECK(c1.pass);

  Eigen::MatrixXcd q(2, 2);
  q << 0.0, -1.0, -1.0, 0.0;
  const auto c2 = mdm::compensated_liminf_check(pair, q, p, 4, phi, {1.0, 2.0, 4.0});
  CHECK(c2.min_eig_q < 0.0);
  CHECK(c2.kernel_hypothesis);
  CHECK(c2.liminf >= -1e-6);
  CHECK(c2.pass);

  Eigen::MatrixXcd bad(2, 2);
  bad << 0.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(mdm::compensated_liminf_check(pair, bad, p, 4, phi, {1.0}), Error);
}
