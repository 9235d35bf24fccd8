#include "doctest.h"

#include <cmath>
#include <numbers>

#include "hgmdm/error.hpp"
#include "hgmdm/profile.hpp"
#include "hgmdm/registry.hpp"

using namespace hgmdm;

namespace {

cplx brute_fourier(const Factor1D& f, double eta) {
  const double L = 30.0, h = 1e-3;
  cplx acc = 0.0;
  for (double s = -L; s <= L; s += h) acc += f(s) * std::exp(cplx(0.0, -eta * s));
  return acc * h;
}

FunctionDescriptor values_only(const ProfileFunction& f) {
  FunctionDescriptor d;
  d.value = [f](const GroupPoint& g) { return f(g); };
  return d;
}

}  // namespace

TEST_CASE("one-dimensional Fourier transforms match brute-force quadrature") {
  Factor1D f;
  f.poly = {1.0, cplx(0.0, 0.5), 0.25};
  f.a = 0.7;
  f.s0 = 0.3;
  f.omega = -1.2;
  for (double eta : {-2.0, 0.0, 0.4, 3.0}) {
    const cplx a = f.fourier(eta), b = brute_fourier(f, eta);
    CHECK(std::abs(a - b) < 1e-9);
  }
  CHECK_THROWS_AS(Factor1D{}.fourier(0.0), Error);
}

TEST_CASE("norms and inner products match grid quadrature") {
  const SpatialGrid grid({9.0, 9.0, 9.0}, {91, 91, 91});
  for (const auto& name : registry::profile_names()) {
    const auto f = registry::profile(name);
    const auto sq = f * f.conj();
    const auto q = group::haar_integrate(values_only(sq), grid);
    CHECK(f.norm_sq() == doctest::Approx(q.value.real()).epsilon(1e-9));
  }
  const auto a = registry::profile("gaussian"), b = registry::profile("shifted_gaussian");
  const auto q = group::haar_integrate(values_only(a * b.conj()), grid);
  CHECK(std::abs(a.inner(b) - q.value) < 1e-9);
  CHECK(registry::profile("gaussian").norm_sq() == doctest::Approx(std::pow(std::numbers::pi, 1.5)));
}

TEST_CASE("closed-form left derivatives agree with finite differences") {
  const GroupPoint g{0.4, -0.7, 0.2};
  for (const auto& name : registry::profile_names()) {
    const auto f = registry::profile(name);
    for (Field w : {Field::X, Field::Y, Field::T}) {
      const cplx exact = f.left_derivative(w, g);
      const cplx fd = group::left_field(w, values_only(f), g);
      CHECK(std::abs(exact - fd) < 1e-7);
      CHECK(std::abs(f.apply_field(w)(g) - exact) < 1e-13);
    }
  }
}

TEST_CASE("algebra, dilations and monomials are pointwise") {
  const auto f = registry::profile("gaussian_tphase"), h = registry::profile("shifted_gaussian");
  const GroupPoint g{0.3, 0.1, -0.6};
  CHECK(std::abs((f * h)(g) - f(g) * h(g)) < 1e-14);
  CHECK(std::abs((f + h)(g) - (f(g) + h(g))) < 1e-14);
  CHECK(std::abs(f.conj()(g) - std::conj(f(g))) < 1e-14);
  CHECK(std::abs(f.times_monomial({1, 2, 1})(g) - g.x * g.y * g.y * g.t * f(g)) < 1e-14);
  CHECK(std::abs(f.compose_dilation(2.0)(g) - f(group::dilate(2.0, g))) < 1e-14);
  CHECK(std::abs(f.l2_dilate(2.0)(g) - 4.0 * f(group::dilate(2.0, g))) < 1e-13);
  for (double r : {0.5, 2.0, 8.0}) CHECK(f.l2_dilate(r).norm_sq() == doctest::Approx(f.norm_sq()).epsilon(1e-12));
  CHECK(ProfileFunction::constant(2.0).is_constant());
  CHECK_FALSE(ProfileFunction::constant(2.0).integrable());
  CHECK_THROWS_AS(ProfileFunction::constant(2.0).integral(), Error);
}

TEST_CASE("centre slice integrates the restriction to x = y = 0") {
  const auto f = registry::profile("laguerre0_localized");
  const cplx slice = integrate_slice(f.centre_slice());
  cplx brute = 0.0;
  const double h = 1e-3;
  for (double t = -30.0; t <= 30.0; t += h) brute += f(GroupPoint{0.0, 0.0, t}) * h;
  CHECK(std::abs(slice - brute) < 1e-9);
}

TEST_CASE("profile JSON round trip and registry lookups") {
  for (const auto& name : registry::profile_names()) {
    const auto f = registry::profile(name);
    const auto back = profile_from_json(to_json(f));
    const GroupPoint g{0.2, -0.3, 0.5};
    CHECK(std::abs(back(g) - f(g)) < 1e-15);
    CHECK(std::abs(registry::resolve_profile(to_json(f))(g) - f(g)) < 1e-15);
  }
  CHECK_THROWS_AS(registry::profile("nope"), Error);
  CHECK(registry::has_centre_profile("gaussian"));
  CHECK(registry::has_spatial_factor("t_gaussian"));
  CHECK_THROWS_AS(profile_from_json(nlohmann::json{{"terms", 3}}), Error);
}
