#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "hgmdm/error.hpp"
#include "hgmdm/group.hpp"

using namespace hgmdm;

namespace {

GroupPoint rnd(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  return {u(rng), u(rng), u(rng)};
}

bool close(const GroupPoint& a, const GroupPoint& b, double tol = 1e-12) {
  return std::abs(a.x - b.x) < tol && std::abs(a.y - b.y) < tol && std::abs(a.t - b.t) < tol;
}

FunctionDescriptor sampled(std::function<cplx(const GroupPoint&)> f) {
  FunctionDescriptor d;
  d.value = std::move(f);
  return d;
}

}  // namespace

TEST_CASE("group law: identity, inverse, associativity") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto a = rnd(rng), b = rnd(rng), c = rnd(rng);
    CHECK(close(group::multiply(a, GroupPoint{}), a));
    CHECK(close(group::multiply(a, a.inverse()), GroupPoint{}));
    CHECK(close(group::multiply(group::multiply(a, b), c), group::multiply(a, group::multiply(b, c)), 1e-11));
  }
}

TEST_CASE("group law matches the polarised centre term") {
  const GroupPoint a{1.0, 2.0, 3.0}, b{-0.5, 0.25, 1.0};
  const auto p = group::multiply(a, b);
  CHECK(p.x == doctest::Approx(0.5));
  CHECK(p.y == doctest::Approx(2.25));
  CHECK(p.t == doctest::Approx(4.0 + 0.5 * (1.0 * 0.25 - (-0.5) * 2.0)));
}

TEST_CASE("dilations are automorphisms and scale the quasi-norm") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 50; ++i) {
    const auto a = rnd(rng), b = rnd(rng);
    const double r = 0.3 + i * 0.05;
    CHECK(close(group::dilate(r, group::multiply(a, b)), group::multiply(group::dilate(r, a), group::dilate(r, b)),
                1e-10));
    CHECK(group::quasi_norm(group::dilate(r, a)) == doctest::Approx(r * group::quasi_norm(a)).epsilon(1e-12));
    CHECK(group::quasi_norm(a.inverse()) == doctest::Approx(group::quasi_norm(a)));
  }
  CHECK_THROWS_AS(group::dilate(0.0, GroupPoint{1, 1, 1}), Error);
  CHECK_THROWS_AS(group::dilate(-1.0, GroupPoint{1, 1, 1}), Error);
}

TEST_CASE("triangle constant is finite and close to or above one") {
  const double c = group::measured_triangle_constant(2000, 7);
  CHECK(c > 0.99);
  CHECK(c < 2.0);
}

TEST_CASE("Haar integral of a Gaussian and left invariance") {
  const SpatialGrid grid({7.0, 7.0, 7.0}, {81, 81, 81});
  const auto gauss = [](const GroupPoint& g) { return cplx(std::exp(-(g.x * g.x + g.y * g.y + g.t * g.t))); };
  const auto res = group::haar_integrate(sampled(gauss), grid);
  CHECK(res.value.real() == doctest::Approx(std::pow(std::numbers::pi, 1.5)).epsilon(1e-10));
  CHECK_FALSE(res.underresolved);

  const GroupPoint h{0.4, -0.3, 0.2};
  const auto shifted = group::haar_integrate(
      sampled([&](const GroupPoint& g) { return gauss(group::multiply(h, g)); }), grid);
  CHECK(shifted.value.real() == doctest::Approx(res.value.real()).epsilon(1e-9));

  const SpatialGrid small({1.0, 1.0, 1.0}, {11, 11, 11});
  CHECK(group::haar_integrate(sampled(gauss), small).underresolved);
}

TEST_CASE("left-invariant fields: finite differences against closed forms") {
  // f = x y t: X f = y t - (y/2) x y, Y f = x t + (x/2) x y, T f = x y.
  const auto f = sampled([](const GroupPoint& g) { return cplx(g.x * g.y * g.t); });
  const GroupPoint g{0.7, -0.4, 1.3};
  CHECK(group::left_field(Field::X, f, g).real() ==
        doctest::Approx(g.y * g.t - 0.5 * g.y * g.x * g.y).epsilon(1e-7));
  CHECK(group::left_field(Field::Y, f, g).real() ==
        doctest::Approx(g.x * g.t + 0.5 * g.x * g.x * g.y).epsilon(1e-7));
  CHECK(group::left_field(Field::T, f, g).real() == doctest::Approx(g.x * g.y).epsilon(1e-7));
}

TEST_CASE("sampled functions refuse evaluation outside their box") {
  auto f = sampled([](const GroupPoint&) { return cplx(1.0); });
  f.domain = Box{{1.0, 1.0, 1.0}};
  CHECK_THROWS_AS(f(GroupPoint{2.0, 0.0, 0.0}), Error);
  CHECK(f(GroupPoint{0.5, 0.0, 0.0}).real() == 1.0);
}

TEST_CASE("polar coordinates reproduce the Haar integral") {
  CHECK(group::quasi_sphere_area() == doctest::Approx(2.0 * std::numbers::pi * std::numbers::pi));
  const GroupPoint p = group::quasi_polar_point(1.7, 0.3, 2.0);
  CHECK(group::quasi_norm(p) == doctest::Approx(1.7));

  // exp(-|g|^4) integrates to sigma / 4 = pi^2 / 2.
  const SpatialGrid grid({3.0, 3.0, 9.0}, {121, 121, 241});
  const auto f = sampled([](const GroupPoint& g) {
    const double q = group::quasi_norm(g);
    return cplx(std::exp(-q * q * q * q));
  });
  const auto pc = group::polar_check(f, grid, 200, 64);
  CHECK(pc.rhs == doctest::Approx(std::numbers::pi * std::numbers::pi / 2.0).epsilon(1e-6));
  CHECK(pc.lhs == doctest::Approx(pc.rhs).epsilon(1e-4));
}

TEST_CASE("spatial grid JSON round trip and validation") {
  const SpatialGrid g({2.0, 3.0, 4.0}, {5, 7, 9}, QuadratureKind::Gauss);
  const auto back = SpatialGrid::from_json(g.to_json());
  CHECK(back.to_json() == g.to_json());
  CHECK(back.nodes(2).size() == 9u);
  CHECK_THROWS_AS(SpatialGrid({-1.0, 1.0, 1.0}, {5, 5, 5}), Error);
  CHECK_THROWS_AS(SpatialGrid::from_json(nlohmann::json{{"half_widths", {1, 2}}, {"counts", {3, 3, 3}}}), Error);
}
