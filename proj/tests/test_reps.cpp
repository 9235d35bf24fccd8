#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "hgmdm/error.hpp"
#include "hgmdm/reps.hpp"
#include "hgmdm/special.hpp"

using namespace hgmdm;

namespace {

GroupPoint rnd(std::mt19937_64& rng, double r) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    const GroupPoint g{r * u(rng), r * u(rng), r * r * u(rng)};
    if (group::quasi_norm(g) <= r) return g;
  }
}

// (pi_lambda(g) h_n, h_m) by trapezoid quadrature in u.
cplx entry_oracle(double lambda, int m, int n, const GroupPoint& g) {
  const double s = std::sqrt(std::abs(lambda)), h = 2e-3;
  std::vector<double> hm(static_cast<std::size_t>(m + 1)), hn(static_cast<std::size_t>(n + 1));
  cplx acc = 0.0;
  for (double u = -25.0; u <= 25.0; u += h) {
    special::hermite_functions(m + 1, s * u, hm);
    special::hermite_functions(n + 1, s * (u + g.x), hn);
    acc += hm[static_cast<std::size_t>(m)] * hn[static_cast<std::size_t>(n)] *
           std::exp(cplx(0.0, lambda * (g.t + g.y * u + 0.5 * g.x * g.y)));
  }
  return acc * h * s;
}

}  // namespace

TEST_CASE("representation points validate their arguments") {
  CHECK_THROWS_AS(RepPoint(0.0, 10), Error);
  try {
    RepPoint(0.0, 10);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateRep);
  }
  CHECK_THROWS_AS(RepPoint(1.0, 0), Error);
  try {
    reps::rep_matrix(RepPoint(1.0, 10), GroupPoint{}, 15);
    FAIL("expected a configuration error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Config);
  }
  CHECK(reps::default_nodes(10) == 36);
}

TEST_CASE("matrix entries agree with direct quadrature") {
  for (double lambda : {1.0, -0.6, 2.5}) {
    const GroupPoint g{0.4, -0.3, 0.7};
    const auto m = reps::rep_matrix(RepPoint(lambda, 8), g);
    for (int a = 0; a < 8; a += 3)
      for (int b = 0; b < 8; b += 2) {
        CHECK(std::abs(m(a, b) - entry_oracle(lambda, a, b, g)) < 1e-9);
        CHECK(std::abs(reps::rep_entry(lambda, a, b, g) - m(a, b)) < 1e-12);
      }
  }
}

TEST_CASE("homomorphism and unitarity on the leading block") {
  const RepPoint rp(1.0, 40);
  std::mt19937_64 rng(3);
  double defect = 0.0, unit = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto g1 = rnd(rng, 2.0), g2 = rnd(rng, 2.0);
    const int b = reps::leading_block(rp, std::max(group::quasi_norm(g1), group::quasi_norm(g2)));
    REQUIRE(b > 0);
    const auto p1 = reps::rep_matrix(rp, g1), p2 = reps::rep_matrix(rp, g2);
    const auto d = reps::rep_matrix(rp, group::multiply(g1, g2)) - p1 * p2;
    defect = std::max(defect, d.topLeftCorner(b, b).operatorNorm());
    const auto u = p1 * p1.adjoint() - OperatorMatrix::Identity(40, 40);
    unit = std::max(unit, u.topLeftCorner(b, b).operatorNorm());
  }
  CHECK(defect < 1e-8);
  CHECK(unit < 1e-8);
  CHECK(reps::leading_block(rp, 0.0) == 40);
}

TEST_CASE("infinitesimal generators are derivatives of the representation") {
  const RepPoint rp(1.7, 20);
  const double h = 1e-5;
  const struct {
    Field f;
    GroupPoint step;
  } cases[] = {{Field::X, {h, 0, 0}}, {Field::Y, {0, h, 0}}, {Field::T, {0, 0, h}}};
  for (const auto& c : cases) {
    const auto fd = (reps::rep_matrix(rp, c.step) - reps::rep_matrix(rp, c.step.inverse())) / (2.0 * h);
    const auto d = reps::infinitesimal(rp, c.f);
    CHECK((fd - d).topLeftCorner(15, 15).norm() < 1e-6);
  }
  CHECK((reps::infinitesimal(rp, Field::T) - cplx(0.0, 1.7) * OperatorMatrix::Identity(20, 20)).norm() == 0.0);
  // R = -(X^2 + Y^2) acts diagonally away from the truncation edge.
  const auto X = reps::infinitesimal(rp, Field::X), Y = reps::infinitesimal(rp, Field::Y);
  const OperatorMatrix R = -(X * X + Y * Y);
  CHECK((R - reps::sublaplacian_symbol(rp)).topLeftCorner(19, 19).norm() < 1e-12);
  const auto ev = reps::sublaplacian_eigenvalues(rp);
  CHECK(ev(3) == doctest::Approx(1.7 * 7.0));
}

TEST_CASE("dilation covariance") {
  const RepPoint rp(0.8, 20);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 5; ++i) {
    const auto g = rnd(rng, 1.5);
    const auto a = reps::rep_matrix(rp, group::dilate(2.0, g));
    const auto b = reps::rep_matrix(reps::dilate_rep(2.0, rp), g);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
  }
  CHECK(reps::dilate_rep(3.0, rp).lambda == doctest::Approx(7.2));
}

TEST_CASE("matrix coefficients are Laguerre functions") {
  const RepPoint rp(1.0, 40);
  std::mt19937_64 rng(11);
  for (int l = 0; l < 4; ++l)
    for (int i = 0; i < 100; ++i) {
      const auto g = rnd(rng, 2.0);
      CHECK(std::abs(reps::matrix_coefficient(rp, l, g) - reps::laguerre_coefficient(1.0, l, g)) < 1e-8);
    }
  // l = 0: exp(i t) exp(-(x^2 + y^2) / 4).
  const GroupPoint g{0.5, 0.2, 0.3};
  CHECK(std::abs(reps::laguerre_coefficient(1.0, 0, g) -
                 std::exp(cplx(0.0, 0.3)) * std::exp(-(0.25 + 0.04) / 4.0)) < 1e-15);
  // Negative lambda gives the conjugate of the |lambda| coefficient.
  const cplx neg = reps::matrix_coefficient(RepPoint(-1.0, 40), 1, g);
  CHECK(std::abs(neg - std::conj(reps::laguerre_coefficient(1.0, 1, g))) < 1e-10);
  CHECK_THROWS_AS(reps::matrix_coefficient(RepPoint(1.0, 5), 3, g), Error);
}

TEST_CASE("formal degree from the square-integrated coefficient") {
  const SpatialGrid grid({9.0, 9.0, 1.0}, {91, 91, 3});
  for (double lambda : {1.0, 2.0})
    for (int l : {0, 1}) {
      const auto fd = reps::formal_degree(RepPoint(lambda, 30), l, grid);
      CHECK(fd.value == doctest::Approx(lambda / (2.0 * std::numbers::pi)).epsilon(1e-6));
      CHECK_FALSE(fd.underresolved);
    }
  CHECK(reps::formal_degree_exact(-3.0) == doctest::Approx(3.0 / (2.0 * std::numbers::pi)));
  const SpatialGrid tight({2.0, 2.0, 1.0}, {21, 21, 3});
  CHECK(reps::formal_degree(RepPoint(1.0, 30), 0, tight).underresolved);
}

TEST_CASE("operator matrix JSON round trip") {
  const auto m = reps::rep_matrix(RepPoint(1.3, 6), GroupPoint{0.2, 0.1, -0.4});
  const auto j = matrix_to_json(m);
  CHECK(j.at("dim").get<int>() == 6);
  CHECK((matrix_from_json(j) - m).norm() == 0.0);
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json{{"dim", 2}, {"re", {1, 2}}, {"im", {0, 0}}}), Error);
}
