#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace hgmdm::special {

/// A one-dimensional quadrature rule.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// L2-normalised Hermite functions h_0..h_{n-1} at s, by the three-term
/// recurrence h_{k+1} = sqrt(2/(k+1)) s h_k - sqrt(k/(k+1)) h_{k-1}.
void hermite_functions(int n, double s, std::span<double> out);

/// Table H(i, k) = h_k(points[i]).
Eigen::MatrixXd hermite_table(int n, std::span<const double> points);

/// Gauss-Hermite rule for weight exp(-s^2). The returned weights are the
/// "exponentially scaled" ones, w_i * exp(s_i^2) = 1 / sum_k h_k(s_i)^2, so
/// that sum_i w_i f(s_i) approximates the plain integral of f whenever f
/// behaves like exp(-s^2) times a smooth factor. Rules are cached.
const QuadratureRule& gauss_hermite(int n);

/// Gauss-Legendre rule on [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

/// Generalised Laguerre polynomial L_n^{(alpha)}(x).
double laguerre(int n, double alpha, double x);

/// Monomial coefficients of L_n (lowest degree first).
std::vector<double> laguerre_coefficients(int n);

double binomial(int n, int k);

}  // namespace hgmdm::special
