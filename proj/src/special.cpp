#include "hgmdm/special.hpp"

#include "hgmdm/error.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace hgmdm::special {

void hermite_functions(int n, double s, std::span<double> out) {
  if (n <= 0) return;
  out[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * s * s);
  if (n == 1) return;
  out[1] = std::sqrt(2.0) * s * out[0];
  for (int k = 1; k + 1 < n; ++k) {
    out[k + 1] = std::sqrt(2.0 / (k + 1)) * s * out[k] - std::sqrt(static_cast<double>(k) / (k + 1)) * out[k - 1];
  }
}

Eigen::MatrixXd hermite_table(int n, std::span<const double> points) {
  Eigen::MatrixXd table(static_cast<Eigen::Index>(points.size()), n);
  std::vector<double> row(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < points.size(); ++i) {
    hermite_functions(n, points[i], row);
    for (int k = 0; k < n; ++k) table(static_cast<Eigen::Index>(i), k) = row[static_cast<std::size_t>(k)];
  }
  return table;
}

namespace {

QuadratureRule build_gauss_hermite(int n) {
  // Golub-Welsch for the nodes, then Newton polish on h_n and the
  // Christoffel-function form of the weights.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(0.5 * k);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi, Eigen::EigenvaluesOnly);
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  std::vector<double> h(static_cast<std::size_t>(n + 2));
  for (int i = 0; i < n; ++i) {
    double x = solver.eigenvalues()(i);
    for (int it = 0; it < 3; ++it) {
      // h_n' = sqrt(n/2) h_{n-1} - sqrt((n+1)/2) h_{n+1}
      hermite_functions(n + 2, x, h);
      const double dh = std::sqrt(0.5 * n) * h[static_cast<std::size_t>(n - 1)] -
                        std::sqrt(0.5 * (n + 1)) * h[static_cast<std::size_t>(n + 1)];
      if (dh == 0.0) break;
      x -= h[static_cast<std::size_t>(n)] / dh;
    }
    hermite_functions(n, x, h);
    double sum = 0.0;
    for (int k = 0; k < n; ++k) sum += h[static_cast<std::size_t>(k)] * h[static_cast<std::size_t>(k)];
    rule.nodes[static_cast<std::size_t>(i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = 1.0 / sum;
  }
  return rule;
}

}  // namespace

const QuadratureRule& gauss_hermite(int n) {
  require(n >= 1, ErrorCode::Config, "Gauss-Hermite rule needs at least one node");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<QuadratureRule>(build_gauss_hermite(n));
  return *slot;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  require(n >= 1, ErrorCode::Config, "Gauss-Legendre rule needs at least one node");
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[static_cast<std::size_t>(i)] = mid - half * x;
    rule.weights[static_cast<std::size_t>(i)] = half * 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

double laguerre(int n, double alpha, double x) {
  if (n == 0) return 1.0;
  double l0 = 1.0;
  double l1 = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double l2 = ((2.0 * k + 1.0 + alpha - x) * l1 - (k + alpha) * l0) / (k + 1.0);
    l0 = l1;
    l1 = l2;
  }
  return l1;
}

std::vector<double> laguerre_coefficients(int n) {
  // L_n(x) = sum_j (-1)^j C(n, j) x^j / j!
  std::vector<double> c(static_cast<std::size_t>(n + 1));
  double factorial = 1.0;
  for (int j = 0; j <= n; ++j) {
    if (j > 0) factorial *= j;
    c[static_cast<std::size_t>(j)] = ((j % 2 == 0) ? 1.0 : -1.0) * binomial(n, j) / factorial;
  }
  return c;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace hgmdm::special
