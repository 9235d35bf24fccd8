#pragma once

// Schroedinger model of the irreducible representations of H1,
//   pi_lambda(x, y, t) phi(u) = exp(i lambda (t + y u + x y / 2)) phi(u + x),
// truncated to the first N scaled Hermite functions
//   h_n^lambda(u) = |lambda|^{1/4} h_n(|lambda|^{1/2} u).

#include <Eigen/Dense>

#include "hgmdm/group.hpp"

namespace hgmdm {

using OperatorMatrix = Eigen::MatrixXcd;

struct RepPoint {
  double lambda = 1.0;
  int n_modes = 1;

  RepPoint() = default;
  RepPoint(double lambda, int n_modes);  // validates
  double abs_lambda() const { return std::abs(lambda); }
  double sign() const { return lambda > 0.0 ? 1.0 : -1.0; }
};

nlohmann::json matrix_to_json(const OperatorMatrix& m);
OperatorMatrix matrix_from_json(const nlohmann::json& j);

namespace reps {

/// Default Gauss-Hermite node count 2N + 16.
int default_nodes(int n_modes);

/// pi_lambda(g) in the scaled Hermite basis. `nodes` = 0 selects the default;
/// fewer than 2N nodes is a configuration error.
OperatorMatrix rep_matrix(const RepPoint& rp, const GroupPoint& g, int nodes = 0);

/// Single entry (pi_lambda(g) h_n, h_m), independent of the truncation.
cplx rep_entry(double lambda, int m, int n, const GroupPoint& g, int nodes = 0);

/// pi(X) = d/du, pi(Y) = i lambda u, pi(T) = i lambda I (ladder closed forms).
OperatorMatrix infinitesimal(const RepPoint& rp, Field which);

/// pi(R) = diag(|lambda| (2n + 1)) for R = -(X^2 + Y^2).
OperatorMatrix sublaplacian_symbol(const RepPoint& rp);
Eigen::VectorXd sublaplacian_eigenvalues(const RepPoint& rp);

/// lambda -> r^2 lambda.
RepPoint dilate_rep(double r, const RepPoint& rp);

/// Leading block size on which truncated products are trusted for group
/// elements of size |g|: N - 2 ceil(|g| sqrt(|lambda| N)), at least 0.
int leading_block(const RepPoint& rp, double g_size);

/// (pi_lambda(g) h_l, h_l) from the representation matrix.
cplx matrix_coefficient(const RepPoint& rp, int mode, const GroupPoint& g);

/// Closed form exp(i lambda t) L_l(|lambda| (x^2 + y^2) / 2) with
/// L_l(r) = exp(-r/2) L_l(r), valid for lambda > 0. For lambda < 0 the
/// model gives the complex conjugate of the |lambda| value.
cplx laguerre_coefficient(double lambda, int mode, const GroupPoint& g);

struct FormalDegree {
  double value = 0.0;
  double coefficient_norm_sq = 0.0;  // integral of |coefficient|^2 over R^2
  double tail_ratio = 0.0;
  bool underresolved = false;
};

/// d = 1 / integral |(pi(x, y, 0) h_l, h_l)|^2 dx dy over the (x, y) axes of grid.
FormalDegree formal_degree(const RepPoint& rp, int mode, const SpatialGrid& grid, double tail_threshold = 1e-10);

/// Exact value |lambda| / (2 pi).
double formal_degree_exact(double lambda);

}  // namespace reps
}  // namespace hgmdm
