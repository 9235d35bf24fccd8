#include "hgmdm/reps.hpp"

#include "hgmdm/error.hpp"
#include "hgmdm/parallel.hpp"
#include "hgmdm/special.hpp"

#include <cmath>
#include <numbers>

namespace hgmdm {

RepPoint::RepPoint(double lambda_, int n_modes_) : lambda(lambda_), n_modes(n_modes_) {
  require(lambda != 0.0 && std::isfinite(lambda), ErrorCode::DegenerateRep,
          "representation parameter lambda must be nonzero and finite");
  require(n_modes >= 1, ErrorCode::Config, "n_modes must be >= 1");
}

nlohmann::json matrix_to_json(const OperatorMatrix& m) {
  std::vector<double> re, im;
  re.reserve(static_cast<std::size_t>(m.size()));
  im.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  return {{"dim", m.rows()}, {"re", re}, {"im", im}};
}

OperatorMatrix matrix_from_json(const nlohmann::json& j) {
  try {
    const auto n = j.at("dim").get<Eigen::Index>();
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    require(n >= 0 && re.size() == static_cast<std::size_t>(n * n) && im.size() == re.size(), ErrorCode::Config,
            "operator matrix: re/im must hold dim*dim entries");
    OperatorMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index k = 0; k < n; ++k) {
        const auto idx = static_cast<std::size_t>(i * n + k);
        m(i, k) = {re[idx], im[idx]};
      }
    return m;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Config, std::string("operator matrix: ") + e.what());
  }
}

namespace reps {

int default_nodes(int n_modes) { return 2 * n_modes + 16; }

namespace {

int resolve_nodes(int n_modes, int nodes) {
  if (nodes == 0) return default_nodes(n_modes);
  require(nodes >= 2 * n_modes, ErrorCode::Config,
          "Gauss-Hermite node count " + std::to_string(nodes) + " is below 2N = " + std::to_string(2 * n_modes));
  return nodes;
}

// With s = sqrt|l| u, a = sqrt|l| x, w = s + a/2 and beta = sgn(l) sqrt|l| y:
//   M_mn = e^{i l (t + xy/2)} int h_m(w - a/2) h_n(w + a/2) e^{i beta (w - a/2)} dw.
struct Sampled {
  Eigen::MatrixXd left;   // h_m(w_i - a/2) * weight_i
  Eigen::MatrixXd right;  // h_n(w_i + a/2)
  Eigen::VectorXcd phase;
  cplx prefactor;
};

Sampled sample(double lambda, int n, const GroupPoint& g, int nodes) {
  const auto& rule = special::gauss_hermite(nodes);
  const double sl = std::sqrt(std::abs(lambda));
  const double a = sl * g.x;
  const double beta = (lambda > 0 ? 1.0 : -1.0) * sl * g.y;
  Sampled s;
  s.left.resize(nodes, n);
  s.right.resize(nodes, n);
  s.phase.resize(nodes);
  std::vector<double> hl(static_cast<std::size_t>(n)), hr(static_cast<std::size_t>(n));
  for (int i = 0; i < nodes; ++i) {
    const double w = rule.nodes[static_cast<std::size_t>(i)];
    special::hermite_functions(n, w - 0.5 * a, hl);
    special::hermite_functions(n, w + 0.5 * a, hr);
    for (int k = 0; k < n; ++k) {
      s.left(i, k) = hl[static_cast<std::size_t>(k)];
      s.right(i, k) = hr[static_cast<std::size_t>(k)];
    }
    s.phase(i) = rule.weights[static_cast<std::size_t>(i)] * std::polar(1.0, beta * (w - 0.5 * a));
  }
  s.prefactor = std::polar(1.0, lambda * (g.t + 0.5 * g.x * g.y));
  return s;
}

}  // namespace

OperatorMatrix rep_matrix(const RepPoint& rp, const GroupPoint& g, int nodes) {
  const RepPoint checked(rp.lambda, rp.n_modes);
  nodes = resolve_nodes(checked.n_modes, nodes);
  const Sampled s = sample(rp.lambda, rp.n_modes, g, nodes);
  const OperatorMatrix weighted = s.phase.asDiagonal() * s.right.cast<cplx>();
  return s.prefactor * (s.left.transpose().cast<cplx>() * weighted);
}

cplx rep_entry(double lambda, int m, int n, const GroupPoint& g, int nodes) {
  const int dim = std::max(m, n) + 1;
  const RepPoint checked(lambda, dim);
  nodes = resolve_nodes(dim, nodes);
  const Sampled s = sample(lambda, dim, g, nodes);
  cplx acc = 0.0;
  for (int i = 0; i < nodes; ++i) acc += s.left(i, m) * s.right(i, n) * s.phase(i);
  return s.prefactor * acc;
}

OperatorMatrix infinitesimal(const RepPoint& rp, Field which) {
  const RepPoint checked(rp.lambda, rp.n_modes);
  const int n = rp.n_modes;
  const double sl = std::sqrt(rp.abs_lambda());
  OperatorMatrix m = OperatorMatrix::Zero(n, n);
  switch (which) {
    case Field::X:
      // d/ds h_n = sqrt(n/2) h_{n-1} - sqrt((n+1)/2) h_{n+1}
      for (int k = 0; k + 1 < n; ++k) {
        m(k, k + 1) = sl * std::sqrt(0.5 * (k + 1));
        m(k + 1, k) = -sl * std::sqrt(0.5 * (k + 1));
      }
      break;
    case Field::Y:
      // s h_n = sqrt(n/2) h_{n-1} + sqrt((n+1)/2) h_{n+1}
      for (int k = 0; k + 1 < n; ++k) {
        const cplx v(0.0, rp.sign() * sl * std::sqrt(0.5 * (k + 1)));
        m(k, k + 1) = v;
        m(k + 1, k) = v;
      }
      break;
    case Field::T:
      m.diagonal().setConstant(cplx(0.0, rp.lambda));
      break;
  }
  return m;
}

Eigen::VectorXd sublaplacian_eigenvalues(const RepPoint& rp) {
  const RepPoint checked(rp.lambda, rp.n_modes);
  Eigen::VectorXd ev(rp.n_modes);
  for (int k = 0; k < rp.n_modes; ++k) ev(k) = rp.abs_lambda() * (2.0 * k + 1.0);
  return ev;
}

OperatorMatrix sublaplacian_symbol(const RepPoint& rp) {
  return sublaplacian_eigenvalues(rp).cast<cplx>().asDiagonal();
}

RepPoint dilate_rep(double r, const RepPoint& rp) {
  require(r > 0.0 && std::isfinite(r), ErrorCode::Domain, "dilation factor must be positive");
  return RepPoint(r * r * rp.lambda, rp.n_modes);
}

int leading_block(const RepPoint& rp, double g_size) {
  const int buffer = 2 * static_cast<int>(std::ceil(g_size * std::sqrt(rp.abs_lambda() * rp.n_modes)));
  return std::max(0, rp.n_modes - buffer);
}

cplx matrix_coefficient(const RepPoint& rp, int mode, const GroupPoint& g) {
  require(mode >= 0, ErrorCode::Domain, "mode must be >= 0");
  require(mode + 2 <= rp.n_modes - 1, ErrorCode::TailContamination,
          "mode " + std::to_string(mode) + " is too close to the truncation N = " + std::to_string(rp.n_modes));
  return rep_entry(rp.lambda, mode, mode, g, default_nodes(rp.n_modes));
}

cplx laguerre_coefficient(double lambda, int mode, const GroupPoint& g) {
  require(lambda != 0.0, ErrorCode::DegenerateRep, "lambda must be nonzero");
  const double r = std::abs(lambda) * 0.5 * (g.x * g.x + g.y * g.y);
  const double value = std::exp(-0.5 * r) * special::laguerre(mode, 0.0, r);
  return std::polar(value, lambda * g.t);
}

double formal_degree_exact(double lambda) { return std::abs(lambda) / (2.0 * std::numbers::pi); }

FormalDegree formal_degree(const RepPoint& rp, int mode, const SpatialGrid& grid, double tail_threshold) {
  const RepPoint checked(rp.lambda, rp.n_modes);
  const auto& xs = grid.nodes(0);
  const auto& ys = grid.nodes(1);
  const auto& wx = grid.weights(0);
  const auto& wy = grid.weights(1);
  const int nodes = default_nodes(std::max(rp.n_modes, mode + 1));
  std::vector<double> rows(xs.size()), row_max(xs.size()), row_edge(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    double acc = 0.0, mx = 0.0, edge = 0.0;
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const double v = std::norm(rep_entry(rp.lambda, mode, mode, {xs[i], ys[j], 0.0}, nodes));
      acc += wy[j] * v;
      mx = std::max(mx, v);
      if (i == 0 || i + 1 == xs.size() || j == 0 || j + 1 == ys.size()) edge = std::max(edge, v);
    }
    rows[i] = wx[i] * acc;
    row_max[i] = mx;
    row_edge[i] = edge;
  });
  FormalDegree out;
  out.coefficient_norm_sq = pairwise_sum(rows);
  require(out.coefficient_norm_sq > 0.0, ErrorCode::NotIntegrable, "matrix coefficient vanishes on the grid");
  out.value = 1.0 / out.coefficient_norm_sq;
  const double mx = *std::max_element(row_max.begin(), row_max.end());
  const double edge = *std::max_element(row_edge.begin(), row_edge.end());
  out.tail_ratio = mx > 0.0 ? edge / mx : 0.0;
  out.underresolved = out.tail_ratio > tail_threshold;
  return out;
}

}  // namespace reps
}  // namespace hgmdm
