#include "hgmdm/group.hpp"

#include "hgmdm/error.hpp"
#include "hgmdm/parallel.hpp"
#include "hgmdm/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace hgmdm {

GroupPoint operator*(const GroupPoint& a, const GroupPoint& b) {
  return {a.x + b.x, a.y + b.y, a.t + b.t + 0.5 * (a.x * b.y - b.x * a.y)};
}

const char* field_name(Field f) {
  switch (f) {
    case Field::X: return "X";
    case Field::Y: return "Y";
    case Field::T: return "T";
  }
  return "?";
}

namespace group {

GroupPoint multiply(const GroupPoint& a, const GroupPoint& b) { return a * b; }

GroupPoint dilate(double r, const GroupPoint& g) {
  require(r > 0.0 && std::isfinite(r), ErrorCode::Domain, "dilation factor must be positive");
  return {r * g.x, r * g.y, r * r * g.t};
}

double quasi_norm(const GroupPoint& g) {
  const double rho2 = g.x * g.x + g.y * g.y;
  return std::pow(rho2 * rho2 + g.t * g.t, 0.25);
}

}  // namespace group

bool Box::contains(const GroupPoint& g) const {
  return std::abs(g.x) <= half_widths[0] && std::abs(g.y) <= half_widths[1] && std::abs(g.t) <= half_widths[2];
}

SpatialGrid::SpatialGrid(std::array<double, 3> half_widths, std::array<int, 3> counts, QuadratureKind rule)
    : half_widths_(half_widths), counts_(counts), rule_(rule) {
  for (int a = 0; a < 3; ++a) {
    const auto ia = static_cast<std::size_t>(a);
    require(half_widths[ia] > 0.0, ErrorCode::Config, "spatial grid half-widths must be positive");
    require(counts[ia] >= 2, ErrorCode::Config, "spatial grid needs at least 2 nodes per axis");
    const double L = half_widths[ia];
    const int n = counts[ia];
    if (rule == QuadratureKind::Trapezoid) {
      const double h = 2.0 * L / (n - 1);
      nodes_[ia].resize(static_cast<std::size_t>(n));
      weights_[ia].assign(static_cast<std::size_t>(n), h);
      for (int i = 0; i < n; ++i) nodes_[ia][static_cast<std::size_t>(i)] = -L + h * i;
      weights_[ia].front() = weights_[ia].back() = 0.5 * h;
    } else {
      auto gl = special::gauss_legendre(n, -L, L);
      nodes_[ia] = std::move(gl.nodes);
      weights_[ia] = std::move(gl.weights);
    }
  }
}

double SpatialGrid::volume() const {
  return 8.0 * half_widths_[0] * half_widths_[1] * half_widths_[2];
}

double SpatialGrid::max_spacing(int axis) const {
  const auto& n = nodes(axis);
  double h = 0.0;
  for (std::size_t i = 1; i < n.size(); ++i) h = std::max(h, n[i] - n[i - 1]);
  return h;
}

nlohmann::json SpatialGrid::to_json() const {
  return {{"half_widths", half_widths_},
          {"counts", counts_},
          {"rule", rule_ == QuadratureKind::Trapezoid ? "trapezoid" : "gauss"}};
}

SpatialGrid SpatialGrid::from_json(const nlohmann::json& j) {
  try {
    const auto hw = j.at("half_widths").get<std::vector<double>>();
    const auto n = j.at("counts").get<std::vector<int>>();
    require(hw.size() == 3 && n.size() == 3, ErrorCode::Config, "spatial grid needs 3 half_widths and 3 counts");
    const std::string rule = j.value("rule", std::string("trapezoid"));
    require(rule == "trapezoid" || rule == "gauss", ErrorCode::Config,
            "spatial grid rule must be \"trapezoid\" or \"gauss\"");
    return SpatialGrid({hw[0], hw[1], hw[2]}, {n[0], n[1], n[2]},
                       rule == "gauss" ? QuadratureKind::Gauss : QuadratureKind::Trapezoid);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Config, std::string("spatial grid: ") + e.what());
  }
}

cplx FunctionDescriptor::operator()(const GroupPoint& g) const {
  if (domain && !domain->contains(g)) {
    fail(ErrorCode::OutOfDomain, "sampled function evaluated outside its domain");
  }
  return value(g);
}

double fd_step(double length_scale) {
  return std::cbrt(std::numeric_limits<double>::epsilon()) * length_scale;
}

namespace group {

HaarIntegral haar_integrate(const FunctionDescriptor& f, const SpatialGrid& grid, double tail_threshold) {
  const auto& xs = grid.nodes(0);
  const auto& ys = grid.nodes(1);
  const auto& ts = grid.nodes(2);
  const auto& wx = grid.weights(0);
  const auto& wy = grid.weights(1);
  const auto& wt = grid.weights(2);
  const std::size_t nx = xs.size();
  std::vector<cplx> slab(nx);
  std::vector<double> slab_max(nx, 0.0);
  std::vector<double> slab_edge(nx, 0.0);
  parallel_for(nx, [&](std::size_t i) {
    cplx acc = 0.0;
    double mx = 0.0;
    double edge = 0.0;
    const bool x_edge = (i == 0 || i + 1 == nx);
    for (std::size_t j = 0; j < ys.size(); ++j) {
      cplx row = 0.0;
      const bool y_edge = (j == 0 || j + 1 == ys.size());
      for (std::size_t k = 0; k < ts.size(); ++k) {
        const cplx v = f({xs[i], ys[j], ts[k]});
        row += wt[k] * v;
        const double a = std::abs(v);
        mx = std::max(mx, a);
        if (x_edge || y_edge || k == 0 || k + 1 == ts.size()) edge = std::max(edge, a);
      }
      acc += wy[j] * row;
    }
    slab[i] = wx[i] * acc;
    slab_max[i] = mx;
    slab_edge[i] = edge;
  });
  HaarIntegral out;
  out.value = pairwise_sum(slab);
  const double mx = *std::max_element(slab_max.begin(), slab_max.end());
  const double edge = *std::max_element(slab_edge.begin(), slab_edge.end());
  out.tail_ratio = mx > 0.0 ? edge / mx : 0.0;
  out.underresolved = out.tail_ratio > tail_threshold;
  return out;
}

cplx left_field(Field which, const FunctionDescriptor& f, const GroupPoint& g) {
  if (f.left_derivative) return f.left_derivative(which, g);
  // Central difference along the one-parameter subgroup: (W f)(g) = d/ds f(g exp(sW)).
  const double h = fd_step(f.length_scale);
  GroupPoint step{};
  switch (which) {
    case Field::X: step = {h, 0.0, 0.0}; break;
    case Field::Y: step = {0.0, h, 0.0}; break;
    case Field::T: step = {0.0, 0.0, h}; break;
  }
  return (f(g * step) - f(g * step.inverse())) / (2.0 * h);
}

double quasi_sphere_area() { return 2.0 * std::numbers::pi * std::numbers::pi; }

GroupPoint quasi_polar_point(double r, double theta, double phi) {
  const double rho = r * std::sqrt(std::max(0.0, std::cos(theta)));
  return {rho * std::cos(phi), rho * std::sin(phi), r * r * std::sin(theta)};
}

PolarCheck polar_check(const FunctionDescriptor& f, const SpatialGrid& grid, int radial_nodes, int angular_nodes,
                       const std::vector<double>& radial_breakpoints) {
  PolarCheck out;
  const auto direct = haar_integrate(f, grid);
  out.lhs = direct.value.real();
  out.underresolved = direct.underresolved;

  const auto& hw = grid.half_widths();
  const double r_max = std::min({hw[0], hw[1], std::sqrt(hw[2])});
  std::vector<double> cuts{0.0};
  for (double b : radial_breakpoints) {
    if (b > 0.0 && b < r_max) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(r_max);

  // theta = (pi/2) sin(pi v / 2) removes the square-root behaviour of
  // cos(theta)^{1/2} at the poles.
  const auto vrule = special::gauss_legendre(angular_nodes, -1.0, 1.0);
  const int nphi = 2 * angular_nodes;
  const double dphi = 2.0 * std::numbers::pi / nphi;

  std::vector<std::pair<double, double>> radial;  // (r, weight)
  const int per_panel = std::max(8, radial_nodes / static_cast<int>(cuts.size() - 1));
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const auto rr = special::gauss_legendre(per_panel, cuts[p], cuts[p + 1]);
    for (std::size_t i = 0; i < rr.nodes.size(); ++i) radial.emplace_back(rr.nodes[i], rr.weights[i]);
  }
  std::vector<double> shell(radial.size());
  parallel_for(radial.size(), [&](std::size_t i) {
    const double r = radial[i].first;
    double acc = 0.0;
    for (std::size_t a = 0; a < vrule.nodes.size(); ++a) {
      const double v = vrule.nodes[a];
      const double theta = 0.5 * std::numbers::pi * std::sin(0.5 * std::numbers::pi * v);
      const double jac = 0.25 * std::numbers::pi * std::numbers::pi * std::cos(0.5 * std::numbers::pi * v);
      double ring = 0.0;
      for (int b = 0; b < nphi; ++b) ring += f(quasi_polar_point(r, theta, b * dphi)).real();
      acc += vrule.weights[a] * jac * ring * dphi;
    }
    shell[i] = radial[i].second * r * r * r * acc;
  });
  out.rhs = pairwise_sum(shell);
  return out;
}

double measured_triangle_constant(int samples, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> logscale(-2.0, 2.0);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double s1 = std::exp(logscale(rng));
    const double s2 = std::exp(logscale(rng));
    const GroupPoint g = dilate(s1, {normal(rng), normal(rng), normal(rng)});
    const GroupPoint h = dilate(s2, {normal(rng), normal(rng), normal(rng)});
    const double denom = quasi_norm(g) + quasi_norm(h);
    if (denom > 0.0) worst = std::max(worst, quasi_norm(g * h) / denom);
  }
  return worst;
}

}  // namespace group
}  // namespace hgmdm
