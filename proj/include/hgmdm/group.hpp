#pragma once

// The Heisenberg group H1 = {(x, y, t)} with law
//   (x, y, t)(x', y', t') = (x + x', y + y', t + t' + (x y' - x' y) / 2),
// dilations r.(x, y, t) = (r x, r y, r^2 t), Lebesgue (= Haar) measure and the
// left-invariant fields X = d_x - (y/2) d_t, Y = d_y + (x/2) d_t, T = d_t.

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace hgmdm {

using cplx = std::complex<double>;

struct GroupPoint {
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;

  GroupPoint inverse() const { return {-x, -y, -t}; }
  friend bool operator==(const GroupPoint&, const GroupPoint&) = default;
};

/// Group product.
GroupPoint operator*(const GroupPoint& a, const GroupPoint& b);

/// Homogeneous structure of H1: dilation weights (1, 1, 2), homogeneous
/// dimension Q and that of the quotient by the centre.
struct HomogeneousStructure {
  static constexpr std::array<int, 3> weights{1, 1, 2};
  static constexpr int Q = 4;
  static constexpr int Qprime = 2;
};

enum class Field { X, Y, T };

const char* field_name(Field f);

namespace group {

GroupPoint multiply(const GroupPoint& a, const GroupPoint& b);

/// Dilation by r > 0; throws Domain otherwise.
GroupPoint dilate(double r, const GroupPoint& g);

/// |(x,y,t)| = ((x^2 + y^2)^2 + t^2)^{1/4}.
double quasi_norm(const GroupPoint& g);

}  // namespace group

/// Axis-aligned box [-L, L] per coordinate, used for sampled-function domains.
struct Box {
  std::array<double, 3> half_widths{};
  bool contains(const GroupPoint& g) const;
};

enum class QuadratureKind { Trapezoid, Gauss };

/// Tensor-product quadrature on the box [-Lx,Lx] x [-Ly,Ly] x [-Lt,Lt].
class SpatialGrid {
 public:
  SpatialGrid(std::array<double, 3> half_widths, std::array<int, 3> counts,
              QuadratureKind rule = QuadratureKind::Trapezoid);

  const std::array<double, 3>& half_widths() const { return half_widths_; }
  const std::array<int, 3>& counts() const { return counts_; }
  QuadratureKind rule() const { return rule_; }
  const std::vector<double>& nodes(int axis) const { return nodes_[static_cast<std::size_t>(axis)]; }
  const std::vector<double>& weights(int axis) const { return weights_[static_cast<std::size_t>(axis)]; }
  double volume() const;
  Box box() const { return Box{half_widths_}; }
  /// Largest node spacing along an axis.
  double max_spacing(int axis) const;

  nlohmann::json to_json() const;
  static SpatialGrid from_json(const nlohmann::json& j);

 private:
  std::array<double, 3> half_widths_;
  std::array<int, 3> counts_;
  QuadratureKind rule_;
  std::array<std::vector<double>, 3> nodes_;
  std::array<std::vector<double>, 3> weights_;
};

/// A function on H1. Closed-form descriptors supply exact left-invariant
/// derivatives; sampled ones (`domain` set, no derivative) fall back to
/// central differences and refuse evaluation outside their box.
struct FunctionDescriptor {
  std::function<cplx(const GroupPoint&)> value;
  std::function<cplx(Field, const GroupPoint&)> left_derivative;  // optional
  std::optional<Box> domain;
  double length_scale = 1.0;  // scales the finite-difference step

  cplx operator()(const GroupPoint& g) const;
};

/// Finite-difference step: cbrt(machine epsilon) times the length scale.
double fd_step(double length_scale);

struct HaarIntegral {
  cplx value;
  double tail_ratio = 0.0;  // max |f| on the box boundary / max |f|
  bool underresolved = false;
};

namespace group {

/// Tensor-product quadrature of f against dx dy dt. Flags (does not throw)
/// when the boundary tail exceeds `tail_threshold` relative to the maximum.
HaarIntegral haar_integrate(const FunctionDescriptor& f, const SpatialGrid& grid,
                            double tail_threshold = 1e-6);

/// (W f)(g) for a left-invariant field W.
cplx left_field(Field which, const FunctionDescriptor& f, const GroupPoint& g);

struct PolarCheck {
  double lhs = 0.0;  // direct Haar integral
  double rhs = 0.0;  // polar-coordinates integral
  bool underresolved = false;
};

/// Surface measure of the unit quasi-sphere in the parametrisation
/// (r, theta, phi) -> (r cos(theta)^{1/2} cos(phi), r cos(theta)^{1/2} sin(phi), r^2 sin(theta)),
/// for which dx dy dt = r^3 dr dtheta dphi, i.e. sigma = dtheta dphi.
double quasi_sphere_area();

/// Point on the quasi-sphere of radius r with angles (theta, phi).
GroupPoint quasi_polar_point(double r, double theta, double phi);

/// Direct and polar integrals of a real function. The radial rule runs over
/// [0, r_max] with r_max the quasi-norm radius inscribed in the grid box.
/// Radial breakpoints split the radial rule into panels (for integrands with
/// kinks or jumps on quasi-spheres).
PolarCheck polar_check(const FunctionDescriptor& f, const SpatialGrid& grid, int radial_nodes = 200,
                       int angular_nodes = 64, const std::vector<double>& radial_breakpoints = {});

/// Empirical triangle-inequality constant sup |gh| / (|g| + |h|) over random
/// pairs (recorded, not asserted against a reference value).
double measured_triangle_constant(int samples, unsigned seed);

}  // namespace group
}  // namespace hgmdm
