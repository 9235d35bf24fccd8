#pragma once

// Group Fourier transform f^(pi) = int f(g) pi(g)^* dg on a quadrature of the
// dual line lambda != 0 with Plancherel measure c_P |lambda| dlambda.

#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "hgmdm/profile.hpp"
#include "hgmdm/reps.hpp"

namespace hgmdm {

enum class Spacing { Log, Linear };

/// One interval of |lambda| values on one side of 0.
struct LambdaSegment {
  int sign = 1;  // +1 or -1
  double lo = 0.0;
  double hi = 0.0;
  int nodes = 2;
  Spacing spacing = Spacing::Log;
  /// Add the estimate lo * F(lo) of the mass on (0, lo) to the first node.
  bool tail_to_zero = false;
};

/// JSON form {lambda_min, lambda_max, nodes_per_sign, spacing, n_modes} with
/// optional "signs" ("both" | "positive" | "negative") and "tail_correction".
struct PlancherelConfig {
  double lambda_min = 1e-2;
  double lambda_max = 1e2;
  int nodes_per_sign = 64;
  Spacing spacing = Spacing::Log;
  int n_modes = 60;
  std::string signs = "both";
  bool tail_correction = true;

  void validate() const;
  nlohmann::json to_json() const;
  static PlancherelConfig from_json(const nlohmann::json& j);
};

class PlancherelGrid {
 public:
  static constexpr double density = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi);  // c_P

  explicit PlancherelGrid(const PlancherelConfig& config);
  PlancherelGrid(std::vector<LambdaSegment> segments, int n_modes);

  const std::vector<double>& lambdas() const { return lambda_; }
  /// Weights for dlambda.
  const std::vector<double>& dlambda() const { return dlambda_; }
  /// Weights for dmu = c_P |lambda| dlambda.
  const std::vector<double>& mu() const { return mu_; }
  std::size_t size() const { return lambda_.size(); }
  int n_modes() const { return n_modes_; }
  const std::vector<LambdaSegment>& segments() const { return segments_; }
  RepPoint rep(std::size_t i) const { return RepPoint(lambda_[i], n_modes_); }

  /// The grid for the node map lambda -> factor * lambda (factor = r^2 > 0).
  PlancherelGrid scaled(double factor) const;
  PlancherelGrid with_modes(int n_modes) const;

  /// Quadrature of F against dmu.
  double integrate(const std::function<double(double)>& f) const;

  nlohmann::json to_json() const;

 private:
  void build();

  std::vector<LambdaSegment> segments_;
  int n_modes_ = 1;
  std::vector<double> lambda_;
  std::vector<double> dlambda_;
  std::vector<double> mu_;
};

/// Field of operator matrices over the nodes of a grid.
struct DualField {
  PlancherelGrid grid;
  std::vector<OperatorMatrix> values;

  DualField(PlancherelGrid g, std::vector<OperatorMatrix> v);
  DualField scaled(cplx c) const;
  nlohmann::json to_json() const;
};

namespace fourier {

struct TransformOptions {
  double margin = 7.0;      // Hermite / Gaussian support margin
  int max_points = 200001;  // cap on the (u, v) grid size per axis
};

/// Kernel route: M = int int h_m(u) K(u, v) h_n(v) du dv with
/// K(u, v) = g^(u - v, lambda (u + v) / 2, lambda), g^ the Euclidean transform
/// in (y, t), on a uniform trapezoid grid sized from the profile bands.
OperatorMatrix transform(const ProfileFunction& f, const RepPoint& rp, const TransformOptions& opt = {});

/// Direct route: t-quadrature against exp(-i lambda t) on the spatial grid
/// (Nyquist-checked), then an (x, y) sum of pi(x, y, 0)^*.
OperatorMatrix transform_direct(const ProfileFunction& f, const RepPoint& rp, const SpatialGrid& grid);

DualField transform_field(const ProfileFunction& f, const PlancherelGrid& grid, const TransformOptions& opt = {});

/// Untruncated ||f^(pi_lambda)||_HS^2 = (2 pi / |lambda|) int |F_t f(x, y, lambda)|^2 dx dy.
double hs_norm_sq_exact(const ProfileFunction& f, double lambda);

struct PlancherelNorm {
  double value = 0.0;            // sum of mu_i ||f^_i||_HS^2 (truncated matrices)
  double exact_density = 0.0;    // same quadrature with untruncated HS norms
  double truncation_tail = 0.0;  // exact_density - value
  double window_tail = 0.0;      // exact mass outside the grid window
  double tail_correction = 0.0;  // part of value contributed by (0, lambda_min) estimates
};

PlancherelNorm plancherel_norm(const ProfileFunction& f, const PlancherelGrid& grid, const TransformOptions& opt = {});
double plancherel_norm(const DualField& field);

/// int tr(A(pi) B(pi)^*) dmu.
cplx parseval(const DualField& a, const DualField& b);
cplx parseval(const ProfileFunction& f1, const ProfileFunction& f2, const PlancherelGrid& grid,
              const TransformOptions& opt = {});

/// int tr(pi(g) F(pi)) dmu. Throws NotIntegrable when the largest-|lambda|
/// nodes carry more than `tail_threshold` of the absolute sum.
cplx invert(const DualField& field, const GroupPoint& g, double tail_threshold = 1e-2);

/// Transform field of x^alpha f.
DualField difference_op(const ProfileFunction& f, std::array<int, 3> alpha, const PlancherelGrid& grid,
                        const TransformOptions& opt = {});
int weighted_degree(std::array<int, 3> alpha);

struct DualPolar {
  double varsigma = 0.0;  // weight of each dual-sphere atom
  double atom_plus = 0.0;   // F(pi_{+1})
  double atom_minus = 0.0;  // F(pi_{-1})
  double plus_total = 0.0;
  double minus_total = 0.0;
  double total = 0.0;
  std::vector<double> radii;
  std::vector<double> profile_plus;   // F(pi_{r^2})
  std::vector<double> profile_minus;  // F(pi_{-r^2})
};

/// sum over signs of varsigma int F(pi_{+-r^2}) r^{Q-1} dr on its own radial
/// rule over the r-range of the grid window (Gauss-Legendre panels in log r),
/// with the same (0, r_min) tail estimate as the grid when it carries one.
DualPolar polar_dual(const std::function<double(double)>& f, const PlancherelGrid& grid, int panels_per_decade = 4,
                     int nodes_per_panel = 16);

/// varsigma = 2 c_P.
double polar_weight();

}  // namespace fourier
}  // namespace hgmdm
