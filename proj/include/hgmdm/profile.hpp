#pragma once

// Closed-form function class used for profiles, sequences and spatial symbol
// factors: finite sums of separable terms
//   c * F_x(x) * F_y(y) * F_t(t),   F(s) = p(s) exp(-a (s - s0)^2) exp(i w s),
// with p a complex polynomial and a >= 0. The class is closed under products,
// conjugation, dilations, multiplication by coordinates and the left-invariant
// fields, and its one-dimensional Fourier transforms are explicit.

#include <array>
#include <string>
#include <vector>

#include "hgmdm/group.hpp"

namespace hgmdm {

struct Factor1D {
  std::vector<cplx> poly{1.0};  // p(s) = sum_k poly[k] s^k
  double a = 0.0;               // Gaussian rate, >= 0
  double s0 = 0.0;              // Gaussian centre
  double omega = 0.0;           // plane-wave frequency

  cplx operator()(double s) const;
  cplx derivative(double s) const;
  bool decays() const { return a > 0.0; }
  bool is_constant() const;

  /// F(s) exp(-i eta s) integrated over the line. Requires a > 0.
  cplx fourier(double eta) const;
  /// Integral over the line (fourier(0)).
  cplx integral() const { return fourier(0.0); }

  Factor1D derivative_factor() const;
  Factor1D times_monomial(int power) const;
  Factor1D conj() const;
  /// s -> F(s / c), c > 0.
  Factor1D rescaled(double c) const;

  /// Bound on the frequency support: |omega| + sqrt(2a) (sqrt(2 deg + 1) + margin).
  double frequency_band(double margin = 7.0) const;
  /// Bound on the spatial support around s0: (sqrt(2 deg + 1) + margin) / sqrt(2a).
  double spatial_extent(double margin = 7.0) const;

  friend bool operator==(const Factor1D&, const Factor1D&) = default;
};

Factor1D operator*(const Factor1D& f, const Factor1D& g);

struct ProfileTerm {
  cplx coeff{1.0, 0.0};
  std::array<Factor1D, 3> factor;  // x, y, t

  friend bool operator==(const ProfileTerm&, const ProfileTerm&) = default;
};

class ProfileFunction {
 public:
  ProfileFunction() = default;
  explicit ProfileFunction(std::vector<ProfileTerm> terms, std::string name = "");

  static ProfileFunction zero();
  static ProfileFunction constant(cplx c);
  static ProfileFunction separable(cplx c, Factor1D fx, Factor1D fy, Factor1D ft, std::string name = "");

  const std::vector<ProfileTerm>& terms() const { return terms_; }
  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// True when every factor of every term decays (L1 and L2 on H1).
  bool integrable() const;

  cplx operator()(const GroupPoint& g) const;
  /// Exact left-invariant derivative (W f)(g).
  cplx left_derivative(Field which, const GroupPoint& g) const;
  ProfileFunction apply_field(Field which) const;

  ProfileFunction operator+(const ProfileFunction& o) const;
  ProfileFunction operator*(const ProfileFunction& o) const;
  ProfileFunction scaled(cplx c) const;
  ProfileFunction conj() const;
  /// x^ax y^ay t^at f.
  ProfileFunction times_monomial(std::array<int, 3> alpha) const;
  /// f(D_r g) = f(r x, r y, r^2 t).
  ProfileFunction compose_dilation(double r) const;
  /// r^{Q/2} f(D_r g): the L2-unitary dilation.
  ProfileFunction l2_dilate(double r) const;

  /// Integral over H1 (requires integrable()).
  cplx integral() const;
  /// (f, g) = integral of f conj(g).
  cplx inner(const ProfileFunction& o) const;
  double norm_sq() const { return inner(*this).real(); }

  /// The restriction t -> f(0, 0, t) as a sum of weighted 1D factors.
  std::vector<std::pair<cplx, Factor1D>> centre_slice() const;

  FunctionDescriptor descriptor() const;

 private:
  std::vector<ProfileTerm> terms_;
  std::string name_;
};

/// Integral over the line of sum_i c_i F_i(s).
cplx integrate_slice(const std::vector<std::pair<cplx, Factor1D>>& slice);

nlohmann::json to_json(const Factor1D& f);
Factor1D factor_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ProfileFunction& f);
ProfileFunction profile_from_json(const nlohmann::json& j);

}  // namespace hgmdm
