#pragma once

// Separable symbols sigma(x, pi) = sum_i phi_i(x) tau_i(pi), where each dual
// factor tau_i is a scalar times an ordered product of atoms:
//   Hom0        0-homogeneous invariant symbol, one matrix per sign of lambda
//   Multiplier  psi(pi(R)) = diag(psi(|lambda| (2n + 1)))
//   FieldAtom   pi(X), pi(Y), pi(T)
//   RockPower   pi(R)^p

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hgmdm/fourier.hpp"
#include "hgmdm/profile.hpp"
#include "hgmdm/reps.hpp"

namespace hgmdm {

struct Hom0Atom {
  OperatorMatrix plus;   // value for lambda > 0
  OperatorMatrix minus;  // value for lambda < 0
  std::string label;
};

struct MultiplierAtom {
  std::function<cplx(double)> psi;
  std::string label;
  bool conjugated = false;
};

struct FieldAtom {
  Field which = Field::X;
};

struct RockPowerAtom {
  double power = 1.0;
};

using DualAtom = std::variant<Hom0Atom, MultiplierAtom, FieldAtom, RockPowerAtom>;

class DualFactor {
 public:
  DualFactor() = default;
  explicit DualFactor(DualAtom atom, cplx scalar = 1.0);
  DualFactor(cplx scalar, std::vector<DualAtom> atoms);

  cplx scalar() const { return scalar_; }
  const std::vector<DualAtom>& atoms() const { return atoms_; }

  OperatorMatrix eval(const RepPoint& rp) const;
  DualFactor adjoint() const;
  DualFactor operator*(const DualFactor& o) const;
  DualFactor scaled(cplx c) const;

  /// Homogeneity degree (X, Y: 1, T: 2, R^p: 2p, Hom0: 0); multipliers
  /// have none and make this std::nullopt.
  std::optional<double> order() const;
  bool homogeneous_of_order_zero() const;
  /// All atoms diagonal in the Hermite basis at every lambda.
  bool is_diagonal() const;
  std::string label() const;

 private:
  cplx scalar_ = 1.0;
  std::vector<DualAtom> atoms_;
};

namespace symbols {

/// Identity, Hermite-mode projector Pi_j, matrix unit E_ab = |a><b| (both
/// signs), sign of lambda, positive/negative sign projectors.
DualFactor identity();
DualFactor projector(int j, int n_modes);
DualFactor matrix_unit(int a, int b, int n_modes);
DualFactor sign(int n_modes);
DualFactor sign_projector(int sign, int n_modes);
DualFactor hom0(OperatorMatrix plus, OperatorMatrix minus, std::string label);
DualFactor field(Field which);
DualFactor rockland_power(double p);
DualFactor multiplier(std::function<cplx(double)> psi, std::string label);

/// Smooth 0/1 ramp: 0 on [0, lo], 1 on [hi, inf), exp(-1/s) partition in between.
double smooth_ramp(double s, double lo, double hi);
DualFactor smooth_cutoff(double lo, double hi);

}  // namespace symbols

struct SymbolTerm {
  ProfileFunction phi;
  DualFactor dual;
};

class SeparableSymbol {
 public:
  SeparableSymbol() = default;
  explicit SeparableSymbol(std::vector<SymbolTerm> terms, std::string spec = "");
  static SeparableSymbol invariant(DualFactor dual, std::string spec = "");
  static SeparableSymbol identity();
  static SeparableSymbol zero();

  const std::vector<SymbolTerm>& terms() const { return terms_; }
  const std::string& spec() const { return spec_; }
  void set_spec(std::string s) { spec_ = std::move(s); }
  bool is_zero() const { return terms_.empty(); }
  bool is_invariant() const;  // all spatial factors constant

  OperatorMatrix eval(const GroupPoint& g, const RepPoint& rp) const;
  SeparableSymbol operator*(const SeparableSymbol& o) const;
  SeparableSymbol operator+(const SeparableSymbol& o) const;
  SeparableSymbol scaled(cplx c) const;
  SeparableSymbol adjoint() const;

 private:
  std::vector<SymbolTerm> terms_;
  std::string spec_;
};

/// Differential operator sum_alpha c_alpha(x) W_alpha with W_alpha an ordered
/// word in the left-invariant fields.
struct DiffTerm {
  ProfileFunction coeff;
  std::vector<Field> word;
};

struct DiffOpDescriptor {
  std::vector<DiffTerm> terms;

  int order() const;
  DiffOpDescriptor compose(const DiffOpDescriptor& o) const;  // (this o o)
  cplx apply(const ProfileFunction& f, const GroupPoint& g) const;
};

int word_weight(const std::vector<Field>& word);

namespace symbols {

/// Top-weight part sum_{[alpha] = m} c_alpha(x) pi(X)^alpha. A pair
/// c (X^2 + Y^2) with identical coefficients becomes -c pi(R).
SeparableSymbol principal_symbol(const DiffOpDescriptor& d);

struct LeibnizEntry {
  std::array<int, 3> alpha1;  // exponents of (x, y, t) of the left factor
  std::array<int, 3> alpha2;  // exponents of (x', y', t') of the right factor
  double coefficient;
};

/// Coefficients of (g g')^alpha = sum c x^alpha1 x'^alpha2 under the group law.
std::vector<LeibnizEntry> compute_leibniz_coefficients(std::array<int, 3> alpha, int max_weight = 4);
/// Evaluates a coefficient table at (g1, g2).
double leibniz_expand(const std::vector<LeibnizEntry>& table, const GroupPoint& g1, const GroupPoint& g2);
double monomial(const GroupPoint& g, std::array<int, 3> alpha);

/// max over grid nodes of ||tau(lambda) - tau(r^2 lambda)||_F.
double homogeneity_audit(const DualFactor& tau, const PlancherelGrid& grid, double r);

/// Parses a symbol spec (grammar in docs/config.md): terms joined by '+',
/// factors joined by '*', each factor a number, a spatial factor name or a
/// dual atom (id, proj:j, unit:a:b, sign, pos, neg, mult:bump:lo:hi,
/// mult:exp:s, X, Y, T, R, rpow:p).
SeparableSymbol parse(const std::string& spec, int n_modes);

/// Expands range shorthands "proj:a..b" / "unit:a..b" into single specs.
std::vector<std::string> expand_specs(const std::vector<std::string>& specs);

}  // namespace symbols
}  // namespace hgmdm
