#pragma once

// Concentrating and oscillating sequences, their quadratic forms against
// symbols, closed-form limits, and the vector-valued checks.

#include <optional>
#include <string>
#include <vector>

#include "hgmdm/quantize.hpp"

namespace hgmdm {

enum class SequenceKind { Concentration, Oscillation };

/// Concentration: u_k(x) = k^2 u1(k x, k y, k^2 t).
/// Oscillation:   u_k(x) = k e^{i k^2 t} L_l(k^2 (x^2 + y^2) / 2) u0(t).
struct SequenceSpec {
  SequenceKind kind = SequenceKind::Concentration;
  ProfileFunction u1;
  int mode = 0;
  Factor1D u0;

  static SequenceSpec concentration(ProfileFunction u1);
  static SequenceSpec oscillation(int mode, Factor1D u0);
  std::string label() const;
};

struct VectorComponent {
  cplx coefficient{1.0, 0.0};
  SequenceSpec base;
};

struct VectorSequence {
  std::vector<VectorComponent> components;
};

struct MdmOptions {
  DualFactor cutoff = symbols::smooth_cutoff(0.25, 1.0);
  double window = 7.0;       // half-width of the lambda window around k^2 (oscillation)
  int window_nodes = 57;     // nodes across a full window
  double lambda_floor = 1e-3;
  double tolerance = 5e-2;   // relative tolerance of the final error
  double noise_floor = 1e-10;
};

namespace mdm {

ProfileFunction make_sequence(const SequenceSpec& spec, double k);
std::vector<ProfileFunction> make_sequence(const VectorSequence& vec, double k);

/// Throws UnderresolvedOscillation (with the required t-node count) when the
/// t-grid cannot sample e^{i k^2 t} u0(t).
void check_nyquist(const SequenceSpec& spec, double k, const SpatialGrid& grid);

/// (u_k, test).
cplx weak_limit_probe(const SequenceSpec& spec, double k, const ProfileFunction& test);

/// Dual grid on which u_k is resolved: the base grid scaled by k^2 for
/// concentration, a linear window around k^2 for oscillation, and a merge of
/// both for vectors.
PlancherelGrid sequence_grid(const SequenceSpec& spec, double k, const PlancherelGrid& base, const MdmOptions& opt);
PlancherelGrid sequence_grid(const VectorSequence& vec, double k, const PlancherelGrid& base, const MdmOptions& opt);

/// Closed-form limit of (Op(sym) u_k, u_k). Dual factors must be homogeneous
/// of order 0 (InvalidSymbol otherwise).
cplx predict_limit(const SequenceSpec& spec, const SeparableSymbol& sym, const QuantizationContext& ctx);

struct ConvergenceReport {
  std::string sequence;
  std::string symbol;
  std::vector<double> k;
  std::vector<cplx> values;
  cplx predicted;
  std::vector<double> abs_err;
  double scale = 1.0;  // max(|predicted|, lim ||u_k||^2)
  std::optional<double> fitted_order;
  double fit_residual = 0.0;
  bool monotone = true;
  bool pass = false;

  nlohmann::json to_json() const;
};

/// Quadratic forms of sym * cutoff against u_k for each k, compared with the
/// limit predicted for sym.
std::vector<ConvergenceReport> run_convergence(const SequenceSpec& spec, const std::vector<SeparableSymbol>& syms,
                                               const std::vector<double>& k_list, const QuantizationContext& ctx,
                                               const MdmOptions& opt = {});

/// Least-squares slope p of log|err| = c - p log k (points with err > floor).
std::optional<double> fit_order(const std::vector<double>& k, const std::vector<double>& err, double floor,
                                double* residual = nullptr);

struct JointReport {
  std::size_t components = 0;
  std::string symbol;
  std::vector<double> k;
  /// values[k][i * components + j] = (Op(sym psi) u_i^k, u_j^k).
  std::vector<std::vector<cplx>> values;
};

std::vector<JointReport> joint_mdm(const VectorSequence& vec, const std::vector<SeparableSymbol>& syms,
                                   const std::vector<double>& k_list, const QuantizationContext& ctx,
                                   const MdmOptions& opt = {});

/// Empirical joint Gamma on the first `modes` Hermite modes of one sign at
/// scale k: block (i, j), entry (b, a) = (Op(E_ab psi) u_i^k, u_j^k) / varsigma.
struct JointGamma {
  int components = 0;
  int modes = 0;
  int sign = 1;
  Eigen::MatrixXcd gamma;
  double min_eigenvalue = 0.0;
  double trace = 0.0;
};

JointGamma empirical_gamma(const VectorSequence& vec, int modes, int sign, double k, const QuantizationContext& ctx,
                           const MdmOptions& opt = {});

struct Localization {
  double residual = 0.0;     // || p0 Gamma p0^* ||_F
  double gamma_trace = 0.0;
};

/// p0 = pi(R)^{-m/2} p evaluated at x = 0 and pi_{sign}, on the Gamma block.
Localization localization_check(const std::vector<SeparableSymbol>& p_row, int order, const JointGamma& gamma);

struct CompensatedCheck {
  std::vector<double> k;
  std::vector<double> values;  // int phi (q U_k, U_k)
  double target = 0.0;         // int phi (q U, U) for the weak limit U = 0
  double liminf = 0.0;         // min over the upper half of k_list
  double min_eig_q = 0.0;
  double min_eig_on_kernel = 0.0;  // smallest eigenvalue of q restricted to ker p
  bool kernel_hypothesis = false;
  bool pass = false;
};

CompensatedCheck compensated_liminf_check(const VectorSequence& vec, const Eigen::MatrixXcd& q,
                                          const std::vector<SeparableSymbol>& p_row, int modes,
                                          const ProfileFunction& phi, const std::vector<double>& k_list,
                                          double tolerance = 1e-6);

}  // namespace mdm
}  // namespace hgmdm
