#include "hgmdm/mdm.hpp"

#include "hgmdm/error.hpp"
#include "hgmdm/parallel.hpp"
#include "hgmdm/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace hgmdm {

SequenceSpec SequenceSpec::concentration(ProfileFunction u1) {
  require(u1.integrable(), ErrorCode::Config, "concentration profile must be integrable");
  SequenceSpec s;
  s.kind = SequenceKind::Concentration;
  s.u1 = std::move(u1);
  return s;
}

SequenceSpec SequenceSpec::oscillation(int mode, Factor1D u0) {
  require(mode >= 0, ErrorCode::Config, "oscillation mode must be >= 0");
  require(u0.decays(), ErrorCode::Config, "centre profile u0 must decay");
  SequenceSpec s;
  s.kind = SequenceKind::Oscillation;
  s.mode = mode;
  s.u0 = std::move(u0);
  return s;
}

std::string SequenceSpec::label() const {
  if (kind == SequenceKind::Concentration) return "concentrate:" + u1.name();
  return "oscillate:mode=" + std::to_string(mode);
}

namespace mdm {

namespace {

void require_k(double k) {
  require(std::isfinite(k) && k >= 1.0, ErrorCode::Domain, "sequence scale k must be >= 1");
}

Factor1D gaussian_factor(double a) {
  Factor1D f;
  f.a = a;
  return f;
}

}  // namespace

ProfileFunction make_sequence(const SequenceSpec& spec, double k) {
  require_k(k);
  if (spec.kind == SequenceKind::Concentration) {
    ProfileFunction u = spec.u1.l2_dilate(k);
    u.set_name("u_k[" + spec.u1.name() + "]");
    return u;
  }
  // k e^{i k^2 t} e^{-k^2 (x^2 + y^2) / 4} L_l(k^2 (x^2 + y^2) / 2) u0(t), L_l expanded in x^{2i} y^{2(j-i)}.
  const auto coeffs = special::laguerre_coefficients(spec.mode);
  Factor1D ft = spec.u0;
  ft.omega += k * k;
  std::vector<ProfileTerm> terms;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    const double cj = coeffs[j] * std::pow(0.5 * k * k, static_cast<double>(j));
    for (std::size_t i = 0; i <= j; ++i) {
      ProfileTerm t;
      t.coeff = k * cj * special::binomial(static_cast<int>(j), static_cast<int>(i));
      t.factor[0] = gaussian_factor(0.25 * k * k).times_monomial(static_cast<int>(2 * i));
      t.factor[1] = gaussian_factor(0.25 * k * k).times_monomial(static_cast<int>(2 * (j - i)));
      t.factor[2] = ft;
      terms.push_back(std::move(t));
    }
  }
  return ProfileFunction(std::move(terms), "u_k[oscillate:" + std::to_string(spec.mode) + "]");
}

std::vector<ProfileFunction> make_sequence(const VectorSequence& vec, double k) {
  std::vector<ProfileFunction> out;
  for (const auto& c : vec.components) out.push_back(make_sequence(c.base, k).scaled(c.coefficient));
  return out;
}

void check_nyquist(const SequenceSpec& spec, double k, const SpatialGrid& grid) {
  require_k(k);
  if (spec.kind != SequenceKind::Oscillation) return;
  const double band = k * k + spec.u0.frequency_band();
  const double ht = grid.max_spacing(2);
  if (ht * band > std::numbers::pi) {
    const long required = static_cast<long>(std::ceil(2.0 * grid.half_widths()[2] * band / std::numbers::pi)) + 1;
    fail(ErrorCode::UnderresolvedOscillation,
         "oscillation frequency k^2 = " + std::to_string(k * k) + " is not resolved by the t-grid (" +
             std::to_string(grid.counts()[2]) + " nodes); need at least " + std::to_string(required) + " t-nodes");
  }
}

cplx weak_limit_probe(const SequenceSpec& spec, double k, const ProfileFunction& test) {
  return make_sequence(spec, k).inner(test);
}

// ---------------------------------------------------------------------------
// Grids

namespace {

struct SideRequest {
  bool log = false;
  double log_lo = 0.0, log_hi = 0.0;
  int log_nodes = 0;
  bool log_tail = false;
  bool window = false;
  double win_lo = 0.0, win_hi = 0.0;
};

int scaled_nodes(int nodes, double part, double whole) {
  return std::max(8, static_cast<int>(std::ceil(nodes * part / whole)));
}

void emit_side(int sign, const SideRequest& r, const MdmOptions& opt, std::vector<LambdaSegment>& out) {
  const double full_window = 2.0 * opt.window;
  if (r.window && !r.log) {
    const double lo = std::max(r.win_lo, opt.lambda_floor);
    out.push_back({sign, lo, r.win_hi, scaled_nodes(opt.window_nodes, r.win_hi - lo, full_window), Spacing::Linear,
                   r.win_lo <= opt.lambda_floor});
    return;
  }
  if (r.log && !r.window) {
    out.push_back({sign, r.log_lo, r.log_hi, r.log_nodes, Spacing::Log, r.log_tail});
    return;
  }
  const double whole = std::log(r.log_hi / r.log_lo);
  const double wlo = std::max(r.win_lo, opt.lambda_floor);
  const double whi = r.win_hi;
  if (r.log_lo < wlo) {
    const double b = std::min(r.log_hi, wlo);
    out.push_back({sign, r.log_lo, b, scaled_nodes(r.log_nodes, std::log(b / r.log_lo), whole), Spacing::Log,
                   r.log_tail});
  }
  out.push_back({sign, wlo, whi, scaled_nodes(opt.window_nodes, whi - wlo, full_window), Spacing::Linear,
                 wlo <= r.log_lo && (r.log_tail || r.win_lo <= opt.lambda_floor)});
  if (whi < r.log_hi) {
    const double a = std::max(r.log_lo, whi);
    out.push_back({sign, a, r.log_hi, scaled_nodes(r.log_nodes, std::log(r.log_hi / a), whole), Spacing::Log, false});
  }
}

void add_request(const SequenceSpec& spec, double k, const PlancherelGrid& base, const MdmOptions& opt,
                 SideRequest& plus, SideRequest& minus) {
  if (spec.kind == SequenceKind::Concentration) {
    for (const auto& seg : base.segments()) {
      SideRequest& r = seg.sign > 0 ? plus : minus;
      r.log_lo = r.log ? std::min(r.log_lo, seg.lo * k * k) : seg.lo * k * k;
      r.log_hi = r.log ? std::max(r.log_hi, seg.hi * k * k) : seg.hi * k * k;
      r.log_nodes = std::max(r.log_nodes, seg.nodes);
      r.log_tail = r.log_tail || seg.tail_to_zero;
      r.log = true;
    }
    return;
  }
  const double c = k * k;
  plus.win_lo = plus.window ? std::min(plus.win_lo, c - opt.window) : c - opt.window;
  plus.win_hi = plus.window ? std::max(plus.win_hi, c + opt.window) : c + opt.window;
  plus.window = true;
  if (c - opt.window < opt.lambda_floor) {
    // The window reaches lambda = 0: cover the mirrored part on the negative side.
    const double reach = std::max(opt.window - c, 2.0 * opt.lambda_floor);
    minus.win_lo = minus.window ? std::min(minus.win_lo, -1.0) : -1.0;
    minus.win_hi = minus.window ? std::max(minus.win_hi, reach) : reach;
    minus.window = true;
  }
}

PlancherelGrid build_grid(const SideRequest& plus, const SideRequest& minus, int n_modes, const MdmOptions& opt) {
  std::vector<LambdaSegment> segs;
  if (minus.log || minus.window) emit_side(-1, minus, opt, segs);
  if (plus.log || plus.window) emit_side(1, plus, opt, segs);
  return PlancherelGrid(std::move(segs), n_modes);
}

}  // namespace

PlancherelGrid sequence_grid(const SequenceSpec& spec, double k, const PlancherelGrid& base, const MdmOptions& opt) {
  require_k(k);
  SideRequest plus, minus;
  add_request(spec, k, base, opt, plus, minus);
  return build_grid(plus, minus, base.n_modes(), opt);
}

PlancherelGrid sequence_grid(const VectorSequence& vec, double k, const PlancherelGrid& base, const MdmOptions& opt) {
  require_k(k);
  require(!vec.components.empty(), ErrorCode::Config, "vector sequence has no components");
  SideRequest plus, minus;
  for (const auto& c : vec.components) add_request(c.base, k, base, opt, plus, minus);
  return build_grid(plus, minus, base.n_modes(), opt);
}

// ---------------------------------------------------------------------------
// Predictions

cplx predict_limit(const SequenceSpec& spec, const SeparableSymbol& sym, const QuantizationContext& ctx) {
  for (const auto& t : sym.terms())
    require(t.dual.homogeneous_of_order_zero(), ErrorCode::InvalidSymbol,
            "limit prediction needs 0-homogeneous dual factors; '" + t.dual.label() + "' is not");
  if (sym.is_zero()) return 0.0;
  const auto& grid = ctx.grid;
  if (spec.kind == SequenceKind::Concentration) {
    // int tr(u1^* sigma(0, pi) u1^) dmu
    const DualField uh = fourier::transform_field(spec.u1, grid, ctx.transform);
    std::vector<cplx> parts(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const OperatorMatrix s = sym.eval(GroupPoint{}, grid.rep(i));
      parts[i] = grid.mu()[i] * (uh.values[i].adjoint() * s * uh.values[i]).trace();
    }
    return pairwise_sum(parts);
  }
  // (1/d) sum_i int phi_i(0, 0, t) |u0(t)|^2 dt <tau_i(pi_1) h_l, h_l>
  const int n = grid.n_modes();
  require(spec.mode < n, ErrorCode::TailContamination, "oscillation mode exceeds the truncation");
  const RepPoint rp(1.0, n);
  const double d = reps::formal_degree_exact(1.0);
  const Factor1D density = spec.u0 * spec.u0.conj();
  cplx acc = 0.0;
  for (const auto& t : sym.terms()) {
    auto slice = t.phi.centre_slice();
    for (auto& [c, f] : slice) f = f * density;
    acc += integrate_slice(slice) * t.dual.eval(rp)(spec.mode, spec.mode);
  }
  return acc / d;
}

// ---------------------------------------------------------------------------
// Convergence

std::optional<double> fit_order(const std::vector<double>& k, const std::vector<double>& err, double floor,
                                double* residual) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < k.size() && i < err.size(); ++i)
    if (err[i] > floor) {
      xs.push_back(std::log(k[i]));
      ys.push_back(std::log(err[i]));
    }
  if (xs.size() < 2) return std::nullopt;
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) return std::nullopt;
  const double slope = (n * sxy - sx * sy) / den;
  const double icpt = (sy - slope * sx) / n;
  if (residual) {
    double r = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) r += std::pow(ys[i] - icpt - slope * xs[i], 2);
    *residual = std::sqrt(r / n);
  }
  return -slope;
}

nlohmann::json ConvergenceReport::to_json() const {
  nlohmann::json vals = nlohmann::json::array();
  for (const auto& v : values) vals.push_back({v.real(), v.imag()});
  nlohmann::json j = {{"spec", sequence},
                      {"symbol", symbol},
                      {"k", k},
                      {"values", vals},
                      {"predicted", {predicted.real(), predicted.imag()}},
                      {"abs_err", abs_err},
                      {"scale", scale},
                      {"fit_residual", fit_residual},
                      {"monotone", monotone},
                      {"pass", pass}};
  j["fitted_order"] = fitted_order ? nlohmann::json(*fitted_order) : nlohmann::json(nullptr);
  return j;
}

namespace {

std::vector<SeparableSymbol> with_cutoff(const std::vector<SeparableSymbol>& syms, const MdmOptions& opt) {
  std::vector<SeparableSymbol> out;
  const SeparableSymbol psi = SeparableSymbol::invariant(opt.cutoff, opt.cutoff.label());
  for (const auto& s : syms) {
    SeparableSymbol c = s * psi;
    c.set_spec(s.spec());
    out.push_back(std::move(c));
  }
  return out;
}

void check_k_list(const std::vector<double>& k_list) {
  require(!k_list.empty(), ErrorCode::Config, "k_list is empty");
  for (std::size_t i = 0; i < k_list.size(); ++i) {
    require_k(k_list[i]);
    require(i == 0 || k_list[i] > k_list[i - 1], ErrorCode::Config, "k_list must be increasing");
  }
}

}  // namespace

std::vector<ConvergenceReport> run_convergence(const SequenceSpec& spec, const std::vector<SeparableSymbol>& syms,
                                               const std::vector<double>& k_list, const QuantizationContext& ctx,
                                               const MdmOptions& opt) {
  check_k_list(k_list);
  for (double k : k_list) check_nyquist(spec, k, ctx.spatial);
  const auto cut = with_cutoff(syms, opt);
  const double mass = make_sequence(spec, 1.0).norm_sq();

  std::vector<ConvergenceReport> reports(syms.size());
  for (std::size_t s = 0; s < syms.size(); ++s) {
    reports[s].sequence = spec.label();
    reports[s].symbol = syms[s].spec();
    reports[s].k = k_list;
    reports[s].predicted = predict_limit(spec, syms[s], ctx);
    reports[s].scale = std::max(std::abs(reports[s].predicted), mass);
  }
  for (double k : k_list) {
    QuantizationContext ck{sequence_grid(spec, k, ctx.grid, opt), ctx.spatial, ctx.transform};
    const ProfileFunction u = make_sequence(spec, k);
    const auto vals = quantize::quadratic_forms(cut, u, u, ck);
    for (std::size_t s = 0; s < syms.size(); ++s) {
      reports[s].values.push_back(vals[s]);
      reports[s].abs_err.push_back(std::abs(vals[s] - reports[s].predicted));
    }
  }
  for (auto& r : reports) {
    const double floor = opt.noise_floor * r.scale;
    r.fitted_order = fit_order(r.k, r.abs_err, floor, &r.fit_residual);
    for (std::size_t i = 1; i < r.abs_err.size(); ++i)
      if (r.abs_err[i] > r.abs_err[i - 1] + floor) r.monotone = false;
    r.pass = r.abs_err.back() <= opt.tolerance * r.scale && r.monotone;
  }
  return reports;
}

std::vector<JointReport> joint_mdm(const VectorSequence& vec, const std::vector<SeparableSymbol>& syms,
                                   const std::vector<double>& k_list, const QuantizationContext& ctx,
                                   const MdmOptions& opt) {
  check_k_list(k_list);
  const std::size_t c = vec.components.size();
  require(c > 0, ErrorCode::Config, "vector sequence has no components");
  for (const auto& comp : vec.components)
    for (double k : k_list) check_nyquist(comp.base, k, ctx.spatial);
  const auto cut = with_cutoff(syms, opt);
  std::vector<JointReport> reports(syms.size());
  for (std::size_t s = 0; s < syms.size(); ++s) {
    reports[s].components = c;
    reports[s].symbol = syms[s].spec();
    reports[s].k = k_list;
  }
  for (double k : k_list) {
    QuantizationContext ck{sequence_grid(vec, k, ctx.grid, opt), ctx.spatial, ctx.transform};
    const auto us = make_sequence(vec, k);
    std::vector<DualField> uh;
    for (const auto& u : us) uh.push_back(fourier::transform_field(u, ck.grid, ck.transform));
    std::vector<std::vector<cplx>> block(syms.size(), std::vector<cplx>(c * c));
    for (std::size_t i = 0; i < c; ++i)
      for (std::size_t j = 0; j < c; ++j) {
        const auto vals = quantize::quadratic_forms(cut, uh[i], us[j], ck);
        for (std::size_t s = 0; s < syms.size(); ++s) block[s][i * c + j] = vals[s];
      }
    for (std::size_t s = 0; s < syms.size(); ++s) reports[s].values.push_back(std::move(block[s]));
  }
  return reports;
}

JointGamma empirical_gamma(const VectorSequence& vec, int modes, int sign, double k, const QuantizationContext& ctx,
                           const MdmOptions& opt) {
  const int n = ctx.grid.n_modes();
  require(modes >= 1 && modes <= n, ErrorCode::Config, "Gamma block size must be within the truncation");
  require(sign == 1 || sign == -1, ErrorCode::Config, "sign must be +1 or -1");
  std::vector<SeparableSymbol> syms;
  for (int a = 0; a < modes; ++a)
    for (int b = 0; b < modes; ++b)
      syms.push_back(SeparableSymbol::invariant(symbols::sign_projector(sign, n) * symbols::matrix_unit(a, b, n)));
  const auto reports = joint_mdm(vec, syms, {k}, ctx, opt);
  const int c = static_cast<int>(vec.components.size());
  JointGamma g;
  g.components = c;
  g.modes = modes;
  g.sign = sign;
  g.gamma = Eigen::MatrixXcd::Zero(c * modes, c * modes);
  const double vs = fourier::polar_weight();
  for (int a = 0; a < modes; ++a)
    for (int b = 0; b < modes; ++b) {
      const auto& vals = reports[static_cast<std::size_t>(a * modes + b)].values.front();
      for (int i = 0; i < c; ++i)
        for (int j = 0; j < c; ++j) g.gamma(i * modes + b, j * modes + a) = vals[static_cast<std::size_t>(i * c + j)] / vs;
    }
  const Eigen::MatrixXcd herm = 0.5 * (g.gamma + g.gamma.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
  g.min_eigenvalue = es.eigenvalues().minCoeff();
  g.trace = g.gamma.trace().real();
  return g;
}

namespace {

Eigen::MatrixXcd principal_row(const std::vector<SeparableSymbol>& p_row, int order, int modes, int sign) {
  const RepPoint rp(static_cast<double>(sign), modes);
  const Eigen::VectorXd ev = reps::sublaplacian_eigenvalues(rp);
  Eigen::MatrixXcd row(modes, modes * static_cast<int>(p_row.size()));
  for (std::size_t i = 0; i < p_row.size(); ++i) {
    OperatorMatrix p = p_row[i].eval(GroupPoint{}, rp);
    for (int r = 0; r < modes; ++r) p.row(r) *= std::pow(ev(r), -0.5 * order);
    row.middleCols(static_cast<Eigen::Index>(i) * modes, modes) = p;
  }
  return row;
}

}  // namespace

Localization localization_check(const std::vector<SeparableSymbol>& p_row, int order, const JointGamma& gamma) {
  require(static_cast<int>(p_row.size()) == gamma.components, ErrorCode::Config,
          "p row length must match the number of components");
  require(order >= 0, ErrorCode::Domain, "order must be >= 0");
  const Eigen::MatrixXcd p0 = principal_row(p_row, order, gamma.modes, gamma.sign);
  Localization out;
  out.residual = (p0 * gamma.gamma * p0.adjoint()).norm();
  out.gamma_trace = gamma.trace;
  return out;
}

CompensatedCheck compensated_liminf_check(const VectorSequence& vec, const Eigen::MatrixXcd& q,
                                          const std::vector<SeparableSymbol>& p_row, int modes,
                                          const ProfileFunction& phi, const std::vector<double>& k_list,
                                          double tolerance) {
  check_k_list(k_list);
  const int c = static_cast<int>(vec.components.size());
  require(q.rows() == c && q.cols() == c, ErrorCode::Config, "q must be a components x components matrix");
  require((q - q.adjoint()).norm() <= 1e-12 * std::max(1.0, q.norm()), ErrorCode::Domain, "q must be Hermitian");
  require(static_cast<int>(p_row.size()) == c, ErrorCode::Config, "p row length must match the components");

  CompensatedCheck out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> qs(q, Eigen::EigenvaluesOnly);
  out.min_eig_q = qs.eigenvalues().minCoeff();

  // q >= 0 on ker p(0, pi_{+-1}) (q acting as q (x) I on the mode block).
  out.min_eig_on_kernel = std::numeric_limits<double>::infinity();
  for (int sign : {1, -1}) {
    const Eigen::MatrixXcd p0 = principal_row(p_row, 0, modes, sign);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(p0, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cut = 1e-10 * std::max(1.0, sv.size() ? sv(0) : 0.0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > cut) ++rank;
    const Eigen::MatrixXcd kernel = svd.matrixV().rightCols(svd.matrixV().cols() - rank);
    if (kernel.cols() == 0) continue;
    Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(c * modes, c * modes);
    for (int i = 0; i < c; ++i)
      for (int j = 0; j < c; ++j)
        big.block(i * modes, j * modes, modes, modes) = q(i, j) * Eigen::MatrixXcd::Identity(modes, modes);
    const Eigen::MatrixXcd restricted = kernel.adjoint() * big * kernel;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ks(0.5 * (restricted + restricted.adjoint()),
                                                      Eigen::EigenvaluesOnly);
    out.min_eig_on_kernel = std::min(out.min_eig_on_kernel, ks.eigenvalues().minCoeff());
  }
  if (!std::isfinite(out.min_eig_on_kernel)) out.min_eig_on_kernel = 0.0;
  out.kernel_hypothesis = out.min_eig_on_kernel >= -1e-12;

  out.k = k_list;
  for (double k : k_list) {
    const auto us = make_sequence(vec, k);
    cplx acc = 0.0;
    for (int i = 0; i < c; ++i)
      for (int j = 0; j < c; ++j)
        if (q(i, j) != 0.0) acc += q(i, j) * (phi * us[static_cast<std::size_t>(j)]).inner(us[static_cast<std::size_t>(i)]);
    out.values.push_back(acc.real());
  }
  out.target = 0.0;
  const std::size_t start = out.values.size() / 2;
  out.liminf = *std::min_element(out.values.begin() + static_cast<long>(start), out.values.end());
  out.pass = out.kernel_hypothesis && out.liminf >= out.target - tolerance;
  return out;
}

}  // namespace mdm
}  // namespace hgmdm
