#include "hgmdm/fourier.hpp"

#include "hgmdm/error.hpp"
#include "hgmdm/parallel.hpp"
#include "hgmdm/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hgmdm {

// ---------------------------------------------------------------------------
// Grid

void PlancherelConfig::validate() const {
  require(std::isfinite(lambda_min) && lambda_min > 0.0, ErrorCode::Config,
          "plancherel_grid.lambda_min must be > 0 (lambda = 0 is excluded)");
  require(std::isfinite(lambda_max) && lambda_max > lambda_min, ErrorCode::Config,
          "plancherel_grid.lambda_max must exceed lambda_min");
  require(nodes_per_sign >= 2, ErrorCode::Config, "plancherel_grid.nodes_per_sign must be >= 2");
  require(n_modes >= 1, ErrorCode::Config, "plancherel_grid.n_modes must be >= 1");
  require(signs == "both" || signs == "positive" || signs == "negative", ErrorCode::Config,
          "plancherel_grid.signs must be \"both\", \"positive\" or \"negative\"");
}

nlohmann::json PlancherelConfig::to_json() const {
  return {{"lambda_min", lambda_min},   {"lambda_max", lambda_max},
          {"nodes_per_sign", nodes_per_sign}, {"spacing", spacing == Spacing::Log ? "log" : "linear"},
          {"n_modes", n_modes},         {"signs", signs},
          {"tail_correction", tail_correction}};
}

PlancherelConfig PlancherelConfig::from_json(const nlohmann::json& j) {
  PlancherelConfig c;
  try {
    c.lambda_min = j.value("lambda_min", c.lambda_min);
    c.lambda_max = j.value("lambda_max", c.lambda_max);
    c.nodes_per_sign = j.value("nodes_per_sign", c.nodes_per_sign);
    c.n_modes = j.value("n_modes", c.n_modes);
    c.signs = j.value("signs", c.signs);
    c.tail_correction = j.value("tail_correction", c.tail_correction);
    const std::string spacing = j.value("spacing", std::string("log"));
    require(spacing == "log" || spacing == "linear", ErrorCode::Config,
            "plancherel_grid.spacing must be \"log\" or \"linear\"");
    c.spacing = spacing == "log" ? Spacing::Log : Spacing::Linear;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Config, std::string("plancherel_grid: ") + e.what());
  }
  c.validate();
  return c;
}

PlancherelGrid::PlancherelGrid(const PlancherelConfig& config) : n_modes_(config.n_modes) {
  config.validate();
  for (int sign : {-1, 1}) {
    if ((sign < 0 && config.signs == "positive") || (sign > 0 && config.signs == "negative")) continue;
    segments_.push_back({sign, config.lambda_min, config.lambda_max, config.nodes_per_sign, config.spacing,
                         config.tail_correction});
  }
  build();
}

PlancherelGrid::PlancherelGrid(std::vector<LambdaSegment> segments, int n_modes)
    : segments_(std::move(segments)), n_modes_(n_modes) {
  require(n_modes >= 1, ErrorCode::Config, "n_modes must be >= 1");
  build();
}

namespace {

// Trapezoid rule with Gregory end corrections (exact for cubics).
std::vector<double> gregory_weights(int n) {
  std::vector<double> w(static_cast<std::size_t>(n), 1.0);
  if (n >= 6) {
    const double ends[3] = {3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0};
    for (int k = 0; k < 3; ++k) w[k] = w[n - 1 - k] = ends[k];
  } else {
    w.front() = w.back() = 0.5;
  }
  return w;
}

}  // namespace

void PlancherelGrid::build() {
  require(!segments_.empty(), ErrorCode::Config, "Plancherel grid has no segments");
  lambda_.clear();
  dlambda_.clear();
  mu_.clear();
  for (const auto& seg : segments_) {
    require(seg.sign == 1 || seg.sign == -1, ErrorCode::Config, "segment sign must be +1 or -1");
    require(seg.lo > 0.0 && seg.hi > seg.lo && std::isfinite(seg.hi), ErrorCode::Config,
            "segment needs 0 < lo < hi");
    require(seg.nodes >= 2, ErrorCode::Config, "segment needs at least 2 nodes");
    const auto w = gregory_weights(seg.nodes);
    const int n = seg.nodes;
    for (int k = 0; k < n; ++k) {
      double lam = 0.0, dl = 0.0;
      if (seg.spacing == Spacing::Log) {
        const double h = std::log(seg.hi / seg.lo) / (n - 1);
        lam = seg.lo * std::exp(h * k);
        dl = w[k] * h * lam;
      } else {
        const double h = (seg.hi - seg.lo) / (n - 1);
        lam = seg.lo + h * k;
        dl = w[k] * h;
      }
      if (k == 0 && seg.tail_to_zero) dl += seg.lo;
      lambda_.push_back(seg.sign * lam);
      dlambda_.push_back(dl);
      mu_.push_back(density * lam * dl);
    }
  }
}

PlancherelGrid PlancherelGrid::scaled(double factor) const {
  require(factor > 0.0 && std::isfinite(factor), ErrorCode::Domain, "grid scale factor must be positive");
  auto segs = segments_;
  for (auto& s : segs) {
    s.lo *= factor;
    s.hi *= factor;
  }
  return PlancherelGrid(std::move(segs), n_modes_);
}

PlancherelGrid PlancherelGrid::with_modes(int n_modes) const { return PlancherelGrid(segments_, n_modes); }

double PlancherelGrid::integrate(const std::function<double(double)>& f) const {
  std::vector<double> parts(size());
  for (std::size_t i = 0; i < size(); ++i) parts[i] = mu_[i] * f(lambda_[i]);
  return pairwise_sum(parts);
}

nlohmann::json PlancherelGrid::to_json() const {
  nlohmann::json segs = nlohmann::json::array();
  for (const auto& s : segments_)
    segs.push_back({{"sign", s.sign},
                    {"lo", s.lo},
                    {"hi", s.hi},
                    {"nodes", s.nodes},
                    {"spacing", s.spacing == Spacing::Log ? "log" : "linear"},
                    {"tail_to_zero", s.tail_to_zero}});
  return {{"n_modes", n_modes_}, {"segments", segs}};
}

DualField::DualField(PlancherelGrid g, std::vector<OperatorMatrix> v) : grid(std::move(g)), values(std::move(v)) {
  require(values.size() == grid.size(), ErrorCode::Config, "dual field needs one matrix per grid node");
}

DualField DualField::scaled(cplx c) const {
  auto v = values;
  for (auto& m : v) m *= c;
  return DualField(grid, std::move(v));
}

nlohmann::json DualField::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto rec = matrix_to_json(values[i]);
    rec["lambda"] = grid.lambdas()[i];
    arr.push_back(std::move(rec));
  }
  return arr;
}

namespace fourier {

// ---------------------------------------------------------------------------
// Transforms

OperatorMatrix transform(const ProfileFunction& f, const RepPoint& rp, const TransformOptions& opt) {
  const RepPoint checked(rp.lambda, rp.n_modes);
  const int n_modes = rp.n_modes;
  if (f.is_zero()) return OperatorMatrix::Zero(n_modes, n_modes);
  require(f.integrable(), ErrorCode::NotIntegrable, "transform needs a decaying profile ('" + f.name() + "')");

  const double lam = rp.lambda;
  const double al = std::abs(lam);
  const double sl = std::sqrt(al);
  const double hermite = std::sqrt(2.0 * n_modes + 1.0) + opt.margin;
  const double range = hermite / sl;
  double kernel_band = 0.0;
  for (const auto& t : f.terms()) {
    const auto& fy = t.factor[1];
    const double b = t.factor[0].frequency_band(opt.margin) +
                     0.5 * al * (std::abs(fy.s0) + fy.spatial_extent(opt.margin));
    kernel_band = std::max(kernel_band, b);
  }
  const double delta = 2.0 * std::numbers::pi / (sl * hermite + kernel_band);
  const long half = static_cast<long>(std::ceil(range / delta));
  const long m = 2 * half + 1;
  require(m <= opt.max_points, ErrorCode::UnderresolvedDomain,
          "transform grid would need " + std::to_string(m) + " points per axis");

  Eigen::MatrixXd h(m, n_modes);
  {
    std::vector<double> row(static_cast<std::size_t>(n_modes));
    const double norm = std::pow(al, 0.25);
    for (long i = 0; i < m; ++i) {
      special::hermite_functions(n_modes, sl * (i - half) * delta, row);
      for (int k = 0; k < n_modes; ++k) h(i, k) = norm * row[static_cast<std::size_t>(k)];
    }
  }

  // Per term: X(d delta) for d = i - j and coeff * T^(lambda) * Y^(lambda s delta / 2) for s = i + j - 2 half.
  const long span = 4 * half + 1;
  std::vector<std::vector<cplx>> xd, ys;
  for (const auto& t : f.terms()) {
    const cplx coeff = t.coeff * t.factor[2].fourier(lam);
    if (coeff == 0.0) continue;
    std::vector<cplx> a(static_cast<std::size_t>(span)), b(static_cast<std::size_t>(span));
    for (long d = 0; d < span; ++d) {
      a[d] = t.factor[0]((d - 2 * half) * delta);
      b[d] = coeff * t.factor[1].fourier(0.5 * lam * (d - 2 * half) * delta);
    }
    xd.push_back(std::move(a));
    ys.push_back(std::move(b));
  }

  Eigen::MatrixXd mr = Eigen::MatrixXd::Zero(n_modes, n_modes);
  Eigen::MatrixXd mi = Eigen::MatrixXd::Zero(n_modes, n_modes);
  constexpr long block = 128;
  Eigen::MatrixXd kr(block, m), ki(block, m);
  std::vector<cplx> row(static_cast<std::size_t>(m));
  for (long i0 = 0; i0 < m; i0 += block) {
    const long rows = std::min(block, m - i0);
    for (long r = 0; r < rows; ++r) {
      const long i = i0 + r;
      std::fill(row.begin(), row.end(), cplx(0.0));
      for (std::size_t term = 0; term < xd.size(); ++term) {
        const cplx* xa = xd[term].data() + (i + 2 * half);  // xa[-j] = X((i - j) delta)
        const cplx* yb = ys[term].data() + i;                // yb[j]  = Y^(...(i + j - 2 half))
        for (long j = 0; j < m; ++j) row[j] += xa[-j] * yb[j];
      }
      for (long j = 0; j < m; ++j) {
        kr(r, j) = row[j].real();
        ki(r, j) = row[j].imag();
      }
    }
    const auto hb = h.middleRows(i0, rows);
    mr.noalias() += hb.transpose() * (kr.topRows(rows) * h);
    mi.noalias() += hb.transpose() * (ki.topRows(rows) * h);
  }
  OperatorMatrix out(n_modes, n_modes);
  out.real() = mr * (delta * delta);
  out.imag() = mi * (delta * delta);
  return out;
}

OperatorMatrix transform_direct(const ProfileFunction& f, const RepPoint& rp, const SpatialGrid& grid) {
  const RepPoint checked(rp.lambda, rp.n_modes);
  double band = 0.0;
  for (const auto& t : f.terms()) band = std::max(band, t.factor[2].frequency_band());
  const double need = std::abs(rp.lambda) + band;
  const double ht = grid.max_spacing(2);
  // Trapezoid aliasing: the spectrum of f e^{-i lambda t} must stay below 2 pi / h_t.
  if (ht * need > 2.0 * std::numbers::pi) {
    const long required = static_cast<long>(std::ceil(grid.half_widths()[2] * need / std::numbers::pi)) + 1;
    fail(ErrorCode::UnderresolvedOscillation, "t-grid spacing " + std::to_string(ht) + " cannot resolve frequency " +
                                                  std::to_string(need) + "; need at least " +
                                                  std::to_string(required) + " t-nodes");
  }
  const auto& xs = grid.nodes(0);
  const auto& ys = grid.nodes(1);
  const auto& ts = grid.nodes(2);
  const auto& wx = grid.weights(0);
  const auto& wy = grid.weights(1);
  const auto& wt = grid.weights(2);
  std::vector<cplx> phase(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) phase[k] = wt[k] * std::polar(1.0, -rp.lambda * ts[k]);

  std::vector<OperatorMatrix> slabs(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    OperatorMatrix acc = OperatorMatrix::Zero(rp.n_modes, rp.n_modes);
    for (std::size_t j = 0; j < ys.size(); ++j) {
      cplx g = 0.0;
      for (std::size_t k = 0; k < ts.size(); ++k) g += phase[k] * f({xs[i], ys[j], ts[k]});
      if (g == 0.0) continue;
      acc += (wy[j] * g) * reps::rep_matrix(rp, {xs[i], ys[j], 0.0}).adjoint();
    }
    slabs[i] = wx[i] * acc;
  });
  return pairwise_sum(slabs);
}

DualField transform_field(const ProfileFunction& f, const PlancherelGrid& grid, const TransformOptions& opt) {
  std::vector<OperatorMatrix> values(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { values[i] = transform(f, grid.rep(i), opt); });
  return DualField(grid, std::move(values));
}

double hs_norm_sq_exact(const ProfileFunction& f, double lambda) {
  require(lambda != 0.0, ErrorCode::DegenerateRep, "lambda must be nonzero");
  const auto& terms = f.terms();
  std::vector<cplx> th(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) th[i] = terms[i].coeff * terms[i].factor[2].fourier(lambda);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i)
    for (std::size_t j = 0; j < terms.size(); ++j) {
      if (th[i] == 0.0 || th[j] == 0.0) continue;
      const cplx gx = (terms[i].factor[0] * terms[j].factor[0].conj()).integral();
      const cplx gy = (terms[i].factor[1] * terms[j].factor[1].conj()).integral();
      acc += th[i] * std::conj(th[j]) * gx * gy;
    }
  return 2.0 * std::numbers::pi / std::abs(lambda) * acc.real();
}

namespace {

// Exact mass of c_P |lambda| H(lambda) on (a, b), Gauss-Legendre panels in log lambda.
double exact_mass(const ProfileFunction& f, int sign, double a, double b) {
  if (b <= a) return 0.0;
  const int panels = std::max(1, static_cast<int>(std::ceil(4.0 * std::log10(b / a))));
  const double h = std::log(b / a) / panels;
  const auto rule = special::gauss_legendre(20, 0.0, h);
  double acc = 0.0;
  for (int p = 0; p < panels; ++p)
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double lam = a * std::exp(p * h + rule.nodes[k]);
      acc += rule.weights[k] * lam * lam * PlancherelGrid::density * hs_norm_sq_exact(f, sign * lam);
    }
  return acc;
}

}  // namespace

PlancherelNorm plancherel_norm(const ProfileFunction& f, const PlancherelGrid& grid, const TransformOptions& opt) {
  const DualField field = transform_field(f, grid, opt);
  PlancherelNorm out;
  std::vector<double> trunc(grid.size()), exact(grid.size()), corr(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double hs = field.values[i].squaredNorm();
    trunc[i] = grid.mu()[i] * hs;
    exact[i] = grid.mu()[i] * hs_norm_sq_exact(f, grid.lambdas()[i]);
  }
  std::size_t offset = 0;
  for (const auto& seg : grid.segments()) {
    if (seg.tail_to_zero) {
      const std::size_t i = offset;
      corr[i] = PlancherelGrid::density * seg.lo * seg.lo * field.values[i].squaredNorm();
    }
    offset += static_cast<std::size_t>(seg.nodes);
  }
  out.value = pairwise_sum(trunc);
  out.exact_density = pairwise_sum(exact);
  out.truncation_tail = out.exact_density - out.value;
  out.tail_correction = pairwise_sum(corr);

  // Window tail: exact mass of each sign outside the union of its segments.
  for (int sign : {-1, 1}) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    bool any = false, to_zero = false;
    for (const auto& seg : grid.segments())
      if (seg.sign == sign) {
        any = true;
        lo = std::min(lo, seg.lo);
        hi = std::max(hi, seg.hi);
        to_zero = to_zero || seg.tail_to_zero;
      }
    if (!any) {
      out.window_tail += exact_mass(f, sign, 1e-12, 1e12);
      continue;
    }
    if (!to_zero) out.window_tail += exact_mass(f, sign, lo * 1e-10, lo);
    out.window_tail += exact_mass(f, sign, hi, hi * 1e8);
  }
  return out;
}

double plancherel_norm(const DualField& field) {
  std::vector<double> parts(field.values.size());
  for (std::size_t i = 0; i < parts.size(); ++i) parts[i] = field.grid.mu()[i] * field.values[i].squaredNorm();
  return pairwise_sum(parts);
}

cplx parseval(const DualField& a, const DualField& b) {
  require(a.values.size() == b.values.size(), ErrorCode::Config, "parseval: fields on different grids");
  std::vector<cplx> parts(a.values.size());
  for (std::size_t i = 0; i < parts.size(); ++i)
    parts[i] = a.grid.mu()[i] * (a.values[i].array() * b.values[i].array().conjugate()).sum();
  return pairwise_sum(parts);
}

cplx parseval(const ProfileFunction& f1, const ProfileFunction& f2, const PlancherelGrid& grid,
              const TransformOptions& opt) {
  return parseval(transform_field(f1, grid, opt), transform_field(f2, grid, opt));
}

cplx invert(const DualField& field, const GroupPoint& g, double tail_threshold) {
  const auto& grid = field.grid;
  std::vector<cplx> parts(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const OperatorMatrix p = reps::rep_matrix(RepPoint(grid.lambdas()[i], int(field.values[i].rows())), g);
    parts[i] = grid.mu()[i] * (p.transpose().array() * field.values[i].array()).sum();
  });
  double total_abs = 0.0;
  for (const auto& c : parts) total_abs += std::abs(c);
  if (total_abs > 0.0) {
    for (int sign : {-1, 1}) {
      std::size_t top = parts.size();
      for (std::size_t i = 0; i < parts.size(); ++i) {
        const double l = grid.lambdas()[i];
        if ((l > 0) == (sign > 0) && (top == parts.size() || std::abs(l) > std::abs(grid.lambdas()[top]))) top = i;
      }
      if (top < parts.size() && std::abs(parts[top]) > tail_threshold * total_abs)
        fail(ErrorCode::NotIntegrable, "trace sum does not decay at |lambda| = " +
                                           std::to_string(std::abs(grid.lambdas()[top])));
    }
  }
  return pairwise_sum(parts);
}

int weighted_degree(std::array<int, 3> alpha) {
  for (int a : alpha) require(a >= 0, ErrorCode::Domain, "multi-index entries must be >= 0");
  return alpha[0] + alpha[1] + 2 * alpha[2];
}

DualField difference_op(const ProfileFunction& f, std::array<int, 3> alpha, const PlancherelGrid& grid,
                        const TransformOptions& opt) {
  weighted_degree(alpha);
  return transform_field(f.times_monomial(alpha), grid, opt);
}

double polar_weight() { return 2.0 * PlancherelGrid::density; }

DualPolar polar_dual(const std::function<double(double)>& f, const PlancherelGrid& grid, int panels_per_decade,
                     int nodes_per_panel) {
  DualPolar out;
  out.varsigma = polar_weight();
  out.atom_plus = f(1.0);
  out.atom_minus = f(-1.0);
  for (int sign : {1, -1}) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    bool any = false, to_zero = false;
    for (const auto& seg : grid.segments())
      if (seg.sign == sign) {
        any = true;
        lo = std::min(lo, seg.lo);
        hi = std::max(hi, seg.hi);
        if (seg.tail_to_zero && seg.lo <= lo) to_zero = true;
      }
    if (!any) continue;
    const double rmin = std::sqrt(lo), rmax = std::sqrt(hi);
    const int panels = std::max(1, static_cast<int>(std::ceil(panels_per_decade * std::log10(rmax / rmin))));
    const double h = std::log(rmax / rmin) / panels;
    const auto rule = special::gauss_legendre(nodes_per_panel, 0.0, h);
    std::vector<double> parts;
    auto& profile = sign > 0 ? out.profile_plus : out.profile_minus;
    for (int p = 0; p < panels; ++p)
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double r = rmin * std::exp(p * h + rule.nodes[k]);
        const double v = f(sign * r * r);
        if (sign > 0) out.radii.push_back(r);
        profile.push_back(v);
        parts.push_back(rule.weights[k] * v * std::pow(r, HomogeneousStructure::Q));
      }
    if (to_zero) parts.push_back(0.5 * f(sign * lo) * lo * lo);
    const double total = out.varsigma * pairwise_sum(parts);
    (sign > 0 ? out.plus_total : out.minus_total) = total;
  }
  out.total = out.plus_total + out.minus_total;
  return out;
}

}  // namespace fourier
}  // namespace hgmdm
