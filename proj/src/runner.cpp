#include "hgmdm/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "hgmdm/error.hpp"
#include "hgmdm/registry.hpp"
#include "hgmdm/report.hpp"

namespace hgmdm {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Config parsing helpers

void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> known) {
  require(j.is_object(), ErrorCode::Config, where + " must be a JSON object");
  std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, value] : j.items())
    require(allowed.count(key) > 0, ErrorCode::Config, "unknown field '" + (where.empty() ? "" : where + ".") + key + "'");
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::Config, "field '" + where + "." + key + "' has the wrong type");
  }
}

void field_check(bool ok, const std::string& field, const std::string& what) {
  require(ok, ErrorCode::Config, "field '" + field + "' " + what);
}

std::vector<std::string> default_symbols(const std::string& command, const std::string& variant) {
  if (command == "symbol-check")
    return {"id", "proj:0..3", "sign", "pos", "neg", "mult:bump:0.25:1", "gaussian*id", "X", "R"};
  if (variant == "oscillate") return {"proj:0..3", "t_gaussian*id"};
  return {"proj:0", "proj:1", "id", "gaussian*id"};
}

// ---------------------------------------------------------------------------
// Result collection

struct Suite {
  json checks = json::array();
  std::vector<std::string> failures;
  std::vector<std::string> warnings;
  report::CsvTable csv{{"check", "value", "tolerance", "pass"}};

  // ok == value <= tolerance unless given explicitly.
  void check(const std::string& name, double value, double tolerance, std::optional<bool> ok = std::nullopt,
             json extra = json::object()) {
    const bool pass = ok.value_or(std::isfinite(value) && value <= tolerance);
    json e = {{"name", name}, {"value", value}, {"tolerance", tolerance}, {"pass", pass}};
    for (auto& [k, v] : extra.items()) e[k] = v;
    checks.push_back(std::move(e));
    csv.add_row({name, report::number(value), report::number(tolerance), pass ? "true" : "false"});
    if (!pass) failures.push_back(name + ": value " + report::number(value) + " vs tolerance " + report::number(tolerance));
  }
  void warn(std::string msg) { warnings.push_back(std::move(msg)); }
};

GroupPoint random_point(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    const GroupPoint g{radius * u(rng), radius * u(rng), radius * radius * u(rng)};
    if (group::quasi_norm(g) <= radius) return g;
  }
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// max |f| over a coarse sample box around the origin.
double sample_peak(const ProfileFunction& f) {
  double peak = 0.0;
  for (int i = -6; i <= 6; ++i)
    for (int j = -6; j <= 6; ++j)
      for (int l = -6; l <= 6; ++l) peak = std::max(peak, std::abs(f(GroupPoint{0.5 * i, 0.5 * j, 0.5 * l})));
  return peak;
}

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

// ---------------------------------------------------------------------------
// plancherel

void suite_plancherel(const ExperimentConfig& cfg, Suite& s, json& results) {
  const PlancherelGrid grid(cfg.plancherel);
  std::vector<ProfileFunction> fs;
  for (const auto& name : cfg.profiles) fs.push_back(registry::profile(name));

  json rows = json::array();
  report::CsvTable table({"profile", "norm_sq", "plancherel", "rel_err", "truncation_tail", "window_tail"});
  std::vector<DualField> fields;
  double max_rel = 0.0;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const auto& f = fs[i];
    const double direct = f.norm_sq();
    fields.push_back(fourier::transform_field(f, grid, cfg.transform));
    const auto pn = fourier::plancherel_norm(f, grid, cfg.transform);
    const double err = rel(pn.value, direct);
    max_rel = std::max(max_rel, err);
    s.check("plancherel:" + cfg.profiles[i], err, cfg.tol.plancherel, std::nullopt,
            {{"truncation_tail", pn.truncation_tail}, {"window_tail", pn.window_tail}});
    if (pn.truncation_tail > cfg.tol.sum_rule * direct)
      s.warn("plancherel:" + cfg.profiles[i] + ": Hermite truncation tail " + report::number(pn.truncation_tail) +
             " exceeds tolerances.sum_rule of the norm; raise plancherel_grid.n_modes");

    // Polar route: sum over signs of varsigma int ||f^(pi_{+-r^2})||^2 r^3 dr.
    const auto polar = fourier::polar_dual(
        [&](double lambda) {
          return fourier::transform(f, RepPoint(lambda, grid.n_modes()), cfg.transform).squaredNorm();
        },
        grid);
    const double perr = rel(polar.total, pn.value);
    s.check("polar:" + cfg.profiles[i], perr, cfg.tol.polar);

    rows.push_back({{"profile", cfg.profiles[i]},
                    {"norm_sq", direct},
                    {"plancherel", pn.value},
                    {"exact_density", pn.exact_density},
                    {"rel_err", err},
                    {"truncation_tail", pn.truncation_tail},
                    {"window_tail", pn.window_tail},
                    {"tail_correction", pn.tail_correction},
                    {"polar_total", polar.total},
                    {"polar_rel_err", perr}});
    table.add_row({cfg.profiles[i], report::number(direct), report::number(pn.value), report::number(err),
                   report::number(pn.truncation_tail), report::number(pn.window_tail)});
  }

  // Parseval on neighbouring pairs.
  json pairs = json::array();
  for (std::size_t i = 0; i + 1 < fs.size(); ++i) {
    const cplx direct = fs[i].inner(fs[i + 1]);
    const cplx dual = fourier::parseval(fields[i], fields[i + 1]);
    const double scale = std::sqrt(fs[i].norm_sq() * fs[i + 1].norm_sq());
    const double err = std::abs(dual - direct) / scale;
    s.check("parseval:" + cfg.profiles[i] + "," + cfg.profiles[i + 1], err, cfg.tol.parseval);
    pairs.push_back({{"f", cfg.profiles[i]}, {"g", cfg.profiles[i + 1]}, {"direct", cjson(direct)},
                     {"parseval", cjson(dual)}, {"rel_err", err}});
  }

  // Inversion at two points.
  json inv = json::array();
  const std::vector<GroupPoint> points{{0.0, 0.0, 0.0}, {0.3, -0.2, 0.1}};
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const double peak = sample_peak(fs[i]);
    for (const auto& g : points) {
      const cplx direct = fs[i](g);
      const cplx back = fourier::invert(fields[i], g);
      const double err = std::abs(back - direct) / peak;
      s.check("inversion:" + cfg.profiles[i] + "@(" + report::number(g.x) + "," + report::number(g.y) + "," +
                  report::number(g.t) + ")",
              err, cfg.tol.inversion);
      inv.push_back({{"profile", cfg.profiles[i]}, {"g", {g.x, g.y, g.t}}, {"direct", cjson(direct)},
                     {"inverted", cjson(back)}, {"rel_err", err}});
    }
  }

  results = {{"profiles", rows}, {"max_rel_err", max_rel}, {"parseval", pairs}, {"inversion", inv},
             {"table_csv", table.str()}};
}

// ---------------------------------------------------------------------------
// rep-check

void suite_rep(const ExperimentConfig& cfg, Suite& s, json& results) {
  const auto& rc = cfg.rep;
  const RepPoint rp(rc.lambda, rc.n_modes);
  std::mt19937_64 rng(rc.seed);

  // Homomorphism on the leading block.
  double max_defect = 0.0;
  int min_block = rc.n_modes;
  for (int p = 0; p < rc.pairs; ++p) {
    const GroupPoint g1 = random_point(rng, rc.radius), g2 = random_point(rng, rc.radius);
    const GroupPoint g12 = group::multiply(g1, g2);
    const double size = std::max(group::quasi_norm(g1), group::quasi_norm(g2));
    const int b = reps::leading_block(rp, size);
    min_block = std::min(min_block, b);
    if (b == 0) continue;
    const OperatorMatrix d = reps::rep_matrix(rp, g12) - reps::rep_matrix(rp, g1) * reps::rep_matrix(rp, g2);
    max_defect = std::max(max_defect, d.topLeftCorner(b, b).operatorNorm());
  }
  s.check("homomorphism", max_defect, cfg.tol.homomorphism, std::nullopt, {{"min_leading_block", min_block}});
  if (min_block == 0) s.warn("homomorphism: some pairs have an empty leading block; raise rep_check.n_modes");

  // Dilation covariance: pi_lambda(D_r g) = pi_{r^2 lambda}(g).
  double cov = 0.0;
  for (int p = 0; p < 10; ++p) {
    const GroupPoint g = random_point(rng, rc.radius);
    const OperatorMatrix a = reps::rep_matrix(rp, group::dilate(rc.dilation, g));
    const OperatorMatrix b = reps::rep_matrix(reps::dilate_rep(rc.dilation, rp), g);
    cov = std::max(cov, (a - b).cwiseAbs().maxCoeff());
  }
  s.check("covariance:r=" + report::number(rc.dilation), cov, cfg.tol.covariance);

  // Matrix coefficients against the Laguerre closed form.
  json lag = json::array();
  for (int mode : rc.modes) {
    require(mode >= 0 && mode + 2 < rc.n_modes, ErrorCode::Config,
            "field 'rep_check.modes' entry " + std::to_string(mode) + " is too close to the truncation");
    double err = 0.0;
    std::mt19937_64 prng(rc.seed + static_cast<std::uint64_t>(mode) + 1);
    for (int i = 0; i < rc.samples; ++i) {
      const GroupPoint g = random_point(prng, rc.radius);
      cplx expect = reps::laguerre_coefficient(std::abs(rc.lambda), mode, g);
      if (rc.lambda < 0) expect = std::conj(expect);
      err = std::max(err, std::abs(reps::matrix_coefficient(rp, mode, g) - expect));
    }
    s.check("laguerre:l=" + std::to_string(mode), err, cfg.tol.laguerre);
    lag.push_back({{"mode", mode}, {"max_abs_err", err}});
  }

  // Formal degree.
  json deg = json::array();
  const double exact = reps::formal_degree_exact(rc.lambda);
  for (int mode : rc.degree_modes) {
    const auto fd = reps::formal_degree(rp, mode, cfg.spatial);
    s.check("formal_degree:l=" + std::to_string(mode), std::abs(fd.value - exact), cfg.tol.formal_degree);
    if (fd.underresolved) s.warn("formal_degree: coefficient not decayed at the (x, y) box edge");
    deg.push_back({{"mode", mode}, {"value", fd.value}, {"exact", exact}, {"tail_ratio", fd.tail_ratio}});
  }

  results = {{"lambda", rc.lambda},       {"n_modes", rc.n_modes},      {"homomorphism_defect", max_defect},
             {"min_leading_block", min_block}, {"covariance_defect", cov}, {"laguerre", lag},
             {"formal_degree", deg}};
}

// ---------------------------------------------------------------------------
// symbol-check

void suite_symbols(const ExperimentConfig& cfg, const std::vector<std::string>& specs, Suite& s, json& results) {
  const int n = cfg.plancherel.n_modes;
  std::vector<SeparableSymbol> syms;
  for (const auto& sp : specs) syms.push_back(symbols::parse(sp, n));
  const GroupPoint g{0.3, -0.2, 0.1};
  const std::vector<RepPoint> rps{RepPoint(0.7, n), RepPoint(-1.9, n)};
  const PlancherelGrid grid(cfg.plancherel);
  const DualFactor psi = symbols::smooth_cutoff(cfg.cutoff_lo, cfg.cutoff_hi);
  const ProfileFunction u = registry::profile("gaussian");
  const QuantizationContext ctx{grid, cfg.spatial, cfg.transform};

  json rows = json::array();
  for (std::size_t i = 0; i < syms.size(); ++i) {
    const auto& a = syms[i];
    const auto& b = syms[(i + 1) % syms.size()];
    double prod = 0.0, adj = 0.0, comm = 0.0, hom = 0.0;
    bool diagonal = true, hom0 = true;
    for (const auto& t : a.terms()) {
      diagonal = diagonal && t.dual.is_diagonal();
      hom0 = hom0 && t.dual.homogeneous_of_order_zero();
    }
    for (const auto& rp : rps) {
      const OperatorMatrix ea = a.eval(g, rp), eb = b.eval(g, rp);
      const double scale = std::max(1.0, ea.norm() * eb.norm());
      prod = std::max(prod, ((a * b).eval(g, rp) - ea * eb).norm() / scale);
      adj = std::max(adj, (a.adjoint().eval(g, rp) - ea.adjoint()).norm() / std::max(1.0, ea.norm()));
      if (diagonal) {
        const OperatorMatrix p = psi.eval(rp);
        comm = std::max(comm, (p * ea - ea * p).norm());
      }
    }
    s.check("algebra:product:" + specs[i], prod, cfg.tol.algebra);
    s.check("algebra:adjoint:" + specs[i], adj, cfg.tol.algebra);
    if (diagonal) s.check("cutoff_commutator:" + specs[i], comm, cfg.tol.algebra);
    if (hom0)
      for (const auto& t : a.terms()) hom = std::max(hom, symbols::homogeneity_audit(t.dual, grid, 3.0));
    if (hom0) s.check("homogeneity:" + specs[i], hom, cfg.tol.algebra);

    const double pos = quantize::positivity_probe(a, psi, u, ctx);
    s.check("positivity:" + specs[i], -pos, cfg.tol.positivity, pos >= -cfg.tol.positivity);
    rows.push_back({{"symbol", specs[i]}, {"product_defect", prod}, {"adjoint_defect", adj},
                    {"diagonal", diagonal}, {"homogeneous_order_zero", hom0}, {"positivity_probe", pos}});
  }

  // Leibniz tables against the group law.
  json leib = json::array();
  std::mt19937_64 rng(cfg.rep.seed);
  const std::vector<std::array<int, 3>> alphas{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {0, 0, 2}};
  for (const auto& alpha : alphas) {
    const auto table = symbols::compute_leibniz_coefficients(alpha);
    double err = 0.0;
    for (int p = 0; p < 200; ++p) {
      const GroupPoint g1 = random_point(rng, 2.0), g2 = random_point(rng, 2.0);
      const double lhs = symbols::monomial(group::multiply(g1, g2), alpha);
      err = std::max(err, std::abs(lhs - symbols::leibniz_expand(table, g1, g2)) / std::max(1.0, std::abs(lhs)));
    }
    const std::string name = "leibniz:(" + std::to_string(alpha[0]) + "," + std::to_string(alpha[1]) + "," +
                             std::to_string(alpha[2]) + ")";
    s.check(name, err, cfg.tol.leibniz);
    json entries = json::array();
    for (const auto& e : table) entries.push_back({{"alpha1", e.alpha1}, {"alpha2", e.alpha2}, {"c", e.coefficient}});
    leib.push_back({{"alpha", alpha}, {"max_rel_err", err}, {"table", entries}});
  }

  // Principal symbol multiplicativity for X o Y on the leading block.
  {
    const RepPoint rp(1.0, 30);
    const ProfileFunction one = ProfileFunction::constant(1.0);
    const DiffOpDescriptor dx{{{one, {Field::X}}}}, dy{{{one, {Field::Y}}}};
    const OperatorMatrix lhs = symbols::principal_symbol(dx.compose(dy)).eval(g, rp);
    const OperatorMatrix rhs = symbols::principal_symbol(dx).eval(g, rp) * symbols::principal_symbol(dy).eval(g, rp);
    const int b = 28;
    s.check("principal:XY", (lhs - rhs).topLeftCorner(b, b).norm(), cfg.tol.algebra);
  }

  results = {{"symbols", rows}, {"leibniz", leib}};
}

// ---------------------------------------------------------------------------
// mdm

json convergence_rows(const std::vector<mdm::ConvergenceReport>& reports, const std::string& stem, const std::string& dir,
                      bool write, std::vector<std::string>& files) {
  json out = json::array();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    out.push_back(reports[i].to_json());
    if (!write) continue;
    report::CsvTable t({"k", "re", "im", "err"});
    for (std::size_t j = 0; j < reports[i].k.size(); ++j)
      t.add_row({report::number(reports[i].k[j]), report::number(reports[i].values[j].real()),
                 report::number(reports[i].values[j].imag()), report::number(reports[i].abs_err[j])});
    files.push_back(report::write_file(dir, stem + "_s" + std::to_string(i) + ".csv", t.str()));
  }
  return out;
}

void check_reports(const std::vector<mdm::ConvergenceReport>& reports, double tol, Suite& s) {
  for (const auto& r : reports) {
    const double rel_final = r.abs_err.back() / r.scale;
    s.check("mdm:" + r.symbol, rel_final, tol, r.pass,
            {{"predicted", cjson(r.predicted)},
             {"fitted_order", r.fitted_order ? json(*r.fitted_order) : json(nullptr)},
             {"monotone", r.monotone}});
    if (!r.monotone) s.warn("mdm:" + r.symbol + ": error not monotone in k");
  }
}

void suite_mdm(const ExperimentConfig& cfg, const std::string& variant, const std::vector<std::string>& specs,
               Suite& s, json& results, bool write, std::vector<std::string>& files) {
  const int n = cfg.plancherel.n_modes;
  const QuantizationContext ctx{PlancherelGrid(cfg.plancherel), cfg.spatial, cfg.transform};
  const MdmOptions opt = cfg.mdm_options();
  std::vector<SeparableSymbol> syms;
  for (const auto& sp : specs) syms.push_back(symbols::parse(sp, n));
  const std::string stem = "mdm_" + variant;

  if (variant == "concentrate") {
    const auto spec = SequenceSpec::concentration(registry::resolve_profile(cfg.sequence.profile));
    const auto reports = mdm::run_convergence(spec, syms, cfg.k_list, ctx, opt);
    check_reports(reports, cfg.tol.mdm, s);

    // Sum rule: sum_j Pi_j limits = int tr(u1^ u1^*) dmu against ||u1||^2.
    const auto pn = fourier::plancherel_norm(spec.u1, ctx.grid, ctx.transform);
    const double mass = spec.u1.norm_sq();
    const double slack = cfg.tol.sum_rule * mass + pn.truncation_tail + pn.window_tail;
    s.check("sum_rule", std::abs(pn.value - mass), slack, std::nullopt,
            {{"sum_of_limits", pn.value}, {"norm_sq", mass}, {"reported_tail", pn.truncation_tail + pn.window_tail}});

    json probe = json::array();
    const ProfileFunction test = registry::profile("gaussian");
    for (double k : cfg.k_list) probe.push_back({{"k", k}, {"value", cjson(mdm::weak_limit_probe(spec, k, test))}});
    results = {{"sequence", spec.label()}, {"reports", convergence_rows(reports, stem, cfg.out_dir, write, files)},
               {"sum_rule", {{"sum_of_limits", pn.value}, {"norm_sq", mass}}}, {"weak_limit_probe", probe}};
    return;
  }

  if (variant == "oscillate") {
    const auto spec =
        SequenceSpec::oscillation(cfg.sequence.mode, registry::resolve_centre_profile(cfg.sequence.centre_profile));
    const auto reports = mdm::run_convergence(spec, syms, cfg.k_list, ctx, opt);
    check_reports(reports, cfg.tol.mdm, s);

    // d ||e0||^2 = 1 with e0 the Laguerre function of the mode.
    const double u0_sq = (spec.u0 * spec.u0.conj()).integral().real();
    const double e0_sq = mdm::make_sequence(spec, 1.0).norm_sq() / u0_sq;
    const double d = reps::formal_degree_exact(1.0);
    s.check("normalization", std::abs(d * e0_sq - 1.0), cfg.tol.formal_degree);

    json table = json::array();
    for (const auto& r : reports)
      table.push_back({{"symbol", r.symbol}, {"final", cjson(r.values.back())}, {"predicted", cjson(r.predicted)}});
    results = {{"sequence", spec.label()}, {"reports", convergence_rows(reports, stem, cfg.out_dir, write, files)},
               {"selectivity", table}, {"norm_u0_sq_over_d", u0_sq / d}};
    return;
  }

  // vector: U_k = (u_k, -u_k) on an oscillating base.
  const auto base =
      SequenceSpec::oscillation(cfg.sequence.mode, registry::resolve_centre_profile(cfg.sequence.centre_profile));
  VectorSequence vec{{{1.0, base}, {-1.0, base}}};
  const int modes = cfg.sequence.gamma_modes;
  const double k = cfg.k_list.back();
  for (double kk : cfg.k_list) mdm::check_nyquist(base, kk, cfg.spatial);

  json gammas = json::array();
  const std::vector<SeparableSymbol> p_row{symbols::parse("X", modes), symbols::parse("X", modes)};
  for (int sign : {1, -1}) {
    const auto gam = mdm::empirical_gamma(vec, modes, sign, k, ctx, opt);
    const double tr = std::max(gam.trace, 0.0);
    s.check("gamma_psd:sign=" + std::to_string(sign), -gam.min_eigenvalue, cfg.tol.positivity * std::max(tr, 1e-300),
            gam.min_eigenvalue >= -cfg.tol.positivity * tr);
    const auto loc = mdm::localization_check(p_row, 1, gam);
    s.check("localization:sign=" + std::to_string(sign), loc.residual, cfg.tol.localization);
    const double bil = (gam.gamma.block(0, modes, modes, modes) + gam.gamma.block(0, 0, modes, modes)).norm();
    s.check("bilinearity:sign=" + std::to_string(sign), bil, cfg.tol.localization * std::max(1.0, tr));
    gammas.push_back({{"sign", sign}, {"trace", gam.trace}, {"min_eigenvalue", gam.min_eigenvalue},
                      {"localization_residual", loc.residual}, {"gamma", matrix_to_json(gam.gamma)}});
  }

  Eigen::MatrixXcd q(2, 2);
  q << 0.0, -1.0, -1.0, 0.0;
  const auto comp = mdm::compensated_liminf_check(vec, q, p_row, modes, registry::resolve_profile(cfg.sequence.phi),
                                                  cfg.k_list, cfg.tol.compensated);
  s.check("compensated_liminf", -(comp.liminf - comp.target), cfg.tol.compensated, comp.pass,
          {{"min_eig_q", comp.min_eig_q}, {"min_eig_on_kernel", comp.min_eig_on_kernel}});
  results = {{"sequence", "vector:(u_k,-u_k) on " + base.label()},
             {"k", k},
             {"gamma", gammas},
             {"compensated",
              {{"k", comp.k},
               {"values", comp.values},
               {"target", comp.target},
               {"liminf", comp.liminf},
               {"min_eig_q", comp.min_eig_q},
               {"min_eig_on_kernel", comp.min_eig_on_kernel},
               {"kernel_hypothesis", comp.kernel_hypothesis}}}};
}

}  // namespace

// ---------------------------------------------------------------------------
// ExperimentConfig

ExperimentConfig::ExperimentConfig() : profiles(registry::profile_names()) {}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  reject_unknown(j, "", {"spatial_grid", "plancherel_grid", "transform", "profiles", "symbols", "k_list", "tolerances",
                         "rep_check", "sequence", "mdm", "output"});
  if (j.contains("spatial_grid")) c.spatial = SpatialGrid::from_json(j.at("spatial_grid"));
  if (j.contains("plancherel_grid")) c.plancherel = PlancherelConfig::from_json(j.at("plancherel_grid"));
  if (j.contains("transform")) {
    const auto& t = j.at("transform");
    reject_unknown(t, "transform", {"margin", "max_points"});
    read(t, "margin", c.transform.margin, "transform");
    read(t, "max_points", c.transform.max_points, "transform");
  }
  read(j, "profiles", c.profiles, "");
  read(j, "symbols", c.symbols, "");
  read(j, "k_list", c.k_list, "");
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    reject_unknown(t, "tolerances",
                   {"plancherel", "parseval", "inversion", "homomorphism", "covariance", "laguerre", "formal_degree",
                    "algebra", "leibniz", "positivity", "mdm", "sum_rule", "localization", "compensated", "polar"});
    auto& o = c.tol;
    const std::string w = "tolerances";
    read(t, "plancherel", o.plancherel, w);
    read(t, "parseval", o.parseval, w);
    read(t, "inversion", o.inversion, w);
    read(t, "homomorphism", o.homomorphism, w);
    read(t, "covariance", o.covariance, w);
    read(t, "laguerre", o.laguerre, w);
    read(t, "formal_degree", o.formal_degree, w);
    read(t, "algebra", o.algebra, w);
    read(t, "leibniz", o.leibniz, w);
    read(t, "positivity", o.positivity, w);
    read(t, "mdm", o.mdm, w);
    read(t, "sum_rule", o.sum_rule, w);
    read(t, "localization", o.localization, w);
    read(t, "compensated", o.compensated, w);
    read(t, "polar", o.polar, w);
  }
  if (j.contains("rep_check")) {
    const auto& r = j.at("rep_check");
    reject_unknown(r, "rep_check",
                   {"lambda", "n_modes", "pairs", "radius", "samples", "modes", "degree_modes", "dilation", "seed"});
    const std::string w = "rep_check";
    read(r, "lambda", c.rep.lambda, w);
    read(r, "n_modes", c.rep.n_modes, w);
    read(r, "pairs", c.rep.pairs, w);
    read(r, "radius", c.rep.radius, w);
    read(r, "samples", c.rep.samples, w);
    read(r, "modes", c.rep.modes, w);
    read(r, "degree_modes", c.rep.degree_modes, w);
    read(r, "dilation", c.rep.dilation, w);
    read(r, "seed", c.rep.seed, w);
  }
  if (j.contains("sequence")) {
    const auto& q = j.at("sequence");
    reject_unknown(q, "sequence", {"variant", "profile", "mode", "centre_profile", "gamma_modes", "phi"});
    const std::string w = "sequence";
    read(q, "variant", c.sequence.variant, w);
    if (q.contains("profile")) c.sequence.profile = q.at("profile");
    read(q, "mode", c.sequence.mode, w);
    if (q.contains("centre_profile")) c.sequence.centre_profile = q.at("centre_profile");
    read(q, "gamma_modes", c.sequence.gamma_modes, w);
    if (q.contains("phi")) c.sequence.phi = q.at("phi");
  }
  if (j.contains("mdm")) {
    const auto& m = j.at("mdm");
    reject_unknown(m, "mdm", {"cutoff", "window", "window_nodes", "lambda_floor"});
    std::vector<double> cut{c.cutoff_lo, c.cutoff_hi};
    read(m, "cutoff", cut, "mdm");
    field_check(cut.size() == 2, "mdm.cutoff", "must be [lo, hi]");
    c.cutoff_lo = cut[0];
    c.cutoff_hi = cut[1];
    read(m, "window", c.window, "mdm");
    read(m, "window_nodes", c.window_nodes, "mdm");
    read(m, "lambda_floor", c.lambda_floor, "mdm");
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    reject_unknown(o, "output", {"dir"});
    read(o, "dir", c.out_dir, "output");
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::Io, "cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::Parse, "config '" + path + "': " + e.what());
  }
  return from_json(j);
}

void ExperimentConfig::validate() const {
  plancherel.validate();
  field_check(transform.margin > 0.0, "transform.margin", "must be > 0");
  field_check(transform.max_points >= 16, "transform.max_points", "must be >= 16");
  field_check(!profiles.empty(), "profiles", "must list at least one profile");
  for (const auto& p : profiles)
    field_check(registry::has_profile(p), "profiles", "contains unknown profile '" + p + "'");
  field_check(!k_list.empty(), "k_list", "must not be empty");
  for (std::size_t i = 0; i < k_list.size(); ++i) {
    field_check(std::isfinite(k_list[i]) && k_list[i] >= 1.0, "k_list", "entries must be >= 1");
    field_check(i == 0 || k_list[i] > k_list[i - 1], "k_list", "must be strictly increasing");
  }
  const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  for (const auto& [name, v] : std::vector<std::pair<const char*, double>>{
           {"plancherel", tol.plancherel}, {"parseval", tol.parseval}, {"inversion", tol.inversion},
           {"homomorphism", tol.homomorphism}, {"covariance", tol.covariance}, {"laguerre", tol.laguerre},
           {"formal_degree", tol.formal_degree}, {"algebra", tol.algebra}, {"leibniz", tol.leibniz},
           {"positivity", tol.positivity}, {"mdm", tol.mdm}, {"sum_rule", tol.sum_rule},
           {"localization", tol.localization}, {"compensated", tol.compensated}, {"polar", tol.polar}})
    field_check(positive(v), std::string("tolerances.") + name, "must be > 0");
  field_check(std::isfinite(rep.lambda) && rep.lambda != 0.0, "rep_check.lambda",
              "must be nonzero (lambda = 0 is a degenerate representation)");
  field_check(rep.n_modes >= 4, "rep_check.n_modes", "must be >= 4");
  field_check(rep.pairs >= 1, "rep_check.pairs", "must be >= 1");
  field_check(positive(rep.radius), "rep_check.radius", "must be > 0");
  field_check(rep.samples >= 1, "rep_check.samples", "must be >= 1");
  field_check(positive(rep.dilation), "rep_check.dilation", "must be > 0");
  for (int m : rep.modes) field_check(m >= 0, "rep_check.modes", "entries must be >= 0");
  for (int m : rep.degree_modes) field_check(m >= 0, "rep_check.degree_modes", "entries must be >= 0");
  field_check(sequence.variant == "concentrate" || sequence.variant == "oscillate" || sequence.variant == "vector",
              "sequence.variant", "must be concentrate, oscillate or vector");
  field_check(sequence.mode >= 0, "sequence.mode", "must be >= 0");
  if (sequence.variant != "concentrate")
    field_check(sequence.mode + 2 < plancherel.n_modes, "sequence.mode",
                "must satisfy mode < plancherel_grid.n_modes - 2");
  if (sequence.variant == "vector")
    field_check(sequence.gamma_modes >= 1 && sequence.gamma_modes <= plancherel.n_modes, "sequence.gamma_modes",
                "must lie in [1, plancherel_grid.n_modes]");
  try {
    (void)registry::resolve_profile(sequence.profile);
    (void)registry::resolve_centre_profile(sequence.centre_profile);
    (void)registry::resolve_profile(sequence.phi);
  } catch (const Error& e) {
    fail(ErrorCode::Config, std::string("field 'sequence': ") + e.what());
  }
  field_check(positive(cutoff_lo) && cutoff_hi > cutoff_lo, "mdm.cutoff", "must satisfy 0 < lo < hi");
  field_check(positive(window), "mdm.window", "must be > 0");
  field_check(window_nodes >= 8, "mdm.window_nodes", "must be >= 8");
  field_check(positive(lambda_floor), "mdm.lambda_floor", "must be > 0");
  field_check(!out_dir.empty(), "output.dir", "must not be empty");
}

json ExperimentConfig::to_json() const {
  const auto& t = tol;
  return {{"spatial_grid", spatial.to_json()},
          {"plancherel_grid", plancherel.to_json()},
          {"transform", {{"margin", transform.margin}, {"max_points", transform.max_points}}},
          {"profiles", profiles},
          {"symbols", symbols},
          {"k_list", k_list},
          {"tolerances",
           {{"plancherel", t.plancherel}, {"parseval", t.parseval}, {"inversion", t.inversion},
            {"homomorphism", t.homomorphism}, {"covariance", t.covariance}, {"laguerre", t.laguerre},
            {"formal_degree", t.formal_degree}, {"algebra", t.algebra}, {"leibniz", t.leibniz},
            {"positivity", t.positivity}, {"mdm", t.mdm}, {"sum_rule", t.sum_rule},
            {"localization", t.localization}, {"compensated", t.compensated}, {"polar", t.polar}}},
          {"rep_check",
           {{"lambda", rep.lambda}, {"n_modes", rep.n_modes}, {"pairs", rep.pairs}, {"radius", rep.radius},
            {"samples", rep.samples}, {"modes", rep.modes}, {"degree_modes", rep.degree_modes},
            {"dilation", rep.dilation}, {"seed", rep.seed}}},
          {"sequence",
           {{"variant", sequence.variant}, {"profile", sequence.profile}, {"mode", sequence.mode},
            {"centre_profile", sequence.centre_profile}, {"gamma_modes", sequence.gamma_modes},
            {"phi", sequence.phi}}},
          {"mdm",
           {{"cutoff", {cutoff_lo, cutoff_hi}}, {"window", window}, {"window_nodes", window_nodes},
            {"lambda_floor", lambda_floor}}},
          {"output", {{"dir", out_dir}}}};
}

MdmOptions ExperimentConfig::mdm_options() const {
  MdmOptions o;
  o.cutoff = symbols::smooth_cutoff(cutoff_lo, cutoff_hi);
  o.window = window;
  o.window_nodes = window_nodes;
  o.lambda_floor = lambda_floor;
  o.tolerance = tol.mdm;
  return o;
}

// ---------------------------------------------------------------------------

namespace runner {

std::vector<std::string> commands() { return {"plancherel", "rep-check", "symbol-check", "mdm"}; }

std::vector<double> parse_k_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      require(used == item.size(), ErrorCode::Parse, "");
    } catch (const std::exception&) {
      fail(ErrorCode::Config, "--k: cannot parse '" + item + "' as a number");
    }
  }
  require(!out.empty(), ErrorCode::Config, "--k: empty list");
  return out;
}

RunResult run(const std::string& command, ExperimentConfig config, const RunOverrides& ov) {
  RunResult res;
  try {
    const auto cmds = commands();
    require(std::find(cmds.begin(), cmds.end(), command) != cmds.end(), ErrorCode::Config,
            "unknown command '" + command + "'");
    if (ov.k_list) config.k_list = *ov.k_list;
    if (!ov.symbols.empty()) config.symbols = ov.symbols;
    if (ov.out_dir) config.out_dir = *ov.out_dir;
    if (ov.variant) config.sequence.variant = *ov.variant;
    config.validate();
    if (config.symbols.empty()) config.symbols = default_symbols(command, config.sequence.variant);
    const auto specs = symbols::expand_specs(config.symbols);
    for (const auto& sp : specs) (void)symbols::parse(sp, config.plancherel.n_modes);

    Suite suite;
    json results;
    std::string stem = command;
    if (command == "plancherel") {
      suite_plancherel(config, suite, results);
    } else if (command == "rep-check") {
      suite_rep(config, suite, results);
    } else if (command == "symbol-check") {
      suite_symbols(config, specs, suite, results);
    } else {
      stem = "mdm_" + config.sequence.variant;
      suite_mdm(config, config.sequence.variant, specs, suite, results, ov.write, res.files);
    }

    res.failures = suite.failures;
    res.warnings = suite.warnings;
    const bool pass = res.failures.empty() && (!ov.strict || res.warnings.empty());
    if (ov.strict)
      for (const auto& w : res.warnings) res.failures.push_back("strict: " + w);
    res.exit_code = pass ? 0 : 1;

    std::string extra_csv;
    if (results.contains("table_csv")) {
      extra_csv = results["table_csv"].get<std::string>();
      results.erase("table_csv");
    }
    res.report = {{"command", command},
                  {"version", report::version()},
                  {"config", config.to_json()},
                  {"strict", ov.strict},
                  {"checks", suite.checks},
                  {"results", results},
                  {"failures", res.failures},
                  {"warnings", res.warnings},
                  {"pass", pass}};
    if (ov.write) {
      const std::string name = stem == "rep-check" ? "rep_check" : stem == "symbol-check" ? "symbol_check" : stem;
      res.files.push_back(report::write_file(config.out_dir, name + ".json", report::json_text(res.report)));
      res.files.push_back(report::write_file(config.out_dir, name + ".csv", suite.csv.str()));
      if (!extra_csv.empty())
        res.files.push_back(report::write_file(config.out_dir, name + "_profiles.csv", extra_csv));
    }
  } catch (const Error& e) {
    res.exit_code = 2;
    res.failures = {e.what()};
    res.report = {{"command", command}, {"version", report::version()}, {"error", res.failures.front()}};
  }
  return res;
}

}  // namespace runner
}  // namespace hgmdm
