#include "hgmdm/symbols.hpp"

#include "hgmdm/error.hpp"
#include "hgmdm/registry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hgmdm {

namespace {

template <class... F>
struct Overload : F... {
  using F::operator()...;
};

Eigen::VectorXd rockland_diagonal(const RepPoint& rp) { return reps::sublaplacian_eigenvalues(rp); }

std::string format_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

DualFactor::DualFactor(DualAtom atom, cplx scalar) : scalar_(scalar) { atoms_.push_back(std::move(atom)); }

DualFactor::DualFactor(cplx scalar, std::vector<DualAtom> atoms) : scalar_(scalar), atoms_(std::move(atoms)) {}

OperatorMatrix DualFactor::eval(const RepPoint& rp) const {
  const int n = rp.n_modes;
  OperatorMatrix out = OperatorMatrix::Identity(n, n) * scalar_;
  for (const auto& atom : atoms_) {
    std::visit(Overload{
                   [&](const Hom0Atom& h) {
                     const OperatorMatrix& m = rp.lambda > 0 ? h.plus : h.minus;
                     require(m.rows() == n && m.cols() == n, ErrorCode::Config,
                             "symbol '" + h.label + "' has dimension " + std::to_string(m.rows()) +
                                 " but the representation has N = " + std::to_string(n));
                     out = out * m;
                   },
                   [&](const MultiplierAtom& mu) {
                     const Eigen::VectorXd ev = rockland_diagonal(rp);
                     for (int k = 0; k < n; ++k) {
                       const cplx v = mu.psi(ev(k));
                       out.col(k) *= mu.conjugated ? std::conj(v) : v;
                     }
                   },
                   [&](const FieldAtom& f) { out = out * reps::infinitesimal(rp, f.which); },
                   [&](const RockPowerAtom& r) {
                     const Eigen::VectorXd ev = rockland_diagonal(rp);
                     for (int k = 0; k < n; ++k) out.col(k) *= std::pow(ev(k), r.power);
                   },
               },
               atom);
  }
  return out;
}

DualFactor DualFactor::adjoint() const {
  cplx s = std::conj(scalar_);
  std::vector<DualAtom> atoms;
  for (auto it = atoms_.rbegin(); it != atoms_.rend(); ++it) {
    std::visit(Overload{
                   [&](const Hom0Atom& h) {
                     atoms.push_back(Hom0Atom{h.plus.adjoint(), h.minus.adjoint(), h.label + "*"});
                   },
                   [&](const MultiplierAtom& m) {
                     MultiplierAtom c = m;
                     c.conjugated = !m.conjugated;
                     atoms.push_back(std::move(c));
                   },
                   [&](const FieldAtom& f) {
                     s = -s;  // pi(W) is skew-adjoint
                     atoms.push_back(f);
                   },
                   [&](const RockPowerAtom& r) { atoms.push_back(r); },
               },
               *it);
  }
  return DualFactor(s, std::move(atoms));
}

DualFactor DualFactor::operator*(const DualFactor& o) const {
  auto atoms = atoms_;
  atoms.insert(atoms.end(), o.atoms_.begin(), o.atoms_.end());
  return DualFactor(scalar_ * o.scalar_, std::move(atoms));
}

DualFactor DualFactor::scaled(cplx c) const { return DualFactor(scalar_ * c, atoms_); }

std::optional<double> DualFactor::order() const {
  double total = 0.0;
  for (const auto& atom : atoms_) {
    if (std::holds_alternative<MultiplierAtom>(atom)) return std::nullopt;
    if (const auto* f = std::get_if<FieldAtom>(&atom)) total += f->which == Field::T ? 2.0 : 1.0;
    if (const auto* r = std::get_if<RockPowerAtom>(&atom)) total += 2.0 * r->power;
  }
  return total;
}

bool DualFactor::homogeneous_of_order_zero() const {
  const auto o = order();
  return o && std::abs(*o) < 1e-12;
}

bool DualFactor::is_diagonal() const {
  for (const auto& atom : atoms_) {
    if (const auto* h = std::get_if<Hom0Atom>(&atom)) {
      if (!h->plus.isDiagonal(0.0) || !h->minus.isDiagonal(0.0)) return false;
    } else if (const auto* f = std::get_if<FieldAtom>(&atom)) {
      if (f->which != Field::T) return false;
    }
  }
  return true;
}

std::string DualFactor::label() const {
  std::string out;
  if (scalar_ != 1.0 || atoms_.empty()) {
    out = scalar_.imag() == 0.0 ? format_number(scalar_.real())
                                : "(" + format_number(scalar_.real()) + "," + format_number(scalar_.imag()) + ")";
  }
  for (const auto& atom : atoms_) {
    if (!out.empty()) out += "*";
    std::visit(Overload{
                   [&](const Hom0Atom& h) { out += h.label; },
                   [&](const MultiplierAtom& m) { out += m.conjugated ? "conj(" + m.label + ")" : m.label; },
                   [&](const FieldAtom& f) { out += field_name(f.which); },
                   [&](const RockPowerAtom& r) { out += r.power == 1.0 ? "R" : "rpow:" + format_number(r.power); },
               },
               atom);
  }
  return out;
}

namespace symbols {

DualFactor identity() { return DualFactor(1.0, {}); }

DualFactor hom0(OperatorMatrix plus, OperatorMatrix minus, std::string label) {
  require(plus.rows() == plus.cols() && minus.rows() == minus.cols() && plus.rows() == minus.rows(),
          ErrorCode::Config, "0-homogeneous symbol needs square matrices of equal size");
  return DualFactor(Hom0Atom{std::move(plus), std::move(minus), std::move(label)});
}

DualFactor projector(int j, int n_modes) {
  require(j >= 0 && j < n_modes, ErrorCode::InvalidSymbol,
          "projector index " + std::to_string(j) + " outside [0, " + std::to_string(n_modes) + ")");
  OperatorMatrix p = OperatorMatrix::Zero(n_modes, n_modes);
  p(j, j) = 1.0;
  return hom0(p, p, "proj:" + std::to_string(j));
}

DualFactor matrix_unit(int a, int b, int n_modes) {
  require(a >= 0 && b >= 0 && a < n_modes && b < n_modes, ErrorCode::InvalidSymbol,
          "matrix unit index outside [0, " + std::to_string(n_modes) + ")");
  OperatorMatrix e = OperatorMatrix::Zero(n_modes, n_modes);
  e(a, b) = 1.0;
  return hom0(e, e, "unit:" + std::to_string(a) + ":" + std::to_string(b));
}

DualFactor sign(int n_modes) {
  const OperatorMatrix id = OperatorMatrix::Identity(n_modes, n_modes);
  return hom0(id, -id, "sign");
}

DualFactor sign_projector(int s, int n_modes) {
  const OperatorMatrix id = OperatorMatrix::Identity(n_modes, n_modes);
  const OperatorMatrix zero = OperatorMatrix::Zero(n_modes, n_modes);
  return s > 0 ? hom0(id, zero, "pos") : hom0(zero, id, "neg");
}

DualFactor field(Field which) { return DualFactor(FieldAtom{which}); }

DualFactor rockland_power(double p) { return DualFactor(RockPowerAtom{p}); }

DualFactor multiplier(std::function<cplx(double)> psi, std::string label) {
  return DualFactor(MultiplierAtom{std::move(psi), std::move(label), false});
}

double smooth_ramp(double s, double lo, double hi) {
  if (s <= lo) return 0.0;
  if (s >= hi) return 1.0;
  const double tau = (s - lo) / (hi - lo);
  const double a = std::exp(-1.0 / tau);
  const double b = std::exp(-1.0 / (1.0 - tau));
  return a / (a + b);
}

DualFactor smooth_cutoff(double lo, double hi) {
  require(lo > 0.0 && hi > lo, ErrorCode::Domain, "smooth cutoff needs 0 < lo < hi");
  return multiplier([lo, hi](double s) { return cplx(smooth_ramp(s, lo, hi)); },
                    "mult:bump:" + format_number(lo) + ":" + format_number(hi));
}

}  // namespace symbols

// ---------------------------------------------------------------------------

SeparableSymbol::SeparableSymbol(std::vector<SymbolTerm> terms, std::string spec)
    : terms_(std::move(terms)), spec_(std::move(spec)) {
  std::erase_if(terms_, [](const SymbolTerm& t) { return t.phi.is_zero() || t.dual.scalar() == 0.0; });
}

SeparableSymbol SeparableSymbol::invariant(DualFactor dual, std::string spec) {
  return SeparableSymbol({SymbolTerm{ProfileFunction::constant(1.0), std::move(dual)}}, std::move(spec));
}

SeparableSymbol SeparableSymbol::identity() { return invariant(symbols::identity(), "id"); }

SeparableSymbol SeparableSymbol::zero() { return SeparableSymbol({}, "0"); }

bool SeparableSymbol::is_invariant() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const SymbolTerm& t) { return t.phi.is_constant(); });
}

OperatorMatrix SeparableSymbol::eval(const GroupPoint& g, const RepPoint& rp) const {
  OperatorMatrix out = OperatorMatrix::Zero(rp.n_modes, rp.n_modes);
  for (const auto& t : terms_) out += t.phi(g) * t.dual.eval(rp);
  return out;
}

SeparableSymbol SeparableSymbol::operator*(const SeparableSymbol& o) const {
  std::vector<SymbolTerm> terms;
  for (const auto& a : terms_)
    for (const auto& b : o.terms_) terms.push_back({a.phi * b.phi, a.dual * b.dual});
  return SeparableSymbol(std::move(terms), "(" + spec_ + ")*(" + o.spec_ + ")");
}

SeparableSymbol SeparableSymbol::operator+(const SeparableSymbol& o) const {
  auto terms = terms_;
  terms.insert(terms.end(), o.terms_.begin(), o.terms_.end());
  return SeparableSymbol(std::move(terms), spec_ + "+" + o.spec_);
}

SeparableSymbol SeparableSymbol::scaled(cplx c) const {
  auto terms = terms_;
  for (auto& t : terms) t.dual = t.dual.scaled(c);
  return SeparableSymbol(std::move(terms), spec_);
}

SeparableSymbol SeparableSymbol::adjoint() const {
  std::vector<SymbolTerm> terms;
  for (const auto& t : terms_) terms.push_back({t.phi.conj(), t.dual.adjoint()});
  return SeparableSymbol(std::move(terms), "adjoint(" + spec_ + ")");
}

// ---------------------------------------------------------------------------

int word_weight(const std::vector<Field>& word) {
  int w = 0;
  for (Field f : word) w += f == Field::T ? 2 : 1;
  return w;
}

int DiffOpDescriptor::order() const {
  require(!terms.empty(), ErrorCode::Domain, "empty differential operator");
  int m = -1;
  for (const auto& t : terms)
    if (!t.coeff.is_zero()) m = std::max(m, word_weight(t.word));
  require(m >= 0, ErrorCode::Domain, "differential operator has only zero coefficients");
  return m;
}

DiffOpDescriptor DiffOpDescriptor::compose(const DiffOpDescriptor& o) const {
  // (c1 W1)(c2 W2) f = c1 sum_S (W1|_S c2) (W1|_{S^c} W2 f) for the
  // derivations of W1, order within each part preserved.
  DiffOpDescriptor out;
  for (const auto& a : terms) {
    const std::size_t k = a.word.size();
    for (const auto& b : o.terms) {
      for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        ProfileFunction c = b.coeff;
        std::vector<Field> rest;
        for (std::size_t i = k; i-- > 0;)
          if (mask & (std::size_t{1} << i)) c = c.apply_field(a.word[i]);
        for (std::size_t i = 0; i < k; ++i)
          if (!(mask & (std::size_t{1} << i))) rest.push_back(a.word[i]);
        rest.insert(rest.end(), b.word.begin(), b.word.end());
        ProfileFunction coeff = a.coeff * c;
        if (!coeff.is_zero()) out.terms.push_back({std::move(coeff), std::move(rest)});
      }
    }
  }
  return out;
}

cplx DiffOpDescriptor::apply(const ProfileFunction& f, const GroupPoint& g) const {
  cplx acc = 0.0;
  for (const auto& t : terms) {
    ProfileFunction h = f;
    for (auto it = t.word.rbegin(); it != t.word.rend(); ++it) h = h.apply_field(*it);
    acc += t.coeff(g) * h(g);
  }
  return acc;
}

namespace symbols {

SeparableSymbol principal_symbol(const DiffOpDescriptor& d) {
  const int m = d.order();
  std::vector<const DiffTerm*> top;
  for (const auto& t : d.terms)
    if (!t.coeff.is_zero() && word_weight(t.word) == m) top.push_back(&t);

  std::vector<SymbolTerm> terms;
  std::vector<bool> used(top.size(), false);
  const std::vector<Field> xx{Field::X, Field::X}, yy{Field::Y, Field::Y};
  for (std::size_t i = 0; i < top.size(); ++i) {
    if (used[i] || top[i]->word != xx) continue;
    for (std::size_t j = 0; j < top.size(); ++j) {
      if (used[j] || top[j]->word != yy || !(top[j]->coeff.terms() == top[i]->coeff.terms())) continue;
      terms.push_back({top[i]->coeff, rockland_power(1.0).scaled(-1.0)});
      used[i] = used[j] = true;
      break;
    }
  }
  for (std::size_t i = 0; i < top.size(); ++i) {
    if (used[i]) continue;
    std::vector<DualAtom> atoms;
    for (Field f : top[i]->word) atoms.push_back(FieldAtom{f});
    terms.push_back({top[i]->coeff, DualFactor(1.0, std::move(atoms))});
  }
  return SeparableSymbol(std::move(terms), "princ");
}

namespace {

using Monomial = std::array<int, 6>;  // (x, y, t, x', y', t')
using Poly6 = std::map<Monomial, double>;

Poly6 poly_mul(const Poly6& a, const Poly6& b) {
  Poly6 out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      Monomial m;
      for (int i = 0; i < 6; ++i) m[i] = ma[i] + mb[i];
      out[m] += ca * cb;
    }
  std::erase_if(out, [](const auto& e) { return e.second == 0.0; });
  return out;
}

Poly6 poly_pow(const Poly6& p, int n) {
  Poly6 out{{Monomial{}, 1.0}};
  for (int i = 0; i < n; ++i) out = poly_mul(out, p);
  return out;
}

}  // namespace

std::vector<LeibnizEntry> compute_leibniz_coefficients(std::array<int, 3> alpha, int max_weight) {
  const int w = fourier::weighted_degree(alpha);
  require(w <= max_weight, ErrorCode::Unsupported,
          "Leibniz weight " + std::to_string(w) + " exceeds the cap " + std::to_string(max_weight));
  const Poly6 x{{{1, 0, 0, 0, 0, 0}, 1.0}, {{0, 0, 0, 1, 0, 0}, 1.0}};
  const Poly6 y{{{0, 1, 0, 0, 0, 0}, 1.0}, {{0, 0, 0, 0, 1, 0}, 1.0}};
  const Poly6 t{{{0, 0, 1, 0, 0, 0}, 1.0},
                {{0, 0, 0, 0, 0, 1}, 1.0},
                {{1, 0, 0, 0, 1, 0}, 0.5},
                {{0, 1, 0, 1, 0, 0}, -0.5}};
  const Poly6 p = poly_mul(poly_mul(poly_pow(x, alpha[0]), poly_pow(y, alpha[1])), poly_pow(t, alpha[2]));
  std::vector<LeibnizEntry> out;
  for (const auto& [m, c] : p) out.push_back({{m[0], m[1], m[2]}, {m[3], m[4], m[5]}, c});
  return out;
}

double monomial(const GroupPoint& g, std::array<int, 3> alpha) {
  return std::pow(g.x, alpha[0]) * std::pow(g.y, alpha[1]) * std::pow(g.t, alpha[2]);
}

double leibniz_expand(const std::vector<LeibnizEntry>& table, const GroupPoint& g1, const GroupPoint& g2) {
  double acc = 0.0;
  for (const auto& e : table) acc += e.coefficient * monomial(g1, e.alpha1) * monomial(g2, e.alpha2);
  return acc;
}

double homogeneity_audit(const DualFactor& tau, const PlancherelGrid& grid, double r) {
  require(r > 0.0, ErrorCode::Domain, "audit scale must be positive");
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const RepPoint rp = grid.rep(i);
    worst = std::max(worst, (tau.eval(rp) - tau.eval(reps::dilate_rep(r, rp))).norm());
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_number(const std::string& s, const std::string& context) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos == s.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorCode::InvalidSymbol, "bad number '" + s + "' in " + context);
}

int parse_index(const std::string& s, const std::string& context) {
  const double v = parse_number(s, context);
  require(v == std::floor(v) && v >= 0, ErrorCode::InvalidSymbol, "bad index '" + s + "' in " + context);
  return static_cast<int>(v);
}

bool is_number(const std::string& s) {
  if (s.empty()) return false;
  char* end = nullptr;
  std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

}  // namespace

SeparableSymbol parse(const std::string& spec, int n_modes) {
  require(!spec.empty(), ErrorCode::InvalidSymbol, "empty symbol spec");
  std::vector<SymbolTerm> terms;
  for (const auto& term_str : split(spec, '+')) {
    require(!term_str.empty(), ErrorCode::InvalidSymbol, "empty term in symbol spec '" + spec + "'");
    ProfileFunction phi = ProfileFunction::constant(1.0);
    DualFactor dual = identity();
    std::string body = term_str;
    if (body[0] == '-') {
      dual = dual.scaled(-1.0);
      body = body.substr(1);
    }
    for (const auto& f : split(body, '*')) {
      require(!f.empty(), ErrorCode::InvalidSymbol, "empty factor in symbol spec '" + spec + "'");
      const auto parts = split(f, ':');
      const std::string& head = parts[0];
      auto nparts = [&](std::size_t n) {
        require(parts.size() == n, ErrorCode::InvalidSymbol, "malformed factor '" + f + "'");
      };
      if (is_number(f)) {
        dual = dual.scaled(parse_number(f, spec));
      } else if (head == "id") {
        nparts(1);
      } else if (head == "proj") {
        nparts(2);
        dual = dual * projector(parse_index(parts[1], f), n_modes);
      } else if (head == "unit") {
        nparts(3);
        dual = dual * matrix_unit(parse_index(parts[1], f), parse_index(parts[2], f), n_modes);
      } else if (head == "sign") {
        nparts(1);
        dual = dual * sign(n_modes);
      } else if (head == "pos" || head == "neg") {
        nparts(1);
        dual = dual * sign_projector(head == "pos" ? 1 : -1, n_modes);
      } else if (head == "mult") {
        require(parts.size() >= 2, ErrorCode::InvalidSymbol, "malformed multiplier '" + f + "'");
        if (parts[1] == "bump") {
          nparts(4);
          const double lo = parse_number(parts[2], f), hi = parse_number(parts[3], f);
          require(lo > 0.0 && hi > lo, ErrorCode::InvalidSymbol, "bump multiplier needs 0 < lo < hi in '" + f + "'");
          dual = dual * smooth_cutoff(lo, hi);
        } else if (parts[1] == "exp") {
          nparts(3);
          const double s = parse_number(parts[2], f);
          dual = dual * multiplier([s](double v) { return cplx(std::exp(-s * v)); }, f);
        } else {
          fail(ErrorCode::InvalidSymbol, "unknown multiplier '" + parts[1] + "'");
        }
      } else if (head == "X" || head == "Y" || head == "T") {
        nparts(1);
        dual = dual * field(head == "X" ? Field::X : head == "Y" ? Field::Y : Field::T);
      } else if (head == "R") {
        nparts(1);
        dual = dual * rockland_power(1.0);
      } else if (head == "rpow") {
        nparts(2);
        dual = dual * rockland_power(parse_number(parts[1], f));
      } else if (registry::has_spatial_factor(head)) {
        nparts(1);
        phi = phi * registry::spatial_factor(head);
      } else {
        fail(ErrorCode::InvalidSymbol, "unknown symbol factor '" + f + "'");
      }
    }
    terms.push_back({std::move(phi), std::move(dual)});
  }
  return SeparableSymbol(std::move(terms), spec);
}

std::vector<std::string> expand_specs(const std::vector<std::string>& specs) {
  std::vector<std::string> out;
  for (const auto& s : specs) {
    const auto dots = s.find("..");
    if (dots == std::string::npos) {
      out.push_back(s);
      continue;
    }
    const auto colon = s.rfind(':', dots);
    require(colon != std::string::npos, ErrorCode::InvalidSymbol, "bad range spec '" + s + "'");
    const std::string head = s.substr(0, colon);
    const int a = parse_index(s.substr(colon + 1, dots - colon - 1), s);
    const int b = parse_index(s.substr(dots + 2), s);
    require(a <= b, ErrorCode::InvalidSymbol, "empty range in '" + s + "'");
    if (head == "proj") {
      for (int j = a; j <= b; ++j) out.push_back("proj:" + std::to_string(j));
    } else if (head == "unit") {
      for (int i = a; i <= b; ++i)
        for (int j = a; j <= b; ++j) out.push_back("unit:" + std::to_string(i) + ":" + std::to_string(j));
    } else {
      fail(ErrorCode::InvalidSymbol, "ranges are supported for proj and unit only: '" + s + "'");
    }
  }
  return out;
}

}  // namespace symbols
}  // namespace hgmdm
