#include "hgmdm/profile.hpp"

#include "hgmdm/error.hpp"
#include "hgmdm/special.hpp"

#include <cmath>
#include <numbers>

namespace hgmdm {

namespace {

using Poly = std::vector<cplx>;

cplx poly_eval(const Poly& p, cplx s) {
  cplx acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * s + *it;
  return acc;
}

Poly poly_mul(const Poly& p, const Poly& q) {
  if (p.empty() || q.empty()) return {};
  Poly r(p.size() + q.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  return r;
}

Poly poly_add(Poly p, const Poly& q) {
  if (q.size() > p.size()) p.resize(q.size(), 0.0);
  for (std::size_t i = 0; i < q.size(); ++i) p[i] += q[i];
  return p;
}

Poly poly_derivative(const Poly& p) {
  if (p.size() <= 1) return {0.0};
  Poly r(p.size() - 1);
  for (std::size_t k = 1; k < p.size(); ++k) r[k - 1] = static_cast<double>(k) * p[k];
  return r;
}

/// Coefficients of p(w + c).
Poly poly_shift(Poly p, cplx c) {
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = n - 1; k > i; --k) p[k - 1] += c * p[k];
  return p;
}

bool poly_is_zero(const Poly& p) {
  for (const auto& c : p)
    if (c != 0.0) return false;
  return true;
}

void trim(Poly& p) {
  while (p.size() > 1 && p.back() == 0.0) p.pop_back();
}

}  // namespace

cplx Factor1D::operator()(double s) const {
  const double d = s - s0;
  return poly_eval(poly, s) * std::exp(-a * d * d) * std::polar(1.0, omega * s);
}

cplx Factor1D::derivative(double s) const { return derivative_factor()(s); }

bool Factor1D::is_constant() const { return a == 0.0 && omega == 0.0 && poly.size() <= 1; }

Factor1D Factor1D::derivative_factor() const {
  Factor1D r = *this;
  // (p' + p (-2a (s - s0) + i w)) e^{...}
  r.poly = poly_add(poly_derivative(poly), poly_mul(poly, {cplx(2.0 * a * s0, omega), -2.0 * a}));
  trim(r.poly);
  return r;
}

Factor1D Factor1D::times_monomial(int power) const {
  Factor1D r = *this;
  r.poly.insert(r.poly.begin(), static_cast<std::size_t>(power), 0.0);
  return r;
}

Factor1D Factor1D::conj() const {
  Factor1D r = *this;
  for (auto& c : r.poly) c = std::conj(c);
  r.omega = -omega;
  return r;
}

Factor1D Factor1D::rescaled(double c) const {
  require(c > 0.0, ErrorCode::Domain, "rescaling factor must be positive");
  Factor1D r = *this;
  double ck = 1.0;
  for (auto& p : r.poly) {
    p /= ck;
    ck *= c;
  }
  r.a = a / (c * c);
  r.s0 = s0 * c;
  r.omega = omega / c;
  return r;
}

double Factor1D::frequency_band(double margin) const {
  const double deg = static_cast<double>(poly.size() - 1);
  return std::abs(omega) + std::sqrt(2.0 * a) * (std::sqrt(2.0 * deg + 1.0) + margin);
}

double Factor1D::spatial_extent(double margin) const {
  require(a > 0.0, ErrorCode::NotIntegrable, "factor has no Gaussian decay");
  const double deg = static_cast<double>(poly.size() - 1);
  return (std::sqrt(2.0 * deg + 1.0) + margin) / std::sqrt(2.0 * a);
}

cplx Factor1D::fourier(double eta) const {
  require(a > 0.0, ErrorCode::NotIntegrable, "Fourier transform of a non-decaying factor");
  // s = s0 + w, then complete the square: -a w^2 + i k w = -a (w - mu)^2 - k^2 / (4a).
  const double kappa = omega - eta;
  const cplx mu(0.0, kappa / (2.0 * a));
  const Poly q = poly_shift(poly_shift(poly, s0), mu);
  cplx acc = 0.0;
  for (std::size_t j = 0; j < q.size(); j += 2) {
    const double moment = std::tgamma(0.5 * (j + 1.0)) * std::pow(a, -0.5 * (j + 1.0));
    acc += q[j] * moment;
  }
  return acc * std::polar(std::exp(-kappa * kappa / (4.0 * a)), kappa * s0);
}

Factor1D operator*(const Factor1D& f, const Factor1D& g) {
  Factor1D r;
  r.a = f.a + g.a;
  r.omega = f.omega + g.omega;
  double scale = 1.0;
  if (r.a > 0.0) {
    r.s0 = (f.a * f.s0 + g.a * g.s0) / r.a;
    const double d = f.s0 - g.s0;
    scale = std::exp(-f.a * g.a / r.a * d * d);
  }
  r.poly = poly_mul(f.poly, g.poly);
  for (auto& c : r.poly) c *= scale;
  trim(r.poly);
  return r;
}

ProfileFunction::ProfileFunction(std::vector<ProfileTerm> terms, std::string name)
    : terms_(std::move(terms)), name_(std::move(name)) {
  std::erase_if(terms_, [](const ProfileTerm& t) {
    if (t.coeff == 0.0) return true;
    for (const auto& f : t.factor)
      if (poly_is_zero(f.poly)) return true;
    return false;
  });
}

ProfileFunction ProfileFunction::zero() { return ProfileFunction({}, "zero"); }

ProfileFunction ProfileFunction::constant(cplx c) {
  return ProfileFunction({ProfileTerm{c, {}}}, "constant");
}

ProfileFunction ProfileFunction::separable(cplx c, Factor1D fx, Factor1D fy, Factor1D ft, std::string name) {
  return ProfileFunction({ProfileTerm{c, {std::move(fx), std::move(fy), std::move(ft)}}}, std::move(name));
}

bool ProfileFunction::is_constant() const {
  for (const auto& t : terms_)
    for (const auto& f : t.factor)
      if (!f.is_constant()) return false;
  return true;
}

bool ProfileFunction::integrable() const {
  for (const auto& t : terms_)
    for (const auto& f : t.factor)
      if (!f.decays()) return false;
  return true;
}

cplx ProfileFunction::operator()(const GroupPoint& g) const {
  cplx acc = 0.0;
  for (const auto& t : terms_) acc += t.coeff * t.factor[0](g.x) * t.factor[1](g.y) * t.factor[2](g.t);
  return acc;
}

ProfileFunction ProfileFunction::apply_field(Field which) const {
  std::vector<ProfileTerm> out;
  for (const auto& t : terms_) {
    const auto& [fx, fy, ft] = t.factor;
    switch (which) {
      case Field::X:  // d_x - (y/2) d_t
        out.push_back({t.coeff, {fx.derivative_factor(), fy, ft}});
        out.push_back({-0.5 * t.coeff, {fx, fy.times_monomial(1), ft.derivative_factor()}});
        break;
      case Field::Y:  // d_y + (x/2) d_t
        out.push_back({t.coeff, {fx, fy.derivative_factor(), ft}});
        out.push_back({0.5 * t.coeff, {fx.times_monomial(1), fy, ft.derivative_factor()}});
        break;
      case Field::T:
        out.push_back({t.coeff, {fx, fy, ft.derivative_factor()}});
        break;
    }
  }
  return ProfileFunction(std::move(out), std::string(field_name(which)) + "(" + name_ + ")");
}

cplx ProfileFunction::left_derivative(Field which, const GroupPoint& g) const { return apply_field(which)(g); }

ProfileFunction ProfileFunction::operator+(const ProfileFunction& o) const {
  auto terms = terms_;
  terms.insert(terms.end(), o.terms_.begin(), o.terms_.end());
  return ProfileFunction(std::move(terms), name_ + "+" + o.name_);
}

ProfileFunction ProfileFunction::operator*(const ProfileFunction& o) const {
  std::vector<ProfileTerm> out;
  out.reserve(terms_.size() * o.terms_.size());
  for (const auto& s : terms_)
    for (const auto& t : o.terms_)
      out.push_back({s.coeff * t.coeff,
                     {s.factor[0] * t.factor[0], s.factor[1] * t.factor[1], s.factor[2] * t.factor[2]}});
  return ProfileFunction(std::move(out), name_ + "*" + o.name_);
}

ProfileFunction ProfileFunction::scaled(cplx c) const {
  auto terms = terms_;
  for (auto& t : terms) t.coeff *= c;
  return ProfileFunction(std::move(terms), name_);
}

ProfileFunction ProfileFunction::conj() const {
  auto terms = terms_;
  for (auto& t : terms) {
    t.coeff = std::conj(t.coeff);
    for (auto& f : t.factor) f = f.conj();
  }
  return ProfileFunction(std::move(terms), "conj(" + name_ + ")");
}

ProfileFunction ProfileFunction::times_monomial(std::array<int, 3> alpha) const {
  auto terms = terms_;
  for (auto& t : terms)
    for (int a = 0; a < 3; ++a) t.factor[a] = t.factor[a].times_monomial(alpha[a]);
  return ProfileFunction(std::move(terms), name_);
}

ProfileFunction ProfileFunction::compose_dilation(double r) const {
  require(r > 0.0, ErrorCode::Domain, "dilation factor must be positive");
  auto terms = terms_;
  for (auto& t : terms) {
    t.factor[0] = t.factor[0].rescaled(1.0 / r);
    t.factor[1] = t.factor[1].rescaled(1.0 / r);
    t.factor[2] = t.factor[2].rescaled(1.0 / (r * r));
  }
  return ProfileFunction(std::move(terms), name_);
}

ProfileFunction ProfileFunction::l2_dilate(double r) const {
  return compose_dilation(r).scaled(std::pow(r, 0.5 * HomogeneousStructure::Q));
}

cplx ProfileFunction::integral() const {
  require(integrable(), ErrorCode::NotIntegrable, "profile '" + name_ + "' is not integrable");
  cplx acc = 0.0;
  for (const auto& t : terms_)
    acc += t.coeff * t.factor[0].integral() * t.factor[1].integral() * t.factor[2].integral();
  return acc;
}

cplx ProfileFunction::inner(const ProfileFunction& o) const {
  if (is_zero() || o.is_zero()) return 0.0;
  return ((*this) * o.conj()).integral();
}

std::vector<std::pair<cplx, Factor1D>> ProfileFunction::centre_slice() const {
  std::vector<std::pair<cplx, Factor1D>> out;
  for (const auto& t : terms_) out.emplace_back(t.coeff * t.factor[0](0.0) * t.factor[1](0.0), t.factor[2]);
  return out;
}

FunctionDescriptor ProfileFunction::descriptor() const {
  FunctionDescriptor d;
  const ProfileFunction self = *this;
  d.value = [self](const GroupPoint& g) { return self(g); };
  d.left_derivative = [self](Field w, const GroupPoint& g) { return self.left_derivative(w, g); };
  return d;
}

cplx integrate_slice(const std::vector<std::pair<cplx, Factor1D>>& slice) {
  cplx acc = 0.0;
  for (const auto& [c, f] : slice) acc += c * f.integral();
  return acc;
}

namespace {

nlohmann::json cplx_json(cplx c) { return nlohmann::json::array({c.real(), c.imag()}); }

cplx cplx_from_json(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  require(j.is_array() && j.size() == 2, ErrorCode::Config, "complex value must be a number or [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

nlohmann::json to_json(const Factor1D& f) {
  nlohmann::json poly = nlohmann::json::array();
  for (const auto& c : f.poly) poly.push_back(cplx_json(c));
  return {{"poly", poly}, {"a", f.a}, {"s0", f.s0}, {"omega", f.omega}};
}

Factor1D factor_from_json(const nlohmann::json& j) {
  try {
    Factor1D f;
    if (j.contains("poly")) {
      f.poly.clear();
      for (const auto& c : j.at("poly")) f.poly.push_back(cplx_from_json(c));
      require(!f.poly.empty(), ErrorCode::Config, "factor polynomial must be non-empty");
    }
    f.a = j.value("a", 0.0);
    f.s0 = j.value("s0", 0.0);
    f.omega = j.value("omega", 0.0);
    require(f.a >= 0.0, ErrorCode::Config, "factor Gaussian rate 'a' must be >= 0");
    return f;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Config, std::string("profile factor: ") + e.what());
  }
}

nlohmann::json to_json(const ProfileFunction& f) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : f.terms())
    terms.push_back({{"coeff", cplx_json(t.coeff)},
                     {"x", to_json(t.factor[0])},
                     {"y", to_json(t.factor[1])},
                     {"t", to_json(t.factor[2])}});
  return {{"name", f.name()}, {"terms", terms}};
}

ProfileFunction profile_from_json(const nlohmann::json& j) {
  try {
    std::vector<ProfileTerm> terms;
    require(j.is_object() && j.at("terms").is_array(), ErrorCode::Config, "profile: 'terms' must be an array");
    for (const auto& t : j.at("terms")) {
      require(t.is_object(), ErrorCode::Config, "profile: each term must be an object");
      ProfileTerm term;
      term.coeff = t.contains("coeff") ? cplx_from_json(t.at("coeff")) : cplx(1.0);
      const char* axes[3] = {"x", "y", "t"};
      for (int a = 0; a < 3; ++a)
        if (t.contains(axes[a])) term.factor[a] = factor_from_json(t.at(axes[a]));
      terms.push_back(std::move(term));
    }
    return ProfileFunction(std::move(terms), j.value("name", std::string("custom")));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Config, std::string("profile: ") + e.what());
  }
}

}  // namespace hgmdm
