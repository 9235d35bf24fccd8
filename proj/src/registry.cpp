#include "hgmdm/registry.hpp"

#include "hgmdm/error.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace hgmdm::registry {

namespace {

Factor1D gauss(double a, double s0 = 0.0, double omega = 0.0) {
  Factor1D f;
  f.a = a;
  f.s0 = s0;
  f.omega = omega;
  return f;
}

Factor1D one() { return Factor1D{}; }

using Builder = std::function<ProfileFunction()>;

const std::vector<std::pair<std::string, Builder>>& profiles() {
  static const std::vector<std::pair<std::string, Builder>> table = {
      {"gaussian", [] { return ProfileFunction::separable(1.0, gauss(0.5), gauss(0.5), gauss(0.5), "gaussian"); }},
      {"gaussian_x",
       [] {
         return ProfileFunction::separable(1.0, gauss(0.5).times_monomial(1), gauss(0.5), gauss(0.5), "gaussian_x");
       }},
      {"gaussian_tphase",
       [] { return ProfileFunction::separable(1.0, gauss(0.5), gauss(0.5), gauss(0.5, 0.0, 3.0), "gaussian_tphase"); }},
      {"laguerre0_localized",
       [] {
         return ProfileFunction::separable(1.0, gauss(0.25), gauss(0.25), gauss(0.5, 0.0, 1.0), "laguerre0_localized");
       }},
      {"shifted_gaussian",
       [] {
         return ProfileFunction::separable(1.0, gauss(0.5, 1.0), gauss(0.5, -0.5), gauss(0.5, 0.5),
                                           "shifted_gaussian");
       }},
  };
  return table;
}

const std::vector<std::pair<std::string, Builder>>& spatial_factors() {
  static const std::vector<std::pair<std::string, Builder>> table = {
      {"one", [] { return ProfileFunction::separable(1.0, one(), one(), one(), "one"); }},
      {"gaussian", [] { return ProfileFunction::separable(1.0, gauss(0.5), gauss(0.5), gauss(0.5), "gaussian"); }},
      {"gaussian_wide",
       [] { return ProfileFunction::separable(1.0, gauss(0.125), gauss(0.125), gauss(0.125), "gaussian_wide"); }},
      {"shifted_gaussian",
       [] {
         return ProfileFunction::separable(1.0, gauss(0.5, 0.5), gauss(0.5), gauss(0.5), "shifted_gaussian");
       }},
      {"t_gaussian", [] { return ProfileFunction::separable(1.0, one(), one(), gauss(0.5), "t_gaussian"); }},
  };
  return table;
}

template <class Table>
auto find(const Table& table, const std::string& name) {
  return std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == name; });
}

}  // namespace

std::vector<std::string> profile_names() {
  std::vector<std::string> names;
  for (const auto& e : profiles()) names.push_back(e.first);
  return names;
}

bool has_profile(const std::string& name) { return find(profiles(), name) != profiles().end(); }

ProfileFunction profile(const std::string& name) {
  auto it = find(profiles(), name);
  require(it != profiles().end(), ErrorCode::Config, "unknown profile '" + name + "'");
  return it->second();
}

std::vector<std::string> spatial_factor_names() {
  std::vector<std::string> names;
  for (const auto& e : spatial_factors()) names.push_back(e.first);
  return names;
}

bool has_spatial_factor(const std::string& name) { return find(spatial_factors(), name) != spatial_factors().end(); }

ProfileFunction spatial_factor(const std::string& name) {
  auto it = find(spatial_factors(), name);
  require(it != spatial_factors().end(), ErrorCode::InvalidSymbol, "unknown spatial factor '" + name + "'");
  return it->second();
}

bool has_centre_profile(const std::string& name) { return name == "gaussian" || name == "shifted_gaussian"; }

Factor1D centre_profile(const std::string& name) {
  if (name == "gaussian") return gauss(0.5);
  if (name == "shifted_gaussian") return gauss(0.5, 1.0);
  fail(ErrorCode::Config, "unknown centre profile '" + name + "'");
}

ProfileFunction resolve_profile(const nlohmann::json& j) {
  if (j.is_string()) return profile(j.get<std::string>());
  require(j.is_object(), ErrorCode::Config, "profile must be a registry name or an object with 'terms'");
  return profile_from_json(j);
}

Factor1D resolve_centre_profile(const nlohmann::json& j) {
  if (j.is_string()) return centre_profile(j.get<std::string>());
  require(j.is_object(), ErrorCode::Config, "u0 must be a registry name or a factor object");
  Factor1D f = factor_from_json(j);
  require(f.decays(), ErrorCode::Config, "u0 must decay (a > 0)");
  return f;
}

}  // namespace hgmdm::registry
