#pragma once

// Named closed-form functions addressable from configs and symbol specs.

#include <string>
#include <vector>

#include "hgmdm/profile.hpp"

namespace hgmdm::registry {

/// Integrable test profiles: gaussian, gaussian_x, gaussian_tphase,
/// laguerre0_localized, shifted_gaussian.
std::vector<std::string> profile_names();
bool has_profile(const std::string& name);
ProfileFunction profile(const std::string& name);

/// Spatial factors for symbols (may be non-integrable): one, gaussian,
/// gaussian_wide, shifted_gaussian, t_gaussian.
std::vector<std::string> spatial_factor_names();
bool has_spatial_factor(const std::string& name);
ProfileFunction spatial_factor(const std::string& name);

/// Centre profiles u0(t) for oscillating sequences: gaussian, shifted_gaussian.
bool has_centre_profile(const std::string& name);
Factor1D centre_profile(const std::string& name);

/// Profile by registry name, or inline JSON object (see profile_from_json).
ProfileFunction resolve_profile(const nlohmann::json& j);
Factor1D resolve_centre_profile(const nlohmann::json& j);

}  // namespace hgmdm::registry
