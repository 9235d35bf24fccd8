#pragma once

// Experiment configuration and the verification suites behind the CLI.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hgmdm/mdm.hpp"

namespace hgmdm {

struct Tolerances {
  double plancherel = 2e-2;
  double parseval = 2e-2;
  double inversion = 5e-2;
  double homomorphism = 1e-8;
  double covariance = 1e-8;
  double laguerre = 1e-8;
  double formal_degree = 1e-4;
  double algebra = 1e-12;
  double leibniz = 1e-12;
  double positivity = 1e-8;
  double mdm = 5e-2;
  double sum_rule = 1e-3;
  double localization = 1e-8;
  double compensated = 1e-6;
  double polar = 1e-6;
};

struct RepCheckSettings {
  double lambda = 1.0;
  int n_modes = 40;
  int pairs = 50;
  double radius = 2.0;
  int samples = 100;
  std::vector<int> modes{0, 1, 2, 3};
  std::vector<int> degree_modes{0, 1};
  double dilation = 2.0;
  std::uint64_t seed = 20240607;
};

struct SequenceSettings {
  std::string variant = "concentrate";  // concentrate | oscillate | vector
  nlohmann::json profile = "gaussian";
  int mode = 1;
  nlohmann::json centre_profile = "gaussian";
  int gamma_modes = 4;
  nlohmann::json phi = "gaussian";  // test function of the compensated check
};

struct ExperimentConfig {
  SpatialGrid spatial{{8.0, 8.0, 16.0}, {65, 65, 1025}};
  PlancherelConfig plancherel{};
  fourier::TransformOptions transform{};
  std::vector<std::string> profiles;
  std::vector<std::string> symbols;
  std::vector<double> k_list{1.0, 2.0, 4.0, 8.0};
  Tolerances tol{};
  RepCheckSettings rep{};
  SequenceSettings sequence{};
  double cutoff_lo = 0.25;
  double cutoff_hi = 1.0;
  double window = 7.0;
  int window_nodes = 57;
  double lambda_floor = 1e-3;
  std::string out_dir = "hgmdm_out";

  ExperimentConfig();
  /// Missing keys take defaults; unknown keys and invalid values are Config
  /// errors naming the field.
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::string& path);
  nlohmann::json to_json() const;
  void validate() const;
  MdmOptions mdm_options() const;
};

struct RunOverrides {
  std::optional<std::vector<double>> k_list;
  std::vector<std::string> symbols;
  std::optional<std::string> out_dir;
  std::optional<std::string> variant;
  bool strict = false;   // warnings count as failures
  bool write = true;     // write report files
};

struct RunResult {
  int exit_code = 0;
  nlohmann::json report;
  std::vector<std::string> failures;
  std::vector<std::string> warnings;
  std::vector<std::string> files;
};

namespace runner {

/// Commands: plancherel, rep-check, symbol-check, mdm. Exit code 0 pass,
/// 1 tolerance failure, 2 configuration or validation error.
RunResult run(const std::string& command, ExperimentConfig config, const RunOverrides& overrides = {});

std::vector<std::string> commands();

/// "1,2,4,8" -> {1, 2, 4, 8}.
std::vector<double> parse_k_list(const std::string& s);

}  // namespace runner
}  // namespace hgmdm
