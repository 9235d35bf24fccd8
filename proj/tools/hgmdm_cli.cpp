#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hgmdm/hgmdm.h"

namespace {

const char* kSymbolGrammar = R"(Symbol specs:
  spec    := term ('+' term)*
  term    := ['-'] factor ('*' factor)*
  factor  := number | spatial | atom
  spatial := one | gaussian | gaussian_wide | shifted_gaussian | t_gaussian
  atom    := id | proj:j | proj:a..b | unit:a:b | sign | pos | neg
           | mult:bump:lo:hi | mult:exp:s | X | Y | T | R | rpow:p
Examples: "proj:1", "gaussian*id", "t_gaussian*proj:0", "pos*unit:0:1".)";

std::vector<double> parse_k(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (used != item.size()) throw std::invalid_argument(item);
  }
  if (out.empty()) throw std::invalid_argument(s);
  return out;
}

int report_status(hgmdm_status s, const char* what) {
  std::fprintf(stderr, "hgmdm: %s: %s\n", what, hgmdm_last_error());
  return s == HGMDM_OK ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier analysis and microlocal defect measures on the Heisenberg group H1"};
  app.footer(std::string(kSymbolGrammar) +
             "\n\nExit codes: 0 pass, 1 tolerance failure, 2 configuration or validation error."
             "\nHGMDM_THREADS caps the worker count.");
  app.set_version_flag("--version", hgmdm_version());
  app.require_subcommand(1);

  std::string config_path, out_dir, k_text, variant;
  std::vector<std::string> symbols;
  bool strict = false, no_files = false;

  auto add_common = [&](CLI::App* sub, bool with_symbols) {
    sub->add_option("--config", config_path, "Experiment config JSON (defaults apply when omitted)")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory for JSON and CSV reports");
    sub->add_option("--k", k_text, "Comma-separated increasing k list, e.g. 1,2,4,8");
    if (with_symbols) sub->add_option("--symbol", symbols, "Symbol spec (repeatable); see grammar below");
    sub->add_flag("--strict", strict, "Treat warnings as failures");
    sub->add_flag("--no-files", no_files, "Do not write report files");
  };
  auto* plancherel = app.add_subcommand("plancherel", "Plancherel, Parseval, polar and inversion suite");
  auto* rep = app.add_subcommand("rep-check", "Representation homomorphism, covariance, Laguerre and formal degree");
  auto* sym = app.add_subcommand("symbol-check", "Symbol algebra, homogeneity, positivity and Leibniz tables");
  auto* mdm = app.add_subcommand("mdm", "Microlocal defect measure convergence suites");
  add_common(plancherel, false);
  add_common(rep, false);
  add_common(sym, true);
  add_common(mdm, true);
  mdm->add_option("--variant", variant, "concentrate | oscillate | vector")
      ->check(CLI::IsMember({"concentrate", "oscillate", "vector"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();

  std::vector<double> k_list;
  if (!k_text.empty()) {
    try {
      k_list = parse_k(k_text);
    } catch (const std::exception&) {
      std::fprintf(stderr, "hgmdm: --k: cannot parse '%s'\n", k_text.c_str());
      return 2;
    }
  }

  hgmdm_config* config = nullptr;
  const hgmdm_status ls =
      config_path.empty() ? hgmdm_config_default(&config) : hgmdm_config_load(config_path.c_str(), &config);
  if (ls != HGMDM_OK) return report_status(ls, "config");

  std::vector<const char*> sym_ptrs;
  for (const auto& s : symbols) sym_ptrs.push_back(s.c_str());
  hgmdm_run_options opt{};
  if (!k_list.empty()) {
    opt.k_list = k_list.data();
    opt.k_count = k_list.size();
  }
  if (!sym_ptrs.empty()) {
    opt.symbols = sym_ptrs.data();
    opt.symbol_count = sym_ptrs.size();
  }
  if (!out_dir.empty()) opt.out_dir = out_dir.c_str();
  if (!variant.empty()) opt.variant = variant.c_str();
  opt.strict = strict ? 1 : 0;
  opt.skip_files = no_files ? 1 : 0;

  hgmdm_result* result = nullptr;
  const hgmdm_status rs = hgmdm_run(config, command.c_str(), &opt, &result);
  hgmdm_config_free(config);
  if (!result) return report_status(rs == HGMDM_OK ? HGMDM_E_INTERNAL : rs, command.c_str());

  const int code = hgmdm_result_exit_code(result);
  for (size_t i = 0; i < hgmdm_result_warning_count(result); ++i)
    std::fprintf(stderr, "warning: %s\n", hgmdm_result_warning(result, i));
  for (size_t i = 0; i < hgmdm_result_failure_count(result); ++i)
    std::fprintf(stderr, "%s: %s\n", code == 2 ? "error" : "FAIL", hgmdm_result_failure(result, i));
  for (size_t i = 0; i < hgmdm_result_file_count(result); ++i) std::printf("wrote %s\n", hgmdm_result_file(result, i));
  std::printf("%s: %s\n", command.c_str(), code == 0 ? "pass" : code == 1 ? "tolerance failure" : "error");
  hgmdm_result_free(result);
  return code;
}
