#include "hgmdm/hgmdm.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "hgmdm/error.hpp"
#include "hgmdm/report.hpp"
#include "hgmdm/reps.hpp"
#include "hgmdm/runner.hpp"

struct hgmdm_config {
  hgmdm::ExperimentConfig config;
};

struct hgmdm_result {
  hgmdm::RunResult result;
  std::string json;
};

namespace {

thread_local std::string last_error;

hgmdm_status set_error(hgmdm_status s, std::string msg) {
  last_error = std::move(msg);
  return s;
}

template <class F>
hgmdm_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const hgmdm::Error& e) {
    return set_error(static_cast<hgmdm_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(HGMDM_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(HGMDM_E_INTERNAL, std::string("internal error: ") + e.what());
  } catch (...) {
    return set_error(HGMDM_E_INTERNAL, "internal error");
  }
}

hgmdm_status copy_out(const std::string& s, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (!buf) return cap == 0 ? HGMDM_OK : set_error(HGMDM_E_NULL_ARGUMENT, "buf is NULL");
  if (cap < s.size() + 1) return set_error(HGMDM_E_BUFFER_TOO_SMALL, "buffer too small");
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return HGMDM_OK;
}

#define HGMDM_REQUIRE_ARG(p) \
  if (!(p)) return set_error(HGMDM_E_NULL_ARGUMENT, #p " is NULL")

hgmdm::GroupPoint to_point(hgmdm_point p) { return {p.x, p.y, p.t}; }
hgmdm_point from_point(const hgmdm::GroupPoint& g) { return {g.x, g.y, g.t}; }

}  // namespace

extern "C" {

const char* hgmdm_version(void) { return hgmdm::report::version(); }

const char* hgmdm_status_name(hgmdm_status status) {
  switch (status) {
    case HGMDM_OK: return "ok";
    case HGMDM_E_NULL_ARGUMENT: return "null-argument";
    case HGMDM_E_BUFFER_TOO_SMALL: return "buffer-too-small";
    case HGMDM_E_INTERNAL: return "internal";
    default:
      if (status >= HGMDM_E_DOMAIN && status <= HGMDM_E_PARSE)
        return hgmdm::error_code_name(static_cast<hgmdm::ErrorCode>(status));
      return "unknown";
  }
}

const char* hgmdm_last_error(void) { return last_error.c_str(); }

hgmdm_status hgmdm_config_default(hgmdm_config** out) {
  HGMDM_REQUIRE_ARG(out);
  *out = nullptr;
  return guarded([&] {
    *out = new hgmdm_config{hgmdm::ExperimentConfig{}};
    return HGMDM_OK;
  });
}

hgmdm_status hgmdm_config_load(const char* path, hgmdm_config** out) {
  HGMDM_REQUIRE_ARG(path);
  HGMDM_REQUIRE_ARG(out);
  *out = nullptr;
  return guarded([&] {
    *out = new hgmdm_config{hgmdm::ExperimentConfig::load(path)};
    return HGMDM_OK;
  });
}

hgmdm_status hgmdm_config_from_json(const char* text, hgmdm_config** out) {
  HGMDM_REQUIRE_ARG(text);
  HGMDM_REQUIRE_ARG(out);
  *out = nullptr;
  return guarded([&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      hgmdm::fail(hgmdm::ErrorCode::Parse, e.what());
    }
    *out = new hgmdm_config{hgmdm::ExperimentConfig::from_json(j)};
    return HGMDM_OK;
  });
}

hgmdm_status hgmdm_config_set(hgmdm_config* config, const char* pointer, const char* json_value) {
  HGMDM_REQUIRE_ARG(config);
  HGMDM_REQUIRE_ARG(pointer);
  HGMDM_REQUIRE_ARG(json_value);
  return guarded([&] {
    nlohmann::json j = config->config.to_json();
    nlohmann::json value;
    try {
      value = nlohmann::json::parse(json_value);
      j[nlohmann::json::json_pointer(pointer)] = value;
    } catch (const nlohmann::json::exception& e) {
      hgmdm::fail(hgmdm::ErrorCode::Parse, std::string("config_set '") + pointer + "': " + e.what());
    }
    auto updated = hgmdm::ExperimentConfig::from_json(j);
    updated.validate();
    config->config = std::move(updated);
    return HGMDM_OK;
  });
}

hgmdm_status hgmdm_config_to_json(const hgmdm_config* config, char* buf, size_t cap, size_t* needed) {
  HGMDM_REQUIRE_ARG(config);
  return guarded([&] { return copy_out(config->config.to_json().dump(2), buf, cap, needed); });
}

void hgmdm_config_free(hgmdm_config* config) { delete config; }

hgmdm_status hgmdm_run(const hgmdm_config* config, const char* command, const hgmdm_run_options* options,
                       hgmdm_result** out) {
  HGMDM_REQUIRE_ARG(config);
  HGMDM_REQUIRE_ARG(command);
  HGMDM_REQUIRE_ARG(out);
  *out = nullptr;
  return guarded([&] {
    hgmdm::RunOverrides ov;
    if (options) {
      if (options->k_list) ov.k_list = std::vector<double>(options->k_list, options->k_list + options->k_count);
      if (options->symbols)
        for (size_t i = 0; i < options->symbol_count; ++i) {
          if (!options->symbols[i]) return set_error(HGMDM_E_NULL_ARGUMENT, "options->symbols entry is NULL");
          ov.symbols.emplace_back(options->symbols[i]);
        }
      if (options->out_dir) ov.out_dir = std::string(options->out_dir);
      if (options->variant) ov.variant = std::string(options->variant);
      ov.strict = options->strict != 0;
      ov.write = options->skip_files == 0;
    }
    auto* r = new hgmdm_result{hgmdm::runner::run(command, config->config, ov), {}};
    r->json = hgmdm::report::json_text(r->result.report);
    *out = r;
    if (r->result.exit_code == 2)
      return set_error(HGMDM_E_CONFIG, r->result.failures.empty() ? "configuration error" : r->result.failures.front());
    return HGMDM_OK;
  });
}

int hgmdm_result_exit_code(const hgmdm_result* result) { return result ? result->result.exit_code : 2; }

size_t hgmdm_result_failure_count(const hgmdm_result* result) { return result ? result->result.failures.size() : 0; }

const char* hgmdm_result_failure(const hgmdm_result* result, size_t index) {
  if (!result || index >= result->result.failures.size()) return nullptr;
  return result->result.failures[index].c_str();
}

size_t hgmdm_result_warning_count(const hgmdm_result* result) { return result ? result->result.warnings.size() : 0; }

const char* hgmdm_result_warning(const hgmdm_result* result, size_t index) {
  if (!result || index >= result->result.warnings.size()) return nullptr;
  return result->result.warnings[index].c_str();
}

size_t hgmdm_result_file_count(const hgmdm_result* result) { return result ? result->result.files.size() : 0; }

const char* hgmdm_result_file(const hgmdm_result* result, size_t index) {
  if (!result || index >= result->result.files.size()) return nullptr;
  return result->result.files[index].c_str();
}

hgmdm_status hgmdm_result_json(const hgmdm_result* result, char* buf, size_t cap, size_t* needed) {
  HGMDM_REQUIRE_ARG(result);
  return guarded([&] { return copy_out(result->json, buf, cap, needed); });
}

void hgmdm_result_free(hgmdm_result* result) { delete result; }

hgmdm_status hgmdm_multiply(hgmdm_point a, hgmdm_point b, hgmdm_point* out) {
  HGMDM_REQUIRE_ARG(out);
  return guarded([&] {
    *out = from_point(hgmdm::group::multiply(to_point(a), to_point(b)));
    return HGMDM_OK;
  });
}

hgmdm_status hgmdm_dilate(double r, hgmdm_point g, hgmdm_point* out) {
  HGMDM_REQUIRE_ARG(out);
  return guarded([&] {
    *out = from_point(hgmdm::group::dilate(r, to_point(g)));
    return HGMDM_OK;
  });
}

hgmdm_status hgmdm_quasi_norm(hgmdm_point g, double* out) {
  HGMDM_REQUIRE_ARG(out);
  return guarded([&] {
    *out = hgmdm::group::quasi_norm(to_point(g));
    return HGMDM_OK;
  });
}

hgmdm_status hgmdm_rep_matrix(double lambda, int n_modes, hgmdm_point g, double* re, double* im) {
  HGMDM_REQUIRE_ARG(re);
  HGMDM_REQUIRE_ARG(im);
  return guarded([&] {
    const hgmdm::RepPoint rp(lambda, n_modes);
    const auto m = hgmdm::reps::rep_matrix(rp, to_point(g));
    for (int i = 0; i < n_modes; ++i)
      for (int j = 0; j < n_modes; ++j) {
        re[i * n_modes + j] = m(i, j).real();
        im[i * n_modes + j] = m(i, j).imag();
      }
    return HGMDM_OK;
  });
}

hgmdm_status hgmdm_matrix_coefficient(double lambda, int n_modes, int mode, hgmdm_point g, double* re, double* im) {
  HGMDM_REQUIRE_ARG(re);
  HGMDM_REQUIRE_ARG(im);
  return guarded([&] {
    const auto c = hgmdm::reps::matrix_coefficient(hgmdm::RepPoint(lambda, n_modes), mode, to_point(g));
    *re = c.real();
    *im = c.imag();
    return HGMDM_OK;
  });
}

hgmdm_status hgmdm_laguerre_coefficient(double lambda, int mode, hgmdm_point g, double* re, double* im) {
  HGMDM_REQUIRE_ARG(re);
  HGMDM_REQUIRE_ARG(im);
  return guarded([&] {
    const auto c = hgmdm::reps::laguerre_coefficient(lambda, mode, to_point(g));
    *re = c.real();
    *im = c.imag();
    return HGMDM_OK;
  });
}

hgmdm_status hgmdm_formal_degree(double lambda, double* out) {
  HGMDM_REQUIRE_ARG(out);
  return guarded([&] {
    hgmdm::require(lambda != 0.0, hgmdm::ErrorCode::DegenerateRep, "lambda = 0 has no formal degree");
    *out = hgmdm::reps::formal_degree_exact(lambda);
    return HGMDM_OK;
  });
}

}  // extern "C"
