#include "dbar/dbar.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "nls.hpp"
#include "scenario.hpp"

namespace {
thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

dbar_status map_code(dbar::ErrorCode c) {
  switch (c) {
    case dbar::ErrorCode::config_parse:
      return DBAR_CONFIG_ERROR;
    case dbar::ErrorCode::invalid_argument:
      return DBAR_INVALID_ARGUMENT;
    case dbar::ErrorCode::solver_failure:
      return DBAR_SOLVER_FAILURE;
    case dbar::ErrorCode::tolerance_failure:
      return DBAR_TOLERANCE_FAILURE;
    default:
      return DBAR_INTERNAL_ERROR;
  }
}
}  // namespace

struct dbar_scenario {
  std::string config;
};

struct dbar_solution {
  dbar::scenario::SolveHandle h;
};

extern "C" {

const char* dbar_version(void) {
  static std::string v = dbar::scenario::version();
  return v.c_str();
}

const char* dbar_last_error(void) { return g_last_error.c_str(); }

dbar_scenario* dbar_scenario_from_string(const char* config_json) {
  if (!config_json) {
    set_error("null config");
    return nullptr;
  }
  return new dbar_scenario{config_json};
}

dbar_scenario* dbar_scenario_from_file(const char* path) {
  if (!path) {
    set_error("null path");
    return nullptr;
  }
  std::ifstream is(path);
  if (!is) {
    set_error(std::string("cannot read ") + path);
    return nullptr;
  }
  std::ostringstream buf;
  buf << is.rdbuf();
  return new dbar_scenario{buf.str()};
}

void dbar_scenario_free(dbar_scenario* s) { delete s; }

dbar_status dbar_run(dbar_scenario* s, const char* subcommand, const char* output_dir,
                     char** report_json) {
  if (!s || !subcommand) {
    set_error("null scenario or subcommand");
    return DBAR_INVALID_ARGUMENT;
  }
  const auto res =
      dbar::scenario::run(subcommand, s->config, output_dir ? output_dir : std::string("-"));
  if (report_json) *report_json = dup_string(res.report_json);
  switch (res.exit_code) {
    case 0:
      return DBAR_OK;
    case 1:
      set_error("tolerance failure");
      return DBAR_TOLERANCE_FAILURE;
    case 2:
      set_error("configuration error");
      return DBAR_CONFIG_ERROR;
    default:
      set_error("solver failure");
      return DBAR_SOLVER_FAILURE;
  }
}

dbar_solution* dbar_solve(dbar_scenario* s) {
  if (!s) {
    set_error("null scenario");
    return nullptr;
  }
  try {
    return new dbar_solution{dbar::scenario::solve_scenario(s->config)};
  } catch (const dbar::Error& e) {
    set_error(e.what());
    return nullptr;
  } catch (const std::exception& e) {
    set_error(e.what());
    return nullptr;
  }
}

void dbar_solution_free(dbar_solution* sol) { delete sol; }

int dbar_solution_size(const dbar_solution* sol) { return sol ? sol->h.ws->size() : 0; }

dbar_status dbar_solution_eval(const dbar_solution* sol, double re_z, double im_z,
                               double out[8]) {
  if (!sol || !out) {
    set_error("null argument");
    return DBAR_INVALID_ARGUMENT;
  }
  try {
    const dbar::Mat2 G = sol->h.sol->evaluate(dbar::cplx(re_z, im_z));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        out[(i * 2 + j) * 2] = G(i, j).real();
        out[(i * 2 + j) * 2 + 1] = G(i, j).imag();
      }
    return DBAR_OK;
  } catch (const dbar::Error& e) {
    set_error(e.what());
    return map_code(e.code());
  }
}

double dbar_solution_unimodularity(const dbar_solution* sol) {
  return sol ? dbar::core::unimodularity_residual(*sol->h.sol) : -1.0;
}

dbar_status dbar_solution_psi(const dbar_solution* sol, double out[2]) {
  if (!sol || !out) {
    set_error("null argument");
    return DBAR_INVALID_ARGUMENT;
  }
  const dbar::cplx psi = dbar::nls::psi_extract(*sol->h.sol).psi;
  out[0] = psi.real();
  out[1] = psi.imag();
  return DBAR_OK;
}

void dbar_string_free(char* s) { std::free(s); }

}  // extern "C"
