#include "orlicz/orlicz.h"

#include <exception>
#include <string>
#include <vector>

#include "orlicz/commands.hpp"
#include "orlicz/convergence.hpp"
#include "orlicz/duality.hpp"
#include "orlicz/error.hpp"
#include "orlicz/extended_real.hpp"
#include "orlicz/measure.hpp"
#include "orlicz/orlicz_function.hpp"
#include "orlicz/risk.hpp"

struct orlicz_function {
  orlicz::OrliczFunction value;
  std::string spec;
};

struct orlicz_space {
  orlicz::SpacePtr value;
};

struct orlicz_rv {
  orlicz::Rv value;
};

struct orlicz_risk {
  orlicz::RiskPtr value;
};

struct orlicz_family {
  orlicz::SequenceFamily value;
};

struct orlicz_config {
  orlicz::RunConfig value;
};

struct orlicz_report {
  orlicz::Record record;
  std::string text;
  int exit_code = 0;
};

namespace {

thread_local std::string g_last_error;

orlicz_status fail(orlicz_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <class F>
orlicz_status guarded(F&& body) {
  try {
    body();
    return ORLICZ_OK;
  } catch (const orlicz::Error& e) {
    return fail(static_cast<orlicz_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ORLICZ_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(ORLICZ_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(ORLICZ_INTERNAL_ERROR, "unknown failure");
  }
}

#define ORLICZ_REQUIRE(cond, what) \
  if (!(cond)) return fail(ORLICZ_INVALID_ARGUMENT, what)

orlicz_function* wrap(orlicz::OrliczFunction phi) {
  auto spec = orlicz::to_spec(phi);
  return new orlicz_function{std::move(phi), std::move(spec)};
}

orlicz_report* make_report(orlicz::CommandResult result, const orlicz_config* cfg) {
  auto* r = new orlicz_report;
  r->record = std::move(result.record);
  r->exit_code = result.exit_code;
  r->text = r->record.render(cfg ? cfg->value.format : orlicz::Format::Json);
  return r;
}

const orlicz::RunConfig& config_of(const orlicz_config* cfg) {
  static const orlicz::RunConfig defaults{};
  return cfg ? cfg->value : defaults;
}

}  // namespace

extern "C" {

const char* orlicz_last_error(void) { return g_last_error.c_str(); }

const char* orlicz_status_name(orlicz_status status) {
  switch (status) {
    case ORLICZ_OK: return "ok";
    case ORLICZ_INVALID_ARGUMENT: return "invalid_argument";
    case ORLICZ_PARSE_ERROR: return "parse_error";
    case ORLICZ_NUMERIC_ERROR: return "numeric_error";
    case ORLICZ_HYPOTHESIS_ERROR: return "hypothesis_error";
    case ORLICZ_PROPERTY_VIOLATION: return "property_violation";
    case ORLICZ_DOMAIN_ERROR: return "domain_error";
    case ORLICZ_STRUCTURE_ERROR: return "structure_error";
    case ORLICZ_PRECONDITION_ERROR: return "precondition_error";
    case ORLICZ_IO_ERROR: return "io_error";
    case ORLICZ_INTERNAL_ERROR: return "internal_error";
  }
  return "unknown";
}

int orlicz_exit_code(orlicz_status status) {
  switch (status) {
    case ORLICZ_OK: return 0;
    case ORLICZ_INVALID_ARGUMENT:
    case ORLICZ_PARSE_ERROR:
    case ORLICZ_DOMAIN_ERROR:
    case ORLICZ_STRUCTURE_ERROR:
    case ORLICZ_IO_ERROR: return 2;
    case ORLICZ_HYPOTHESIS_ERROR:
    case ORLICZ_PRECONDITION_ERROR: return 4;
    case ORLICZ_PROPERTY_VIOLATION: return 5;
    case ORLICZ_NUMERIC_ERROR:
    case ORLICZ_INTERNAL_ERROR: return 3;
  }
  return 3;
}

orlicz_status orlicz_function_parse(const char* spec, orlicz_function** out) {
  ORLICZ_REQUIRE(spec && out, "null argument");
  return guarded([&] { *out = wrap(orlicz::parse_orlicz_spec(spec)); });
}

void orlicz_function_free(orlicz_function* phi) { delete phi; }

orlicz_status orlicz_function_eval(const orlicz_function* phi, double t, double* out) {
  ORLICZ_REQUIRE(phi && out, "null argument");
  return guarded([&] { *out = orlicz::evaluate(phi->value, t); });
}

orlicz_status orlicz_function_conjugate(const orlicz_function* phi, orlicz_function** out) {
  ORLICZ_REQUIRE(phi && out, "null argument");
  return guarded([&] { *out = wrap(orlicz::conjugate(phi->value)); });
}

orlicz_status orlicz_function_conjugate_value(const orlicz_function* phi, double s, double* out) {
  ORLICZ_REQUIRE(phi && out, "null argument");
  return guarded([&] {
    if (!(s >= 0.0)) throw orlicz::DomainError("conjugate_value needs s >= 0");
    *out = orlicz::conjugate_value(phi->value, s);
  });
}

orlicz_status orlicz_function_limit_slope(const orlicz_function* phi, double* slope, int* infinite) {
  ORLICZ_REQUIRE(phi && slope && infinite, "null argument");
  return guarded([&] {
    const auto s = orlicz::limit_slope(phi->value);
    *slope = s.limit_slope;
    *infinite = s.is_infinite_slope ? 1 : 0;
  });
}

const char* orlicz_function_spec(const orlicz_function* phi) { return phi ? phi->spec.c_str() : ""; }

orlicz_status orlicz_space_load_csv(const char* path, orlicz_space** out) {
  ORLICZ_REQUIRE(path && out, "null argument");
  return guarded([&] { *out = new orlicz_space{orlicz::share(orlicz::load_space_csv(path))}; });
}

orlicz_status orlicz_space_save_csv(const orlicz_space* space, const char* path) {
  ORLICZ_REQUIRE(space && path, "null argument");
  return guarded([&] { orlicz::save_space_csv(*space->value, path); });
}

orlicz_status orlicz_space_from_weights(const double* weights, size_t n, orlicz_space** out) {
  ORLICZ_REQUIRE(weights && out && n > 0, "need a nonempty weight array");
  return guarded([&] {
    *out = new orlicz_space{orlicz::share(orlicz::MeasureSpace::finite(std::vector<double>(weights, weights + n)))};
  });
}

orlicz_status orlicz_space_uniform(size_t n, orlicz_space** out) {
  ORLICZ_REQUIRE(out && n > 0, "need at least one atom");
  return guarded([&] { *out = new orlicz_space{orlicz::share(orlicz::MeasureSpace::uniform_probability(n))}; });
}

orlicz_status orlicz_space_truncated(size_t n, orlicz_space** out) {
  ORLICZ_REQUIRE(out && n > 0, "need at least one atom");
  return guarded([&] { *out = new orlicz_space{orlicz::harmonic_truncation(n)}; });
}

size_t orlicz_space_size(const orlicz_space* space) { return space ? space->value->size() : 0; }

void orlicz_space_free(orlicz_space* space) { delete space; }

orlicz_status orlicz_rv_load_csv(const orlicz_space* space, const char* path, orlicz_rv** out) {
  ORLICZ_REQUIRE(space && path && out, "null argument");
  return guarded([&] { *out = new orlicz_rv{orlicz::load_rv_csv(space->value, path)}; });
}

orlicz_status orlicz_rv_save_csv(const orlicz_rv* rv, const char* path) {
  ORLICZ_REQUIRE(rv && path, "null argument");
  return guarded([&] { orlicz::save_rv_csv(rv->value, path); });
}

orlicz_status orlicz_rv_from_values(const orlicz_space* space, const double* values, size_t n, orlicz_rv** out) {
  ORLICZ_REQUIRE(space && values && out, "null argument");
  return guarded([&] { *out = new orlicz_rv{orlicz::Rv(space->value, std::vector<double>(values, values + n))}; });
}

size_t orlicz_rv_size(const orlicz_rv* rv) { return rv ? rv->value.size() : 0; }

orlicz_status orlicz_rv_values(const orlicz_rv* rv, double* out, size_t cap) {
  ORLICZ_REQUIRE(rv && (out || cap == 0), "null argument");
  const auto v = rv->value.values();
  for (size_t i = 0; i < v.size() && i < cap; ++i) out[i] = v[i];
  return ORLICZ_OK;
}

void orlicz_rv_free(orlicz_rv* rv) { delete rv; }

orlicz_status orlicz_risk_parse(const char* spec, const orlicz_space* space, orlicz_risk** out) {
  ORLICZ_REQUIRE(spec && space && out, "null argument");
  return guarded([&] { *out = new orlicz_risk{orlicz::parse_risk_spec(spec, space->value)}; });
}

orlicz_status orlicz_risk_eval(const orlicz_risk* risk, const orlicz_rv* f, double* out) {
  ORLICZ_REQUIRE(risk && f && out, "null argument");
  return guarded([&] { *out = (*risk->value)(f->value); });
}

orlicz_status orlicz_risk_conjugate(const orlicz_risk* risk, const orlicz_rv* g, int numeric, double* out) {
  ORLICZ_REQUIRE(risk && g && out, "null argument");
  return guarded([&] {
    orlicz::ConjugateOptions opts;
    opts.method = numeric ? orlicz::ConjugateMethod::Numeric : orlicz::ConjugateMethod::Auto;
    *out = orlicz::fenchel_conjugate_value(*risk->value, g->value, opts);
  });
}

void orlicz_risk_free(orlicz_risk* risk) { delete risk; }

orlicz_status orlicz_family_load_csv(const orlicz_space* space, const char* path, const orlicz_function* phi,
                                     orlicz_family** out) {
  ORLICZ_REQUIRE(space && path && phi && out, "null argument");
  return guarded([&] {
    *out = new orlicz_family{orlicz::make_family(orlicz::load_family_csv(space->value, path), phi->value)};
  });
}

orlicz_status orlicz_family_generate(const orlicz_space* space, const orlicz_function* phi, const orlicz_rv* f,
                                     const char* mode, size_t length, uint64_t seed, double spike_height,
                                     orlicz_family** out) {
  ORLICZ_REQUIRE(space && phi && f && mode && out, "null argument");
  return guarded([&] {
    *out = new orlicz_family{orlicz::generate_sequence(space->value, phi->value, f->value,
                                                       orlicz::parse_sequence_mode(mode), length, seed, spike_height)};
  });
}

orlicz_status orlicz_family_save_csv(const orlicz_family* family, const char* path) {
  ORLICZ_REQUIRE(family && path, "null argument");
  return guarded([&] { orlicz::save_family_csv(family->value.terms, path); });
}

size_t orlicz_family_length(const orlicz_family* family) { return family ? family->value.terms.size() : 0; }

void orlicz_family_free(orlicz_family* family) { delete family; }

orlicz_status orlicz_config_create(orlicz_config** out) {
  ORLICZ_REQUIRE(out, "null argument");
  return guarded([&] { *out = new orlicz_config{}; });
}

void orlicz_config_free(orlicz_config* cfg) { delete cfg; }

orlicz_status orlicz_config_set_seed(orlicz_config* cfg, uint64_t seed) {
  ORLICZ_REQUIRE(cfg, "null argument");
  cfg->value.seed = seed;
  return ORLICZ_OK;
}

orlicz_status orlicz_config_set_tolerance(orlicz_config* cfg, orlicz_tolerance kind, double value) {
  ORLICZ_REQUIRE(cfg, "null argument");
  if (!(value >= 0.0) || value == orlicz::kInfinity)
    return fail(ORLICZ_DOMAIN_ERROR, "tolerances must be finite and nonnegative");
  switch (kind) {
    case ORLICZ_TOL_ALL: cfg->value.tol = value; break;
    case ORLICZ_TOL_BISECTION: cfg->value.bisection_tol = value; break;
    case ORLICZ_TOL_GAP: cfg->value.gap_tol = value; break;
    case ORLICZ_TOL_FATOU: cfg->value.fatou_tol = value; break;
    default: return fail(ORLICZ_INVALID_ARGUMENT, "unknown tolerance kind");
  }
  return ORLICZ_OK;
}

orlicz_status orlicz_config_set_max_iterations(orlicz_config* cfg, int value) {
  ORLICZ_REQUIRE(cfg, "null argument");
  if (value < 1) return fail(ORLICZ_DOMAIN_ERROR, "max_iterations must be positive");
  cfg->value.max_iterations = value;
  return ORLICZ_OK;
}

orlicz_status orlicz_config_set_truncation(orlicz_config* cfg, size_t n) {
  ORLICZ_REQUIRE(cfg, "null argument");
  if (n < 2) return fail(ORLICZ_DOMAIN_ERROR, "truncation must be at least 2");
  cfg->value.truncation = n;
  return ORLICZ_OK;
}

orlicz_status orlicz_config_set_format(orlicz_config* cfg, orlicz_format format) {
  ORLICZ_REQUIRE(cfg, "null argument");
  if (format != ORLICZ_FORMAT_JSON && format != ORLICZ_FORMAT_CSV) return fail(ORLICZ_INVALID_ARGUMENT, "unknown format");
  cfg->value.format = format == ORLICZ_FORMAT_JSON ? orlicz::Format::Json : orlicz::Format::Csv;
  return ORLICZ_OK;
}

size_t orlicz_config_truncation(const orlicz_config* cfg) { return config_of(cfg).truncation; }

uint64_t orlicz_config_seed(const orlicz_config* cfg) { return config_of(cfg).seed; }

const char* orlicz_report_text(const orlicz_report* report) { return report ? report->text.c_str() : ""; }

int orlicz_report_exit_code(const orlicz_report* report) { return report ? report->exit_code : 0; }

orlicz_status orlicz_report_number(const orlicz_report* report, const char* key, double* out) {
  ORLICZ_REQUIRE(report && key && out, "null argument");
  if (!report->record.contains(key)) return fail(ORLICZ_INVALID_ARGUMENT, std::string("no field '") + key + "'");
  const auto& v = report->record.at(key);
  if (const auto* d = std::get_if<double>(&v))
    *out = *d;
  else if (const auto* i = std::get_if<long long>(&v))
    *out = static_cast<double>(*i);
  else
    return fail(ORLICZ_INVALID_ARGUMENT, std::string("field '") + key + "' is not a number");
  return ORLICZ_OK;
}

orlicz_status orlicz_report_flag(const orlicz_report* report, const char* key, int* out) {
  ORLICZ_REQUIRE(report && key && out, "null argument");
  if (!report->record.contains(key)) return fail(ORLICZ_INVALID_ARGUMENT, std::string("no field '") + key + "'");
  const auto* b = std::get_if<bool>(&report->record.at(key));
  if (!b) return fail(ORLICZ_INVALID_ARGUMENT, std::string("field '") + key + "' is not a flag");
  *out = *b ? 1 : 0;
  return ORLICZ_OK;
}

void orlicz_report_free(orlicz_report* report) { delete report; }

orlicz_status orlicz_cmd_norm(const orlicz_rv* f, const orlicz_function* phi, const orlicz_config* cfg,
                              orlicz_report** out) {
  ORLICZ_REQUIRE(f && phi && out, "null argument");
  return guarded([&] { *out = make_report(orlicz::cmd_norm(f->value, phi->value, config_of(cfg)), cfg); });
}

orlicz_status orlicz_cmd_represent(const orlicz_rv* f, const orlicz_risk* risk, const orlicz_function* phi,
                                   int force_numeric, const orlicz_config* cfg, orlicz_report** out) {
  ORLICZ_REQUIRE(f && risk && phi && out, "null argument");
  return guarded([&] {
    *out = make_report(orlicz::cmd_represent(f->value, *risk->value, phi->value, force_numeric != 0, config_of(cfg)), cfg);
  });
}

orlicz_status orlicz_cmd_conjugate(const orlicz_function* phi, double s_max, size_t points, const orlicz_config* cfg,
                                   orlicz_report** out) {
  ORLICZ_REQUIRE(phi && out, "null argument");
  return guarded([&] { *out = make_report(orlicz::cmd_conjugate(phi->value, s_max, points, config_of(cfg)), cfg); });
}

orlicz_status orlicz_cmd_classify(const orlicz_function* phi, int finite_measure, const orlicz_config* cfg,
                                  orlicz_report** out) {
  ORLICZ_REQUIRE(phi && out, "null argument");
  return guarded([&] { *out = make_report(orlicz::cmd_classify(phi->value, finite_measure != 0, config_of(cfg)), cfg); });
}

orlicz_status orlicz_cmd_fatou(const orlicz_risk* risk, const orlicz_family* const* families, size_t count,
                               const orlicz_rv* limit, const orlicz_config* cfg, orlicz_report** out) {
  ORLICZ_REQUIRE(risk && families && limit && out && count > 0, "null argument");
  return guarded([&] {
    std::vector<orlicz::SequenceFamily> fams;
    for (size_t k = 0; k < count; ++k) {
      if (!families[k]) throw orlicz::Error(orlicz::ErrorCode::InvalidArgument, "null family");
      fams.push_back(families[k]->value);
    }
    *out = make_report(orlicz::cmd_fatou(*risk->value, std::move(fams), limit->value, config_of(cfg)), cfg);
  });
}

orlicz_status orlicz_cmd_extract(const orlicz_family* family, const orlicz_rv* f, const orlicz_function* phi,
                                 const orlicz_config* cfg, orlicz_report** out) {
  ORLICZ_REQUIRE(family && f && phi && out, "null argument");
  return guarded([&] { *out = make_report(orlicz::cmd_extract(family->value, f->value, phi->value, config_of(cfg)), cfg); });
}

orlicz_status orlicz_cmd_closure(const orlicz_family* vertices, const orlicz_rv* f, const orlicz_function* phi,
                                 size_t length, const orlicz_config* cfg, orlicz_report** out,
                                 orlicz_family** sequence_out) {
  ORLICZ_REQUIRE(vertices && f && phi && out, "null argument");
  return guarded([&] {
    std::vector<orlicz::Rv> seq;
    auto result = orlicz::cmd_closure(vertices->value.terms, f->value, phi->value, length, config_of(cfg), &seq);
    auto* report = make_report(std::move(result), cfg);
    if (sequence_out) {
      try {
        *sequence_out = new orlicz_family{orlicz::make_family(std::move(seq), phi->value, f->value)};
      } catch (...) {
        delete report;
        throw;
      }
    }
    *out = report;
  });
}

orlicz_status orlicz_cmd_verify_all(const orlicz_config* cfg, orlicz_report** out) {
  ORLICZ_REQUIRE(out, "null argument");
  return guarded([&] { *out = make_report(orlicz::cmd_verify_all(config_of(cfg)), cfg); });
}

}  // extern "C"
