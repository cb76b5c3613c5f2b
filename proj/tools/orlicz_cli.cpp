// Command-line front end. Talks to the library only through orlicz.h.

#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "orlicz/orlicz.h"

namespace {

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};

using Function = std::unique_ptr<orlicz_function, Deleter<orlicz_function, orlicz_function_free>>;
using Space = std::unique_ptr<orlicz_space, Deleter<orlicz_space, orlicz_space_free>>;
using RandomVar = std::unique_ptr<orlicz_rv, Deleter<orlicz_rv, orlicz_rv_free>>;
using Risk = std::unique_ptr<orlicz_risk, Deleter<orlicz_risk, orlicz_risk_free>>;
using Family = std::unique_ptr<orlicz_family, Deleter<orlicz_family, orlicz_family_free>>;
using Config = std::unique_ptr<orlicz_config, Deleter<orlicz_config, orlicz_config_free>>;
using Report = std::unique_ptr<orlicz_report, Deleter<orlicz_report, orlicz_report_free>>;

// Unwinds to main with the exit code for a failed library call.
struct Failure {
  int exit_code;
};

void check(orlicz_status status, const std::string& context) {
  if (status == ORLICZ_OK) return;
  std::fprintf(stderr, "error: %s: %s (%s)\n", context.c_str(), orlicz_last_error(), orlicz_status_name(status));
  throw Failure{orlicz_exit_code(status)};
}

[[noreturn]] void usage_error(const std::string& message) {
  std::fprintf(stderr, "error: %s\n", message.c_str());
  throw Failure{2};
}

struct Options {
  std::string space, rv, orlicz, risk, format = "json";
  std::optional<double> tol, bisection_tol, gap_tol, fatou_tol;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_iterations;
  std::optional<std::size_t> truncation;

  bool numeric = false;
  double s_max = 10.0;
  std::size_t points = 11;
  std::string measure = "finite";
  std::string family, mode, vertices, out;
  std::size_t count = 10;
  std::optional<std::size_t> length;
  double spike = 1.0;
};

Config make_config(const Options& o) {
  orlicz_config* raw = nullptr;
  check(orlicz_config_create(&raw), "config");
  Config cfg(raw);
  if (o.seed) check(orlicz_config_set_seed(raw, *o.seed), "--seed");
  if (o.tol) check(orlicz_config_set_tolerance(raw, ORLICZ_TOL_ALL, *o.tol), "--tol");
  if (o.bisection_tol) check(orlicz_config_set_tolerance(raw, ORLICZ_TOL_BISECTION, *o.bisection_tol), "--bisection-tol");
  if (o.gap_tol) check(orlicz_config_set_tolerance(raw, ORLICZ_TOL_GAP, *o.gap_tol), "--gap-tol");
  if (o.fatou_tol) check(orlicz_config_set_tolerance(raw, ORLICZ_TOL_FATOU, *o.fatou_tol), "--fatou-tol");
  if (o.max_iterations) check(orlicz_config_set_max_iterations(raw, *o.max_iterations), "--max-iterations");
  if (o.truncation) check(orlicz_config_set_truncation(raw, *o.truncation), "--truncation");
  if (o.format == "json")
    check(orlicz_config_set_format(raw, ORLICZ_FORMAT_JSON), "--format");
  else if (o.format == "csv")
    check(orlicz_config_set_format(raw, ORLICZ_FORMAT_CSV), "--format");
  else
    usage_error("--format must be json or csv");
  return cfg;
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) usage_error(std::string("missing required flag ") + flag);
}

Function load_function(const Options& o) {
  require(o.orlicz, "--orlicz");
  orlicz_function* raw = nullptr;
  check(orlicz_function_parse(o.orlicz.c_str(), &raw), "--orlicz");
  return Function(raw);
}

Space load_space(const Options& o) {
  require(o.space, "--space");
  orlicz_space* raw = nullptr;
  check(orlicz_space_load_csv(o.space.c_str(), &raw), "--space");
  return Space(raw);
}

// The given space, or the harmonic truncation with the configured size.
Space space_or_truncation(const Options& o, const orlicz_config* cfg) {
  if (!o.space.empty()) return load_space(o);
  orlicz_space* raw = nullptr;
  check(orlicz_space_truncated(orlicz_config_truncation(cfg), &raw), "truncated space");
  return Space(raw);
}

RandomVar load_rv(const Options& o, const orlicz_space* space) {
  require(o.rv, "--rv");
  orlicz_rv* raw = nullptr;
  check(orlicz_rv_load_csv(space, o.rv.c_str(), &raw), "--rv");
  return RandomVar(raw);
}

RandomVar rv_or_zero(const Options& o, const orlicz_space* space) {
  if (!o.rv.empty()) return load_rv(o, space);
  std::vector<double> zeros(orlicz_space_size(space), 0.0);
  orlicz_rv* raw = nullptr;
  check(orlicz_rv_from_values(space, zeros.data(), zeros.size(), &raw), "zero random variable");
  return RandomVar(raw);
}

Risk load_risk(const Options& o, const orlicz_space* space) {
  require(o.risk, "--risk");
  orlicz_risk* raw = nullptr;
  check(orlicz_risk_parse(o.risk.c_str(), space, &raw), "--risk");
  return Risk(raw);
}

Family load_family(const std::string& path, const char* flag, const orlicz_space* space, const orlicz_function* phi) {
  orlicz_family* raw = nullptr;
  check(orlicz_family_load_csv(space, path.c_str(), phi, &raw), flag);
  return Family(raw);
}

Family generate(const Options& o, const orlicz_space* space, const orlicz_function* phi, const orlicz_rv* f,
                std::size_t length, std::uint64_t seed) {
  orlicz_family* raw = nullptr;
  check(orlicz_family_generate(space, phi, f, o.mode.c_str(), length, seed, o.spike, &raw), "--mode");
  return Family(raw);
}

std::size_t default_length(const Options& o, const orlicz_space* space) {
  if (o.length) return *o.length;
  const bool spike = o.mode == "traveling_spike" || o.mode == "ae_only_traveling_spike";
  return spike ? orlicz_space_size(space) + 64 : 64;
}

int emit(Report report) {
  std::fputs(orlicz_report_text(report.get()), stdout);
  return orlicz_report_exit_code(report.get());
}

int run(const std::string& command, const Options& o) {
  Config cfg = make_config(o);
  orlicz_report* raw = nullptr;

  if (command == "norm") {
    Space space = load_space(o);
    RandomVar f = load_rv(o, space.get());
    Function phi = load_function(o);
    check(orlicz_cmd_norm(f.get(), phi.get(), cfg.get(), &raw), "norm");
  } else if (command == "represent") {
    Space space = load_space(o);
    RandomVar f = load_rv(o, space.get());
    Risk risk = load_risk(o, space.get());
    Function phi = load_function(o);
    check(orlicz_cmd_represent(f.get(), risk.get(), phi.get(), o.numeric ? 1 : 0, cfg.get(), &raw), "represent");
  } else if (command == "conjugate") {
    Function phi = load_function(o);
    check(orlicz_cmd_conjugate(phi.get(), o.s_max, o.points, cfg.get(), &raw), "conjugate");
  } else if (command == "classify") {
    Function phi = load_function(o);
    if (o.measure != "finite" && o.measure != "infinite") usage_error("--measure must be finite or infinite");
    check(orlicz_cmd_classify(phi.get(), o.measure == "finite" ? 1 : 0, cfg.get(), &raw), "classify");
  } else if (command == "fatou-test") {
    Space space = load_space(o);
    Risk risk = load_risk(o, space.get());
    Function phi = load_function(o);
    RandomVar limit = load_rv(o, space.get());
    std::vector<Family> families;
    if (!o.family.empty()) {
      families.push_back(load_family(o.family, "--family", space.get(), phi.get()));
    } else {
      if (o.mode.empty()) usage_error("fatou-test needs --family or --mode");
      const std::uint64_t seed = orlicz_config_seed(cfg.get());
      for (std::size_t k = 0; k < o.count; ++k)
        families.push_back(generate(o, space.get(), phi.get(), limit.get(), default_length(o, space.get()), seed + k));
    }
    std::vector<const orlicz_family*> ptrs;
    for (const auto& fam : families) ptrs.push_back(fam.get());
    check(orlicz_cmd_fatou(risk.get(), ptrs.data(), ptrs.size(), limit.get(), cfg.get(), &raw), "fatou-test");
  } else if (command == "extract-subseq") {
    Space space = space_or_truncation(o, cfg.get());
    Function phi = load_function(o);
    RandomVar f = rv_or_zero(o, space.get());
    Family family;
    if (!o.family.empty()) {
      family = load_family(o.family, "--family", space.get(), phi.get());
    } else {
      if (o.mode.empty()) usage_error("extract-subseq needs --family or --mode");
      family = generate(o, space.get(), phi.get(), f.get(), default_length(o, space.get()), orlicz_config_seed(cfg.get()));
    }
    check(orlicz_cmd_extract(family.get(), f.get(), phi.get(), cfg.get(), &raw), "extract-subseq");
  } else if (command == "closure-demo") {
    Space space = load_space(o);
    RandomVar f = load_rv(o, space.get());
    Function phi = load_function(o);
    require(o.vertices, "--vertices");
    Family vertices = load_family(o.vertices, "--vertices", space.get(), phi.get());
    orlicz_family* seq = nullptr;
    check(orlicz_cmd_closure(vertices.get(), f.get(), phi.get(), o.length.value_or(64), cfg.get(), &raw,
                             o.out.empty() ? nullptr : &seq),
          "closure-demo");
    Family sequence(seq);
    Report report(raw);
    if (sequence) check(orlicz_family_save_csv(sequence.get(), o.out.c_str()), "--out");
    return emit(std::move(report));
  } else if (command == "verify-all") {
    check(orlicz_cmd_verify_all(cfg.get(), &raw), "verify-all");
  } else {
    usage_error("unknown command '" + command + "'");
  }
  return emit(Report(raw));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orlicz-space risk functionals: norms, conjugates, dual representations, convergence checks"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Output format: json or csv");
    sub->add_option("--tol", o.tol, "Tolerance override for every tolerance kind");
    sub->add_option("--bisection-tol", o.bisection_tol, "Relative bisection width for norms");
    sub->add_option("--gap-tol", o.gap_tol, "Accepted duality gap");
    sub->add_option("--fatou-tol", o.fatou_tol, "Slack in the liminf comparison");
    sub->add_option("--seed", o.seed, "Seed for every random choice");
    sub->add_option("--max-iterations", o.max_iterations, "Sweep cap for numeric ascent");
    sub->add_option("--truncation", o.truncation, "Atoms of the truncated countable space");
  };
  auto add_inputs = [&](CLI::App* sub, bool space, bool rv, bool orlicz, bool risk) {
    if (space) sub->add_option("--space", o.space, "Measure space CSV (atom_id,weight,block_id)");
    if (rv) sub->add_option("--rv", o.rv, "Random variable CSV (atom_id,value)");
    if (orlicz) sub->add_option("--orlicz", o.orlicz, "Orlicz function spec, e.g. power:p=2");
    if (risk) sub->add_option("--risk", o.risk, "Risk functional spec, e.g. entropic:beta=1");
  };
  auto add_family = [&](CLI::App* sub) {
    sub->add_option("--family", o.family, "Sequence CSV (term_index,atom_id,value)");
    sub->add_option("--mode", o.mode, "Generated family: norm_convergent, traveling_spike, order_convergent, escaping_spike");
    sub->add_option("--length", o.length, "Terms per generated family");
    sub->add_option("--spike", o.spike, "Spike height for traveling_spike");
  };

  auto* norm = app.add_subcommand("norm", "Luxemburg and Orlicz (Amemiya) norms of a random variable");
  add_inputs(norm, true, true, true, false);
  auto* represent = app.add_subcommand("represent", "Dual representation certificate for a risk functional");
  add_inputs(represent, true, true, true, true);
  represent->add_flag("--numeric", o.numeric, "Use numeric ascent even when a closed form exists");
  auto* conj = app.add_subcommand("conjugate", "Tabulate the Young conjugate on a grid");
  add_inputs(conj, false, false, true, false);
  conj->add_option("--s-max", o.s_max, "Grid end");
  conj->add_option("--points", o.points, "Grid points");
  auto* classify = app.add_subcommand("classify", "Reflexivity, order continuity and C-property verdicts");
  add_inputs(classify, false, false, true, false);
  classify->add_option("--measure", o.measure, "finite or infinite");
  auto* fatou = app.add_subcommand("fatou-test", "Check phi(f) <= liminf phi(f_n) on sequence families");
  add_inputs(fatou, true, true, true, true);
  add_family(fatou);
  fatou->add_option("--count", o.count, "Number of generated families");
  auto* extract = app.add_subcommand("extract-subseq", "Extract an a.e.-convergent subsequence");
  add_inputs(extract, true, true, true, false);
  add_family(extract);
  auto* closure = app.add_subcommand("closure-demo", "Hull sequence converging to a point of the closed hull");
  add_inputs(closure, true, true, true, false);
  closure->add_option("--vertices", o.vertices, "Polytope vertices as a sequence CSV");
  closure->add_option("--length", o.length, "Sequence length");
  closure->add_option("--out", o.out, "Write the sequence to this CSV");
  auto* verify = app.add_subcommand("verify-all", "Run the verification suite");

  for (auto* sub : {norm, represent, conj, classify, fatou, extract, closure, verify}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return run(app.get_subcommands().front()->get_name(), o);
  } catch (const Failure& f) {
    return f.exit_code;
  }
}
