// recreg: coverage experiments, CLT checks and limit constants.
//
// Exit status: 0 on success, 2 on configuration or assumption failure,
// 1 on any other runtime fault.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "recreg/asymptotics.hpp"
#include "recreg/report.hpp"
#include "recreg/simulation.hpp"

using json = nlohmann::ordered_json;
using namespace recreg;
using namespace recreg::sim;

namespace {

constexpr int kSchemaVersion = 1;

/// Bad input: malformed JSON, schema mismatch or unknown names.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunSpec {
  std::string model = "cos";
  std::string design = "std_normal";
  double d = 1.0;
  std::size_t n = 200;
  std::vector<double> ds{1.0, 2.0};
  std::vector<std::size_t> ns{50, 100, 200};
  std::vector<double> points{-0.5, 0.0, 0.5};
  std::size_t reps = 5000;
  std::uint64_t seed = 42;
  std::string estimator = "both";
  std::string residuals = "leave_one_out";
  std::string kernel = "gaussian";
  SequenceSpec stepsize{1.0, 0.9, 0.0};
  SequenceSpec bandwidth{1.0, 0.2, -1.0};
  SequenceSpec weights{1.0, 0.2, -1.0};
  SequenceSpec density_stepsize{0.8, 1.0, 0.0};
  unsigned threads = 1;
};

json sequence_to_json(const SequenceSpec& s) {
  return {{"scale", s.scale()}, {"power", s.power()}, {"log_power", s.log_power()}};
}

SequenceSpec sequence_from_json(const json& j, const std::string& key) {
  if (!j.is_object()) throw ConfigError(key + " must be an object {scale, power, log_power}");
  for (const auto& [k, v] : j.items()) {
    if (k != "scale" && k != "power" && k != "log_power")
      throw ConfigError("unknown key '" + key + "." + k + "'");
    if (!v.is_number()) throw ConfigError(key + "." + k + " must be a number");
  }
  if (!j.contains("scale") || !j.contains("power"))
    throw ConfigError(key + " needs 'scale' and 'power'");
  return {j.at("scale").get<double>(), j.at("power").get<double>(), j.value("log_power", 0.0)};
}

json to_json(const RunSpec& s) {
  return {
      {"schema_version", kSchemaVersion},
      {"model", s.model},
      {"design", s.design},
      {"d", s.d},
      {"n", s.n},
      {"ds", s.ds},
      {"ns", s.ns},
      {"points", s.points},
      {"reps", s.reps},
      {"seed", s.seed},
      {"estimator", s.estimator},
      {"residuals", s.residuals},
      {"kernel", s.kernel},
      {"threads", s.threads},
      {"estimator_config",
       {{"stepsize", sequence_to_json(s.stepsize)},
        {"bandwidth", sequence_to_json(s.bandwidth)},
        {"weights", sequence_to_json(s.weights)},
        {"density_stepsize", sequence_to_json(s.density_stepsize)}}},
  };
}

template <typename T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("wrong type for '" + key + "'");
  }
}

RunSpec from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (!j.contains("schema_version")) throw ConfigError("missing schema_version");
  if (get_as<int>(j.at("schema_version"), "schema_version") != kSchemaVersion)
    throw ConfigError("unsupported schema_version (expected 1)");
  RunSpec s;
  for (const auto& [k, v] : j.items()) {
    if (k == "schema_version") continue;
    if (k == "model") s.model = get_as<std::string>(v, k);
    else if (k == "design") s.design = get_as<std::string>(v, k);
    else if (k == "d") s.d = get_as<double>(v, k);
    else if (k == "n") s.n = get_as<std::size_t>(v, k);
    else if (k == "ds") s.ds = get_as<std::vector<double>>(v, k);
    else if (k == "ns") s.ns = get_as<std::vector<std::size_t>>(v, k);
    else if (k == "points") s.points = get_as<std::vector<double>>(v, k);
    else if (k == "reps") s.reps = get_as<std::size_t>(v, k);
    else if (k == "seed") s.seed = get_as<std::uint64_t>(v, k);
    else if (k == "estimator") s.estimator = get_as<std::string>(v, k);
    else if (k == "residuals") s.residuals = get_as<std::string>(v, k);
    else if (k == "kernel") s.kernel = get_as<std::string>(v, k);
    else if (k == "threads") s.threads = get_as<unsigned>(v, k);
    else if (k == "estimator_config") {
      if (!v.is_object()) throw ConfigError("estimator_config must be an object");
      for (const auto& [ek, ev] : v.items()) {
        const std::string path = "estimator_config." + ek;
        if (ek == "stepsize") s.stepsize = sequence_from_json(ev, path);
        else if (ek == "bandwidth") s.bandwidth = sequence_from_json(ev, path);
        else if (ek == "weights") s.weights = sequence_from_json(ev, path);
        else if (ek == "density_stepsize") s.density_stepsize = sequence_from_json(ev, path);
        else throw ConfigError("unknown key '" + path + "'");
      }
    } else {
      throw ConfigError("unknown key '" + k + "'");
    }
  }
  return s;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in '" + path + "': " + e.what());
  }
}

// --set a.b=value: value is parsed as JSON when possible, else taken as a string.
void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override must be key=value: " + assignment);
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  json* node = &doc;
  std::stringstream ks(key);
  std::vector<std::string> parts;
  for (std::string p; std::getline(ks, p, '.');) parts.push_back(p);
  try {
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) node = &(*node)[parts[i]];
    (*node)[parts.back()] = value;
  } catch (const json::exception&) {
    throw ConfigError("cannot apply override '" + assignment + "'");
  }
}

SimConfig to_sim_config(const RunSpec& s) {
  SimConfig c;
  try {
    c.model = RegressionModel::from_name(s.model);
    c.design = DesignDensity::from_name(s.design);
    c.kernel = Kernel::from_name(s.kernel);
    c.estimators = estimator_from_name(s.estimator);
    c.residuals = residuals_from_name(s.residuals);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  c.d = s.d;
  c.n = s.n;
  c.points = s.points;
  c.reps = s.reps;
  c.seed = s.seed;
  c.estimator_cfg = EstimatorConfig(s.stepsize, s.bandwidth, s.weights, s.density_stepsize);
  c.validate();
  return c;
}

void print_validation(std::ostream& os, const ValidationReport& rep, std::string_view mode) {
  os << "assumptions (" << mode << "): " << (rep.passed() ? "pass" : "FAIL") << '\n';
  for (const auto& c : rep.checks)
    os << "  " << c.name << ": " << c.message << '\n';
}

// Exit 2 unless the averaged-estimator assumptions and the contraction bound hold.
int require_valid(const SimConfig& c) {
  if (c.estimators == EstimatorChoice::nw) return 0;
  const auto rep = validate_assumptions(c.estimator_cfg, EstimatorMode::averaged);
  const auto contraction = check_contraction(c.estimator_cfg, c.kernel);
  if (rep.passed() && contraction.passed) return 0;
  print_validation(std::cerr, rep, "averaged");
  if (!contraction.passed) std::cerr << "  FAIL contraction: " << contraction.message << '\n';
  return 2;
}

void emit(const CoverageReport& rep, const std::string& out) {
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write '" + out + "'");
    write_csv(f, rep);
    if (!f) throw std::runtime_error("write to '" + out + "' failed");
    write_text_table(std::cout, rep);
  } else {
    write_csv(std::cout, rep);
  }
}

// Limit of ratio = scale n^e (ln n)^b: 0, the constant, or infinity.
double ratio_limit(double scale, double e, double b) {
  if (e > 0.0 || (e == 0.0 && b > 0.0)) return std::numeric_limits<double>::infinity();
  if (e < 0.0 || b < 0.0) return 0.0;
  return scale;
}

template <typename F>
void print_or_reason(std::ostream& os, const std::string& label, F&& fn) {
  try {
    const CltParams p = fn();
    os << label << ": bias " << p.bias + 0.0 << ", variance " << p.variance << ", rate "
       << rate_name(p.rate) << '\n';
  } catch (const Error& e) {
    os << label << ": not available (" << e.what() << ")\n";
  }
}

int constants(const SimConfig& c) {
  const double a = c.estimator_cfg.a();
  const double q = c.estimator_cfg.q();
  auto& os = std::cout;
  os.precision(10);
  os << "a " << a << "\nq " << q << '\n';
  os << "optimal_q " << optimal_q(a) << '\n';
  const double factor = variance_factor(q, a);
  os << "variance_factor " << factor << '\n';
  os << "level_nw " << theoretical_level(1.0, 1.0) << '\n';
  os << "level_averaged " << theoretical_level(1.0, factor) << '\n';

  const auto& ec = c.estimator_cfg;
  try {
    os << "xi " << xi(ec.stepsize()) << '\n';
  } catch (const DivergentXi& e) {
    os << "xi divergent (" << e.what() << ")\n";
  }
  const auto oracle = make_oracle(c.model, c.design, c.d);
  const auto& g = ec.stepsize();
  const auto& h = ec.bandwidth();
  // gamma_n^-1 h_n^5 and n h_n^5
  const double c_gen = ratio_limit(std::pow(h.scale(), 5) / g.scale(), g.power() - 5 * h.power(),
                                   5 * h.log_power() - g.log_power());
  const double c_avg = ratio_limit(std::pow(h.scale(), 5), 1.0 - 5 * h.power(), 5 * h.log_power());
  for (double x : c.points) {
    os << "x " << x << '\n';
    try {
      os << "  m2 " << m2(oracle, x, c.kernel) << '\n';
    } catch (const Error& e) {
      os << "  m2 not available (" << e.what() << ")\n";
    }
    const auto gen_regime = std::isinf(c_gen) ? Regime::bias_dominant() : Regime::balanced(c_gen);
    const auto avg_regime = std::isinf(c_avg) ? Regime::bias_dominant() : Regime::balanced(c_avg);
    print_or_reason(os, "  generalized", [&] {
      return clt_params_generalized(oracle, x, ec, c.kernel, gen_regime);
    });
    print_or_reason(os, "  averaged", [&] {
      return clt_params_averaged(oracle, x, ec, c.kernel, avg_regime);
    });
    print_or_reason(os, "  nadaraya_watson", [&] { return nadaraya_watson_clt_params(oracle, x, c.kernel); });
  }
  return 0;
}

int clt_check(const SimConfig& c, unsigned threads, const std::string& out) {
  if (const int rc = require_valid(c); rc != 0) return rc;
  const auto diag = clt_diagnostic(c, c.points.front(), threads);
  std::ostringstream os;
  os << "estimator,x,n,reps,limit_variance,mean,variance,ks_distance\n";
  for (const auto& s : diag.samples) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%g,%zu,%zu,%.8g,%.6f,%.6f,%.6f\n", s.estimator.c_str(),
                  diag.x, diag.n, diag.reps, s.limit_variance, s.mean, s.variance, s.ks_distance);
    os << buf;
  }
  if (out.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write '" + out + "'");
    f << os.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recursive kernel regression: coverage experiments and limit constants"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  std::vector<std::string> overrides;
  bool dump = false;
  std::optional<std::string> model, design, estimator, residuals, kernel;
  std::optional<double> d;
  std::optional<std::size_t> n, reps;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::vector<double> xs;
  std::optional<double> q_flag, a_flag;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--set", overrides, "override a config key, e.g. --set estimator_config.weights.power=0.3");
    sub->add_option("--model", model, "cos | bimodal_exp | linear | constant");
    sub->add_option("--design", design, "std_normal | normal_mixture | student6");
    sub->add_option("--d", d, "noise scale");
    sub->add_option("--n", n, "sample size");
    sub->add_option("--x", xs, "evaluation point(s)");
    sub->add_option("--reps", reps, "replications");
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--estimator", estimator, "nw | averaged | both");
    sub->add_option("--residuals", residuals, "leave_one_out | in_sample");
    sub->add_option("--kernel", kernel, "gaussian | epanechnikov");
    sub->add_option("--threads", threads, "worker threads");
    sub->add_option("--out", out_path, "CSV output path (text table goes to stdout)");
    sub->add_flag("--dump-config", dump, "print the resolved config as JSON and exit");
  };
  auto* table = app.add_subcommand("coverage-table", "3 x 3 x 2 coverage table for one model and design");
  auto* cell = app.add_subcommand("coverage-cell", "coverage at one (n, d)");
  auto* clt = app.add_subcommand("clt-check", "standardized-error moments at the first --x");
  auto* validate = app.add_subcommand("validate-config", "check estimator assumptions");
  auto* consts = app.add_subcommand("constants", "limit constants and theoretical levels");
  for (auto* s : {table, cell, clt, validate, consts}) common(s);
  consts->add_option("--q", q_flag, "weight exponent");
  consts->add_option("--a", a_flag, "bandwidth exponent");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    json doc = config_path.empty() ? to_json(RunSpec{}) : read_json_file(config_path);
    for (const auto& o : overrides) apply_override(doc, o);
    RunSpec spec = from_json(doc);
    if (model) spec.model = *model;
    if (design) spec.design = *design;
    if (d) spec.d = *d;
    if (n) spec.n = *n;
    if (!xs.empty()) spec.points = xs;
    if (reps) spec.reps = *reps;
    if (seed) spec.seed = *seed;
    if (estimator) spec.estimator = *estimator;
    if (residuals) spec.residuals = *residuals;
    if (kernel) spec.kernel = *kernel;
    if (threads) spec.threads = *threads;
    if (consts->parsed()) {
      if (a_flag) spec.bandwidth = SequenceSpec(spec.bandwidth.scale(), *a_flag, spec.bandwidth.log_power());
      if (q_flag) spec.weights = SequenceSpec(spec.weights.scale(), *q_flag, spec.weights.log_power());
    }

    if (dump) {
      std::cout << to_json(spec).dump(2) << '\n';
      return 0;
    }

    const SimConfig cfg = to_sim_config(spec);
    const unsigned nthreads = std::max(1u, spec.threads);

    if (validate->parsed()) {
      const auto gen = validate_assumptions(cfg.estimator_cfg, EstimatorMode::generalized);
      const auto avg = validate_assumptions(cfg.estimator_cfg, EstimatorMode::averaged);
      const auto contraction = check_contraction(cfg.estimator_cfg, cfg.kernel);
      print_validation(std::cout, gen, "generalized");
      print_validation(std::cout, avg, "averaged");
      std::cout << "contraction: " << (contraction.passed ? "pass" : "FAIL") << " ("
                << contraction.message << ")\n";
      return gen.passed() && avg.passed() && contraction.passed ? 0 : 2;
    }
    if (consts->parsed()) return constants(cfg);
    if (clt->parsed()) return clt_check(cfg, nthreads, out_path);

    if (const int rc = require_valid(cfg); rc != 0) return rc;
    if (cell->parsed()) {
      emit(run_cell(cfg, nthreads), out_path);
    } else {
      TableLayout layout{spec.ds, spec.ns};
      emit(run_table(cfg.model, cfg.design, cfg, nthreads, layout), out_path);
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return 2;
  } catch (const ConditionViolated& e) {
    std::cerr << "assumption violated: " << e.what() << '\n';
    return 2;
  } catch (const ContractionViolation& e) {
    std::cerr << "contraction violated: " << e.what() << '\n';
    return 2;
  } catch (const PoleAtDenominator& e) {
    std::cerr << "invalid exponents: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
