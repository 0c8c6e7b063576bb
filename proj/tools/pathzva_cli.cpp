// Command-line harness: preprocess | estimate | compare | exact.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pathzva/pathzva.hpp"

namespace {

using namespace pathzva;

constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;
constexpr int kExitNumeric = 4;

struct Config {
  std::string command;
  std::string model;
  std::vector<std::string> params;
  std::vector<double> epsilons;
  std::vector<std::string> methods;
  std::string variant = "plain";
  std::size_t runs = 10'000;
  double time_budget_ms = 0.0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::string format;
  std::string out;
  std::size_t max_states = 5'000'000;
  double bfb_p = 0.5;
  double igbs_delta = 0.01;
  bool omit_timing = false;
  bool show_sets = false;
  bool full = false;
  bool log_likelihood = false;
};

std::string sci(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", digits, x);
  return buf;
}

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

zoo::Params parse_params(const std::vector<std::string>& raw) {
  zoo::Params out;
  for (const auto& kv : raw) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--param expects key=value, got '" + kv + "'");
    out[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return out;
}

struct Row {
  Estimate e;
  std::optional<double> wnvr;
  bool has_wnvr_column = false;
};

std::vector<std::string> cells(const Row& r, bool omit_timing) {
  const Estimate& e = r.e;
  std::vector<std::string> c;
  c.push_back(e.model);
  c.push_back(e.method);
  c.push_back(e.variant);
  c.push_back(sci(e.epsilon, 3));
  c.push_back(std::to_string(e.n_runs));
  c.push_back(e.p_delta ? std::to_string(e.n_nondominant) : "");
  c.push_back(sci(e.mean));
  c.push_back(e.ci_available ? fixed(100.0 * e.relative_half_width(), 4) : "---");
  c.push_back(e.p_delta ? sci(*e.p_delta) : "");
  c.push_back(e.q_delta ? sci(*e.q_delta) : "");
  c.push_back(omit_timing ? "" : fixed(e.wall_time_ms, 1));
  if (!r.has_wnvr_column || omit_timing)
    c.push_back("");
  else
    c.push_back(r.wnvr ? fixed(*r.wnvr, 2) : "---");
  return c;
}

const std::vector<std::string> kColumns{"model",   "method",  "variant",    "epsilon", "N",      "M",
                                        "estimate", "ci_half_width_pct", "p_delta", "q_delta", "runtime_ms", "wnvr"};

void write_table(std::ostream& os, const std::vector<Row>& rows, const std::string& format, bool omit_timing) {
  if (format == "md") {
    os << "|";
    for (const auto& h : kColumns) os << ' ' << h << " |";
    os << "\n|";
    for (std::size_t i = 0; i < kColumns.size(); ++i) os << "---|";
    os << "\n";
    for (const auto& r : rows) {
      os << "|";
      for (const auto& c : cells(r, omit_timing)) os << ' ' << c << " |";
      os << "\n";
    }
    return;
  }
  for (std::size_t i = 0; i < kColumns.size(); ++i) os << (i ? "," : "") << kColumns[i];
  os << "\n";
  for (const auto& r : rows) {
    auto c = cells(r, omit_timing);
    for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
    os << "\n";
  }
}

std::string list_states(const PreprocessResult& pre, const std::vector<std::int32_t>& idx) {
  std::string out;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out += ' ';
    out += pre.model().describe(pre.space().descriptor(idx[i]));
  }
  return out;
}

void cmd_preprocess(const Config& cfg, std::ostream& os) {
  const auto params = parse_params(cfg.params);
  nlohmann::json all = nlohmann::json::array();
  for (double eps : cfg.epsilons) {
    auto model = zoo::make_model(cfg.model, params, eps);
    PreprocessOptions po;
    po.max_states = cfg.max_states;
    auto pre = preprocess(*model, po);
    const auto& r = pre.report();
    if (cfg.format == "json") {
      nlohmann::json j;
      j["model"] = r.model;
      j["epsilon"] = r.epsilon;
      j["lambda"] = r.lambda_size;
      j["gamma"] = r.gamma_size;
      j["distance"] = r.distance.to_string();
      j["v_delta_s"] = r.v_delta_initial;
      j["hpcs"] = r.hpc_count;
      j["explored_states"] = r.explored_states;
      if (!cfg.omit_timing) {
        j["forward_ms"] = r.forward_ms;
        j["backward_ms"] = r.backward_ms;
      }
      if (cfg.show_sets) {
        j["lambda_states"] = list_states(pre, pre.lambda());
        j["gamma_states"] = list_states(pre, pre.gamma());
      }
      all.push_back(j);
      continue;
    }
    os << "model: " << r.model << "\n"
       << "epsilon: " << sci(r.epsilon, 3) << "\n"
       << "lambda: " << r.lambda_size << "\n"
       << "gamma: " << r.gamma_size << "\n"
       << "distance: " << r.distance << "\n"
       << "v_delta_s: " << sci(r.v_delta_initial) << "\n"
       << "hpcs: " << r.hpc_count << "\n"
       << "explored_states: " << r.explored_states << "\n";
    if (!cfg.omit_timing)
      os << "forward_ms: " << fixed(r.forward_ms, 2) << "\n"
         << "backward_ms: " << fixed(r.backward_ms, 2) << "\n";
    if (cfg.show_sets) {
      os << "lambda_states: " << list_states(pre, pre.lambda()) << "\n";
      os << "gamma_states: " << list_states(pre, pre.gamma()) << "\n";
    }
    for (const auto& h : pre.hpcs()) os << "hpc: " << list_states(pre, h.members) << "\n";
    os << "\n";
  }
  if (cfg.format == "json") os << all.dump(2) << "\n";
}

std::vector<Row> run_methods(const Config& cfg, const std::vector<std::string>& methods) {
  const auto params = parse_params(cfg.params);
  const Variant variant = parse_variant(cfg.variant);
  std::vector<Row> rows;
  for (double eps : cfg.epsilons) {
    auto model = zoo::make_model(cfg.model, params, eps);
    std::unique_ptr<PreprocessResult> pre;
    for (const auto& m : methods) {
      ChangeOfMeasure com{parse_measure(m), cfg.bfb_p, cfg.igbs_delta};
      if (is_zva(com.kind) && !pre) {
        PreprocessOptions po;
        po.max_states = cfg.max_states;
        pre = std::make_unique<PreprocessResult>(preprocess(*model, po));
      }
      RunOptions ro;
      ro.variant = is_zva(com.kind) ? variant : Variant::Plain;
      ro.runs = cfg.runs;
      if (cfg.time_budget_ms > 0.0) ro.time_budget_ms = cfg.time_budget_ms;
      ro.seed = cfg.seed;
      ro.workers = cfg.workers;
      ro.sampler.log_likelihood = cfg.log_likelihood;
      rows.push_back({run_estimator(*model, com, pre.get(), ro), std::nullopt, false});
    }
  }
  return rows;
}

void cmd_estimate(const Config& cfg, std::ostream& os) {
  auto methods = cfg.methods.empty() ? std::vector<std::string>{"zva-delta"} : cfg.methods;
  write_table(os, run_methods(cfg, methods), cfg.format, cfg.omit_timing);
}

void cmd_compare(const Config& cfg, std::ostream& os) {
  auto methods = cfg.methods.empty() ? std::vector<std::string>{"mc", "bfb", "igbs", "zva-dbar", "zva-delta"}
                                     : cfg.methods;
  auto rows = run_methods(cfg, methods);
  for (auto& r : rows) {
    r.has_wnvr_column = true;
    const Row* mc = nullptr;
    for (const auto& c : rows)
      if (c.e.method == "mc" && c.e.epsilon == r.e.epsilon) mc = &c;
    if (mc && mc->e.ci_available && r.e.ci_available)
      r.wnvr = wnvr(mc->e.ci_half_width, mc->e.wall_time_ms, r.e.ci_half_width, r.e.wall_time_ms);
  }
  write_table(os, rows, cfg.format, cfg.omit_timing);
}

void cmd_exact(const Config& cfg, std::ostream& os) {
  const auto params = parse_params(cfg.params);
  for (double eps : cfg.epsilons) {
    auto model = zoo::make_model(cfg.model, params, eps);
    ExactOptions eo;
    eo.max_states = cfg.max_states;
    auto r = exact_hitting_probability(*model, eo);
    if (cfg.format == "json") {
      nlohmann::json j{{"model", model->name()}, {"epsilon", eps}, {"pi", r.pi}, {"states", r.states.size()},
                       {"solver", r.direct ? "sparse-lu" : "gauss-seidel"}};
      os << j.dump() << "\n";
    } else {
      os << model->name() << " epsilon=" << sci(eps, 3) << " pi=" << sci(r.pi, 6) << " states=" << r.states.size()
         << " solver=" << (r.direct ? "sparse-lu" : "gauss-seidel") << "\n";
    }
    if (cfg.full)
      for (std::size_t i = 0; i < r.states.size(); ++i) os << model->describe(r.states[i]) << "," << sci(r.values[i]) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Path-ZVA rare-event estimation for Markov chains"};
  Config cfg;
  bool list_models = false;
  app.set_config("--config", "", "Flat key=value file; command-line flags win");
  app.add_option("command", cfg.command, "preprocess | estimate | compare | exact")
      ->check(CLI::IsMember({"preprocess", "estimate", "compare", "exact"}));
  app.add_flag("--list-models", list_models, "List zoo models and their parameters");
  app.add_option("--model", cfg.model, "Zoo model: fig1 | two-type | dds");
  app.add_option("--param", cfg.params, "Model parameter key=value (repeatable)");
  app.add_option("--epsilon", cfg.epsilons, "Rarity parameter (repeatable)")->check(CLI::Range(1e-300, 1.0));
  app.add_option("--method", cfg.methods, "mc | bfb | igbs | zva-dbar | zva-delta (repeatable)")
      ->check(CLI::IsMember({"mc", "bfb", "igbs", "zva-dbar", "zva-delta"}));
  app.add_option("--variant", cfg.variant, "plain | plus | plusplus")
      ->check(CLI::IsMember({"plain", "plus", "plusplus"}));
  auto* runs = app.add_option("--runs", cfg.runs, "Number of replications")->check(CLI::PositiveNumber);
  auto* budget = app.add_option("--time-budget", cfg.time_budget_ms, "Wall-time budget in ms")
                     ->check(CLI::PositiveNumber);
  runs->excludes(budget);
  app.add_option("--seed", cfg.seed, "Master seed");
  app.add_option("--workers", cfg.workers, "Worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--format", cfg.format, "csv | md (tables), text | json (reports)")
      ->check(CLI::IsMember({"csv", "md", "text", "json"}));
  app.add_option("--out", cfg.out, "Output file (default stdout)");
  app.add_option("--max-states", cfg.max_states, "State budget for pre-processing and the exact solver");
  app.add_option("--bfb-p", cfg.bfb_p, "Failure-biasing probability of BFB and IGBS");
  app.add_option("--igbs-delta", cfg.igbs_delta, "Low-intensity biasing probability of IGBS");
  app.add_flag("--omit-timing", cfg.omit_timing, "Leave runtime and WNVR cells empty for byte-stable output");
  app.add_flag("--show-sets", cfg.show_sets, "List the states of Lambda and Gamma");
  app.add_flag("--full", cfg.full, "Print the exact hitting probability of every state");
  app.add_flag("--log-likelihood", cfg.log_likelihood, "Accumulate likelihood ratios in log space");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  if (list_models) {
    for (const auto& m : zoo::model_names()) std::cout << m << ": " << zoo::model_help(m) << "\n";
    return 0;
  }

  try {
    if (cfg.command.empty()) throw ConfigError("missing command (preprocess | estimate | compare | exact)");
    if (cfg.model.empty()) throw ConfigError("--model is required");
    if (cfg.epsilons.empty()) cfg.epsilons.push_back(0.01);
    const bool table = cfg.command == "estimate" || cfg.command == "compare";
    if (cfg.format.empty()) cfg.format = table ? "csv" : "text";
    if (table && (cfg.format == "text" || cfg.format == "json"))
      throw ConfigError("tables support --format csv or md");
    if (!table && (cfg.format == "csv" || cfg.format == "md"))
      throw ConfigError(cfg.command + " supports --format text or json");

    std::ofstream file;
    if (!cfg.out.empty()) {
      file.open(cfg.out);
      if (!file) throw ConfigError("cannot open output file '" + cfg.out + "'");
    }
    std::ostream& os = cfg.out.empty() ? std::cout : file;
    if (cfg.command == "preprocess")
      cmd_preprocess(cfg, os);
    else if (cfg.command == "estimate")
      cmd_estimate(cfg, os);
    else if (cfg.command == "compare")
      cmd_compare(cfg, os);
    else
      cmd_exact(cfg, os);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const ConvergenceError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const GoalUnreachable& e) {
    std::cerr << "goal unreachable (pi = 0): " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
