#include "suites.hpp"

#include <CLI11.hpp>

#include <deque>
#include <iostream>

namespace {

using dybe::cli::SuiteConfig;

struct Bound {
  std::string key;
  std::string value;
  CLI::Option* opt = nullptr;
};

struct Command {
  CLI::App* app = nullptr;
  std::string check;
  std::deque<Bound> options;
  std::vector<std::string> extra;

  void bind(const std::string& key, const std::string& help) {
    options.push_back({key, "", nullptr});
    options.back().opt = app->add_option("--" + key, options.back().value, help);
  }

  void collect(SuiteConfig& cfg) const {
    for (const auto& b : options)
      if (b.opt->count() > 0) cfg.params.push_back({b.key, b.value});
    for (const auto& kv : extra) {
      auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw dybe::cli::ConfigError("--param expects key=value, got '" + kv + "'");
      cfg.params.push_back({kv.substr(0, eq), kv.substr(eq + 1)});
    }
  }
};

Command& add_command(std::deque<Command>& cmds, CLI::App& app, const std::string& name, const std::string& help) {
  cmds.push_back({});
  auto& c = cmds.back();
  c.app = app.add_subcommand(name, help);
  c.app->add_option("--param", c.extra, "extra suite parameter key=value (repeatable)");
  return c;
}

void add_check(Command& c, const std::vector<std::string>& allowed, const std::string& fallback) {
  c.check = fallback;
  c.app->add_option("--check", c.check, "identity to check")->check(CLI::IsMember(allowed));
}

void print_suites() {
  for (const auto& s : dybe::cli::catalogue())
    std::cout << std::left << std::setw(16) << s.name << std::setw(11) << s.command << s.description << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamical R-matrix identity checker"};
  app.fallthrough();
  SuiteConfig cfg;
  std::string backend;
  double tol = 0;
  bool list_flag = false;
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  auto* tol_opt = app.add_option("--tol", tol, "residual tolerance (suite default if absent)");
  app.add_option("--samples", cfg.samples, "number of samples")->capture_default_str();
  app.add_option("--json", cfg.json_path, "write the report as JSON ('-' for stdout)");
  app.add_option("--backend", backend, "float or exact (suite default if absent)")
      ->check(CLI::IsMember({"float", "exact"}));
  app.add_flag("--timestamp", cfg.timestamp, "add a meta.timestamp field to the JSON report");
  app.add_flag("--list-suites", list_flag, "list the available suites");

  std::deque<Command> cmds;
  auto& list = add_command(cmds, app, "list", "list the available suites");

  auto& run = add_command(cmds, app, "run", "run any suite by name with --param key=value");
  std::string run_suite_name;
  run.app->add_option("suite", run_suite_name, "suite name")->required();

  auto& verify = add_command(cmds, app, "verify", "quantum R-matrix identities");
  add_check(verify, {"qdybe", "qdybe-spectral", "hecke", "unitarity", "rll"}, "qdybe");
  verify.bind("family", "rational|trig|elliptic|spectral-trig|spectral-rational|exchange");
  verify.bind("n", "rank n of gl_n");
  verify.bind("q", "deformation parameter (trig, exchange)");
  verify.bind("gamma", "step gamma (spectral families)");
  verify.bind("tau", "imaginary part of the modular parameter (elliptic)");
  verify.bind("hecke", "override the Hecke parameter");

  auto& classical = add_command(cmds, app, "classical", "classical r-matrix identities");
  add_check(classical, {"cdybe", "coupling", "residue"}, "cdybe");
  classical.bind("family", "c-rational|c-trig|c-elliptic");
  classical.bind("n", "rank n of gl_n");
  classical.bind("tau", "imaginary part of the modular parameter (c-elliptic)");
  classical.bind("u", "spectral parameter for the elliptic coupling check");
  classical.bind("epsilon", "expected coupling constant");

  auto& gauge = add_command(cmds, app, "gauge", "gauge transformations and closed 2-forms");
  add_check(gauge, {"gauge", "closed-form"}, "gauge");
  gauge.bind("plan", "gauge plan: JSON file or inline JSON object");
  gauge.bind("form", "potential|product|cyclic (closed-form check)");
  gauge.bind("n", "rank n (closed-form check)");

  auto& limits = add_command(cmds, app, "limits", "classical limits of quantum families");
  limits.bind("family", "rational|trig|trig-printed|elliptic");
  limits.bind("n", "rank n of gl_n");
  limits.bind("lambda", "dynamical point, comma separated");
  limits.bind("hbar", "decreasing step list, comma separated");
  limits.bind("tau", "imaginary part of the modular parameter (elliptic)");
  limits.bind("u", "real part of the spectral parameter (elliptic)");

  auto& fusion = add_command(cmds, app, "fusion", "rank-1 fusion and exchange operators");
  add_check(fusion, {"abrr", "twist", "exchange", "cross-oracle"}, "abrr");
  fusion.bind("modules", "highest weights m1,m2[,m3]");
  fusion.bind("q", "rational q or 'classical'");
  fusion.bind("lambda", "dynamical points (classical: l, quantum: X = q^{2l}), comma separated");

  auto& trace = add_command(cmds, app, "trace", "trace functions and difference operators");
  add_check(trace, {"eigen", "commute", "symmetry"}, "eigen");
  trace.bind("V", "even highest weight 2k of V");
  trace.bind("W", "highest weight m of W");
  trace.bind("W2", "second operator for the commute check");
  trace.bind("q", "rational q");
  trace.bind("order", "truncation order N");
  trace.bind("mu", "values of q^{l_mu}, comma separated (eigen)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (list_flag || list.app->parsed()) {
    print_suites();
    return 0;
  }

  try {
    if (tol_opt->count() > 0) cfg.tol = tol;
    cfg.backend = backend;
    const Command* chosen = nullptr;
    for (const auto& c : cmds)
      if (c.app->parsed()) chosen = &c;
    if (!chosen) {
      std::cerr << "error: a subcommand is required\n" << app.help();
      return 2;
    }
    std::string name = chosen->app->get_name();
    if (name == "run") cfg.suite = run_suite_name;
    else if (name == "limits") cfg.suite = "limit";
    else cfg.suite = chosen->check;
    if (name != "run") {
      auto* info = dybe::cli::find_suite(cfg.suite);
      if (!info || info->command != name) throw dybe::cli::ConfigError("suite '" + cfg.suite + "' is not under '" + name + "'");
    }
    chosen->collect(cfg);
    auto res = dybe::cli::run_suite(cfg);
    std::cout << dybe::cli::summary_line(res) << "\n";
    if (cfg.json_path == "-") std::cout << dybe::cli::to_json(res).dump(2) << "\n";
    else if (!cfg.json_path.empty()) dybe::cli::write_json(res, cfg.json_path);
    return res.exit_code;
  } catch (const dybe::ResonanceError& e) {
    std::cerr << "resonance: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
  } catch (const std::domain_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
  }
  return 2;
}
