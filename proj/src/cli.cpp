#include "stokes_lab/cli.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "stokes_lab/catalog.hpp"
#include "stokes_lab/errors.hpp"
#include "stokes_lab/report.hpp"
#include "stokes_lab/scenarios.hpp"

namespace stokes_lab::cli {

namespace {

using scenarios::ScenarioResult;

struct Settings {
  std::optional<int> fock_dim;
  std::string format = "table";
  std::string out_path;
  std::optional<double> tol;
  bool verbose = false;
  std::string scenario;
};

scenarios::RunOptions run_options(const Settings& s) { return {s.fock_dim, s.tol}; }

report::Format format_of(const Settings& s) {
  return s.format == "csv" ? report::Format::csv : report::Format::table;
}

// Runs every bundled scenario; slot i of the result belongs to catalog entry i.
struct CatalogRun {
  std::vector<std::optional<ScenarioResult>> results;
  std::vector<std::string> errors;
  std::vector<double> seconds;
};

CatalogRun run_catalog(const std::vector<scenarios::ScenarioConfig>& configs, const scenarios::RunOptions& options,
                       unsigned workers) {
  CatalogRun run;
  run.results.resize(configs.size());
  run.errors.resize(configs.size());
  run.seconds.resize(configs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      const auto start = std::chrono::steady_clock::now();
      try {
        run.results[i] = scenarios::run_scenario(configs[i], options);
      } catch (const std::exception& e) {
        run.errors[i] = e.what();
      }
      run.seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(configs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return run;
}

int command_list(const Settings& s, std::ostream& out) {
  for (const auto& entry : scenarios::bundled_catalog()) {
    out << entry.name;
    if (s.verbose) {
      const auto cfg = scenarios::parse_scenario(entry.body, entry.name);
      out << "  [" << scenarios::kind_name(cfg.params) << ", " << scenarios::engine_name(cfg.engine) << "]";
      if (!cfg.description.empty()) out << "  " << cfg.description;
    }
    out << '\n';
  }
  return kExitOk;
}

int command_run(const Settings& s, std::ostream& out, std::ostream& err) {
  const auto config = scenarios::resolve_scenario(s.scenario);
  if (s.verbose) err << "running " << config.name << " (" << scenarios::kind_name(config.params) << ")\n";
  const auto result = scenarios::run_scenario(config, run_options(s));
  report::write_result(out, result, format_of(s));
  if (result.passed()) return kExitOk;
  for (const auto& c : result.checks) {
    if (!c.passed) err << result.name << ": " << report::describe_check(c) << '\n';
  }
  return kExitCheckFailed;
}

int command_check(const Settings& s, std::ostream& out, std::ostream& err) {
  std::vector<scenarios::ScenarioConfig> configs;
  for (const auto& entry : scenarios::bundled_catalog()) configs.push_back(scenarios::parse_scenario(entry.body, entry.name));
  const unsigned workers = worker_count();
  if (s.verbose) err << "checking " << configs.size() << " scenarios on " << workers << " threads\n";

  const CatalogRun run = run_catalog(configs, run_options(s), workers);

  bool errored = false, failed = false;
  std::vector<ScenarioResult> done;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    if (s.verbose) err << configs[i].name << ": " << report::format_number(run.seconds[i]) << " s\n";
    if (!run.results[i]) {
      errored = true;
      err << "ERROR " << configs[i].name << ": " << run.errors[i] << '\n';
      continue;
    }
    const auto& r = *run.results[i];
    failed = failed || !r.passed();
    done.push_back(r);
  }

  if (format_of(s) == report::Format::csv) {
    report::write_csv(out, report::check_table(done));
  } else {
    for (const auto& r : done) {
      std::size_t passed = 0;
      for (const auto& c : r.checks) passed += c.passed ? 1 : 0;
      out << (r.passed() ? "PASS " : "FAIL ") << r.name << " (" << passed << "/" << r.checks.size() << " checks)\n";
      for (const auto& c : r.checks) {
        if (!c.passed) out << "  " << report::describe_check(c) << '\n';
      }
    }
  }
  for (const auto& r : done) {
    for (const auto& c : r.checks) {
      if (!c.passed) err << r.name << ": " << report::describe_check(c) << '\n';
    }
  }
  if (errored) return kExitUsage;
  return failed ? kExitCheckFailed : kExitOk;
}

}  // namespace

unsigned worker_count() {
  if (const char* env = std::getenv("STOKES_LAB_THREADS"); env && *env) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1 || n > 1024) {
      throw InvalidArgument(std::string("STOKES_LAB_THREADS must be a positive integer, got '") + env + "'");
    }
    return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"Quantum Stokes-operator scenarios on a truncated Fock engine and a linearized Gaussian engine",
               "stokes-lab"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.add_option("--fock-dim", s.fock_dim, "Fock cutoff N for every state (replaces the truncation rule)")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", s.format, "Output format")->check(CLI::IsMember({"table", "csv"}));
  app.add_option("--out", s.out_path, "Write output to PATH instead of stdout");
  app.add_option("--tol", s.tol, "Tolerance for every value check")->check(CLI::NonNegativeNumber);
  app.add_flag("-v,--verbose", s.verbose, "Progress and timing on stderr");

  auto* run = app.add_subcommand("run", "Run one scenario (catalog name or YAML file)")->fallthrough();
  run->add_option("scenario", s.scenario, "Catalog name or path")->required();
  auto* list = app.add_subcommand("list", "List the bundled catalog")->fallthrough();
  auto* check = app.add_subcommand("check", "Run the full bundled catalog")->fallthrough();

  std::vector<const char*> argv{"stokes-lab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  std::ofstream file;
  if (!s.out_path.empty()) {
    file.open(s.out_path);
    if (!file) {
      err << "error: cannot write '" << s.out_path << "'\n";
      return kExitUsage;
    }
  }
  std::ostream& sink = s.out_path.empty() ? out : file;

  try {
    if (*list) return command_list(s, sink);
    if (*run) return command_run(s, sink, err);
    if (*check) return command_check(s, sink, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace stokes_lab::cli
