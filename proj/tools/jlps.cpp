// jlps: runs one experiment from a TOML config and writes report.json plus
// side files. Exit status: 0 pass, 1 check failed, 2 config error,
// 3 numerical fault.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "jlps/errors.hpp"
#include "jlps/harness.hpp"

namespace {

namespace h = jlps::harness;

void print_summary(const h::ExperimentReport& rep, std::ostream& os) {
  for (const auto& c : rep.checks) {
    os << (c.passed ? "PASS" : (c.hard ? "FAIL" : "WARN")) << "  ";
    if (!c.criterion.empty()) os << "[" << c.criterion << "] ";
    os << c.name << ": " << c.value << ' ' << c.comparator << ' ' << c.threshold;
    if (c.comparator == "in") os << ".." << c.threshold_hi;
    os << '\n';
  }
}

int run(const std::string& experiment, const std::string& config_path, const std::string& out,
        std::optional<std::uint64_t> seed, std::size_t threads) {
  auto cfg = h::load_config(config_path);
  if (cfg.experiment != experiment)
    throw h::ConfigError("config is for experiment '" + cfg.experiment + "', not '" + experiment + "'");
  h::RunOptions opt;
  opt.threads = std::max<std::size_t>(threads, 1);
  opt.seed = seed;
  const auto rep = h::run_experiment(cfg, opt);
  const std::filesystem::path dir = out.empty() ? cfg.output : std::filesystem::path(out);
  const auto written = h::write_report(rep, dir);
  print_summary(rep, std::cout);
  std::cout << (rep.passed() ? "passed" : "FAILED") << "; report: " << written.front().string() << '\n';
  return rep.passed() ? 0 : 1;
}

int rederive_cmd(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw h::ConfigError("cannot open report '" + path + "'");
  h::Json rep;
  try {
    rep = h::Json::parse(in);
  } catch (const std::exception& e) {
    throw h::ConfigError(std::string("malformed report: ") + e.what());
  }
  const auto bad = h::rederive(rep);
  for (const auto& b : bad) std::cout << "MISMATCH " << b << '\n';
  std::cout << (bad.empty() ? "all checks re-derived" : "re-derivation mismatches") << '\n';
  if (!bad.empty()) return 1;
  return rep.at("summary").at("passed").get<bool>() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Littlewood-Paley g-functions for Jacobi expansions"};
  app.require_subcommand(1);

  std::string config, out, report;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::string chosen;
  for (const auto& name : h::experiment_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config, "TOML config")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory (default: config 'output')");
    sub->add_option("--seed", seed, "override the ensemble seed");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->callback([&chosen, name] { chosen = name; });
  }
  auto* red = app.add_subcommand("rederive", "recompute verdicts from a report's case records");
  red->add_option("report", report, "report.json")->required();
  red->callback([&chosen] { chosen = "rederive"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (chosen == "rederive") return rederive_cmd(report);
    std::optional<std::uint64_t> s;
    if (app.get_subcommand(chosen)->count("--seed")) s = seed;
    return run(chosen, config, out, s, threads);
  } catch (const h::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const jlps::DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const jlps::IndexError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const jlps::NumericalFault& e) {
    std::cerr << "numerical fault: " << e.what() << '\n';
    return 3;
  } catch (const jlps::ConvergenceError& e) {
    std::cerr << "numerical fault: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
