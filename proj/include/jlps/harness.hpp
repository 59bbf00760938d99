#pragma once

// Experiment driver behind the jlps CLI and the acceptance binary.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "jlps/jacobi.hpp"
#include "jlps/sequence.hpp"
#include "jlps/weights.hpp"

namespace jlps::harness {

using Json = nlohmann::ordered_json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"identity", "kernels", "decay", "equivalence", "multiplier", "apweight"};
  return names;
}

struct EnsembleSpec {
  std::size_t count = 50;
  std::size_t support_max = 32;
  std::uint64_t seed = 20240917;
  std::string distribution = "gaussian";  ///< gaussian | rademacher | sparse
  double sparse_density = 0.25;
};

struct ModelSpec {
  std::size_t L_init = 0;  ///< 0 picks a size from the largest index involved
  std::size_t L_max = 8192;
  double tol = 1e-10;
};

struct WeightSpec {
  std::string kind = "constant";  ///< constant | power | table
  double s = 0.0;
  std::string path;

  DiscreteWeight build() const;
  std::string label() const;
};

struct IdentityOptions {
  double rel_tol = 1e-8;
  std::size_t domination_count = 100;
  double domination_slack = 1e-12;
  std::size_t polarization_pairs = 10;
  double polarization_tol = 1e-8;
  double runtime_limit = 60.0;
};

struct KernelOptions {
  std::vector<double> t_grid{0.1, 1.0, 10.0, 50.0};
  std::size_t index_max = 64;
  double oracle_tol = 1e-10;
  std::vector<std::pair<double, double>> semigroup_pairs{{0.5, 1.0}, {1.0, 5.0}, {0.1, 10.0}};
  double semigroup_tol = 1e-10;
  std::vector<double> subordination_t{0.5, 1.0, 5.0};
  std::size_t subordination_index_max = 32;
  double subordination_tol = 1e-8;
  double runtime_limit = 30.0;
};

struct DecayOptions {
  std::vector<double> separations{8, 11, 16, 23, 32, 45, 64, 91, 128};
  double window_lo = 8, window_hi = 128;
  std::size_t size_row = 0;
  std::size_t smooth_row = 256;
  std::pair<double, double> size_band{-1.2, -0.8};
  std::pair<double, double> smooth_band{-2.3, -1.7};
  double slope_tol = 1e-3;
  std::size_t diagonal_max = 256;
  std::vector<std::size_t> schlafli_i{8, 11, 16, 23, 32, 45, 64, 91, 128};
  std::vector<std::size_t> schlafli_j{8, 11, 16, 23, 32, 45, 64};
  std::vector<std::size_t> schlafli_dk{8, 16, 32, 64, 128, 256};
  double schlafli_band = 10.0;
};

struct EquivalenceOptions {
  std::vector<std::size_t> support_levels{32, 64};
  double spread_bound = 100.0;
  double growth_tol = 0.10;
  double exact_tol = 1e-8;
};

struct DensitySpec {
  std::string name = "exp";  ///< one | exp | step | power
  double param = 0.0;        ///< t0 for step, gamma for power
};

struct MultiplierOptions {
  std::vector<DensitySpec> densities{{"one", 0}, {"exp", 0}, {"step", 1.0}, {"power", 1.0}};
  std::vector<double> gammas{0.5, 1.0, 3.0};
  std::size_t two_path_count = 4;
  double two_path_tol = 1e-8;
  double isometry_tol = 1e-10;
  std::size_t random_step_densities = 3;
  double truncation_tol = 1e-8;
};

struct ApweightOptions {
  std::size_t window_max = 4096;
  std::vector<double> s_absolute{-0.9, -0.5, 0.0, 0.5};
  std::vector<double> s_offset_from_p{-1.1, -0.9, 0.0, 1.0};
  double boundary_margin = 0.15;
  ApThresholds thresholds;
};

struct ExperimentConfig {
  std::string experiment;
  std::vector<JacobiParams> params{{-0.5, -0.5}, {0.0, 0.0}, {0.7, 2.3}};
  std::vector<int> k_list{1, 2, 3};
  EnsembleSpec ensemble;
  ModelSpec model;
  std::vector<WeightSpec> weights;
  std::vector<double> p_list{1.5, 2.0, 3.0};
  std::filesystem::path output = "out";
  std::filesystem::path base_dir = ".";  ///< relative paths resolve here

  IdentityOptions identity;
  KernelOptions kernels;
  DecayOptions decay;
  EquivalenceOptions equivalence;
  MultiplierOptions multiplier;
  ApweightOptions apweight;

  Json to_json() const;
};

/// Defaults of each experiment (the acceptance values).
ExperimentConfig default_config(const std::string& experiment);
ExperimentConfig parse_config(const std::string& toml_text, const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config(const std::filesystem::path& path);

/// splitmix64 finalizer; per-case streams seed mt19937_64 with mix(seed ^ mix(case_id)).
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Case `case_id` of the ensemble: support uniform in [0, support_max],
/// entries up to the support drawn from the distribution, last entry nonzero.
FiniteSequence ensemble_member(const EnsembleSpec& spec, std::uint64_t case_id);
std::vector<FiniteSequence> make_ensemble(const EnsembleSpec& spec, std::uint64_t stream = 0);

/// Runs fn(i) for i < count on up to `threads` workers. Results go to
/// caller-owned slots indexed by i, so order never depends on scheduling.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn);

/// A verdict that can be recomputed from the per-case records: filter the
/// cases whose "group" equals `group`, reduce `field`, compare.
struct Check {
  std::string name;
  std::string criterion;  ///< acceptance criterion id, empty for auxiliary checks
  std::string group;
  std::string field;
  std::string reduce;      ///< max | min | max_over_min | single | all_true | sum
  std::string comparator;  ///< < | <= | > | >= | in
  double threshold = 0.0;
  double threshold_hi = 0.0;  ///< upper end for "in"
  double value = 0.0;
  bool passed = false;
  bool hard = true;  ///< soft checks are reported but do not fail the run

  Json to_json() const;
};

struct SideFile {
  std::string name;
  std::string content;
};

struct ExperimentReport {
  std::string experiment;
  Json config;
  Json cases = Json::array();
  std::vector<Check> checks;
  std::vector<SideFile> files;
  Json timing = Json::object();

  bool passed() const;
  /// Appends a case record tagged with its group.
  Json& add_case(const std::string& group, Json record);
  /// Evaluates the check against the current cases and records it.
  const Check& add_check(Check c);
  Json to_json() const;
};

struct RunOptions {
  std::size_t threads = 1;
  std::optional<std::uint64_t> seed;
};

ExperimentReport run_experiment(ExperimentConfig cfg, const RunOptions& opt = {});

/// report.json plus side files under dir; returns the written paths.
std::vector<std::filesystem::path> write_report(const ExperimentReport& rep, const std::filesystem::path& dir);

/// Recomputes every check of a report from its case records; returns the
/// checks whose recorded verdict or value disagrees.
std::vector<std::string> rederive(const Json& report);

/// Inline SVG line plot (log-log when both flags are set).
struct Series {
  std::string label;
  std::vector<double> x, y;
};
std::string svg_plot(const std::string& title, const std::vector<Series>& series, bool log_x, bool log_y);

}  // namespace jlps::harness
