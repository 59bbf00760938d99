#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "jlps/harness.hpp"

namespace jlps::harness {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void check_keys(const toml::table& t, const std::string& where, const std::set<std::string>& allowed) {
  for (const auto& [k, v] : t) {
    (void)v;
    if (!allowed.count(std::string(k.str())))
      fail("unknown key '" + std::string(k.str()) + "' in " + (where.empty() ? "top level" : "[" + where + "]"));
  }
}

double as_double(const toml::node& n, const std::string& key) {
  if (auto v = n.value<double>()) return *v;  // integers convert too
  fail("'" + key + "' must be a number");
}

std::size_t as_size(const toml::node& n, const std::string& key) {
  auto v = n.value<std::int64_t>();
  if (!v || *v < 0) fail("'" + key + "' must be a nonnegative integer");
  return static_cast<std::size_t>(*v);
}

std::string as_string(const toml::node& n, const std::string& key) {
  if (auto v = n.value<std::string>()) return *v;
  fail("'" + key + "' must be a string");
}

const toml::array& as_array(const toml::node& n, const std::string& key) {
  if (auto a = n.as_array()) return *a;
  fail("'" + key + "' must be an array");
}

std::vector<double> doubles(const toml::node& n, const std::string& key) {
  std::vector<double> out;
  for (const auto& e : as_array(n, key)) out.push_back(as_double(e, key));
  return out;
}

std::vector<std::size_t> sizes(const toml::node& n, const std::string& key) {
  std::vector<std::size_t> out;
  for (const auto& e : as_array(n, key)) out.push_back(as_size(e, key));
  return out;
}

std::pair<double, double> band(const toml::node& n, const std::string& key) {
  const auto v = doubles(n, key);
  if (v.size() != 2 || !(v[0] < v[1])) fail("'" + key + "' must be [lo, hi] with lo < hi");
  return {v[0], v[1]};
}

const toml::table& as_table(const toml::node& n, const std::string& key) {
  if (auto t = n.as_table()) return *t;
  fail("'" + key + "' must be a table");
}

WeightSpec weight_spec(const toml::node& n) {
  const auto& t = as_table(n, "weights");
  check_keys(t, "weights", {"kind", "s", "path"});
  WeightSpec w;
  if (auto k = t["kind"].node()) w.kind = as_string(*k, "kind");
  if (auto s = t["s"].node()) w.s = as_double(*s, "s");
  if (auto p = t["path"].node()) w.path = as_string(*p, "path");
  if (w.kind != "constant" && w.kind != "power" && w.kind != "table")
    fail("weight kind must be constant, power or table");
  if (w.kind == "table" && w.path.empty()) fail("table weight needs a path");
  return w;
}

std::vector<WeightSpec> weight_list(const toml::node& n, const std::string& key) {
  std::vector<WeightSpec> out;
  for (const auto& e : as_array(n, key)) out.push_back(weight_spec(e));
  return out;
}

// Applies `fn(key, node)` to every entry of an optional sub-table after
// checking that only `allowed` keys are present.
template <class Fn>
void section(const toml::table& root, const std::string& name, const std::set<std::string>& allowed, Fn fn) {
  const auto* node = root.get(name);
  if (!node) return;
  const auto& t = as_table(*node, name);
  check_keys(t, name, allowed);
  for (const auto& [k, v] : t) fn(std::string(k.str()), v);
}

void validate(const ExperimentConfig& c) {
  bool known = false;
  for (const auto& n : experiment_names()) known |= n == c.experiment;
  if (!known) fail("unknown experiment '" + c.experiment + "'");
  if (c.params.empty()) fail("params must list at least one (alpha, beta) pair");
  for (const auto& p : c.params)
    if (!(p.alpha > -1.0) || !(p.beta > -1.0)) fail("params entries need alpha, beta > -1");
  for (int k : c.k_list)
    if (k < 1) fail("k_list entries must be >= 1");
  if (c.ensemble.count == 0) fail("ensemble.count must be positive (empty ensemble)");
  const auto& d = c.ensemble.distribution;
  if (d != "gaussian" && d != "rademacher" && d != "sparse")
    fail("ensemble.distribution must be gaussian, rademacher or sparse");
  if (!(c.ensemble.sparse_density > 0.0 && c.ensemble.sparse_density <= 1.0))
    fail("ensemble.sparse_density must lie in (0, 1]");
  if (c.model.L_init != 0 && c.model.L_init > c.model.L_max) fail("model.L_init must not exceed model.L_max");
  if (!(c.model.tol > 0.0)) fail("model.tol must be positive");
  for (double p : c.p_list)
    if (!(p > 1.0)) fail("p_list entries must be > 1");
  if (c.experiment == "equivalence" && c.equivalence.support_levels.size() < 2)
    fail("equivalence.support_levels needs at least two levels");
  if (c.experiment == "decay" && c.decay.separations.size() < 3) fail("decay.separations needs at least 3 points");
  if (c.experiment == "apweight" && c.apweight.window_max < 16) fail("apweight.window_max must be >= 16");
}

}  // namespace

DiscreteWeight WeightSpec::build() const {
  if (kind == "constant") return DiscreteWeight::constant(1.0);
  if (kind == "power") return DiscreteWeight::power(s);
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open weight table '" + path + "'");
  return DiscreteWeight::from_csv(in);
}

std::string WeightSpec::label() const {
  std::ostringstream os;
  if (kind == "power")
    os << "power(" << s << ")";
  else if (kind == "table")
    os << "table(" << path << ")";
  else
    os << "constant";
  return os.str();
}

ExperimentConfig default_config(const std::string& experiment) {
  ExperimentConfig c;
  c.experiment = experiment;
  c.output = std::filesystem::path("out") / experiment;
  if (experiment == "kernels") {
    c.params = {kChebyshev};
  } else if (experiment == "decay") {
    c.params = {kChebyshev};
    c.k_list = {1};
  } else if (experiment == "equivalence") {
    c.params = {{-0.5, -0.5}, {0.7, 2.3}};
    c.k_list = {1};
    c.ensemble.count = 100;
    c.weights = {{"constant", 0.0, ""}, {"power", -0.5, ""}, {"power", 0.25, ""}, {"power", 1.0, ""}};
  } else if (experiment == "multiplier") {
    c.params = {{-0.5, -0.5}, {0.7, 2.3}};
    c.k_list = {1, 2};
    c.ensemble.count = 100;
  } else if (experiment == "apweight") {
    c.params = {kChebyshev};
  }
  return c;
}

ExperimentConfig parse_config(const std::string& toml_text, const std::filesystem::path& base_dir) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "TOML parse error: " << e.description() << " at " << e.source().begin;
    throw ConfigError(os.str());
  }
  check_keys(root, "", {"experiment", "params", "k_list", "ensemble", "model", "weights", "p_list", "output",
                        "identity", "kernels", "decay", "equivalence", "multiplier", "apweight"});
  const auto* exp = root.get("experiment");
  if (!exp) fail("missing 'experiment'");
  ExperimentConfig c = default_config(as_string(*exp, "experiment"));
  c.base_dir = base_dir;
  if (auto* n = root.get("params")) {
    c.params.clear();
    for (const auto& e : as_array(*n, "params")) {
      const auto v = doubles(e, "params");
      if (v.size() != 2) fail("params entries must be [alpha, beta]");
      c.params.push_back({v[0], v[1]});
    }
  }
  if (auto* n = root.get("k_list")) {
    c.k_list.clear();
    for (const auto& e : as_array(*n, "k_list")) c.k_list.push_back(static_cast<int>(as_size(e, "k_list")));
  }
  if (auto* n = root.get("p_list")) c.p_list = doubles(*n, "p_list");
  if (auto* n = root.get("weights")) c.weights = weight_list(*n, "weights");
  if (auto* n = root.get("output")) c.output = as_string(*n, "output");

  section(root, "ensemble", {"count", "support_max", "seed", "distribution", "sparse_density"},
          [&](const std::string& k, const toml::node& v) {
            if (k == "count") c.ensemble.count = as_size(v, k);
            if (k == "support_max") c.ensemble.support_max = as_size(v, k);
            if (k == "seed") c.ensemble.seed = as_size(v, k);
            if (k == "distribution") c.ensemble.distribution = as_string(v, k);
            if (k == "sparse_density") c.ensemble.sparse_density = as_double(v, k);
          });
  section(root, "model", {"L_init", "L_max", "tol"}, [&](const std::string& k, const toml::node& v) {
    if (k == "L_init") c.model.L_init = as_size(v, k);
    if (k == "L_max") c.model.L_max = as_size(v, k);
    if (k == "tol") c.model.tol = as_double(v, k);
  });
  section(root, "identity",
          {"rel_tol", "domination_count", "domination_slack", "polarization_pairs", "polarization_tol",
           "runtime_limit"},
          [&](const std::string& k, const toml::node& v) {
            auto& o = c.identity;
            if (k == "rel_tol") o.rel_tol = as_double(v, k);
            if (k == "domination_count") o.domination_count = as_size(v, k);
            if (k == "domination_slack") o.domination_slack = as_double(v, k);
            if (k == "polarization_pairs") o.polarization_pairs = as_size(v, k);
            if (k == "polarization_tol") o.polarization_tol = as_double(v, k);
            if (k == "runtime_limit") o.runtime_limit = as_double(v, k);
          });
  section(root, "kernels",
          {"t_grid", "index_max", "oracle_tol", "semigroup_pairs", "semigroup_tol", "subordination_t",
           "subordination_index_max", "subordination_tol", "runtime_limit"},
          [&](const std::string& k, const toml::node& v) {
            auto& o = c.kernels;
            if (k == "t_grid") o.t_grid = doubles(v, k);
            if (k == "index_max") o.index_max = as_size(v, k);
            if (k == "oracle_tol") o.oracle_tol = as_double(v, k);
            if (k == "semigroup_pairs") {
              o.semigroup_pairs.clear();
              for (const auto& e : as_array(v, k)) {
                const auto p = doubles(e, k);
                if (p.size() != 2) fail("semigroup_pairs entries must be [t, s]");
                o.semigroup_pairs.emplace_back(p[0], p[1]);
              }
            }
            if (k == "semigroup_tol") o.semigroup_tol = as_double(v, k);
            if (k == "subordination_t") o.subordination_t = doubles(v, k);
            if (k == "subordination_index_max") o.subordination_index_max = as_size(v, k);
            if (k == "subordination_tol") o.subordination_tol = as_double(v, k);
            if (k == "runtime_limit") o.runtime_limit = as_double(v, k);
          });
  section(root, "decay",
          {"separations", "window", "size_row", "smooth_row", "size_band", "smooth_band", "slope_tol",
           "diagonal_max", "schlafli_i", "schlafli_j", "schlafli_dk", "schlafli_band"},
          [&](const std::string& k, const toml::node& v) {
            auto& o = c.decay;
            if (k == "separations") o.separations = doubles(v, k);
            if (k == "window") std::tie(o.window_lo, o.window_hi) = band(v, k);
            if (k == "size_row") o.size_row = as_size(v, k);
            if (k == "smooth_row") o.smooth_row = as_size(v, k);
            if (k == "size_band") o.size_band = band(v, k);
            if (k == "smooth_band") o.smooth_band = band(v, k);
            if (k == "slope_tol") o.slope_tol = as_double(v, k);
            if (k == "diagonal_max") o.diagonal_max = as_size(v, k);
            if (k == "schlafli_i") o.schlafli_i = sizes(v, k);
            if (k == "schlafli_j") o.schlafli_j = sizes(v, k);
            if (k == "schlafli_dk") o.schlafli_dk = sizes(v, k);
            if (k == "schlafli_band") o.schlafli_band = as_double(v, k);
          });
  section(root, "equivalence",
          {"support_levels", "spread_bound", "growth_tol", "exact_tol"},
          [&](const std::string& k, const toml::node& v) {
            auto& o = c.equivalence;
            if (k == "support_levels") o.support_levels = sizes(v, k);
            if (k == "spread_bound") o.spread_bound = as_double(v, k);
            if (k == "growth_tol") o.growth_tol = as_double(v, k);
            if (k == "exact_tol") o.exact_tol = as_double(v, k);
          });
  section(root, "multiplier",
          {"densities", "gammas", "two_path_count", "two_path_tol", "isometry_tol", "random_step_densities",
           "truncation_tol"},
          [&](const std::string& k, const toml::node& v) {
            auto& o = c.multiplier;
            if (k == "densities") {
              o.densities.clear();
              for (const auto& e : as_array(v, k)) {
                const auto& t = as_table(e, k);
                check_keys(t, "multiplier.densities", {"name", "param"});
                DensitySpec d;
                if (auto* n = t.get("name")) d.name = as_string(*n, "name");
                if (auto* n = t.get("param")) d.param = as_double(*n, "param");
                if (d.name != "one" && d.name != "exp" && d.name != "step" && d.name != "power")
                  fail("density name must be one, exp, step or power");
                o.densities.push_back(d);
              }
            }
            if (k == "gammas") o.gammas = doubles(v, k);
            if (k == "two_path_count") o.two_path_count = as_size(v, k);
            if (k == "two_path_tol") o.two_path_tol = as_double(v, k);
            if (k == "isometry_tol") o.isometry_tol = as_double(v, k);
            if (k == "random_step_densities") o.random_step_densities = as_size(v, k);
            if (k == "truncation_tol") o.truncation_tol = as_double(v, k);
          });
  section(root, "apweight",
          {"window_max", "s_absolute", "s_offset_from_p", "boundary_margin", "member_growth", "nonmember_growth",
           "doublings"},
          [&](const std::string& k, const toml::node& v) {
            auto& o = c.apweight;
            if (k == "window_max") o.window_max = as_size(v, k);
            if (k == "s_absolute") o.s_absolute = doubles(v, k);
            if (k == "s_offset_from_p") o.s_offset_from_p = doubles(v, k);
            if (k == "boundary_margin") o.boundary_margin = as_double(v, k);
            if (k == "member_growth") o.thresholds.member_growth = as_double(v, k);
            if (k == "nonmember_growth") o.thresholds.nonmember_growth = as_double(v, k);
            if (k == "doublings") o.thresholds.doublings = as_size(v, k);
          });

  for (auto& w : c.weights)
    if (w.kind == "table" && std::filesystem::path(w.path).is_relative()) w.path = (base_dir / w.path).string();
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

namespace {

Json weights_json(const std::vector<WeightSpec>& ws) {
  Json a = Json::array();
  for (const auto& w : ws) {
    Json o;
    o["kind"] = w.kind;
    if (w.kind == "power") o["s"] = w.s;
    if (w.kind == "table") o["path"] = w.path;
    a.push_back(o);
  }
  return a;
}

}  // namespace

Json ExperimentConfig::to_json() const {
  Json j;
  j["experiment"] = experiment;
  Json ps = Json::array();
  for (const auto& p : params) ps.push_back({p.alpha, p.beta});
  j["params"] = ps;
  j["k_list"] = k_list;
  j["ensemble"] = {{"count", ensemble.count},
                   {"support_max", ensemble.support_max},
                   {"seed", ensemble.seed},
                   {"distribution", ensemble.distribution},
                   {"sparse_density", ensemble.sparse_density}};
  j["model"] = {{"L_init", model.L_init}, {"L_max", model.L_max}, {"tol", model.tol}};
  j["weights"] = weights_json(weights);
  j["p_list"] = p_list;
  j["output"] = output.string();
  if (experiment == "identity") {
    const auto& o = identity;
    j["identity"] = {{"rel_tol", o.rel_tol},
                     {"domination_count", o.domination_count},
                     {"domination_slack", o.domination_slack},
                     {"polarization_pairs", o.polarization_pairs},
                     {"polarization_tol", o.polarization_tol},
                     {"runtime_limit", o.runtime_limit}};
  } else if (experiment == "kernels") {
    const auto& o = kernels;
    Json pairs = Json::array();
    for (const auto& [t, s] : o.semigroup_pairs) pairs.push_back({t, s});
    j["kernels"] = {{"t_grid", o.t_grid},
                    {"index_max", o.index_max},
                    {"oracle_tol", o.oracle_tol},
                    {"semigroup_pairs", pairs},
                    {"semigroup_tol", o.semigroup_tol},
                    {"subordination_t", o.subordination_t},
                    {"subordination_index_max", o.subordination_index_max},
                    {"subordination_tol", o.subordination_tol},
                    {"runtime_limit", o.runtime_limit}};
  } else if (experiment == "decay") {
    const auto& o = decay;
    j["decay"] = {{"separations", o.separations},
                  {"window", {o.window_lo, o.window_hi}},
                  {"size_row", o.size_row},
                  {"smooth_row", o.smooth_row},
                  {"size_band", {o.size_band.first, o.size_band.second}},
                  {"smooth_band", {o.smooth_band.first, o.smooth_band.second}},
                  {"slope_tol", o.slope_tol},
                  {"diagonal_max", o.diagonal_max},
                  {"schlafli_i", o.schlafli_i},
                  {"schlafli_j", o.schlafli_j},
                  {"schlafli_dk", o.schlafli_dk},
                  {"schlafli_band", o.schlafli_band}};
  } else if (experiment == "equivalence") {
    const auto& o = equivalence;
    j["equivalence"] = {{"support_levels", o.support_levels},
                        {"spread_bound", o.spread_bound},
                        {"growth_tol", o.growth_tol},
                        {"exact_tol", o.exact_tol}};
  } else if (experiment == "multiplier") {
    const auto& o = multiplier;
    Json ds = Json::array();
    for (const auto& d : o.densities) ds.push_back({{"name", d.name}, {"param", d.param}});
    j["multiplier"] = {{"densities", ds},
                       {"gammas", o.gammas},
                       {"two_path_count", o.two_path_count},
                       {"two_path_tol", o.two_path_tol},
                       {"isometry_tol", o.isometry_tol},
                       {"random_step_densities", o.random_step_densities},
                       {"truncation_tol", o.truncation_tol}};
  } else if (experiment == "apweight") {
    const auto& o = apweight;
    j["apweight"] = {{"window_max", o.window_max},
                     {"s_absolute", o.s_absolute},
                     {"s_offset_from_p", o.s_offset_from_p},
                     {"boundary_margin", o.boundary_margin},
                     {"member_growth", o.thresholds.member_growth},
                     {"nonmember_growth", o.thresholds.nonmember_growth},
                     {"doublings", o.thresholds.doublings}};
  }
  return j;
}

}  // namespace jlps::harness
