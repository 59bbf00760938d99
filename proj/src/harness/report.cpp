#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "jlps/harness.hpp"

namespace jlps::harness {

namespace {

double number(const Json& v) {
  if (v.is_boolean()) return v.get<bool>() ? 1.0 : 0.0;
  if (v.is_number()) return v.get<double>();
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();  // non-finite values serialize as null
  throw std::runtime_error("case field is not numeric");
}

// Reduces `field` over cases of `group` and applies the comparator. The
// pseudo-group "@timing" reads the timing block, which is kept out of the
// case records so those stay reproducible.
void evaluate(const Json& cases, const Json& timing, Check& c) {
  std::vector<double> xs;
  if (c.group == "@timing") {
    if (timing.contains(c.field)) xs.push_back(number(timing[c.field]));
  } else {
    for (const auto& rec : cases)
      if (rec.value("group", "") == c.group && rec.contains(c.field)) xs.push_back(number(rec[c.field]));
  }
  double v = std::numeric_limits<double>::quiet_NaN();
  if (!xs.empty()) {
    if (c.reduce == "max")
      v = *std::max_element(xs.begin(), xs.end());
    else if (c.reduce == "min")
      v = *std::min_element(xs.begin(), xs.end());
    else if (c.reduce == "sum")
      v = std::accumulate(xs.begin(), xs.end(), 0.0);
    else if (c.reduce == "max_over_min")
      v = *std::max_element(xs.begin(), xs.end()) / *std::min_element(xs.begin(), xs.end());
    else if (c.reduce == "single")
      v = xs.size() == 1 ? xs[0] : v;
    else if (c.reduce == "all_true")
      v = static_cast<double>(std::count(xs.begin(), xs.end(), 0.0));  // number of failures
  }
  c.value = v;
  const double t = c.threshold;
  if (c.comparator == "<")
    c.passed = v < t;
  else if (c.comparator == "<=")
    c.passed = v <= t;
  else if (c.comparator == ">")
    c.passed = v > t;
  else if (c.comparator == ">=")
    c.passed = v >= t;
  else if (c.comparator == "==")
    c.passed = v == t;
  else if (c.comparator == "in")
    c.passed = v >= t && v <= c.threshold_hi;
  else
    c.passed = false;
}

}  // namespace

Json Check::to_json() const {
  Json j;
  j["name"] = name;
  j["criterion"] = criterion;
  j["group"] = group;
  j["field"] = field;
  j["reduce"] = reduce;
  j["comparator"] = comparator;
  j["threshold"] = threshold;
  if (comparator == "in") j["threshold_hi"] = threshold_hi;
  j["value"] = value;
  j["passed"] = passed;
  j["hard"] = hard;
  return j;
}

bool ExperimentReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed || !c.hard; });
}

Json& ExperimentReport::add_case(const std::string& group, Json record) {
  Json rec;
  rec["group"] = group;
  for (auto& [k, v] : record.items()) rec[k] = v;
  cases.push_back(std::move(rec));
  return cases.back();
}

const Check& ExperimentReport::add_check(Check c) {
  evaluate(cases, timing, c);
  checks.push_back(std::move(c));
  return checks.back();
}

Json ExperimentReport::to_json() const {
  Json j;
  j["experiment"] = experiment;
  j["config"] = config;
  Json cs = Json::array();
  for (const auto& c : checks) cs.push_back(c.to_json());
  j["checks"] = cs;
  std::size_t failed = 0;
  for (const auto& c : checks) failed += (!c.passed && c.hard);
  j["summary"] = {{"passed", passed()}, {"checks", checks.size()}, {"failed", failed}};
  j["cases"] = cases;
  j["timing"] = timing;
  return j;
}

std::vector<std::filesystem::path> write_report(const ExperimentReport& rep, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  const auto path = dir / "report.json";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << rep.to_json().dump(2) << '\n';
  written.push_back(path);
  for (const auto& f : rep.files) {
    const auto p = dir / f.name;
    std::ofstream o(p);
    if (!o) throw std::runtime_error("cannot write " + p.string());
    o << f.content;
    written.push_back(p);
  }
  return written;
}

std::vector<std::string> rederive(const Json& report) {
  std::vector<std::string> mismatches;
  const Json& cases = report.at("cases");
  const Json& timing = report.at("timing");
  for (const auto& cj : report.at("checks")) {
    Check c;
    c.name = cj.at("name");
    c.group = cj.at("group");
    c.field = cj.at("field");
    c.reduce = cj.at("reduce");
    c.comparator = cj.at("comparator");
    c.threshold = cj.at("threshold");
    c.threshold_hi = cj.value("threshold_hi", 0.0);
    evaluate(cases, timing, c);
    const double recorded = cj.at("value").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                                     : cj.at("value").get<double>();
    const bool same_value =
        (std::isnan(recorded) && std::isnan(c.value)) || std::abs(recorded - c.value) <= 1e-12 * std::abs(c.value);
    if (c.passed != cj.at("passed").get<bool>() || !same_value)
      mismatches.push_back(c.name + ": recorded " + std::to_string(recorded) + ", recomputed " + std::to_string(c.value));
  }
  return mismatches;
}

}  // namespace jlps::harness
