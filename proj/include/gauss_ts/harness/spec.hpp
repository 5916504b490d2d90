#pragma once

// Experiment specification: loading, strict validation and canonical JSON.
//
// Spec files are YAML. Every key is checked; unknown keys are errors. Example:
//
//   name: theorem1
//   seed: 1
//   horizon: 100000
//   reps: 2000
//   arms:
//     - {mu: 0, sigma2: 1}
//     - {mu: -1, sigma2: 1}
//     - {mu: -0.5, sigma2: 1, known_mean: -0.5}   # optional point-mass arm
//   policy:
//     alpha: -0.5
//     tie_break: uniform_random                   # or lowest_index
//   checkpoints: log8                             # or an explicit list
//   bounds:
//     lemma5_epsilon: 0.1                         # optional
//   outputs:
//     csv: theorem1.csv                           # defaults: <name>.csv,
//     reps_csv: theorem1_reps.csv                 # <name>_reps.csv,
//     manifest: theorem1.manifest.json            # <name>.manifest.json
//
// A manifest JSON written by `run` is also accepted; its "spec" member is used.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include "gauss_ts/bandit.hpp"
#include "gauss_ts/harness/format.hpp"
#include "gauss_ts/theory.hpp"

namespace gauss_ts::harness {

using nlohmann::json;

/// Invalid experiment configuration. The message names the offending field.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ArmSpec {
  ArmParams params;
  std::optional<double> known_mean;
};

struct OutputPaths {
  std::string csv;
  std::string reps_csv;
  std::string manifest;
};

struct ExperimentSpec {
  std::string name;
  std::vector<ArmSpec> arms;
  double alpha = 0.0;
  TieBreak tie_break = TieBreak::uniform_random;
  std::uint64_t horizon = 0;
  std::uint64_t reps = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> checkpoints;
  std::optional<double> lemma5_epsilon;
  OutputPaths outputs;

  Environment environment() const {
    std::vector<ArmParams> p;
    p.reserve(arms.size());
    for (const auto& a : arms) p.push_back(a.params);
    return Environment(std::move(p));
  }

  PolicySpec policy() const {
    std::map<std::size_t, double> known;
    for (std::size_t i = 0; i < arms.size(); ++i) {
      if (arms[i].known_mean) known.emplace(i, *arms[i].known_mean);
    }
    return PolicySpec::thompson_with_known_arms(alpha, std::move(known), tie_break);
  }
};

inline std::string to_string(TieBreak tb) {
  return tb == TieBreak::lowest_index ? "lowest_index" : "uniform_random";
}

namespace detail {

inline json yaml_to_json(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Sequence: {
      json arr = json::array();
      for (const auto& item : node) arr.push_back(yaml_to_json(item));
      return arr;
    }
    case YAML::NodeType::Map: {
      json obj = json::object();
      for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (obj.contains(key)) throw config_error("duplicate key '" + key + "'");
        obj[key] = yaml_to_json(kv.second);
      }
      return obj;
    }
    case YAML::NodeType::Scalar: {
      const std::string s = node.Scalar();
      if (node.Tag() == "!") return s;  // quoted
      std::uint64_t u;
      if (parse_uint(s, u)) return u;
      std::int64_t i;
      if (auto r = std::from_chars(s.data(), s.data() + s.size(), i);
          r.ec == std::errc() && r.ptr == s.data() + s.size()) {
        return i;
      }
      double d;
      if (parse_double(s, d)) return d;
      if (s == "true") return true;
      if (s == "false") return false;
      if (s == "~" || s == "null") return nullptr;
      return s;
    }
  }
  return nullptr;
}

class Fields {
 public:
  Fields(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw config_error(where("") + " must be a mapping");
  }

  std::string where(const std::string& key) const {
    if (key.empty()) return path_.empty() ? "spec" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return obj_.contains(key) && !obj_.at(key).is_null();
  }

  const json& at(const std::string& key) {
    if (!has(key)) throw config_error("missing required field '" + where(key) + "'");
    return obj_.at(key);
  }

  double real(const std::string& key) {
    const auto& v = at(key);
    if (!v.is_number()) throw config_error("field '" + where(key) + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw config_error("field '" + where(key) + "' must be finite");
    return d;
  }

  std::uint64_t count(const std::string& key) {
    const auto& v = at(key);
    if (!v.is_number_unsigned()) {
      throw config_error("field '" + where(key) + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::string text(const std::string& key) {
    const auto& v = at(key);
    if (!v.is_string()) throw config_error("field '" + where(key) + "' must be a string");
    return v.get<std::string>();
  }

  void reject_unknown() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) throw config_error("unknown field '" + where(it.key()) + "'");
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

}  // namespace detail

/// Builds and validates a spec from its JSON form (the YAML file converted,
/// or a manifest's embedded spec).
inline ExperimentSpec spec_from_json(const json& root) {
  detail::Fields f(root, "");
  ExperimentSpec s;

  s.name = f.text("name");
  if (s.name.empty()) throw config_error("field 'name' must be nonempty");
  if (s.name.find_first_of("/\\") != std::string::npos) {
    throw config_error("field 'name' must not contain path separators");
  }
  s.seed = f.count("seed");
  s.horizon = f.count("horizon");
  if (s.horizon < 1) throw config_error("horizon must be ≥ 1");
  s.reps = f.count("reps");
  if (s.reps < 1) throw config_error("reps must be ≥ 1");

  const auto& arms = f.at("arms");
  if (!arms.is_array()) throw config_error("field 'arms' must be a list");
  if (arms.size() < 2) throw config_error("field 'arms' must list at least 2 arms");
  for (std::size_t i = 0; i < arms.size(); ++i) {
    detail::Fields a(arms[i], "arms[" + std::to_string(i) + "]");
    ArmSpec arm;
    arm.params.mu = a.real("mu");
    arm.params.sigma2 = a.real("sigma2");
    if (!(arm.params.sigma2 > 0.0)) throw config_error(a.where("sigma2") + " must be > 0");
    if (a.has("known_mean")) arm.known_mean = a.real("known_mean");
    a.reject_unknown();
    s.arms.push_back(arm);
  }
  if (std::all_of(s.arms.begin(), s.arms.end(), [](const ArmSpec& a) { return a.known_mean; })) {
    throw config_error("field 'arms': at least one arm must not have known_mean");
  }

  {
    detail::Fields p(f.at("policy"), "policy");
    s.alpha = p.real("alpha");
    if (p.has("tie_break")) {
      const auto tb = p.text("tie_break");
      if (tb == "uniform_random") {
        s.tie_break = TieBreak::uniform_random;
      } else if (tb == "lowest_index") {
        s.tie_break = TieBreak::lowest_index;
      } else {
        throw config_error("field 'policy.tie_break' must be uniform_random or lowest_index");
      }
    }
    p.reject_unknown();
  }

  if (f.has("checkpoints") && !(f.at("checkpoints").is_string() &&
                                f.at("checkpoints").get<std::string>() == "log8")) {
    const auto& cp = f.at("checkpoints");
    if (!cp.is_array() || cp.empty()) {
      throw config_error("field 'checkpoints' must be \"log8\" or a nonempty list");
    }
    for (const auto& c : cp) {
      if (!c.is_number_unsigned() || c.get<std::uint64_t>() < 1) {
        throw config_error("field 'checkpoints' entries must be positive integers");
      }
      s.checkpoints.push_back(c.get<std::uint64_t>());
    }
    if (!std::is_sorted(s.checkpoints.begin(), s.checkpoints.end()) ||
        std::adjacent_find(s.checkpoints.begin(), s.checkpoints.end()) != s.checkpoints.end()) {
      throw config_error("field 'checkpoints' must be strictly increasing");
    }
    if (s.checkpoints.back() > s.horizon) {
      throw config_error("field 'checkpoints' entries must be ≤ horizon");
    }
  } else {
    s.checkpoints = log_checkpoints(s.horizon);
  }

  if (f.has("bounds")) {
    detail::Fields b(f.at("bounds"), "bounds");
    if (b.has("lemma5_epsilon")) {
      s.lemma5_epsilon = b.real("lemma5_epsilon");
      if (!(*s.lemma5_epsilon > 0.0)) throw config_error("bounds.lemma5_epsilon must be > 0");
    }
    b.reject_unknown();
  }

  s.outputs = {s.name + ".csv", s.name + "_reps.csv", s.name + ".manifest.json"};
  if (f.has("outputs")) {
    detail::Fields o(f.at("outputs"), "outputs");
    if (o.has("csv")) s.outputs.csv = o.text("csv");
    if (o.has("reps_csv")) s.outputs.reps_csv = o.text("reps_csv");
    if (o.has("manifest")) s.outputs.manifest = o.text("manifest");
    o.reject_unknown();
  }
  f.reject_unknown();

  // Cross-field checks that need the domain types.
  try {
    const auto env = s.environment();
    const auto pol = s.policy();
    pol.validate(env.size());
    if (s.horizon < initialization_rounds(env, pol)) {
      throw config_error("horizon must be ≥ " + std::to_string(initialization_rounds(env, pol)) +
                         " (initialization pulls)");
    }
  } catch (const std::invalid_argument& e) {
    throw config_error(std::string("field 'arms': ") + e.what());
  }
  if (s.lemma5_epsilon) {
    try {
      lemma5_upper_bound(s.environment(), s.alpha, *s.lemma5_epsilon, 2.0);
    } catch (const std::exception& e) {
      throw config_error(std::string("field 'bounds.lemma5_epsilon': ") + e.what());
    }
  }
  return s;
}

/// Canonical JSON with every default resolved. Feeding it back through
/// spec_from_json gives an identical spec.
inline json spec_to_json(const ExperimentSpec& s) {
  json arms = json::array();
  for (const auto& a : s.arms) {
    json arm = {{"mu", a.params.mu}, {"sigma2", a.params.sigma2}};
    if (a.known_mean) arm["known_mean"] = *a.known_mean;
    arms.push_back(arm);
  }
  json j = {{"name", s.name},
            {"seed", s.seed},
            {"horizon", s.horizon},
            {"reps", s.reps},
            {"arms", arms},
            {"policy", {{"alpha", s.alpha}, {"tie_break", to_string(s.tie_break)}}},
            {"checkpoints", s.checkpoints},
            {"outputs",
             {{"csv", s.outputs.csv},
              {"reps_csv", s.outputs.reps_csv},
              {"manifest", s.outputs.manifest}}}};
  if (s.lemma5_epsilon) j["bounds"] = {{"lemma5_epsilon", *s.lemma5_epsilon}};
  return j;
}

inline ExperimentSpec parse_spec_text(const std::string& text) {
  // JSON manifests are valid YAML, but parse them as JSON to keep number types exact.
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw config_error(std::string("invalid JSON: ") + e.what());
    }
    if (j.contains("spec") && j.contains("manifest_schema")) return spec_from_json(j.at("spec"));
    return spec_from_json(j);
  }
  YAML::Node node;
  try {
    node = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw config_error(std::string("invalid YAML: ") + e.what());
  }
  return spec_from_json(detail::yaml_to_json(node));
}

inline ExperimentSpec load_spec_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open spec file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec_text(ss.str());
}

}  // namespace gauss_ts::harness
