#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "onsager/error.hpp"

namespace onsager::cli {

namespace {

[[noreturn]] void fail(const YAML::Node& node, const std::string& key, const std::string& what) {
  std::ostringstream os;
  os << "config error";
  if (node.IsDefined() && node.Mark().line >= 0) os << " at line " << node.Mark().line + 1;
  os << ": key '" << key << "': " << what;
  throw ConfigError(os.str());
}

template <class T>
T scalar(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) fail(node, key, "expected a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(node, key, "cannot parse '" + node.Scalar() + "'");
  }
}

std::vector<double> vector_of(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence() || node.size() == 0) fail(node, key, "expected a non-empty list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i)
    out.push_back(scalar<double>(node[i], key + "[" + std::to_string(i) + "]"));
  return out;
}

void check_keys(const YAML::Node& map, const std::string& prefix, const std::set<std::string>& allowed) {
  for (const auto& kv : map) {
    const std::string k = kv.first.as<std::string>();
    if (!allowed.count(k)) fail(kv.first, prefix + k, "unknown key");
  }
}

void parse_chain(const YAML::Node& node, ChainSpec& spec) {
  if (node.IsScalar()) {
    spec.preset = node.Scalar();
    if (!is_preset(spec.preset)) fail(node, "chain", "unknown preset '" + spec.preset + "'");
    return;
  }
  if (!node.IsMap()) fail(node, "chain", "expected a preset name or a mapping");
  check_keys(node, "chain.", {"preset", "rates", "n"});
  if (node["preset"] && node["rates"]) fail(node, "chain", "give either preset or rates, not both");
  if (node["preset"]) {
    spec.preset = scalar<std::string>(node["preset"], "chain.preset");
    if (!is_preset(spec.preset))
      fail(node["preset"], "chain.preset", "unknown preset '" + spec.preset + "'");
    return;
  }
  const YAML::Node rates = node["rates"];
  if (!rates) fail(node, "chain", "missing 'preset' or 'rates'");
  if (!rates.IsSequence() || rates.size() == 0) fail(rates, "chain.rates", "expected a list of [i, j, q]");
  for (std::size_t r = 0; r < rates.size(); ++r) {
    const std::string key = "chain.rates[" + std::to_string(r) + "]";
    const YAML::Node t = rates[r];
    if (!t.IsSequence() || t.size() != 3) fail(t, key, "expected [i, j, q]");
    RateTriple rt{scalar<int>(t[0], key), scalar<int>(t[1], key), scalar<double>(t[2], key)};
    if (rt.from < 1 || rt.to < 1 || rt.from == rt.to)
      fail(t, key, "states are numbered from 1 and must differ");
    if (!(rt.rate >= 0.0)) fail(t, key, "rate must be nonnegative");
    spec.rates.push_back(rt);
  }
  if (node["n"]) {
    spec.n = scalar<int>(node["n"], "chain.n");
    if (spec.n < 2) fail(node["n"], "chain.n", "need at least two states");
  }
  for (const auto& rt : spec.rates)
    if (spec.n > 0 && std::max(rt.from, rt.to) > spec.n)
      fail(rates, "chain.rates", "state index exceeds chain.n");
}

void parse_mobility(const YAML::Node& node, MobilitySpec& spec) {
  if (!node.IsMap()) fail(node, "mobility", "expected a mapping");
  check_keys(node, "mobility.", {"kind", "alpha", "beta", "c", "convention"});
  if (node["kind"]) {
    spec.kind = scalar<std::string>(node["kind"], "mobility.kind");
    if (spec.kind != "kl" && spec.kind != "alpha" && spec.kind != "geometric")
      fail(node["kind"], "mobility.kind", "expected kl, alpha or geometric");
  }
  if (node["alpha"]) {
    spec.alpha = scalar<double>(node["alpha"], "mobility.alpha");
    if (spec.alpha == 1.0) fail(node["alpha"], "mobility.alpha", "alpha = 1 is the kl kind");
  }
  if (node["beta"]) spec.beta = scalar<double>(node["beta"], "mobility.beta");
  if (node["c"]) {
    spec.c = scalar<double>(node["c"], "mobility.c");
    if (!(spec.c > 0.0)) fail(node["c"], "mobility.c", "must be positive");
  }
  if (node["convention"]) {
    const auto v = scalar<std::string>(node["convention"], "mobility.convention");
    if (v == "reference")
      spec.convention = Convention::Reference;
    else if (v == "lattice-scaled")
      spec.convention = Convention::LatticeScaled;
    else
      fail(node["convention"], "mobility.convention", "expected reference or lattice-scaled");
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    std::ostringstream os;
    os << "config error at line " << e.mark.line + 1 << ": " << e.msg;
    throw ConfigError(os.str());
  }
  RunConfig cfg;
  if (root.IsNull()) return cfg;
  if (!root.IsMap()) throw ConfigError("config error at line 1: top level must be a mapping");
  check_keys(root, "", {"chain", "mobility", "point", "target", "phi0", "eta", "T", "dt", "grid",
                        "oracle_tolerance", "bvp", "seed", "out"});
  if (root["chain"]) parse_chain(root["chain"], cfg.chain);
  if (root["mobility"]) parse_mobility(root["mobility"], cfg.mobility);
  if (root["point"]) cfg.point = vector_of(root["point"], "point");
  if (root["target"]) cfg.target = vector_of(root["target"], "target");
  if (root["phi0"]) cfg.phi0 = vector_of(root["phi0"], "phi0");
  if (const auto e = root["eta"]) {
    if (!e.IsSequence() || e.size() == 0) fail(e, "eta", "expected a list of potentials");
    for (std::size_t k = 0; k < e.size(); ++k)
      cfg.eta.push_back(vector_of(e[k], "eta[" + std::to_string(k) + "]"));
  }
  if (root["T"]) {
    cfg.T = scalar<double>(root["T"], "T");
    if (!(cfg.T >= 0.0)) fail(root["T"], "T", "must be nonnegative");
  }
  if (root["dt"]) {
    cfg.dt = scalar<double>(root["dt"], "dt");
    if (!(cfg.dt > 0.0)) fail(root["dt"], "dt", "must be positive");
  }
  if (root["grid"]) {
    cfg.grid = scalar<int>(root["grid"], "grid");
    if (cfg.grid < 1) fail(root["grid"], "grid", "must be at least 1");
  }
  if (root["oracle_tolerance"])
    cfg.oracle_tolerance = scalar<double>(root["oracle_tolerance"], "oracle_tolerance");
  if (const auto b = root["bvp"]) {
    if (!b.IsMap()) fail(b, "bvp", "expected a mapping");
    check_keys(b, "bvp.", {"steps", "max_iterations", "restarts", "tolerance"});
    if (b["steps"]) cfg.bvp.steps = scalar<int>(b["steps"], "bvp.steps");
    if (b["max_iterations"]) cfg.bvp.max_iterations = scalar<int>(b["max_iterations"], "bvp.max_iterations");
    if (b["restarts"]) cfg.bvp.restarts = scalar<int>(b["restarts"], "bvp.restarts");
    if (b["tolerance"]) cfg.bvp.tolerance = scalar<double>(b["tolerance"], "bvp.tolerance");
    if (cfg.bvp.steps < 2) fail(b["steps"], "bvp.steps", "must be at least 2");
  }
  if (root["seed"]) cfg.seed = scalar<std::uint64_t>(root["seed"], "seed");
  if (root["out"]) cfg.out = scalar<std::string>(root["out"], "out");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config error: cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

ReversibleChain make_chain(const ChainSpec& spec) {
  if (!spec.preset.empty()) return preset_chain(spec.preset);
  if (spec.rates.empty()) throw ConfigError("config error: key 'chain': missing (use a preset or rates)");
  int n = spec.n;
  for (const auto& r : spec.rates) n = std::max({n, r.from, r.to});
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
  for (const auto& r : spec.rates) Q(r.from - 1, r.to - 1) = r.rate;
  return build_reversible_chain(Q);
}

MobilityModel make_model(const MobilitySpec& spec) {
  if (spec.kind == "alpha") return MobilityModel::alpha(spec.alpha, spec.convention, spec.c);
  if (spec.kind == "geometric") return MobilityModel::geometric(spec.beta, spec.c, spec.convention);
  return MobilityModel::kl(spec.convention, spec.c);
}

}  // namespace onsager::cli
