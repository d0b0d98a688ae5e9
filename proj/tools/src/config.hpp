#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "onsager/mobility.hpp"

namespace onsager::cli {

// Malformed or missing configuration; maps to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RateTriple {
  int from;  // 1-based
  int to;
  double rate;
};

struct ChainSpec {
  std::string preset;  // empty when rates are given
  std::vector<RateTriple> rates;
  int n = 0;  // optional explicit state count for inline rates
};

struct MobilitySpec {
  std::string kind = "kl";  // kl | alpha | geometric
  double alpha = 0.5;
  double beta = 0.5;
  double c = 1.0;
  Convention convention = Convention::Reference;
};

struct BvpSpec {
  int steps = 200;
  int max_iterations = 50;
  int restarts = 8;
  double tolerance = 1e-7;
};

struct RunConfig {
  ChainSpec chain;
  MobilitySpec mobility;
  std::optional<std::vector<double>> point;   // evaluation point or initial state
  std::optional<std::vector<double>> target;  // geodesic boundary-value mode
  std::optional<std::vector<double>> phi0;
  std::vector<std::vector<double>> eta;       // transported potentials
  double T = 1.0;
  double dt = 1e-3;
  int grid = 50;
  double oracle_tolerance = 1e-5;
  BvpSpec bvp;
  std::uint64_t seed = 20240531;
  std::string out;
};

// Parses YAML text; errors carry the line number and the offending key.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

ReversibleChain make_chain(const ChainSpec& spec);
MobilityModel make_model(const MobilitySpec& spec);

}  // namespace onsager::cli
