#pragma once

#include <optional>
#include <string>

#include "trireduce/dynamics.hpp"
#include "trireduce/errors.hpp"
#include "trireduce/geometry.hpp"
#include "trireduce/potential.hpp"

namespace trireduce {

/// Rejected configuration; `field()` is the dotted path of the offending
/// entry (e.g. "masses[1]", "potential.expression").
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message);
  const char* kind() const noexcept override { return "ConfigError"; }
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class IoError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "IoError"; }
};

struct OutputPaths {
  std::optional<std::string> trajectory;
  std::optional<std::string> passages;
  std::optional<std::string> evaluation;
};

struct RunConfig {
  MassTriple masses;
  PotentialSpec potential;
  CartesianState initial;
  IntegratorConfig integrator;
  Thresholds thresholds;
  // Passage detection threshold on sin(phi); defaults to thresholds.band.
  double passage_threshold;
  OutputPaths output;
};

/// Parses and validates a JSON document. Throws ConfigError.
RunConfig parse_config(const std::string& json_text);

/// Reads a file and parses it. Throws IoError or ConfigError.
RunConfig load_config(const std::string& path);

}  // namespace trireduce
