#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "bfgsadmm/objectives.hpp"

namespace bfgsadmm::experiment {

struct SyntheticSpec {
  std::string type = "quadratic";  // quadratic | logistic
  int agents = 10;
  int dim = 5;
  double condition = 10.0;        // quadratic: spectra of Q_i span [1, condition]
  std::size_t samples = 100;      // logistic: samples per agent
  std::uint64_t seed = 1;
};

/// Self-contained instance document; identical specs give identical bytes.
nlohmann::json generate_instance(const SyntheticSpec& synth);
std::string serialize_instance(const nlohmann::json& instance);

struct LoadedInstance {
  Problem problem;
  int agents = 0;
  std::string type;
};

/// Builds the problem stored in an instance document. `gamma` adds an l1
/// term; logistic agents get weight 1/m.
LoadedInstance load_instance(const nlohmann::json& instance, double gamma);
LoadedInstance load_instance_file(const std::filesystem::path& path, double gamma);

}  // namespace bfgsadmm::experiment
