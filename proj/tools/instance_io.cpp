#include "instance_io.hpp"

#include <fstream>
#include <sstream>

#include "bfgsadmm/synthetic.hpp"
#include "experiment.hpp"

namespace bfgsadmm::experiment {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "bfgsadmm-instance";

json to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v(k));
  return out;
}

json to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(Eigen::VectorXd(m.row(r).transpose())));
  return out;
}

Eigen::VectorXd vector_from(const json& j, Eigen::Index dim) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != dim) {
    throw ConfigError("instance: expected an array of " + std::to_string(dim) + " numbers");
  }
  Eigen::VectorXd v(dim);
  for (Eigen::Index k = 0; k < dim; ++k) v(k) = j.at(static_cast<std::size_t>(k)).get<double>();
  return v;
}

}  // namespace

json generate_instance(const SyntheticSpec& synth) {
  if (synth.agents < 1 || synth.dim < 1) throw ConfigError("gen-synthetic: agents and dim must be positive");
  json doc;
  doc["format"] = kFormat;
  doc["version"] = 1;
  doc["type"] = synth.type;
  doc["seed"] = synth.seed;
  doc["agents"] = synth.agents;
  doc["dim"] = synth.dim;
  json agents = json::array();
  if (synth.type == "quadratic") {
    if (!(synth.condition >= 1.0)) throw ConfigError("gen-synthetic: condition must be >= 1");
    doc["condition"] = synth.condition;
    for (const QuadraticAgentData& a : random_quadratic_agents(synth.agents, synth.dim, synth.condition, synth.seed)) {
      agents.push_back({{"q", to_json(a.q)}, {"b", to_json(a.b)}});
    }
  } else if (synth.type == "logistic") {
    if (synth.samples < 1) throw ConfigError("gen-synthetic: samples must be positive");
    doc["samples_per_agent"] = synth.samples;
    const auto samples = random_logistic_samples(synth.samples * static_cast<std::size_t>(synth.agents), synth.dim,
                                                 synth.seed);
    for (int i = 0; i < synth.agents; ++i) {
      json rows = json::array();
      for (std::size_t k = 0; k < synth.samples; ++k) {
        const LabeledSample& s = samples[static_cast<std::size_t>(i) * synth.samples + k];
        rows.push_back({{"w", to_json(s.features)}, {"y", s.label}});
      }
      agents.push_back({{"samples", rows}});
    }
  } else {
    throw ConfigError("gen-synthetic: unknown type '" + synth.type + "' (expected quadratic or logistic)");
  }
  doc["agent_data"] = agents;
  return doc;
}

std::string serialize_instance(const json& instance) { return instance.dump(1) + "\n"; }

LoadedInstance load_instance(const json& doc, double gamma) {
  try {
    if (doc.at("format").get<std::string>() != kFormat) throw ConfigError("instance: unknown format");
    LoadedInstance out;
    out.type = doc.at("type").get<std::string>();
    out.agents = doc.at("agents").get<int>();
    const int dim = doc.at("dim").get<int>();
    const json& data = doc.at("agent_data");
    if (out.agents < 1 || dim < 1 || static_cast<int>(data.size()) != out.agents) {
      throw ConfigError("instance: agent count does not match agent_data");
    }
    std::vector<std::shared_ptr<const SmoothLocalCost>> costs;
    if (out.type == "quadratic") {
      for (const json& a : data) {
        Eigen::MatrixXd q(dim, dim);
        const json& rows = a.at("q");
        if (static_cast<int>(rows.size()) != dim) throw ConfigError("instance: Q has the wrong size");
        for (int r = 0; r < dim; ++r) q.row(r) = vector_from(rows.at(static_cast<std::size_t>(r)), dim).transpose();
        costs.push_back(quadratic_cost(q, vector_from(a.at("b"), dim)));
      }
    } else if (out.type == "logistic") {
      const double scale = 1.0 / out.agents;
      for (const json& a : data) {
        std::vector<LabeledSample> samples;
        for (const json& s : a.at("samples")) samples.push_back({vector_from(s.at("w"), dim), s.at("y").get<int>()});
        costs.push_back(logistic_cost(std::move(samples), scale));
      }
    } else {
      throw ConfigError("instance: unknown type '" + out.type + "'");
    }
    std::shared_ptr<const Regularizer> reg;
    if (gamma > 0.0) reg = l1_regularizer(gamma);
    out.problem = Problem(std::move(costs), std::move(reg));
    return out;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("instance: ") + e.what());
  }
}

LoadedInstance load_instance_file(const std::filesystem::path& path, double gamma) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open instance file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("instance " + path.string() + ": " + e.what());
  }
  return load_instance(doc, gamma);
}

}  // namespace bfgsadmm::experiment
