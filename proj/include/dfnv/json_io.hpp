#pragma once
// Distribution files are JSON objects {"support": [...], "weights": [...]}.
// Loading feeds both arrays straight through make_discrete, so files with
// duplicate atoms or unnormalized weights come back cleaned up.

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dfnv/discrete_distribution.hpp"
#include "json.hpp"

namespace dfnv {

// Raised for unreadable, unparseable or schema-invalid distribution files.
struct DistributionFileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline nlohmann::json to_json(const DiscreteDistribution& d) {
  return nlohmann::json{{"support", d.support()}, {"weights", d.weights()}};
}

inline DiscreteDistribution distribution_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("support") || !j.contains("weights")) {
    throw DistributionFileError(
        "distribution JSON must be an object with \"support\" and \"weights\" arrays");
  }
  try {
    return make_discrete(j.at("support").get<std::vector<double>>(),
                         j.at("weights").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw DistributionFileError(std::string("malformed distribution JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DistributionFileError(std::string("invalid distribution data: ") + e.what());
  }
}

inline DiscreteDistribution load_distribution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DistributionFileError("cannot open distribution file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DistributionFileError("cannot parse " + path + ": " + e.what());
  }
  return distribution_from_json(j);
}

}  // namespace dfnv
