#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cs2d/constants.hpp"

namespace cs2d {

struct OracleArg {
  std::string name;
  double default_value;
  std::string unit;
};

using OracleValues = std::vector<std::pair<std::string, double>>;

struct Oracle {
  std::string name;
  std::string description;
  std::vector<OracleArg> args;
  std::function<OracleValues(const std::map<std::string, double>&,
                             const Constants&)>
      evaluate;
};

const std::vector<Oracle>& oracles();
const Oracle& find_oracle(const std::string& name);

/// Parses "key=value" arguments. Keys may carry a _hz (cyclic frequency,
/// converted to rad/s), _uK, _kHz, _nm or _deg suffix. Unknown keys throw.
std::map<std::string, double> parse_oracle_args(
    const Oracle& o, const std::vector<std::string>& kv);

OracleValues evaluate_oracle(const std::string& name,
                             const std::vector<std::string>& kv,
                             const Constants& c = Constants::cesium());

}  // namespace cs2d
