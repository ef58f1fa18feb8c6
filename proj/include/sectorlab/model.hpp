#ifndef SECTORLAB_MODEL_HPP
#define SECTORLAB_MODEL_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sectorlab/measurement.hpp"
#include "sectorlab/sectors.hpp"
#include "sectorlab/ssb.hpp"
#include "sectorlab/thermal.hpp"

namespace sectorlab {

// Parsed model file: the statically validated ingredients every analysis
// draws from. Construction throws InvalidInput with a field diagnostic on
// schema violations.
struct Model {
  GroupPtr group;
  std::unique_ptr<GroupAction> action;
  std::unique_ptr<UnitaryRep> unitary_rep;
  std::vector<int> rep_multiplicities;
  std::vector<int> subgroup;

  std::map<std::string, StateFunctional> states;

  std::unique_ptr<ReferenceStateFamily> thermal_family;
  std::vector<std::string> observable_names;
  std::map<std::string, Matrix> observables;
  std::vector<std::vector<std::string>> subspace_names;

  std::unique_ptr<SpectralObservable> measured_observable;
  std::unique_ptr<CompositeSystem> composite;
  std::unique_ptr<CouplingModel> coupling;
  std::string preparation_initial;   // state name or "maximally_mixed"
  std::string preparation_target;
  int preparation_max_steps = 200;

  struct Analysis {
    std::string name;
    nlohmann::json options;
  };
  std::vector<Analysis> analyses;
};

// JSON parsing helpers shared by the CLI and the python module.
Matrix parse_matrix(const nlohmann::json& j, const std::string& field);
Complex parse_complex(const nlohmann::json& j, const std::string& field);

GroupPtr parse_group(const nlohmann::json& j);

std::unique_ptr<Model> parse_model(const nlohmann::json& j);

}  // namespace sectorlab

#endif  // SECTORLAB_MODEL_HPP
