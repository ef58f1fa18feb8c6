#include "sectorlab/model.hpp"

#include <algorithm>

namespace sectorlab {

using nlohmann::json;

Complex parse_complex(const json& j, const std::string& field) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Complex(j[0].get<double>(), j[1].get<double>());
  throw InvalidInput(field + ": expected a number or an [re, im] pair");
}

Matrix parse_matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty())
    throw InvalidInput(field + ": expected a non-empty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  Matrix m;
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array())
      throw InvalidInput(field + ": row " + std::to_string(r) +
                         " is not an array");
    if (r == 0) {
      cols = j[r].size();
      m = Matrix::Zero(static_cast<Eigen::Index>(rows),
                       static_cast<Eigen::Index>(cols));
    }
    if (j[r].size() != cols)
      throw InvalidInput(field + ": row " + std::to_string(r) +
                         " has inconsistent length");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          parse_complex(j[r][c], field + "[" + std::to_string(r) + "][" +
                                     std::to_string(c) + "]");
  }
  return m;
}

GroupPtr parse_group(const json& j) {
  if (j.contains("cayley")) {
    const json& t = j.at("cayley");
    if (!t.is_array()) throw InvalidInput("group.cayley: expected an array");
    std::vector<std::vector<int>> table;
    for (std::size_t r = 0; r < t.size(); ++r) {
      if (!t[r].is_array())
        throw InvalidInput("group.cayley: row " + std::to_string(r) +
                           " is not an array");
      table.push_back(t[r].get<std::vector<int>>());
    }
    return FiniteGroup::from_cayley(std::move(table));
  }
  if (!j.contains("name") || !j.at("name").is_string())
    throw InvalidInput("group: expected a preset name or a cayley table");
  std::string name = j.at("name").get<std::string>();
  if (name == "S3") return FiniteGroup::symmetric3();
  if (name == "S4") return FiniteGroup::symmetric4();
  if (name == "Q8") return FiniteGroup::quaternion();
  if (name.size() > 1 && name[0] == 'Z')
    return FiniteGroup::cyclic(std::stoi(name.substr(1)));
  if (name.size() > 1 && name[0] == 'D')
    return FiniteGroup::dihedral(std::stoi(name.substr(1)));
  throw InvalidInput("group.name: unknown preset '" + name + "'");
}

namespace {

std::vector<int> parse_block_dims(const json& j) {
  if (!j.contains("algebra") || !j.at("algebra").contains("blocks"))
    throw InvalidInput("algebra.blocks: required");
  return j.at("algebra").at("blocks").get<std::vector<int>>();
}

BlockAutomorphism parse_automorphism(const json& j,
                                     const std::vector<int>& dims,
                                     const std::string& field) {
  BlockAutomorphism a;
  if (j.contains("block_perm"))
    a.block_perm = j.at("block_perm").get<std::vector<int>>();
  else {
    a.block_perm.resize(dims.size());
    for (std::size_t k = 0; k < dims.size(); ++k)
      a.block_perm[k] = static_cast<int>(k);
  }
  if (a.block_perm.size() != dims.size())
    throw InvalidInput(field + ".block_perm: one entry per block required");
  if (j.contains("block_unitaries")) {
    const json& us = j.at("block_unitaries");
    for (std::size_t k = 0; k < us.size(); ++k)
      a.block_unitaries.push_back(
          parse_matrix(us[k], field + ".block_unitaries[" +
                                  std::to_string(k) + "]"));
  } else {
    for (int d : dims)
      a.block_unitaries.push_back(Matrix::Identity(d, d));
  }
  if (a.block_unitaries.size() != dims.size())
    throw InvalidInput(field + ".block_unitaries: one unitary per block");
  return a;
}

StateFunctional parse_state(const json& j, const std::string& field) {
  if (j.contains("density"))
    return StateFunctional(parse_matrix(j.at("density"), field + ".density"));
  if (j.contains("vector")) {
    const json& v = j.at("vector");
    Vector psi(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
      psi(static_cast<Eigen::Index>(i)) =
          parse_complex(v[i], field + ".vector[" + std::to_string(i) + "]");
    return StateFunctional::vector_state(psi);
  }
  throw InvalidInput(field + ": expected 'density' or 'vector'");
}

}  // namespace

std::unique_ptr<Model> parse_model(const json& j) {
  auto model = std::make_unique<Model>();
  if (!j.is_object()) throw InvalidInput("model: top level must be an object");
  if (j.contains("group")) model->group = parse_group(j.at("group"));

  if (j.contains("action")) {
    if (!model->group) throw InvalidInput("action: requires a group");
    std::vector<int> dims = parse_block_dims(j);
    FiniteCStarAlgebra alg = FiniteCStarAlgebra::multi_matrix(dims);
    std::map<int, BlockAutomorphism> gens;
    const json& gj = j.at("action").at("generators");
    for (std::size_t i = 0; i < gj.size(); ++i) {
      int e = gj[i].at("element").get<int>();
      gens.emplace(e, parse_automorphism(
                          gj[i], dims,
                          "action.generators[" + std::to_string(i) + "]"));
    }
    model->action = std::make_unique<GroupAction>(model->group, alg, gens);
  }

  if (j.contains("unitary_rep")) {
    if (!model->group) throw InvalidInput("unitary_rep: requires a group");
    std::map<int, Matrix> gens;
    const json& gj = j.at("unitary_rep").at("generators");
    for (std::size_t i = 0; i < gj.size(); ++i)
      gens.emplace(gj[i].at("element").get<int>(),
                   parse_matrix(gj[i].at("matrix"),
                                "unitary_rep.generators[" +
                                    std::to_string(i) + "].matrix"));
    model->unitary_rep =
        std::make_unique<UnitaryRep>(UnitaryRep::from_generators(
            model->group, gens));
  }

  if (j.contains("representation")) {
    const json& r = j.at("representation");
    if (r.contains("multiplicities"))
      model->rep_multiplicities =
          r.at("multiplicities").get<std::vector<int>>();
    else if (r.contains("blocks")) {
      if (!model->action)
        throw InvalidInput("representation.blocks: requires an action");
      model->rep_multiplicities.assign(
          model->action->algebra().blocks().size(), 0);
      for (int b : r.at("blocks").get<std::vector<int>>())
        model->rep_multiplicities.at(static_cast<std::size_t>(b)) = 1;
    } else {
      throw InvalidInput(
          "representation: expected 'multiplicities' or 'blocks'");
    }
  }

  if (j.contains("subgroup"))
    model->subgroup = j.at("subgroup").get<std::vector<int>>();

  if (j.contains("states")) {
    for (const auto& [name, js] : j.at("states").items())
      model->states.emplace(name, parse_state(js, "states." + name));
  }

  if (j.contains("thermal")) {
    const json& t = j.at("thermal");
    Matrix h = parse_matrix(t.at("hamiltonian"), "thermal.hamiltonian");
    // Grid entries are either a number (beta) or a tuple [beta, mu...].
    std::vector<std::vector<double>> points;
    for (const auto& entry : t.at("beta_grid")) {
      if (entry.is_number())
        points.push_back({entry.get<double>()});
      else
        points.push_back(entry.get<std::vector<double>>());
    }
    model->thermal_family =
        std::make_unique<ReferenceStateFamily>(h, make_grid(points));
    model->observables.emplace("I",
                               Matrix::Identity(h.rows(), h.cols()));
    model->observables.emplace("H", h);
    model->observable_names = {"I", "H"};
    if (t.contains("observables")) {
      for (const auto& [name, jm] : t.at("observables").items()) {
        model->observables[name] =
            parse_matrix(jm, "thermal.observables." + name);
        if (std::find(model->observable_names.begin(),
                      model->observable_names.end(),
                      name) == model->observable_names.end())
          model->observable_names.push_back(name);
      }
    }
    if (t.contains("subspaces")) {
      for (const auto& names : t.at("subspaces")) {
        std::vector<std::string> sub = names.get<std::vector<std::string>>();
        for (const std::string& n : sub)
          if (!model->observables.count(n))
            throw InvalidInput("thermal.subspaces: unknown observable '" + n +
                               "'");
        model->subspace_names.push_back(std::move(sub));
      }
    } else {
      model->subspace_names.push_back({"I", "H"});
    }
  }

  if (j.contains("measurement")) {
    const json& m = j.at("measurement");
    Matrix a = parse_matrix(m.at("observable"), "measurement.observable");
    model->measured_observable = std::make_unique<SpectralObservable>(a);
    model->composite =
        std::make_unique<CompositeSystem>(*model->measured_observable);
    const json& c = m.at("coupling");
    if (c.contains("type") &&
        c.at("type").get<std::string>() == "controlled_shift") {
      int start = c.value("pointer_start", 0);
      model->coupling = std::make_unique<CouplingModel>(
          CouplingModel::controlled_shift(*model->measured_observable,
                                          *model->composite, start));
    } else if (c.contains("unitary")) {
      Matrix v = parse_matrix(c.at("unitary"), "measurement.coupling.unitary");
      std::vector<double> init =
          c.at("pointer_init").get<std::vector<double>>();
      model->coupling =
          std::make_unique<CouplingModel>(*model->composite, v, init);
    } else {
      throw InvalidInput(
          "measurement.coupling: expected controlled_shift or a unitary");
    }
    if (m.contains("preparation")) {
      const json& p = m.at("preparation");
      model->preparation_initial = p.value("initial", "maximally_mixed");
      model->preparation_target = p.at("target").get<std::string>();
      model->preparation_max_steps = p.value("max_steps", 200);
    }
  }

  if (j.contains("analyses")) {
    for (const auto& a : j.at("analyses")) {
      Model::Analysis an;
      if (a.is_string()) {
        an.name = a.get<std::string>();
        an.options = json::object();
      } else {
        an.name = a.at("name").get<std::string>();
        an.options = a;
      }
      model->analyses.push_back(std::move(an));
    }
  }
  return model;
}

}  // namespace sectorlab
