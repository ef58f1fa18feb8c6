// Python bindings for the main operations: groups and characters, sector
// decompositions, thermality criteria, measurement instruments, and the
// JSON model runner.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sectorlab/report.hpp"

namespace py = pybind11;
using namespace sectorlab;

namespace {

py::dict character_table_py(const std::string& preset) {
  nlohmann::json j;
  j["name"] = preset;
  GroupPtr g = parse_group(j);
  GroupDual dual = character_table(g);
  py::dict out;
  out["labels"] = dual.labels;
  out["dims"] = dual.dims;
  py::list chars;
  for (const auto& row : dual.characters) {
    py::list r;
    for (Complex c : row) r.append(c);
    chars.append(r);
  }
  out["characters"] = chars;
  py::list classes;
  for (const auto& cl : g->conjugacy_classes()) classes.append(cl);
  out["conjugacy_classes"] = classes;
  return out;
}

py::dict decompose_sectors_py(const std::string& preset,
                              const std::map<int, Matrix>& generators,
                              std::uint64_t seed) {
  nlohmann::json j;
  j["name"] = preset;
  GroupPtr g = parse_group(j);
  UnitaryRep rep = UnitaryRep::from_generators(g, generators);
  SectorDecomposition dec = decompose_sectors(rep, seed);
  py::dict out;
  py::list sectors;
  for (const Sector& s : dec.sectors) {
    py::dict sj;
    sj["label"] = s.label;
    sj["multiplicity"] = s.multiplicity;
    sj["irrep_dim"] = s.irrep_dim;
    sj["projection"] = s.projection;
    sectors.append(sj);
  }
  out["sectors"] = sectors;
  out["global_unitary"] = dec.global_unitary;
  out["invariant_algebra_dim"] = dec.invariant_algebra.dim();
  out["center_dim"] = static_cast<int>(dec.center_basis.size());
  return out;
}

py::dict charge_readout_py(const std::string& preset,
                           const std::map<int, Matrix>& generators,
                           const Matrix& density, std::uint64_t seed) {
  nlohmann::json j;
  j["name"] = preset;
  GroupPtr g = parse_group(j);
  UnitaryRep rep = UnitaryRep::from_generators(g, generators);
  SectorDecomposition dec = decompose_sectors(rep, seed);
  CentralStateDecomposition cd =
      central_decompose_state(StateFunctional(density), dec);
  py::dict out;
  for (std::size_t i = 0; i < cd.charge.labels.size(); ++i)
    out[py::str(cd.charge.labels[i])] = cd.charge.weights[i];
  return out;
}

py::dict thermal_analysis_py(const Matrix& hamiltonian,
                             const std::vector<double>& betas,
                             const std::vector<Matrix>& subspace,
                             const Matrix& density) {
  ReferenceStateFamily fam(hamiltonian, make_beta_grid(betas));
  ObservableSubspace s(subspace);
  StateFunctional omega(density);
  py::dict out;
  auto witness = is_s_thermal(fam, omega, s);
  out["feasible"] = witness.has_value();
  if (witness) out["witness"] = witness->weights;
  SignedMeasureSplit split = signed_extension(fam, omega, s);
  out["nu_minus_mass"] = split.minus_mass();
  std::vector<int> full(betas.size());
  for (std::size_t i = 0; i < betas.size(); ++i) full[i] = static_cast<int>(i);
  out["norm_bound_ok"] = check_norm_bound(fam, omega, s, full).holds;
  return out;
}

py::object gibbs_state_py(const Matrix& hamiltonian, double beta) {
  ReferenceStateFamily fam(hamiltonian, make_beta_grid({beta}));
  return py::cast(Matrix(fam.state(0).density()));
}

py::dict measurement_py(const Matrix& observable, const Matrix& density) {
  SpectralObservable obs(observable);
  CompositeSystem comp(obs);
  CouplingModel cm = CouplingModel::controlled_shift(obs, comp);
  Instrument inst = build_instrument(obs, cm);
  StateFunctional omega(density);
  py::dict out;
  out["spectrum"] = obs.spectrum();
  out["distribution"] = outcome_distribution(obs, omega);
  SchemeVerdict v = verify_measurement_scheme(obs, cm, {omega});
  out["scheme_ok"] = v.passed;
  out["max_deviation"] = v.max_deviation;
  py::list conds;
  for (int a = 0; a < obs.num_outcomes(); ++a) {
    double p = inst.outcome_probability({a}, omega);
    if (p > 1e-12)
      conds.append(py::cast(
          Matrix(conditional_output_state(inst, {a}, omega).density())));
    else
      conds.append(py::none());
  }
  out["conditional_states"] = conds;
  return out;
}

std::string run_model_json(const std::string& text, std::uint64_t seed,
                           int jobs) {
  RunOptions opt;
  opt.seed = seed;
  opt.jobs = jobs;
  Report r = run_model_text(text, opt);
  return emit_json(r.body);
}

}  // namespace

PYBIND11_MODULE(_sectorlab, m) {
  m.doc() = "Finite-model laboratory for superselection sectors, symmetry "
            "breaking, thermality criteria and measurement instruments";

  py::register_exception<Error>(m, "SectorlabError");

  m.def("character_table", &character_table_py, py::arg("group"),
        "Character table of a preset group (Z<n>, D<n>, S3, S4, Q8)");
  m.def("decompose_sectors", &decompose_sectors_py, py::arg("group"),
        py::arg("generators"), py::arg("seed") = kDefaultSeed,
        "Sector decomposition of a unitary representation given by "
        "generator matrices");
  m.def("charge_readout", &charge_readout_py, py::arg("group"),
        py::arg("generators"), py::arg("density"),
        py::arg("seed") = kDefaultSeed,
        "Charge distribution of a state over the sectors");
  m.def("gibbs_state", &gibbs_state_py, py::arg("hamiltonian"),
        py::arg("beta"), "Gibbs density exp(-beta H)/Z");
  m.def("thermal_analysis", &thermal_analysis_py, py::arg("hamiltonian"),
        py::arg("beta_grid"), py::arg("subspace"), py::arg("density"),
        "Thermality criterion, signed extension and norm bound for a state");
  m.def("measurement", &measurement_py, py::arg("observable"),
        py::arg("density"),
        "Controlled-shift measurement of an observable on a state");
  m.def("run_model", &run_model_json, py::arg("text"),
        py::arg("seed") = kDefaultSeed, py::arg("jobs") = 1,
        "Run a JSON model file's analyses and return the JSON report");
  m.attr("__version__") = kToolVersion;
}
