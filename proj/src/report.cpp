#include "sectorlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <sstream>

namespace sectorlab {

using nlohmann::json;

namespace {

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

// Severity of an engine failure for the process exit code.
int severity_of(const Error& e) {
  const std::string what = e.what();
  auto is = [&](const char* tag) { return what.rfind(tag, 0) == 0; };
  if (is("PropositionViolated") || is("InternalInconsistency") ||
      is("CharacterTableFailure"))
    return 2;
  if (is("IoError")) return 3;
  return 1;
}

ObservableSubspace build_subspace(const Model& model,
                                  const std::vector<std::string>& names) {
  std::vector<Matrix> basis;
  for (const std::string& n : names) basis.push_back(model.observables.at(n));
  return ObservableSubspace(basis, names);
}

const StateFunctional& named_state(const Model& model,
                                   const std::string& name) {
  auto it = model.states.find(name);
  if (it == model.states.end())
    throw InvalidInput("unknown state '" + name + "'");
  return it->second;
}

std::vector<std::string> requested_states(const Model& model,
                                          const json& options) {
  std::vector<std::string> names;
  if (options.contains("states"))
    names = options.at("states").get<std::vector<std::string>>();
  else
    for (const auto& [n, s] : model.states) names.push_back(n);
  return names;
}

// ---------------------------------------------------------------------------
// Analyses
// ---------------------------------------------------------------------------

json run_sectors(const Model& model, const json& options,
                 const RunOptions& run) {
  if (!model.unitary_rep)
    throw InvalidInput("sectors analysis requires a unitary_rep section");
  SectorDecomposition dec = decompose_sectors(*model.unitary_rep, run.seed);
  json out;
  out["analysis"] = "sectors";
  json sectors = json::array();
  for (const Sector& s : dec.sectors) {
    json sj;
    sj["label"] = s.label;
    sj["multiplicity"] = s.multiplicity;
    sj["irrep_dim"] = s.irrep_dim;
    sj["center_projection_rank"] =
        static_cast<int>(std::lround(s.projection.trace().real()));
    sectors.push_back(std::move(sj));
  }
  out["sectors"] = std::move(sectors);
  out["center_dim"] = static_cast<int>(dec.center_basis.size());
  out["invariant_algebra_dim"] = dec.invariant_algebra.dim();

  std::vector<std::string> names;
  if (options.contains("states"))
    names = options.at("states").get<std::vector<std::string>>();
  if (!names.empty()) {
    json reports;
    for (const std::string& name : names) {
      const StateFunctional& omega = named_state(model, name);
      CentralStateDecomposition cd = central_decompose_state(omega, dec);
      json rj;
      json charge;
      for (std::size_t i = 0; i < cd.charge.labels.size(); ++i)
        charge[cd.charge.labels[i]] = cd.charge.weights[i];
      rj["charge_distribution"] = std::move(charge);
      json factors;
      for (const auto& [label, state] : cd.factors)
        factors[label] = matrix_to_json(state.density());
      rj["per_sector_states"] = std::move(factors);
      rj["folium_support"] = folium_support(omega, dec);
      reports[name] = std::move(rj);
    }
    out["state_reports"] = std::move(reports);
  }
  return out;
}

json run_ssb(const Model& model, const json& options, const RunOptions& run) {
  if (!model.action)
    throw InvalidInput("ssb analysis requires an action section");
  if (model.rep_multiplicities.empty())
    throw InvalidInput("ssb analysis requires a representation section");
  AlgebraRep pi(model.action->algebra(), model.rep_multiplicities);
  SsbVerdict verdict = classify_symmetry(*model.action, pi);
  json out;
  out["analysis"] = "ssb";
  out["status"] = verdict.broken ? "broken" : "unbroken";
  out["spectrum_points"] = verdict.spectrum_blocks;
  json orbits = json::array();
  for (const auto& orbit : verdict.orbits) {
    json oj;
    oj["blocks"] = orbit.blocks;
    oj["present"] = orbit.present;
    oj["status"] = orbit.broken ? "broken" : "unbroken";
    orbits.push_back(std::move(oj));
  }
  out["orbits"] = std::move(orbits);

  if (!model.subgroup.empty()) {
    SubgroupPair pair(model.group, model.subgroup);
    InducedSystem sys = induce_representation(*model.action, pi, pair);
    out["induced_dims"] = {{"cosets", pair.num_cosets()},
                           {"base", sys.base_dim()},
                           {"induced", sys.dim()}};
    ThreeCentres tc = compute_ssb_centres(sys, run.seed);
    out["three_centre_dims"] =
        json::array({tc.field.dim, tc.invariants.dim, tc.dual_net.dim});
    out["present_h_sectors"] = tc.num_h_sectors;

    GoldstoneReport gr =
        goldstone_gap_report(*model.action, model.subgroup, run.seed);
    out["goldstone_gap"] = gr.gap;
    json content;
    for (const auto& [label, mult] : gr.irrep_content) content[label] = mult;
    out["goldstone_irrep_content"] = std::move(content);
    out["goldstone_complement_g_stable"] = gr.complement_g_stable;

    // Non-implementability certificates for the broken elements.
    json certs;
    for (int g = 0; g < model.group->order(); ++g) {
      bool moves = false;
      for (int b : verdict.spectrum_blocks)
        if (model.action->block_image(g, b) != b) moves = true;
      if (moves)
        certs[std::to_string(g)] = intertwiner_space_dim(*model.action, pi, g);
    }
    out["broken_element_intertwiner_dims"] = std::move(certs);

    if (options.value("order_parameter", true)) {
      SsbChannel channel(sys, run.seed);
      json labels = json::array();
      for (const std::string& l : channel.h_sector_labels())
        labels.push_back(l);
      out["order_parameter_labels"] = std::move(labels);
    }
  }
  return out;
}

json run_thermal(const Model& model, const json& options,
                 const RunOptions& run) {
  (void)run;
  if (!model.thermal_family)
    throw InvalidInput("thermal analysis requires a thermal section");
  const ReferenceStateFamily& fam = *model.thermal_family;
  std::vector<ObservableSubspace> chain;
  for (const auto& names : model.subspace_names)
    chain.push_back(build_subspace(model, names));
  if (chain.empty()) throw InvalidInput("thermal: no observable subspaces");
  std::size_t main_idx = options.value("subspace", 0);
  if (main_idx >= chain.size())
    throw InvalidInput("thermal: subspace index out of range");
  const ObservableSubspace& s = chain[main_idx];

  std::vector<int> full_grid(static_cast<std::size_t>(fam.grid().size()));
  for (int i = 0; i < fam.grid().size(); ++i)
    full_grid[static_cast<std::size_t>(i)] = i;

  json out;
  out["analysis"] = "thermal";
  auto disc = check_discrimination(fam, s);
  out["discriminating"] = disc.discriminating;
  out["separates_points"] = disc.separates_points;
  out["moment_rank"] = disc.rank;

  std::vector<std::string> names = requested_states(model, options);
  std::vector<std::pair<std::string, StateFunctional>> sites;
  json per_state;
  for (const std::string& name : names) {
    const StateFunctional& omega = named_state(model, name);
    sites.emplace_back(name, omega);
    json sj;
    auto witness = is_s_thermal(fam, omega, s);
    sj["feasible"] = witness.has_value();
    if (witness) {
      json w = json::array();
      for (double x : witness->weights) w.push_back(x);
      sj["witness_measure"] = std::move(w);
    }
    SignedMeasureSplit split = signed_extension(fam, omega, s);
    sj["nu_minus_mass"] = split.minus_mass();
    sj["norm_bound_ok"] = check_norm_bound(fam, omega, s, full_grid).holds;
    if (chain.size() > 1)
      sj["max_thermal_index"] = maximal_thermal_subspace(fam, omega, chain);
    per_state[name] = std::move(sj);
  }
  out["states"] = std::move(per_state);

  json devs = json::array();
  for (const SiteDeviation& d : classify_deviation(fam, sites, s)) {
    json dj;
    dj["site"] = d.site;
    dj["thermal"] = d.thermal;
    dj["mean_beta"] = d.mean_beta;
    dj["beta_variance"] = d.beta_variance;
    dj["nu_minus_mass"] = d.nu_minus_mass;
    devs.push_back(std::move(dj));
  }
  out["deviation_abc"] = std::move(devs);
  return out;
}

json run_measurement(const Model& model, const json& options,
                     const RunOptions& run) {
  if (!model.measured_observable || !model.coupling)
    throw InvalidInput("measurement analysis requires a measurement section");
  const SpectralObservable& obs = *model.measured_observable;
  const CouplingModel& cm = *model.coupling;
  json out;
  out["analysis"] = "measurement";
  json spectrum = json::array();
  for (double a : obs.spectrum()) spectrum.push_back(a);
  out["spectrum"] = std::move(spectrum);

  std::vector<std::string> names = requested_states(model, options);
  std::vector<StateFunctional> probes;
  for (const std::string& n : names) probes.push_back(named_state(model, n));
  {
    Rng rng(run.seed ^ 0x9e3779b97f4a7c15ull);
    for (int t = 0; t < options.value("random_probes", 20); ++t)
      probes.emplace_back(random_density(obs.dim(), rng));
  }
  SchemeVerdict scheme = verify_measurement_scheme(obs, cm, probes);
  out["scheme_ok"] = scheme.passed;
  out["max_deviation"] = scheme.max_deviation;

  json dists;
  for (const std::string& n : names) {
    json d = json::array();
    for (double p : outcome_distribution(obs, named_state(model, n)))
      d.push_back(p);
    dists[n] = std::move(d);
  }
  out["outcome_distributions"] = std::move(dists);

  RepeatabilityVerdict rep =
      check_repeatability(obs, PreparationFamily::eigenfamily(obs));
  out["repeatability"] = rep.passed;

  if (!model.preparation_target.empty()) {
    StateFunctional initial =
        model.preparation_initial == "maximally_mixed"
            ? StateFunctional::maximally_mixed(obs.dim())
            : named_state(model, model.preparation_initial);
    PreparationReport pr =
        prepare_state(initial, named_state(model, model.preparation_target),
                      cm, model.preparation_max_steps);
    json pj;
    pj["converged"] = pr.converged;
    pj["steps"] = pr.steps_taken;
    pj["final_distance"] = pr.final_distance;
    json pd = json::array();
    for (double w : pr.final_pointer_dist) pd.push_back(w);
    pj["final_pointer_distribution"] = std::move(pd);
    out["preparation"] = std::move(pj);
  }
  return out;
}

json dispatch(const Model& model, const Model::Analysis& analysis,
              const RunOptions& run) {
  if (analysis.name == "sectors")
    return run_sectors(model, analysis.options, run);
  if (analysis.name == "ssb") return run_ssb(model, analysis.options, run);
  if (analysis.name == "thermal")
    return run_thermal(model, analysis.options, run);
  if (analysis.name == "measurement")
    return run_measurement(model, analysis.options, run);
  throw InvalidInput("unknown analysis '" + analysis.name + "'");
}

}  // namespace

Report run_model(const Model& model, const std::string& input_digest,
                 const RunOptions& options) {
  if (options.tol_override) tolerances().eq = *options.tol_override;
  Report report;
  report.body["tool_version"] = kToolVersion;
  report.body["input_digest"] = input_digest;
  report.body["seed"] = options.seed;
  report.body["warnings"] = json::array();

  auto run_one = [&](const Model::Analysis& a) -> std::pair<json, int> {
    try {
      return {dispatch(model, a, options), 0};
    } catch (const Error& e) {
      json err;
      err["analysis"] = a.name;
      err["error"] = e.what();
      return {std::move(err), severity_of(e)};
    }
  };

  std::vector<std::pair<json, int>> results(model.analyses.size());
  if (options.jobs > 1) {
    std::vector<std::future<std::pair<json, int>>> futures;
    for (const auto& a : model.analyses)
      futures.push_back(
          std::async(std::launch::async, [&run_one, &a] { return run_one(a); }));
    for (std::size_t i = 0; i < futures.size(); ++i)
      results[i] = futures[i].get();
  } else {
    for (std::size_t i = 0; i < model.analyses.size(); ++i)
      results[i] = run_one(model.analyses[i]);
  }

  json out = json::array();
  for (auto& [body, code] : results) {
    out.push_back(std::move(body));
    report.exit_code = std::max(report.exit_code, code);
  }
  report.body["results"] = std::move(out);
  return report;
}

Report run_model_text(const std::string& model_text, const RunOptions& options) {
  json parsed;
  try {
    parsed = json::parse(model_text);
  } catch (const json::parse_error& e) {
    Report r;
    r.body["error"] = std::string("parse error: ") + e.what();
    r.exit_code = 1;
    return r;
  }
  std::unique_ptr<Model> model;
  try {
    model = parse_model(parsed);
  } catch (const Error& e) {
    Report r;
    r.body["error"] = e.what();
    r.exit_code = 1;
    return r;
  }
  return run_model(*model, fnv1a_digest(model_text), options);
}

Report run_model_file(const std::string& path, const RunOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    Report r;
    r.body["error"] = "IoError: cannot open '" + path + "'";
    r.exit_code = 3;
    return r;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return run_model_text(ss.str(), options);
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

namespace {

void emit(const json& v, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in + json(it.key()).dump() + ": ";
        emit(it.value(), out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& item : v) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        emit(item, out, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case json::value_t::number_float:
      out += format_float(v.get<double>());
      return;
    default:
      out += v.dump();
      return;
  }
}

void emit_text_value(const json& v, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it) {
      out += pad + it.key() + ":";
      if (it.value().is_object() || it.value().is_array()) {
        out += "\n";
        emit_text_value(it.value(), out, indent + 1);
      } else {
        out += " ";
        emit_text_value(it.value(), out, 0);
        out += "\n";
      }
    }
    return;
  }
  if (v.is_array()) {
    bool scalars = true;
    for (const auto& item : v)
      if (item.is_object() || item.is_array()) scalars = false;
    if (scalars) {
      out += pad + "[";
      bool first = true;
      for (const auto& item : v) {
        if (!first) out += ", ";
        first = false;
        emit_text_value(item, out, 0);
      }
      out += "]\n";
    } else {
      for (const auto& item : v) {
        out += pad + "-\n";
        emit_text_value(item, out, indent + 1);
      }
    }
    return;
  }
  if (v.is_number_float())
    out += format_float(v.get<double>());
  else if (v.is_string())
    out += v.get<std::string>();
  else
    out += v.dump();
}

}  // namespace

std::string emit_json(const json& report) {
  std::string out;
  emit(report, out, 0);
  out += "\n";
  return out;
}

std::string emit_text(const json& report) {
  std::string out;
  emit_text_value(report, out, 0);
  return out;
}

std::string fnv1a_digest(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sectorlab
