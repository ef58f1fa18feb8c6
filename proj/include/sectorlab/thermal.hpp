#ifndef SECTORLAB_THERMAL_HPP
#define SECTORLAB_THERMAL_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sectorlab/algebra.hpp"
#include "sectorlab/simplex.hpp"

namespace sectorlab {

// Discrete classifying space: a list of parameter points (β, extras). The
// extras are inert labels standing in for chemical-potential-like
// parameters; only β enters the Gibbs construction.
struct ClassifyingGrid {
  struct Point {
    double beta = 0.0;
    std::vector<double> extras;
    std::string label;
  };
  std::vector<Point> points;

  int size() const { return static_cast<int>(points.size()); }
  void validate() const;
};

ClassifyingGrid make_beta_grid(const std::vector<double>& betas);
// Tuples (beta, extras...); the extras are carried as labels only.
ClassifyingGrid make_grid(const std::vector<std::vector<double>>& points);

// Gibbs family exp(-βH)/Z over a grid.
class ReferenceStateFamily {
 public:
  ReferenceStateFamily(Matrix hamiltonian, ClassifyingGrid grid);

  const Matrix& hamiltonian() const { return hamiltonian_; }
  const ClassifyingGrid& grid() const { return grid_; }
  int dim() const { return static_cast<int>(hamiltonian_.rows()); }
  const StateFunctional& state(int i) const {
    return states_.at(static_cast<std::size_t>(i));
  }

 private:
  Matrix hamiltonian_;
  ClassifyingGrid grid_;
  std::vector<StateFunctional> states_;
};

// Subspace of Hermitian observables used in the selection criteria; must
// contain the identity in its span.
class ObservableSubspace {
 public:
  ObservableSubspace(std::vector<Matrix> basis,
                     std::vector<std::string> names = {});

  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Matrix>& basis() const { return basis_; }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<Matrix> basis_;
  std::vector<std::string> names_;
};

struct ThermalMeasure {
  std::vector<double> weights;  // over grid points

  int size() const { return static_cast<int>(weights.size()); }
  void validate() const;
};

struct SignedMeasureSplit {
  std::vector<double> nu_plus;
  std::vector<double> nu_minus;

  double minus_mass() const;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// C(A): the vector of Gibbs expectations over the grid.
RealVector thermal_function(const ReferenceStateFamily& fam, const Matrix& a);

// C*(ρ) = Σ_i ρ_i ω_{β_i}.
StateFunctional cq_channel(const ReferenceStateFamily& fam,
                           const ThermalMeasure& rho);

struct DiscriminationReport {
  bool discriminating = false;   // measures are identified uniquely
  bool separates_points = false; // rows of the moment matrix are distinct
  int rank = 0;
  RealMatrix moment_matrix;      // M[i][k] = ω_{β_i}(Φ_k)
};

DiscriminationReport check_discrimination(const ReferenceStateFamily& fam,
                                          const ObservableSubspace& s);

// Unique ρ with C*(ρ) = ω on span(S); requires a discriminating family.
// Throws NotInK when no probability measure reproduces ω within 1e-8.
ThermalMeasure invert_on_grid(const ReferenceStateFamily& fam,
                              const StateFunctional& omega,
                              const ObservableSubspace& s);

// Linear feasibility for the thermality criterion; nullopt when infeasible.
std::optional<ThermalMeasure> is_s_thermal(const ReferenceStateFamily& fam,
                                           const StateFunctional& omega,
                                           const ObservableSubspace& s);

struct NormBoundReport {
  bool holds = false;
  double optimum = 0.0;      // max ω(Φ) over the unit τ_B-ball in span(S)
  bool degenerate = false;   // some Φ ≠ 0 with C(Φ)|_B = 0 but ω(Φ) ≠ 0
  std::optional<Matrix> certificate;  // violating observable, if any
};

// Decides |ω(Φ)| <= max_{β in B} |ω_β(Φ)| on span(S) by linear programming.
NormBoundReport check_norm_bound(const ReferenceStateFamily& fam,
                                 const StateFunctional& omega,
                                 const ObservableSubspace& s,
                                 const std::vector<int>& b_subset);

// ν = ν₊ - ν₋ with ν± >= 0 and (ν₊ - ν₋)(C(Φ)) = ω(Φ) on S, minimizing the
// mass of ν₋. The negative part vanishes exactly when ω is S-thermal.
SignedMeasureSplit signed_extension(const ReferenceStateFamily& fam,
                                    const StateFunctional& omega,
                                    const ObservableSubspace& s);

struct SiteDeviation {
  std::string site;
  bool thermal = false;
  double mean_beta = 0.0;       // (a) spacetime-dependence analogue
  double beta_variance = 0.0;   // (b) statistical fluctuation
  double nu_minus_mass = 0.0;   // (c) positivity violation
};

std::vector<SiteDeviation> classify_deviation(
    const ReferenceStateFamily& fam,
    const std::vector<std::pair<std::string, StateFunctional>>& sites,
    const ObservableSubspace& s);

// Largest index in a nested chain for which ω stays thermal; -1 if none.
int maximal_thermal_subspace(const ReferenceStateFamily& fam,
                             const StateFunctional& omega,
                             const std::vector<ObservableSubspace>& chain);

bool states_equivalent(const StateFunctional& omega1,
                       const StateFunctional& omega2,
                       const ObservableSubspace& s);

struct ThermalAdjunctionVerdict {
  bool states_agree_on_s = false;     // ω ≡_S C*(ρ)
  bool measure_in_class = false;      // ρ reproduces ω on C(S)
  bool isomorphism_holds = false;     // the two sides coincide
};

ThermalAdjunctionVerdict verify_adjunction_thermal(
    const ReferenceStateFamily& fam, const StateFunctional& omega,
    const ThermalMeasure& rho, const ObservableSubspace& s);

}  // namespace sectorlab

#endif  // SECTORLAB_THERMAL_HPP
