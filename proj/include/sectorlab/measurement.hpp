#ifndef SECTORLAB_MEASUREMENT_HPP
#define SECTORLAB_MEASUREMENT_HPP

#include <optional>
#include <string>
#include <vector>

#include "sectorlab/algebra.hpp"

namespace sectorlab {

// Hermitian observable with its clustered spectrum and spectral projections.
class SpectralObservable {
 public:
  explicit SpectralObservable(Matrix a);

  const Matrix& matrix() const { return matrix_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }
  int num_outcomes() const { return static_cast<int>(spectrum_.size()); }
  const std::vector<double>& spectrum() const { return spectrum_; }
  const Matrix& projection(int outcome) const {
    return projections_[static_cast<std::size_t>(outcome)];
  }
  Matrix projection_for(const std::vector<int>& outcomes) const;

 private:
  Matrix matrix_;
  std::vector<double> spectrum_;      // ascending
  std::vector<Matrix> projections_;
};

// f(A) = Σ_a f(a) E_A({a}).
Matrix functional_calculus(const SpectralObservable& obs,
                           const std::vector<Complex>& values);

// p(a) = ω(E_A({a})).
std::vector<double> outcome_distribution(const SpectralObservable& obs,
                                         const StateFunctional& omega);

// System ⊗ pointer carrier with the pointer-diagonal operator algebra
// A_A = {Σ_a B_a ⊗ |a><a|}.
class CompositeSystem {
 public:
  explicit CompositeSystem(const SpectralObservable& obs);

  int system_dim() const { return system_dim_; }
  int pointer_dim() const { return pointer_dim_; }
  int dim() const { return system_dim_ * pointer_dim_; }
  const std::vector<double>& labels() const { return labels_; }

  // Σ_a parts[a] ⊗ |a><a|.
  Matrix pointer_diagonal(const std::vector<Matrix>& parts) const;
  // ι(B) = B ⊗ 1.
  Matrix embed_system(const Matrix& b) const;
  // ι'(f) = 1 ⊗ diag(f).
  Matrix embed_pointer(const std::vector<Complex>& f) const;
  Matrix pointer_indicator(const std::vector<int>& outcomes) const;

  // Pointer-diagonal compression (X)_a = (1 ⊗ <a|) X (1 ⊗ |a>).
  Matrix component(const Matrix& x, int a) const;
  bool is_pointer_diagonal(const Matrix& x, double tol) const;

 private:
  int system_dim_;
  int pointer_dim_;
  std::vector<double> labels_;
};

// Single-step coupling V on the composite carrier plus the pointer's
// initial distribution.
class CouplingModel {
 public:
  CouplingModel(const CompositeSystem& composite, Matrix v,
                std::vector<double> pointer_init);

  // V = Σ_j E_j ⊗ C^j with C the cyclic shift on pointer levels: writes the
  // outcome index into a fresh pointer.
  static CouplingModel controlled_shift(const SpectralObservable& obs,
                                        const CompositeSystem& composite,
                                        int pointer_start = 0);

  const CompositeSystem& composite() const { return *composite_; }
  const Matrix& unitary() const { return v_; }
  const std::vector<double>& pointer_init() const { return pointer_init_; }
  Matrix pointer_density() const;

  // The full invariance V†(A_A)V ⊆ A_A; the instrument needs only the
  // centre part, which is checked separately.
  bool preserves_pointer_algebra() const { return preserves_algebra_; }
  bool preserves_pointer_centre() const { return preserves_centre_; }

 private:
  const CompositeSystem* composite_;
  Matrix v_;
  std::vector<double> pointer_init_;
  bool preserves_algebra_ = false;
  bool preserves_centre_ = false;
};

// The instrument pair (I, J) of a coupling.
class Instrument {
 public:
  explicit Instrument(const CouplingModel& cm);

  const CouplingModel& coupling() const { return *cm_; }

  // I(B̂) = Σ_a μ₀(a) (V† B̂ V)_a.
  Matrix observable_map(const Matrix& b_hat) const;
  // J(Δ|ω)(B) = (ω ⊗ μ₀)[V† (B ⊗ χ_Δ) V].
  Complex evaluate(const std::vector<int>& outcomes,
                   const StateFunctional& omega, const Matrix& b) const;
  double outcome_probability(const std::vector<int>& outcomes,
                             const StateFunctional& omega) const;

  // I as a completely positive unital map M_{N·n} -> M_N.
  CPMap as_cp_map() const;

 private:
  const CouplingModel* cm_;
};

Instrument build_instrument(const SpectralObservable& obs,
                            const CouplingModel& cm);

struct SchemeVerdict {
  bool passed = false;
  double max_deviation = 0.0;
};

// ω(E_A(Δ)) = (ω ⊗ μ₀)[V†(1 ⊗ χ_Δ)V] over singletons and complements.
SchemeVerdict verify_measurement_scheme(
    const SpectralObservable& obs, const CouplingModel& cm,
    const std::vector<StateFunctional>& test_states);

// Â* = ι'* ∘ I* as channels: pointer readout of I*(ω) equals the spectral
// outcome distribution.
SchemeVerdict realizability_factorization(const SpectralObservable& obs,
                                          const CouplingModel& cm,
                                          int num_probe_states,
                                          std::uint64_t seed = kDefaultSeed);

// J(Δ|ω) normalized; throws ZeroProbabilityOutcome when p(Δ|ω) vanishes.
StateFunctional conditional_output_state(const Instrument& inst,
                                         const std::vector<int>& outcomes,
                                         const StateFunctional& omega);

// Family of system states indexed by outcome labels.
struct PreparationFamily {
  std::vector<StateFunctional> states;  // one per outcome

  static PreparationFamily eigenfamily(const SpectralObservable& obs);
};

struct RepeatabilityVerdict {
  bool passed = false;
  std::vector<double> per_label_deviation;
};

RepeatabilityVerdict check_repeatability(const SpectralObservable& obs,
                                         const PreparationFamily& family);

// C_{A,φ}(B̂)(a) = ω_a(B̂_a), with dual ρ ↦ Σ_a ρ(a) ω_a ⊗ δ_a.
class PreparationChannel {
 public:
  PreparationChannel(const CompositeSystem& composite,
                     PreparationFamily family);

  std::vector<Complex> forward(const Matrix& b_hat) const;
  StateFunctional prepare(const std::vector<double>& pointer_dist) const;
  CPMap as_cp_map() const;

 private:
  const CompositeSystem* composite_;
  PreparationFamily family_;
};

struct CompositeCentralDecomposition {
  std::vector<double> pointer_distribution;
  std::vector<std::optional<StateFunctional>> conditional_states;
};

CompositeCentralDecomposition central_decomposition_composite(
    const CompositeSystem& composite, const StateFunctional& omega_hat);

struct PreparationReport {
  bool converged = false;
  int steps_taken = 0;
  double final_distance = 0.0;
  std::vector<double> distances;            // per step
  std::vector<double> final_pointer_dist;   // empirical measure at the end
};

// Collision-model iteration: ω ↦ Tr_pointer[V (ω ⊗ μ₀) V†], repeated with a
// fresh pointer each step, reporting the trace distance to the target.
PreparationReport prepare_state(const StateFunctional& initial,
                                const StateFunctional& target,
                                const CouplingModel& cm, int max_steps,
                                double threshold = 1e-6);

}  // namespace sectorlab

#endif  // SECTORLAB_MEASUREMENT_HPP
