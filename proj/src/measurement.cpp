#include "sectorlab/measurement.hpp"

#include <algorithm>
#include <cmath>

namespace sectorlab {

// ---------------------------------------------------------------------------
// SpectralObservable
// ---------------------------------------------------------------------------

SpectralObservable::SpectralObservable(Matrix a) : matrix_(std::move(a)) {
  if (!is_hermitian(matrix_, tolerances().eq))
    throw InvalidInput("spectral observable must be Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_);
  auto clusters = cluster_values(es.eigenvalues(), tolerances().cluster);
  for (const auto& cl : clusters) {
    double mean = 0.0;
    Matrix p = Matrix::Zero(matrix_.rows(), matrix_.cols());
    for (int idx : cl) {
      mean += es.eigenvalues()(idx);
      p += es.eigenvectors().col(idx) * es.eigenvectors().col(idx).adjoint();
    }
    spectrum_.push_back(mean / static_cast<double>(cl.size()));
    projections_.push_back(std::move(p));
  }
  // Resolution of the identity and spectral reconstruction.
  Matrix sum = Matrix::Zero(matrix_.rows(), matrix_.cols());
  Matrix rebuilt = sum;
  for (std::size_t i = 0; i < spectrum_.size(); ++i) {
    sum += projections_[i];
    rebuilt += spectrum_[i] * projections_[i];
  }
  if (!approx_equal(sum, Matrix::Identity(matrix_.rows(), matrix_.cols()),
                    1e-9) ||
      !approx_equal(rebuilt, matrix_, 1e-7))
    throw InternalInconsistency("spectral decomposition failed to verify");
}

Matrix SpectralObservable::projection_for(
    const std::vector<int>& outcomes) const {
  Matrix p = Matrix::Zero(matrix_.rows(), matrix_.cols());
  for (int a : outcomes) p += projection(a);
  return p;
}

Matrix functional_calculus(const SpectralObservable& obs,
                           const std::vector<Complex>& values) {
  if (static_cast<int>(values.size()) != obs.num_outcomes())
    throw InvalidInput("functional_calculus: one value per spectral point");
  Matrix out = Matrix::Zero(obs.dim(), obs.dim());
  for (int a = 0; a < obs.num_outcomes(); ++a)
    out += values[static_cast<std::size_t>(a)] * obs.projection(a);
  return out;
}

std::vector<double> outcome_distribution(const SpectralObservable& obs,
                                         const StateFunctional& omega) {
  std::vector<double> p;
  double total = 0.0;
  for (int a = 0; a < obs.num_outcomes(); ++a) {
    double w = std::max(0.0, omega.real_expectation(obs.projection(a)));
    p.push_back(w);
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-10)
    throw InternalInconsistency("outcome distribution does not normalize");
  return p;
}

// ---------------------------------------------------------------------------
// CompositeSystem
// ---------------------------------------------------------------------------

CompositeSystem::CompositeSystem(const SpectralObservable& obs)
    : system_dim_(obs.dim()),
      pointer_dim_(obs.num_outcomes()),
      labels_(obs.spectrum()) {}

Matrix CompositeSystem::pointer_diagonal(
    const std::vector<Matrix>& parts) const {
  if (static_cast<int>(parts.size()) != pointer_dim_)
    throw InvalidInput("pointer_diagonal: one part per label");
  Matrix out = Matrix::Zero(dim(), dim());
  for (int a = 0; a < pointer_dim_; ++a) {
    Matrix e = Matrix::Zero(pointer_dim_, pointer_dim_);
    e(a, a) = 1.0;
    out += kron(parts[static_cast<std::size_t>(a)], e);
  }
  return out;
}

Matrix CompositeSystem::embed_system(const Matrix& b) const {
  return kron(b, Matrix::Identity(pointer_dim_, pointer_dim_));
}

Matrix CompositeSystem::embed_pointer(const std::vector<Complex>& f) const {
  if (static_cast<int>(f.size()) != pointer_dim_)
    throw InvalidInput("embed_pointer: one value per label");
  Matrix d = Matrix::Zero(pointer_dim_, pointer_dim_);
  for (int a = 0; a < pointer_dim_; ++a) d(a, a) = f[static_cast<std::size_t>(a)];
  return kron(Matrix::Identity(system_dim_, system_dim_), d);
}

Matrix CompositeSystem::pointer_indicator(
    const std::vector<int>& outcomes) const {
  std::vector<Complex> f(static_cast<std::size_t>(pointer_dim_), 0.0);
  for (int a : outcomes) f.at(static_cast<std::size_t>(a)) = 1.0;
  return embed_pointer(f);
}

Matrix CompositeSystem::component(const Matrix& x, int a) const {
  Matrix out(system_dim_, system_dim_);
  for (int i = 0; i < system_dim_; ++i)
    for (int j = 0; j < system_dim_; ++j)
      out(i, j) = x(i * pointer_dim_ + a, j * pointer_dim_ + a);
  return out;
}

bool CompositeSystem::is_pointer_diagonal(const Matrix& x, double tol) const {
  std::vector<Matrix> parts;
  for (int a = 0; a < pointer_dim_; ++a) parts.push_back(component(x, a));
  return approx_equal(x, pointer_diagonal(parts), tol);
}

// ---------------------------------------------------------------------------
// CouplingModel
// ---------------------------------------------------------------------------

CouplingModel::CouplingModel(const CompositeSystem& composite, Matrix v,
                             std::vector<double> pointer_init)
    : composite_(&composite),
      v_(std::move(v)),
      pointer_init_(std::move(pointer_init)) {
  if (v_.rows() != composite.dim() || v_.cols() != composite.dim())
    throw InvalidInput("coupling: dynamics has the wrong dimension");
  if (!is_unitary(v_, 1e-8))
    throw InvalidInput("coupling: dynamics must be unitary");
  if (static_cast<int>(pointer_init_.size()) != composite.pointer_dim())
    throw InvalidInput("coupling: pointer distribution size mismatch");
  double total = 0.0;
  for (double w : pointer_init_) {
    if (w < -1e-12) throw InvalidInput("coupling: negative pointer weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-10)
    throw InvalidInput("coupling: pointer distribution does not normalize");

  // Spanning-set checks of pointer-diagonality preservation.
  const int n = composite.system_dim();
  const int m = composite.pointer_dim();
  preserves_algebra_ = true;
  for (int i = 0; i < n && preserves_algebra_; ++i)
    for (int j = 0; j < n && preserves_algebra_; ++j)
      for (int a = 0; a < m && preserves_algebra_; ++a) {
        std::vector<Matrix> parts(static_cast<std::size_t>(m),
                                  Matrix::Zero(n, n));
        parts[static_cast<std::size_t>(a)] = Matrix::Zero(n, n);
        parts[static_cast<std::size_t>(a)](i, j) = 1.0;
        Matrix moved =
            v_.adjoint() * composite.pointer_diagonal(parts) * v_;
        if (!composite.is_pointer_diagonal(moved, 1e-9))
          preserves_algebra_ = false;
      }
  preserves_centre_ = true;
  for (int a = 0; a < m && preserves_centre_; ++a) {
    Matrix moved = v_.adjoint() * composite.pointer_indicator({a}) * v_;
    if (!composite.is_pointer_diagonal(moved, 1e-9)) preserves_centre_ = false;
  }
}

CouplingModel CouplingModel::controlled_shift(const SpectralObservable& obs,
                                              const CompositeSystem& composite,
                                              int pointer_start) {
  const int m = composite.pointer_dim();
  Matrix shift = Matrix::Zero(m, m);
  for (int a = 0; a < m; ++a) shift((a + 1) % m, a) = 1.0;
  Matrix v = Matrix::Zero(composite.dim(), composite.dim());
  Matrix power = Matrix::Identity(m, m);
  for (int j = 0; j < m; ++j) {
    v += kron(obs.projection(j), power);
    power = shift * power;
  }
  std::vector<double> init(static_cast<std::size_t>(m), 0.0);
  init.at(static_cast<std::size_t>(pointer_start)) = 1.0;
  return CouplingModel(composite, std::move(v), std::move(init));
}

Matrix CouplingModel::pointer_density() const {
  const int m = composite_->pointer_dim();
  Matrix d = Matrix::Zero(m, m);
  for (int a = 0; a < m; ++a) d(a, a) = pointer_init_[static_cast<std::size_t>(a)];
  return d;
}

// ---------------------------------------------------------------------------
// Instrument
// ---------------------------------------------------------------------------

Instrument::Instrument(const CouplingModel& cm) : cm_(&cm) {
  if (!cm.preserves_pointer_centre())
    throw NotAnInstrumentCoupling(
        "the dynamics moves pointer indicators off the diagonal");
}

Matrix Instrument::observable_map(const Matrix& b_hat) const {
  const CompositeSystem& comp = cm_->composite();
  Matrix moved = cm_->unitary().adjoint() * b_hat * cm_->unitary();
  Matrix out = Matrix::Zero(comp.system_dim(), comp.system_dim());
  for (int a = 0; a < comp.pointer_dim(); ++a)
    out += cm_->pointer_init()[static_cast<std::size_t>(a)] *
           comp.component(moved, a);
  return out;
}

Complex Instrument::evaluate(const std::vector<int>& outcomes,
                             const StateFunctional& omega,
                             const Matrix& b) const {
  const CompositeSystem& comp = cm_->composite();
  Matrix b_hat = kron(b, Matrix::Identity(comp.pointer_dim(),
                                          comp.pointer_dim())) *
                 comp.pointer_indicator(outcomes);
  Matrix joint = kron(omega.density(), cm_->pointer_density());
  Matrix moved = cm_->unitary().adjoint() * b_hat * cm_->unitary();
  return (joint * moved).trace();
}

double Instrument::outcome_probability(const std::vector<int>& outcomes,
                                       const StateFunctional& omega) const {
  const CompositeSystem& comp = cm_->composite();
  return evaluate(outcomes, omega,
                  Matrix::Identity(comp.system_dim(), comp.system_dim()))
      .real();
}

CPMap Instrument::as_cp_map() const {
  const CompositeSystem& comp = cm_->composite();
  const int big = comp.dim();
  const int n = comp.system_dim();
  Matrix s(Eigen::Index(n) * n, Eigen::Index(big) * big);
  for (int i = 0; i < big; ++i)
    for (int j = 0; j < big; ++j) {
      Matrix e = Matrix::Zero(big, big);
      e(i, j) = 1.0;
      s.col(Eigen::Index(j) * big + i) = vec(observable_map(e));
    }
  return CPMap::from_superop(std::move(s), big, n,
                             CPMap::Direction::observable);
}

Instrument build_instrument(const SpectralObservable& obs,
                            const CouplingModel& cm) {
  if (cm.composite().pointer_dim() != obs.num_outcomes() ||
      cm.composite().system_dim() != obs.dim())
    throw InvalidInput("build_instrument: coupling does not fit the observable");
  return Instrument(cm);
}

// ---------------------------------------------------------------------------
// Scheme verification
// ---------------------------------------------------------------------------

SchemeVerdict verify_measurement_scheme(
    const SpectralObservable& obs, const CouplingModel& cm,
    const std::vector<StateFunctional>& test_states) {
  const CompositeSystem& comp = cm.composite();
  SchemeVerdict v;
  for (const StateFunctional& omega : test_states) {
    Matrix joint = kron(omega.density(), cm.pointer_density());
    std::vector<std::vector<int>> deltas;
    for (int a = 0; a < obs.num_outcomes(); ++a) {
      deltas.push_back({a});
      std::vector<int> complement;
      for (int b = 0; b < obs.num_outcomes(); ++b)
        if (b != a) complement.push_back(b);
      if (!complement.empty()) deltas.push_back(complement);
    }
    for (const auto& delta : deltas) {
      double lhs = omega.real_expectation(obs.projection_for(delta));
      Matrix moved = cm.unitary().adjoint() * comp.pointer_indicator(delta) *
                     cm.unitary();
      double rhs = (joint * moved).trace().real();
      v.max_deviation = std::max(v.max_deviation, std::abs(lhs - rhs));
    }
  }
  v.passed = v.max_deviation <= 1e-10;
  return v;
}

SchemeVerdict realizability_factorization(const SpectralObservable& obs,
                                          const CouplingModel& cm,
                                          int num_probe_states,
                                          std::uint64_t seed) {
  Instrument inst(cm);
  Rng rng(seed);
  SchemeVerdict v;
  for (int t = 0; t < num_probe_states; ++t) {
    StateFunctional omega(random_density(obs.dim(), rng));
    std::vector<double> spectral = outcome_distribution(obs, omega);
    for (int a = 0; a < obs.num_outcomes(); ++a) {
      // Pointer readout of I*(ω) at label a.
      double readout = inst.outcome_probability({a}, omega);
      v.max_deviation = std::max(
          v.max_deviation,
          std::abs(readout - spectral[static_cast<std::size_t>(a)]));
    }
  }
  v.passed = v.max_deviation <= 1e-9;
  return v;
}

StateFunctional conditional_output_state(const Instrument& inst,
                                         const std::vector<int>& outcomes,
                                         const StateFunctional& omega) {
  double p = inst.outcome_probability(outcomes, omega);
  if (p <= 1e-12)
    throw ZeroProbabilityOutcome("conditional state on a null outcome set");
  const CompositeSystem& comp = inst.coupling().composite();
  const int n = comp.system_dim();
  Matrix rho(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Matrix e = Matrix::Zero(n, n);
      e(j, i) = 1.0;  // ω'(E_ij) fills entry (i, j)
      rho(i, j) = inst.evaluate(outcomes, omega, e) / p;
    }
  rho = 0.5 * (rho + rho.adjoint());
  return StateFunctional(rho, omega.label() + "|outcome");
}

// ---------------------------------------------------------------------------
// Preparation and repeatability
// ---------------------------------------------------------------------------

PreparationFamily PreparationFamily::eigenfamily(
    const SpectralObservable& obs) {
  PreparationFamily fam;
  for (int a = 0; a < obs.num_outcomes(); ++a) {
    Matrix rho = obs.projection(a);
    rho /= rho.trace().real();
    fam.states.emplace_back(rho, "eigen@" + format_float(obs.spectrum()[
                                                static_cast<std::size_t>(a)]));
  }
  return fam;
}

RepeatabilityVerdict check_repeatability(const SpectralObservable& obs,
                                         const PreparationFamily& family) {
  if (static_cast<int>(family.states.size()) != obs.num_outcomes())
    throw InvalidInput("repeatability: one state per outcome required");
  RepeatabilityVerdict v;
  v.passed = true;
  for (int a = 0; a < obs.num_outcomes(); ++a) {
    std::vector<double> p =
        outcome_distribution(obs, family.states[static_cast<std::size_t>(a)]);
    double dev = std::abs(p[static_cast<std::size_t>(a)] - 1.0);
    for (int b = 0; b < obs.num_outcomes(); ++b)
      if (b != a) dev = std::max(dev, std::abs(p[static_cast<std::size_t>(b)]));
    v.per_label_deviation.push_back(dev);
    if (dev > 1e-9) v.passed = false;
  }
  return v;
}

PreparationChannel::PreparationChannel(const CompositeSystem& composite,
                                       PreparationFamily family)
    : composite_(&composite), family_(std::move(family)) {
  if (static_cast<int>(family_.states.size()) != composite.pointer_dim())
    throw InvalidInput("preparation channel: one state per label required");
}

std::vector<Complex> PreparationChannel::forward(const Matrix& b_hat) const {
  std::vector<Complex> out;
  for (int a = 0; a < composite_->pointer_dim(); ++a)
    out.push_back(
        family_.states[static_cast<std::size_t>(a)](composite_->component(
            b_hat, a)));
  return out;
}

StateFunctional PreparationChannel::prepare(
    const std::vector<double>& pointer_dist) const {
  if (static_cast<int>(pointer_dist.size()) != composite_->pointer_dim())
    throw InvalidInput("prepare: distribution size mismatch");
  Matrix rho = Matrix::Zero(composite_->dim(), composite_->dim());
  const int m = composite_->pointer_dim();
  for (int a = 0; a < m; ++a) {
    Matrix e = Matrix::Zero(m, m);
    e(a, a) = 1.0;
    rho += std::max(0.0, pointer_dist[static_cast<std::size_t>(a)]) *
           kron(family_.states[static_cast<std::size_t>(a)].density(), e);
  }
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace().real();
  return StateFunctional(rho, "prepared");
}

CPMap PreparationChannel::as_cp_map() const {
  const int big = composite_->dim();
  const int m = composite_->pointer_dim();
  Matrix s(Eigen::Index(m) * m, Eigen::Index(big) * big);
  for (int i = 0; i < big; ++i)
    for (int j = 0; j < big; ++j) {
      Matrix e = Matrix::Zero(big, big);
      e(i, j) = 1.0;
      std::vector<Complex> vals = forward(e);
      Matrix diag = Matrix::Zero(m, m);
      for (int a = 0; a < m; ++a) diag(a, a) = vals[static_cast<std::size_t>(a)];
      s.col(Eigen::Index(j) * big + i) = vec(diag);
    }
  return CPMap::from_superop(std::move(s), big, m,
                             CPMap::Direction::observable);
}

CompositeCentralDecomposition central_decomposition_composite(
    const CompositeSystem& composite, const StateFunctional& omega_hat) {
  if (omega_hat.dim() != composite.dim())
    throw InvalidInput("central decomposition: dimension mismatch");
  CompositeCentralDecomposition out;
  const int m = composite.pointer_dim();
  const int n = composite.system_dim();
  for (int a = 0; a < m; ++a) {
    // μ(a) = ω̂(1 ⊗ |a><a|); conditional system state from the block.
    Matrix block(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        block(i, j) = omega_hat.density()(i * m + a, j * m + a);
    double w = std::max(0.0, block.trace().real());
    out.pointer_distribution.push_back(w);
    if (w > 1e-12) {
      Matrix cond = block / w;
      cond = 0.5 * (cond + cond.adjoint());
      out.conditional_states.emplace_back(StateFunctional(cond));
    } else {
      out.conditional_states.emplace_back(std::nullopt);
    }
  }
  return out;
}

PreparationReport prepare_state(const StateFunctional& initial,
                                const StateFunctional& target,
                                const CouplingModel& cm, int max_steps,
                                double threshold) {
  const CompositeSystem& comp = cm.composite();
  if (initial.dim() != comp.system_dim() || target.dim() != comp.system_dim())
    throw InvalidInput("prepare_state: dimension mismatch");
  PreparationReport rep;
  Matrix rho = initial.density();
  Matrix pointer0 = cm.pointer_density();
  const int n = comp.system_dim();
  const int m = comp.pointer_dim();
  Matrix joint;
  rep.distances.push_back(trace_distance(rho, target.density()));
  for (int step = 0; step < max_steps; ++step) {
    joint = cm.unitary() * kron(rho, pointer0) * cm.unitary().adjoint();
    // Trace out the pointer.
    Matrix next = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Complex acc = 0.0;
        for (int a = 0; a < m; ++a) acc += joint(i * m + a, j * m + a);
        next(i, j) = acc;
      }
    next = 0.5 * (next + next.adjoint());
    // The collision step must stay trace-preserving and positive.
    if (std::abs(next.trace().real() - 1.0) > 1e-10)
      throw InternalInconsistency("collision step lost normalization");
    Eigen::SelfAdjointEigenSolver<Matrix> es(next);
    if (es.eigenvalues().minCoeff() < -1e-10)
      throw InternalInconsistency("collision step lost positivity");
    rho = next;
    rep.steps_taken = step + 1;
    rep.distances.push_back(trace_distance(rho, target.density()));
    if (rep.distances.back() < threshold) break;
  }
  rep.final_distance = rep.distances.back();
  rep.converged = rep.final_distance < threshold;
  // Empirical pointer measure at the final step.
  if (joint.size() > 0) {
    for (int a = 0; a < m; ++a) {
      double w = 0.0;
      for (int i = 0; i < n; ++i) w += joint(i * m + a, i * m + a).real();
      rep.final_pointer_dist.push_back(w);
    }
  } else {
    rep.final_pointer_dist = cm.pointer_init();
  }
  return rep;
}

}  // namespace sectorlab
