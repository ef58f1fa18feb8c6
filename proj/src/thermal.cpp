#include "sectorlab/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sectorlab {

void ClassifyingGrid::validate() const {
  if (points.empty()) throw InvalidInput("grid: no points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].beta > 0))
      throw InvalidInput("grid: inverse temperatures must be positive");
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (points[i].beta == points[j].beta &&
          points[i].extras == points[j].extras)
        throw InvalidInput("grid: duplicate point");
    }
  }
}

ClassifyingGrid make_beta_grid(const std::vector<double>& betas) {
  ClassifyingGrid g;
  for (double b : betas) {
    ClassifyingGrid::Point p;
    p.beta = b;
    p.label = "beta=" + format_float(b);
    g.points.push_back(std::move(p));
  }
  g.validate();
  return g;
}

ClassifyingGrid make_grid(const std::vector<std::vector<double>>& points) {
  ClassifyingGrid g;
  for (const auto& tuple : points) {
    if (tuple.empty())
      throw InvalidInput("grid: empty parameter tuple");
    ClassifyingGrid::Point p;
    p.beta = tuple.front();
    p.extras.assign(tuple.begin() + 1, tuple.end());
    p.label = "beta=" + format_float(p.beta);
    for (double mu : p.extras) p.label += ",mu=" + format_float(mu);
    g.points.push_back(std::move(p));
  }
  g.validate();
  return g;
}

ReferenceStateFamily::ReferenceStateFamily(Matrix hamiltonian,
                                           ClassifyingGrid grid)
    : hamiltonian_(std::move(hamiltonian)), grid_(std::move(grid)) {
  grid_.validate();
  if (!is_hermitian(hamiltonian_, tolerances().eq))
    throw InvalidInput("reference family: Hamiltonian must be Hermitian");
  for (const auto& p : grid_.points) {
    Matrix g = hermitian_exp(hamiltonian_, -p.beta);
    g /= g.trace().real();
    states_.emplace_back(std::move(g), "gibbs@" + p.label);
  }
}

ObservableSubspace::ObservableSubspace(std::vector<Matrix> basis,
                                       std::vector<std::string> names)
    : basis_(std::move(basis)), names_(std::move(names)) {
  if (basis_.empty()) throw InvalidInput("observable subspace: empty basis");
  const Eigen::Index n = basis_.front().rows();
  std::vector<Vector> vv;
  for (const Matrix& m : basis_) {
    if (!is_hermitian(m, tolerances().eq))
      throw InvalidInput("observable subspace: basis must be Hermitian");
    vv.push_back(vec(m));
  }
  if (span_rank(vv, 1e-9) != static_cast<int>(basis_.size()))
    throw InvalidInput("observable subspace: basis is linearly dependent");
  // The identity must lie in the span.
  Vector id = vec(Matrix::Identity(n, n));
  std::vector<Vector> ortho = canonical_span(vv, 1e-9);
  Vector residual = id - project_onto(ortho, id);
  if (residual.norm() > 1e-9 * std::sqrt(double(n)))
    throw InvalidInput("observable subspace: identity not in the span");
  if (names_.empty())
    for (std::size_t i = 0; i < basis_.size(); ++i)
      names_.push_back("Phi" + std::to_string(i));
  if (names_.size() != basis_.size())
    throw InvalidInput("observable subspace: one name per basis element");
}

void ThermalMeasure::validate() const {
  double total = 0.0;
  for (double w : weights) {
    if (w < -1e-12) throw InvalidInput("thermal measure: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-10)
    throw InvalidInput("thermal measure: weights do not sum to 1");
}

double SignedMeasureSplit::minus_mass() const {
  double m = 0.0;
  for (double w : nu_minus) m += w;
  return m;
}

// ---------------------------------------------------------------------------

RealVector thermal_function(const ReferenceStateFamily& fam, const Matrix& a) {
  if (a.rows() != fam.dim() || a.cols() != fam.dim())
    throw InvalidInput("thermal_function: dimension mismatch");
  RealVector out(fam.grid().size());
  for (int i = 0; i < fam.grid().size(); ++i) {
    Complex v = fam.state(i)(a);
    if (std::abs(v.imag()) > 1e-9)
      throw InvalidInput("thermal_function: observable must be Hermitian");
    out(i) = v.real();
  }
  return out;
}

StateFunctional cq_channel(const ReferenceStateFamily& fam,
                           const ThermalMeasure& rho) {
  rho.validate();
  if (rho.size() != fam.grid().size())
    throw InvalidInput("cq_channel: measure size mismatch");
  Matrix mix = Matrix::Zero(fam.dim(), fam.dim());
  for (int i = 0; i < rho.size(); ++i)
    mix += std::max(0.0, rho.weights[static_cast<std::size_t>(i)]) *
           fam.state(i).density();
  mix = 0.5 * (mix + mix.adjoint());
  mix /= mix.trace().real();
  return StateFunctional(mix, "thermal-mixture");
}

namespace {

// M[i][k] = ω_{β_i}(Φ_k).
RealMatrix moment_matrix(const ReferenceStateFamily& fam,
                         const ObservableSubspace& s) {
  RealMatrix m(fam.grid().size(), s.dim());
  for (int k = 0; k < s.dim(); ++k)
    m.col(k) = thermal_function(fam, s.basis()[static_cast<std::size_t>(k)]);
  return m;
}

RealVector observable_expectations(const StateFunctional& omega,
                                   const ObservableSubspace& s) {
  RealVector y(s.dim());
  for (int k = 0; k < s.dim(); ++k)
    y(k) = omega.real_expectation(s.basis()[static_cast<std::size_t>(k)]);
  return y;
}

int matrix_rank(const RealMatrix& m, double tol) {
  Eigen::JacobiSVD<RealMatrix> svd(m);
  int r = 0;
  double scale = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol * std::max(1.0, scale)) ++r;
  return r;
}

}  // namespace

DiscriminationReport check_discrimination(const ReferenceStateFamily& fam,
                                          const ObservableSubspace& s) {
  DiscriminationReport rep;
  rep.moment_matrix = moment_matrix(fam, s);
  rep.rank = matrix_rank(rep.moment_matrix, 1e-10);
  rep.discriminating = (rep.rank == fam.grid().size());
  rep.separates_points = true;
  for (int i = 0; i < rep.moment_matrix.rows(); ++i)
    for (int j = i + 1; j < rep.moment_matrix.rows(); ++j)
      if ((rep.moment_matrix.row(i) - rep.moment_matrix.row(j)).norm() < 1e-10)
        rep.separates_points = false;
  return rep;
}

ThermalMeasure invert_on_grid(const ReferenceStateFamily& fam,
                              const StateFunctional& omega,
                              const ObservableSubspace& s) {
  const double feas = tolerances().feas;
  const int n = fam.grid().size();
  const int k = s.dim();
  RealMatrix m = moment_matrix(fam, s);
  RealVector y = observable_expectations(omega, s);

  // minimize Σ(u + v)  s.t.  Mᵀρ - u + v = y, Σρ = 1, all vars >= 0.
  RealMatrix a = RealMatrix::Zero(k + 1, n + 2 * k);
  a.block(0, 0, k, n) = m.transpose();
  a.block(0, n, k, k) = -RealMatrix::Identity(k, k);
  a.block(0, n + k, k, k) = RealMatrix::Identity(k, k);
  a.row(k).head(n).setOnes();
  RealVector b(k + 1);
  b.head(k) = y;
  b(k) = 1.0;
  RealVector c = RealVector::Zero(n + 2 * k);
  c.tail(2 * k).setOnes();
  LpResult r = solve_lp(a, b, c, feas);
  if (r.status != LpResult::Status::optimal || r.objective > 1e-8)
    throw NotInK("no probability measure on the grid reproduces the state "
                 "on the chosen observables");
  ThermalMeasure rho;
  rho.weights.assign(r.x.data(), r.x.data() + n);
  for (double& w : rho.weights) w = std::max(0.0, w);
  double total = 0.0;
  for (double w : rho.weights) total += w;
  for (double& w : rho.weights) w /= total;
  return rho;
}

std::optional<ThermalMeasure> is_s_thermal(const ReferenceStateFamily& fam,
                                           const StateFunctional& omega,
                                           const ObservableSubspace& s) {
  const double feas = tolerances().feas;
  const int n = fam.grid().size();
  const int k = s.dim();
  RealMatrix m = moment_matrix(fam, s);
  RealVector y = observable_expectations(omega, s);
  RealMatrix a(k + 1, n);
  a.topRows(k) = m.transpose();
  a.row(k).setOnes();
  RealVector b(k + 1);
  b.head(k) = y;
  b(k) = 1.0;
  auto x = lp_feasible_point(a, b, feas);
  if (!x) return std::nullopt;
  ThermalMeasure rho;
  rho.weights.assign(x->data(), x->data() + n);
  for (double& w : rho.weights) w = std::max(0.0, w);
  double total = 0.0;
  for (double w : rho.weights) total += w;
  for (double& w : rho.weights) w /= total;
  return rho;
}

NormBoundReport check_norm_bound(const ReferenceStateFamily& fam,
                                 const StateFunctional& omega,
                                 const ObservableSubspace& s,
                                 const std::vector<int>& b_subset) {
  if (b_subset.empty())
    throw InvalidInput("check_norm_bound: empty grid subset");
  const double feas = tolerances().feas;
  const int k = s.dim();
  const int nb = static_cast<int>(b_subset.size());
  RealMatrix m = moment_matrix(fam, s);
  RealVector y = observable_expectations(omega, s);

  // maximize y·c  subject to  -1 <= (M c)(i) <= 1 for i in B,
  // with free coefficients c = c⁺ - c⁻ and slack variables.
  // Standard form: M(c⁺-c⁻) + s₁ = 1, -M(c⁺-c⁻) + s₂ = 1.
  const int nvar = 2 * k + 2 * nb;
  RealMatrix a = RealMatrix::Zero(2 * nb, nvar);
  RealVector b = RealVector::Ones(2 * nb);
  for (int i = 0; i < nb; ++i) {
    for (int j = 0; j < k; ++j) {
      double mij = m(b_subset[static_cast<std::size_t>(i)], j);
      a(i, j) = mij;
      a(i, k + j) = -mij;
      a(nb + i, j) = -mij;
      a(nb + i, k + j) = mij;
    }
    a(i, 2 * k + i) = 1.0;
    a(nb + i, 2 * k + nb + i) = 1.0;
  }
  RealVector c = RealVector::Zero(nvar);
  for (int j = 0; j < k; ++j) {
    c(j) = -y(j);  // minimize -y·c == maximize y·c
    c(k + j) = y(j);
  }
  LpResult r = solve_lp(a, b, c, feas);
  NormBoundReport rep;
  if (r.status == LpResult::Status::unbounded) {
    // A direction with C(Φ)|_B = 0 but ω(Φ) != 0: τ_B is a semi-norm here.
    rep.holds = false;
    rep.degenerate = true;
    Matrix phi = Matrix::Zero(fam.dim(), fam.dim());
    for (int j = 0; j < k; ++j)
      phi += (r.ray(j) - r.ray(k + j)) * s.basis()[static_cast<std::size_t>(j)];
    rep.certificate = phi;
    rep.optimum = std::numeric_limits<double>::infinity();
    return rep;
  }
  if (r.status != LpResult::Status::optimal)
    throw InternalInconsistency("norm-bound LP failed unexpectedly");
  rep.optimum = -r.objective;
  rep.holds = rep.optimum <= 1.0 + 1e-8;
  if (!rep.holds) {
    Matrix phi = Matrix::Zero(fam.dim(), fam.dim());
    for (int j = 0; j < k; ++j)
      phi += (r.x(j) - r.x(k + j)) * s.basis()[static_cast<std::size_t>(j)];
    rep.certificate = phi;
  }
  return rep;
}

SignedMeasureSplit signed_extension(const ReferenceStateFamily& fam,
                                    const StateFunctional& omega,
                                    const ObservableSubspace& s) {
  const double feas = tolerances().feas;
  const int n = fam.grid().size();
  const int k = s.dim();
  RealMatrix m = moment_matrix(fam, s);
  RealVector y = observable_expectations(omega, s);

  // minimize mass(ν₋)  s.t.  Mᵀ(ν₊ - ν₋) = y, ν± >= 0.
  RealMatrix a(k, 2 * n);
  a.leftCols(n) = m.transpose();
  a.rightCols(n) = -m.transpose();
  RealVector c = RealVector::Zero(2 * n);
  c.tail(n).setOnes();
  LpResult r = solve_lp(a, y, c, feas);
  if (r.status != LpResult::Status::optimal)
    throw NoExtension(
        "the state is not reproducible by any signed measure on the grid");
  SignedMeasureSplit split;
  split.nu_plus.assign(r.x.data(), r.x.data() + n);
  split.nu_minus.assign(r.x.data() + n, r.x.data() + 2 * n);
  for (double& w : split.nu_plus) w = std::max(0.0, w);
  for (double& w : split.nu_minus) w = std::max(0.0, w);
  return split;
}

std::vector<SiteDeviation> classify_deviation(
    const ReferenceStateFamily& fam,
    const std::vector<std::pair<std::string, StateFunctional>>& sites,
    const ObservableSubspace& s) {
  std::vector<SiteDeviation> out;
  for (const auto& [name, omega] : sites) {
    SiteDeviation dev;
    dev.site = name;
    std::vector<double> weights;
    if (auto rho = is_s_thermal(fam, omega, s)) {
      dev.thermal = true;
      dev.nu_minus_mass = 0.0;
      weights = rho->weights;
    } else {
      dev.thermal = false;
      SignedMeasureSplit split = signed_extension(fam, omega, s);
      dev.nu_minus_mass = split.minus_mass();
      weights = split.nu_plus;
      double total = 0.0;
      for (double w : weights) total += w;
      if (total > 0)
        for (double& w : weights) w /= total;
    }
    double mean = 0.0, second = 0.0;
    for (int i = 0; i < fam.grid().size(); ++i) {
      double beta = fam.grid().points[static_cast<std::size_t>(i)].beta;
      mean += weights[static_cast<std::size_t>(i)] * beta;
      second += weights[static_cast<std::size_t>(i)] * beta * beta;
    }
    dev.mean_beta = mean;
    dev.beta_variance = std::max(0.0, second - mean * mean);
    out.push_back(std::move(dev));
  }
  return out;
}

int maximal_thermal_subspace(const ReferenceStateFamily& fam,
                             const StateFunctional& omega,
                             const std::vector<ObservableSubspace>& chain) {
  for (std::size_t i = 1; i < chain.size(); ++i) {
    if (chain[i].dim() <= chain[i - 1].dim())
      throw InvalidInput("maximal_thermal_subspace: chain must be strictly "
                         "nested by dimension");
    std::vector<Vector> big;
    for (const Matrix& m : chain[i].basis()) big.push_back(vec(m));
    std::vector<Vector> ortho = canonical_span(big, 1e-9);
    for (const Matrix& m : chain[i - 1].basis()) {
      Vector v = vec(m);
      if ((v - project_onto(ortho, v)).norm() > 1e-8 * std::max(1.0, v.norm()))
        throw InvalidInput("maximal_thermal_subspace: chain is not nested");
    }
  }
  int best = -1;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (is_s_thermal(fam, omega, chain[i]))
      best = static_cast<int>(i);
    else
      break;  // monotone: failure propagates outward in a nested chain
  }
  return best;
}

bool states_equivalent(const StateFunctional& omega1,
                       const StateFunctional& omega2,
                       const ObservableSubspace& s) {
  for (const Matrix& phi : s.basis()) {
    if (std::abs(omega1(phi) - omega2(phi)) > 1e-9) return false;
  }
  return true;
}

ThermalAdjunctionVerdict verify_adjunction_thermal(
    const ReferenceStateFamily& fam, const StateFunctional& omega,
    const ThermalMeasure& rho, const ObservableSubspace& s) {
  rho.validate();
  if (rho.size() != fam.grid().size())
    throw InvalidInput("verify_adjunction_thermal: measure size mismatch");
  ThermalAdjunctionVerdict v;
  v.states_agree_on_s = states_equivalent(omega, cq_channel(fam, rho), s);

  // Right side: every inverse image of ω agrees with ρ on the thermal
  // functions C(Φ). All inverse images share the values ω(Φ), so the class
  // membership reduces to ρ(C(Φ)) = ω(Φ) plus the existence of an inverse
  // image at all.
  RealMatrix m = moment_matrix(fam, s);
  RealVector y = observable_expectations(omega, s);
  bool exists = true;
  try {
    (void)signed_extension(fam, omega, s);
  } catch (const NoExtension&) {
    exists = false;
  }
  RealVector rho_vec(rho.size());
  for (int i = 0; i < rho.size(); ++i)
    rho_vec(i) = rho.weights[static_cast<std::size_t>(i)];
  bool agrees = (m.transpose() * rho_vec - y).lpNorm<Eigen::Infinity>() <= 1e-9;
  v.measure_in_class = exists && agrees;
  v.isomorphism_holds = (v.states_agree_on_s == v.measure_in_class);
  return v;
}

}  // namespace sectorlab
