#include "sectorlab/algebra.hpp"

#include <algorithm>
#include <cmath>

namespace sectorlab {

namespace {

// Linear-combination coefficients of m in an orthonormal basis, plus the
// residual after projecting out the span.
double span_residual(const std::vector<Matrix>& basis, const Matrix& m) {
  Matrix rem = m;
  for (const Matrix& b : basis) rem -= hs_inner(b, m) * b;
  return rem.norm();
}

}  // namespace

// ---------------------------------------------------------------------------
// FiniteCStarAlgebra
// ---------------------------------------------------------------------------

FiniteCStarAlgebra FiniteCStarAlgebra::multi_matrix(
    const std::vector<int>& block_dims) {
  if (block_dims.empty()) throw InvalidInput("multi_matrix: no blocks");
  int total = 0;
  for (int d : block_dims) {
    if (d <= 0) throw InvalidInput("multi_matrix: nonpositive block dim");
    total += d;
  }
  FiniteCStarAlgebra alg;
  alg.ambient_dim_ = total;
  int offset = 0;
  for (int d : block_dims) {
    alg.blocks_.push_back({d, offset});
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Matrix e = Matrix::Zero(total, total);
        e(offset + i, offset + j) = 1.0;
        alg.basis_.push_back(e);
      }
    offset += d;
  }
  alg.unit_ = Matrix::Identity(total, total);
  return alg;
}

FiniteCStarAlgebra FiniteCStarAlgebra::full(int n) {
  return multi_matrix({n});
}

FiniteCStarAlgebra FiniteCStarAlgebra::from_span(
    const std::vector<Matrix>& span, int ambient_dim) {
  const double tol = tolerances().eq;
  std::vector<Matrix> closed;
  for (const Matrix& m : span) {
    if (m.rows() != ambient_dim || m.cols() != ambient_dim)
      throw InvalidInput("from_span: matrix shape does not match ambient_dim");
    closed.push_back(m);
    closed.push_back(m.adjoint());
  }
  std::vector<Matrix> basis = canonical_matrix_span(closed, tolerances().cluster);

  // Closure under products.
  for (const Matrix& a : basis)
    for (const Matrix& b : basis)
      if (span_residual(basis, a * b) > tol * ambient_dim)
        throw InvalidInput("from_span: span not closed under products");

  FiniteCStarAlgebra alg;
  alg.ambient_dim_ = ambient_dim;
  alg.basis_ = std::move(basis);

  // The unit: e in the span with e b = b for every basis element. Stack the
  // linear system in span coordinates.
  const int k = alg.dim();
  if (k == 0) throw InvalidInput("from_span: empty span");
  Matrix sys(static_cast<Eigen::Index>(k) * ambient_dim * ambient_dim, k);
  Vector rhs(sys.rows());
  for (int b = 0; b < k; ++b) {
    Vector target = vec(alg.basis_[static_cast<std::size_t>(b)]);
    for (int j = 0; j < k; ++j) {
      Vector col = vec(alg.basis_[static_cast<std::size_t>(j)] *
                       alg.basis_[static_cast<std::size_t>(b)]);
      sys.block(static_cast<Eigen::Index>(b) * target.size(), j,
                target.size(), 1) = col;
    }
    rhs.segment(static_cast<Eigen::Index>(b) * target.size(), target.size()) =
        target;
  }
  Vector coeff = sys.colPivHouseholderQr().solve(rhs);
  if ((sys * coeff - rhs).norm() > tol * std::max(1.0, rhs.norm()) * 10)
    throw InvalidInput("from_span: span has no unit (non-unital input)");
  Matrix unit = Matrix::Zero(ambient_dim, ambient_dim);
  for (int j = 0; j < k; ++j)
    unit += coeff(j) * alg.basis_[static_cast<std::size_t>(j)];
  alg.unit_ = unit;
  return alg;
}

bool FiniteCStarAlgebra::contains(const Matrix& m, double tol) const {
  if (m.rows() != ambient_dim_ || m.cols() != ambient_dim_) return false;
  if (has_block_layout()) {
    // Membership is support on the diagonal blocks.
    Matrix rem = m;
    for (const BlockInfo& b : blocks_)
      rem.block(b.offset, b.offset, b.dim, b.dim).setZero();
    return rem.norm() <= tol * std::max(1.0, m.norm());
  }
  return span_residual(basis_, m) <= tol * std::max(1.0, m.norm());
}

Matrix FiniteCStarAlgebra::project(const Matrix& m) const {
  Matrix out = Matrix::Zero(ambient_dim_, ambient_dim_);
  for (const Matrix& b : basis_) out += hs_inner(b, m) * b;
  return out;
}

Matrix FiniteCStarAlgebra::block_of(const Matrix& m, int k) const {
  if (!has_block_layout()) throw InvalidInput("block_of: no block layout");
  const BlockInfo& b = blocks_.at(static_cast<std::size_t>(k));
  return m.block(b.offset, b.offset, b.dim, b.dim);
}

Matrix FiniteCStarAlgebra::assemble(
    const std::vector<Matrix>& block_parts) const {
  if (!has_block_layout()) throw InvalidInput("assemble: no block layout");
  if (block_parts.size() != blocks_.size())
    throw InvalidInput("assemble: wrong number of blocks");
  Matrix out = Matrix::Zero(ambient_dim_, ambient_dim_);
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const BlockInfo& b = blocks_[k];
    if (block_parts[k].rows() != b.dim || block_parts[k].cols() != b.dim)
      throw InvalidInput("assemble: block shape mismatch");
    out.block(b.offset, b.offset, b.dim, b.dim) = block_parts[k];
  }
  return out;
}

std::vector<std::pair<int, int>> FiniteCStarAlgebra::factor_shape(
    std::uint64_t seed) const {
  CenterDecomposition cd = center_of(*this, seed);
  std::vector<std::pair<int, int>> shape;
  for (const Matrix& z : cd.minimal_projections) {
    int rank = static_cast<int>(std::lround(z.trace().real()));
    // The corner z A z is a simple factor M_k of linear dimension k^2,
    // carried with multiplicity rank / k.
    std::vector<Matrix> corner;
    for (const Matrix& b : basis_) corner.push_back(z * b * z);
    int corner_dim =
        static_cast<int>(canonical_matrix_span(corner, tolerances().cluster).size());
    int k = static_cast<int>(std::lround(std::sqrt(double(corner_dim))));
    if (k * k != corner_dim || k == 0 || rank % k != 0)
      throw InternalInconsistency("factor_shape: corner is not a factor");
    shape.emplace_back(k, rank / k);
  }
  std::sort(shape.begin(), shape.end(), [](auto a, auto b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first > b.first;
  });
  return shape;
}

// ---------------------------------------------------------------------------
// StateFunctional
// ---------------------------------------------------------------------------

StateFunctional::StateFunctional(Matrix density, std::string label)
    : density_(std::move(density)), label_(std::move(label)) {
  if (density_.rows() != density_.cols())
    throw InvalidInput("state density must be square");
  if (!is_hermitian(density_, tolerances().eq))
    throw InvalidInput("state density must be Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(density_);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw InvalidInput("state density must be positive semidefinite");
  if (std::abs(density_.trace().real() - 1.0) > 1e-10)
    throw InvalidInput("state density must have unit trace");
}

StateFunctional StateFunctional::vector_state(const Vector& psi,
                                              std::string label) {
  double n = psi.norm();
  if (n <= 0) throw InvalidInput("vector_state: zero vector");
  Vector u = psi / n;
  return StateFunctional(u * u.adjoint(), std::move(label));
}

StateFunctional StateFunctional::maximally_mixed(int n) {
  return StateFunctional(Matrix::Identity(n, n) / double(n), "tracial");
}

Complex StateFunctional::operator()(const Matrix& a) const {
  if (a.rows() != density_.rows())
    throw InvalidInput("state evaluation: dimension mismatch");
  return (density_ * a).trace();
}

double StateFunctional::real_expectation(const Matrix& a) const {
  return (*this)(a).real();
}

// ---------------------------------------------------------------------------
// CPMap
// ---------------------------------------------------------------------------

CPMap CPMap::from_kraus(const std::vector<Matrix>& kraus, Direction dir) {
  if (kraus.empty()) throw InvalidInput("from_kraus: empty Kraus list");
  const Eigen::Index out = kraus.front().rows(), in = kraus.front().cols();
  Matrix s = Matrix::Zero(out * out, in * in);
  for (const Matrix& k : kraus) {
    if (k.rows() != out || k.cols() != in)
      throw InvalidInput("from_kraus: mixed Kraus shapes");
    s += kron(k.conjugate(), k);  // vec(K X K†) = (conj(K) ⊗ K) vec(X)
  }
  CPMap m;
  m.source_dim_ = static_cast<int>(in);
  m.target_dim_ = static_cast<int>(out);
  m.direction_ = dir;
  m.superop_ = std::move(s);
  return m;
}

CPMap CPMap::from_superop(Matrix superop, int source_dim, int target_dim,
                          Direction dir) {
  if (superop.rows() != Eigen::Index(target_dim) * target_dim ||
      superop.cols() != Eigen::Index(source_dim) * source_dim)
    throw InvalidInput("from_superop: shape mismatch");
  CPMap m;
  m.source_dim_ = source_dim;
  m.target_dim_ = target_dim;
  m.direction_ = dir;
  m.superop_ = std::move(superop);
  return m;
}

CPMap CPMap::from_choi(const Matrix& choi, int source_dim, int target_dim,
                       Direction dir) {
  const Eigen::Index n = source_dim, m = target_dim;
  if (choi.rows() != n * m || choi.cols() != n * m)
    throw InvalidInput("from_choi: shape mismatch");
  // J = Σ_ij E_ij ⊗ Φ(E_ij); read the blocks back out.
  Matrix s(m * m, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      Matrix phi_eij = choi.block(i * m, j * m, m, m);
      s.col(j * n + i) = vec(phi_eij);
    }
  return from_superop(std::move(s), source_dim, target_dim, dir);
}

CPMap CPMap::identity(int n, Direction dir) {
  return from_superop(Matrix::Identity(Eigen::Index(n) * n, Eigen::Index(n) * n),
                      n, n, dir);
}

Matrix CPMap::apply(const Matrix& x) const {
  if (x.rows() != source_dim_ || x.cols() != source_dim_)
    throw InvalidInput("CPMap::apply: dimension mismatch");
  return unvec(superop_ * vec(x), target_dim_, target_dim_);
}

Matrix CPMap::choi() const {
  const Eigen::Index n = source_dim_, m = target_dim_;
  Matrix j = Matrix::Zero(n * m, n * m);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) {
      Matrix e = Matrix::Zero(n, n);
      e(a, b) = 1.0;
      j.block(a * m, b * m, m, m) = apply(e);
    }
  return j;
}

CPMap CPMap::dual() const {
  CPMap d;
  d.source_dim_ = target_dim_;
  d.target_dim_ = source_dim_;
  d.direction_ = (direction_ == Direction::observable) ? Direction::state
                                                       : Direction::observable;
  d.superop_ = superop_.adjoint();
  return d;
}

bool CPMap::is_unital(double tol) const {
  return approx_equal(apply(Matrix::Identity(source_dim_, source_dim_)),
                      Matrix::Identity(target_dim_, target_dim_), tol);
}

bool CPMap::is_trace_preserving(double tol) const {
  // Tr Φ(X) = Tr X for all X  <=>  Φ*(1) = 1.
  return dual().is_unital(tol);
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

FiniteCStarAlgebra commutant(const std::vector<Matrix>& generators,
                             int ambient_dim) {
  const Eigen::Index n = ambient_dim;
  std::vector<Matrix> gens;
  for (const Matrix& g : generators) {
    if (g.rows() != n || g.cols() != n)
      throw InvalidInput("commutant: generator has wrong shape");
    gens.push_back(g);
    gens.push_back(g.adjoint());
  }
  if (gens.empty()) return FiniteCStarAlgebra::full(ambient_dim);

  // XA - AX = 0  <=>  (Aᵀ ⊗ 1 - 1 ⊗ A) vec(X) = 0.
  Matrix stacked(static_cast<Eigen::Index>(gens.size()) * n * n, n * n);
  const Matrix id = Matrix::Identity(n, n);
  for (std::size_t k = 0; k < gens.size(); ++k) {
    stacked.block(static_cast<Eigen::Index>(k) * n * n, 0, n * n, n * n) =
        kron(gens[k].transpose(), id) - kron(id, gens[k]);
  }
  std::vector<Matrix> basis_mats;
  for (const Vector& v : nullspace(stacked, tolerances().cluster))
    basis_mats.push_back(unvec(v, n, n));
  return FiniteCStarAlgebra::from_span(basis_mats, ambient_dim);
}

FiniteCStarAlgebra generated_algebra(const std::vector<Matrix>& generators,
                                     int ambient_dim) {
  const Eigen::Index n = ambient_dim;
  std::vector<Matrix> work;
  work.push_back(Matrix::Identity(n, n));
  for (const Matrix& g : generators) {
    if (g.rows() != n || g.cols() != n)
      throw InvalidInput("generated_algebra: generator has wrong shape");
    work.push_back(g);
    work.push_back(g.adjoint());
  }
  std::vector<Matrix> basis = canonical_matrix_span(work, tolerances().cluster);
  while (static_cast<Eigen::Index>(basis.size()) < n * n) {
    std::vector<Matrix> extended = basis;
    for (const Matrix& a : basis)
      for (const Matrix& b : basis) extended.push_back(a * b);
    std::vector<Matrix> next =
        canonical_matrix_span(extended, tolerances().cluster);
    if (next.size() == basis.size()) break;
    basis = std::move(next);
  }
  return FiniteCStarAlgebra::from_span(basis, ambient_dim);
}

CenterDecomposition center_of(const FiniteCStarAlgebra& alg,
                              std::uint64_t seed) {
  const double cluster_tol = tolerances().cluster;
  const int n = alg.ambient_dim();
  const int k = alg.dim();

  // Solve for x in span(basis) with [x, b] = 0 for every basis element b.
  Matrix sys(static_cast<Eigen::Index>(k) * n * n, k);
  for (int b = 0; b < k; ++b)
    for (int j = 0; j < k; ++j) {
      const Matrix& bj = alg.basis()[static_cast<std::size_t>(j)];
      const Matrix& bb = alg.basis()[static_cast<std::size_t>(b)];
      sys.block(static_cast<Eigen::Index>(b) * n * n, j, Eigen::Index(n) * n,
                1) = vec(bj * bb - bb * bj);
    }
  std::vector<Matrix> center_mats;
  for (const Vector& c : nullspace(sys, cluster_tol)) {
    Matrix z = Matrix::Zero(n, n);
    for (int j = 0; j < k; ++j)
      z += c(j) * alg.basis()[static_cast<std::size_t>(j)];
    center_mats.push_back(z);
  }
  CenterDecomposition out;
  out.center = FiniteCStarAlgebra::from_span(center_mats, n);

  // Hermitian basis of the center.
  std::vector<Matrix> herm;
  for (const Matrix& z : out.center.basis()) {
    herm.push_back(0.5 * (z + z.adjoint()));
    herm.push_back(Complex(0, 0.5) * (z - z.adjoint()));
  }
  herm = canonical_matrix_span(herm, cluster_tol);
  if (herm.size() != out.center.basis().size())
    throw InternalInconsistency("center_of: center not *-closed");

  // Generic Hermitian center element; redraw if eigenvalues fail to separate
  // into dim-many clusters.
  Rng rng(seed);
  const int center_dim = static_cast<int>(herm.size());
  std::vector<Matrix> projections;
  for (int attempt = 0; attempt < 8; ++attempt) {
    Matrix gen = Matrix::Zero(n, n);
    for (const Matrix& h : herm) gen += random_real(rng) * h;
    gen = 0.5 * (gen + gen.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(gen);
    std::vector<std::vector<int>> clusters =
        cluster_values(es.eigenvalues(), cluster_tol);

    // Drop the kernel cluster outside the algebra's support if the unit is a
    // proper projection of the ambient space.
    projections.clear();
    bool ok = true;
    int rank_sum = 0;
    for (const auto& cl : clusters) {
      Matrix p = Matrix::Zero(n, n);
      for (int idx : cl)
        p += es.eigenvectors().col(idx) * es.eigenvectors().col(idx).adjoint();
      // Keep only clusters inside the algebra support.
      double ev = 0.0;
      for (int idx : cl) ev = std::max(ev, std::abs(es.eigenvalues()(idx)));
      Matrix supported = alg.unit() * p * alg.unit();
      if (supported.norm() < 0.5 && ev < cluster_tol) continue;  // kernel
      if (!out.center.contains(p, 1e-6)) {
        ok = false;
        break;
      }
      projections.push_back(p);
      rank_sum += static_cast<int>(std::lround(p.trace().real()));
    }
    if (ok &&
        static_cast<int>(projections.size()) == center_dim &&
        rank_sum ==
            static_cast<int>(std::lround(alg.unit().trace().real()))) {
      break;
    }
    projections.clear();
  }
  if (projections.empty())
    throw InternalInconsistency(
        "center_of: could not separate minimal central projections");

  // Verify: mutually orthogonal idempotents summing to the unit.
  Matrix sum = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < projections.size(); ++i) {
    const Matrix& p = projections[i];
    if (!approx_equal(p * p, p, 1e-7) || !is_hermitian(p, 1e-7))
      throw InternalInconsistency("center_of: projection check failed");
    for (std::size_t j = i + 1; j < projections.size(); ++j)
      if (!approx_zero(projections[i] * projections[j], 1e-7))
        throw InternalInconsistency("center_of: projections not orthogonal");
    sum += p;
  }
  if (!approx_equal(sum, alg.unit(), 1e-7))
    throw InternalInconsistency("center_of: projections do not sum to unit");

  std::sort(projections.begin(), projections.end(),
            [&](const Matrix& a, const Matrix& b) {
              int ra = static_cast<int>(std::lround(a.trace().real()));
              int rb = static_cast<int>(std::lround(b.trace().real()));
              if (ra != rb) return ra > rb;
              return lex_less(a, b);
            });
  out.minimal_projections = std::move(projections);
  return out;
}

CpCheck is_completely_positive(const CPMap& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.choi());
  CpCheck c;
  c.min_choi_eigenvalue = es.eigenvalues().minCoeff();
  c.completely_positive = c.min_choi_eigenvalue >= -1e-9;
  return c;
}

CPMap dual_channel(const CPMap& m) { return m.dual(); }

}  // namespace sectorlab
