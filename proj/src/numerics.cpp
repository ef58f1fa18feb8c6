#include "sectorlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace sectorlab {

Tolerances& tolerances() {
  static Tolerances t;
  return t;
}

double hs_norm(const Matrix& a) { return a.norm(); }

Complex hs_inner(const Matrix& a, const Matrix& b) {
  return (a.adjoint() * b).trace();
}

bool approx_equal(const Matrix& a, const Matrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a - b).norm() <= tol * std::max(1.0, std::max(a.norm(), b.norm()));
}

bool approx_zero(const Matrix& a, double tol) { return a.norm() <= tol; }

bool is_hermitian(const Matrix& a, double tol) {
  return a.rows() == a.cols() && approx_equal(a, a.adjoint().eval(), tol);
}

bool is_unitary(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  Matrix id = Matrix::Identity(a.rows(), a.cols());
  return approx_equal((a.adjoint() * a).eval(), id, tol) &&
         approx_equal((a * a.adjoint()).eval(), id, tol);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vector vec(const Matrix& m) {
  Vector v(m.size());
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) v(k++) = m(i, j);
  return v;
}

Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) throw InvalidInput("unvec: size mismatch");
  Matrix m(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = v(k++);
  return m;
}

Matrix trace_out_first(const Matrix& m, Eigen::Index da, Eigen::Index db) {
  if (m.rows() != da * db || m.cols() != da * db)
    throw InvalidInput("trace_out_first: dimension mismatch");
  Matrix out = Matrix::Zero(db, db);
  for (Eigen::Index a = 0; a < da; ++a)
    out += m.block(a * db, a * db, db, db);
  return out;
}

Matrix trace_out_second(const Matrix& m, Eigen::Index da, Eigen::Index db) {
  if (m.rows() != da * db || m.cols() != da * db)
    throw InvalidInput("trace_out_second: dimension mismatch");
  Matrix out = Matrix::Zero(da, da);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j) {
      Complex s = 0.0;
      for (Eigen::Index b = 0; b < db; ++b) s += m(i * db + b, j * db + b);
      out(i, j) = s;
    }
  return out;
}

Matrix hermitian_exp(const Matrix& h, double scale) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success)
    throw InternalInconsistency("hermitian_exp: eigensolver failed");
  RealVector w = es.eigenvalues();
  Matrix v = es.eigenvectors();
  Vector e(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) e(i) = std::exp(scale * w(i));
  return v * e.asDiagonal() * v.adjoint();
}

double trace_distance(const Matrix& rho, const Matrix& sigma) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho - sigma);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

namespace {
double snap_to(double x, double snap) { return std::round(x / snap) * snap; }
}  // namespace

bool lex_less(const Matrix& a, const Matrix& b, double snap) {
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      double ar = snap_to(a(i, j).real(), snap), br = snap_to(b(i, j).real(), snap);
      if (ar != br) return ar < br;
      double ai = snap_to(a(i, j).imag(), snap), bi = snap_to(b(i, j).imag(), snap);
      if (ai != bi) return ai < bi;
    }
  return false;
}

// ---------------------------------------------------------------------------
// Canonical spans
// ---------------------------------------------------------------------------

std::vector<Vector> canonical_span(const std::vector<Vector>& vectors,
                                   double rank_tol) {
  if (vectors.empty()) return {};
  const Eigen::Index n = vectors.front().size();
  Matrix rows(static_cast<Eigen::Index>(vectors.size()), n);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != n)
      throw InvalidInput("canonical_span: mixed vector lengths");
    rows.row(static_cast<Eigen::Index>(i)) = vectors[i].transpose();
  }
  const double scale = std::max(1.0, rows.norm());
  const double cut = rank_tol * scale;

  // Reduced row echelon form, columns scanned left to right, pivot row by
  // largest magnitude. The row space determines the result.
  Eigen::Index r = 0;
  std::vector<Eigen::Index> pivot_cols;
  for (Eigen::Index c = 0; c < n && r < rows.rows(); ++c) {
    Eigen::Index best = -1;
    double best_mag = cut;
    for (Eigen::Index i = r; i < rows.rows(); ++i) {
      double mag = std::abs(rows(i, c));
      if (mag > best_mag) {
        best_mag = mag;
        best = i;
      }
    }
    if (best < 0) continue;
    rows.row(r).swap(rows.row(best));
    rows.row(r) /= rows(r, c);
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
      if (i != r) rows.row(i) -= rows(i, c) * rows.row(r);
    }
    pivot_cols.push_back(c);
    ++r;
  }

  // Modified Gram-Schmidt over the echelon rows, in order.
  std::vector<Vector> basis;
  basis.reserve(static_cast<std::size_t>(r));
  for (Eigen::Index i = 0; i < r; ++i) {
    Vector v = rows.row(i).transpose();
    for (const Vector& u : basis) v -= u.dot(v) * u;
    double nrm = v.norm();
    if (nrm <= cut) continue;
    v /= nrm;
    // Fix the global phase: first entry of significant magnitude made
    // real positive.
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      if (std::abs(v(k)) > 1e-8) {
        v *= std::conj(v(k)) / std::abs(v(k));
        break;
      }
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<Matrix> canonical_matrix_span(const std::vector<Matrix>& mats,
                                          double rank_tol) {
  if (mats.empty()) return {};
  const Eigen::Index rows = mats.front().rows(), cols = mats.front().cols();
  std::vector<Vector> vv;
  vv.reserve(mats.size());
  for (const Matrix& m : mats) {
    if (m.rows() != rows || m.cols() != cols)
      throw InvalidInput("canonical_matrix_span: mixed shapes");
    vv.push_back(vec(m));
  }
  std::vector<Matrix> out;
  for (const Vector& v : canonical_span(vv, rank_tol))
    out.push_back(unvec(v, rows, cols));
  return out;
}

std::vector<Vector> nullspace(const Matrix& m, double rank_tol) {
  const Eigen::Index n = m.cols();
  Matrix normal = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Matrix> es(normal);
  if (es.info() != Eigen::Success)
    throw InternalInconsistency("nullspace: eigensolver failed");
  const double scale = std::max(1.0, std::sqrt(std::max(
                                        0.0, es.eigenvalues().maxCoeff())));
  std::vector<Vector> kernel;
  for (Eigen::Index i = 0; i < n; ++i) {
    double sigma = std::sqrt(std::max(0.0, es.eigenvalues()(i)));
    if (sigma <= rank_tol * scale) kernel.push_back(es.eigenvectors().col(i));
  }
  return canonical_span(kernel, rank_tol);
}

int span_rank(const std::vector<Vector>& vectors, double rank_tol) {
  return static_cast<int>(canonical_span(vectors, rank_tol).size());
}

Vector project_onto(const std::vector<Vector>& basis, const Vector& v) {
  Vector out = Vector::Zero(v.size());
  for (const Vector& u : basis) out += u.dot(v) * u;
  return out;
}

std::vector<std::vector<int>> cluster_values(const RealVector& ascending,
                                             double tol) {
  std::vector<std::vector<int>> clusters;
  for (int i = 0; i < ascending.size(); ++i) {
    if (clusters.empty() ||
        ascending(i) - ascending(clusters.back().back()) >= tol) {
      clusters.push_back({i});
    } else {
      clusters.back().push_back(i);
    }
  }
  return clusters;
}

// ---------------------------------------------------------------------------
// Seeded randomness
// ---------------------------------------------------------------------------

double random_real(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(rng);
}

Matrix random_matrix(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      double re = g(rng), im = g(rng);
      m(i, j) = Complex(re, im);
    }
  return m;
}

Matrix random_hermitian(Eigen::Index n, Rng& rng) {
  Matrix m = random_matrix(n, rng);
  return 0.5 * (m + m.adjoint());
}

Matrix random_unitary(Eigen::Index n, Rng& rng) {
  Matrix m = random_matrix(n, rng);
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix phases so the factorization is unique.
  for (Eigen::Index i = 0; i < n; ++i) {
    Complex d = r(i, i);
    q.col(i) *= (std::abs(d) > 0) ? d / std::abs(d) : 1.0;
  }
  return q;
}

Matrix random_density(Eigen::Index n, Rng& rng) {
  Matrix m = random_matrix(n, rng);
  Matrix rho = m * m.adjoint();
  rho /= rho.trace().real();
  return rho;
}

Vector random_state_vector(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
  v /= v.norm();
  return v;
}

std::vector<double> random_distribution(int n, Rng& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  std::vector<double> w(static_cast<std::size_t>(n));
  double total = 0.0;
  for (double& x : w) {
    x = dist(rng) + 1e-4;
    total += x;
  }
  for (double& x : w) x /= total;
  return w;
}

std::string format_float(double x) {
  if (x == 0.0) x = 0.0;  // normalize -0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

}  // namespace sectorlab
