#include "sectorlab/simplex.hpp"

#include <algorithm>
#include <cmath>

namespace sectorlab {

namespace {

// Revised-tableau simplex with Bland's pivoting on an explicit dense
// tableau. Rows: m constraints plus the objective row at the end.
class Tableau {
 public:
  Tableau(const RealMatrix& a, const RealVector& b, const RealVector& c,
          double tol)
      : m_(static_cast<int>(a.rows())),
        n_(static_cast<int>(a.cols())),
        tol_(tol),
        t_(a.rows() + 1, a.cols() + 1),
        basis_(static_cast<std::size_t>(a.rows()), -1) {
    t_.setZero();
    t_.topLeftCorner(m_, n_) = a;
    t_.col(n_).head(m_) = b;
    t_.row(m_).head(n_) = c.transpose();
    // Callers are responsible for sign-normalizing rows; flipping here would
    // corrupt warm-started bases whose rhs carries roundoff below zero.
  }

  double rhs(int i) const { return t_(i, n_); }
  double entry(int i, int j) const { return t_(i, j); }
  double objective() const { return -t_(m_, n_); }
  int basis(int i) const { return basis_[static_cast<std::size_t>(i)]; }

  void set_basis(int row, int col) {
    basis_[static_cast<std::size_t>(row)] = col;
  }

  void pivot(int row, int col) {
    t_.row(row) /= t_(row, col);
    for (int i = 0; i <= m_; ++i) {
      if (i == row) continue;
      double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

  void price_out_basis() {
    for (int i = 0; i < m_; ++i) {
      int j = basis_[static_cast<std::size_t>(i)];
      double f = t_(m_, j);
      if (f != 0.0) t_.row(m_) -= f * t_.row(i);
    }
  }

  // Returns false when optimal; throws nothing. Unbounded is signalled by
  // setting unbounded_col_.
  bool step() {
    int enter = -1;
    for (int j = 0; j < n_; ++j)
      if (t_(m_, j) < -tol_) {
        enter = j;  // Bland: lowest index with negative reduced cost
        break;
      }
    if (enter < 0) return false;
    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m_; ++i) {
      if (t_(i, enter) > tol_) {
        double ratio = t_(i, n_) / t_(i, enter);
        if (leave < 0 || ratio < best_ratio - 1e-15 ||
            (std::abs(ratio - best_ratio) <= 1e-15 &&
             basis_[static_cast<std::size_t>(i)] <
                 basis_[static_cast<std::size_t>(leave)])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) {
      unbounded_col_ = enter;
      return false;
    }
    pivot(leave, enter);
    return true;
  }

  bool unbounded() const { return unbounded_col_ >= 0; }

  RealVector solution() const {
    RealVector x = RealVector::Zero(n_);
    for (int i = 0; i < m_; ++i) {
      int j = basis_[static_cast<std::size_t>(i)];
      if (j >= 0 && j < n_) x(j) = t_(i, n_);
    }
    return x;
  }

  // Ray along the unbounded entering column.
  RealVector ray() const {
    RealVector r = RealVector::Zero(n_);
    r(unbounded_col_) = 1.0;
    for (int i = 0; i < m_; ++i) {
      int j = basis_[static_cast<std::size_t>(i)];
      if (j >= 0 && j < n_) r(j) = -t_(i, unbounded_col_);
    }
    return r;
  }

 private:
  int m_, n_;
  double tol_;
  RealMatrix t_;
  std::vector<int> basis_;
  int unbounded_col_ = -1;
};

}  // namespace

LpResult solve_lp(const RealMatrix& a, const RealVector& b,
                  const RealVector& c, double feas_tol) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  if (b.size() != m || c.size() != n)
    throw InvalidInput("solve_lp: shape mismatch");
  LpResult res;

  // Phase one: minimize the sum of artificial variables.
  RealMatrix a1(m, n + m);
  a1.leftCols(n) = a;
  a1.rightCols(m) = RealMatrix::Identity(m, m);
  RealVector c1 = RealVector::Zero(n + m);
  c1.tail(m).setOnes();
  // Flip rows with negative rhs so the artificial start is feasible.
  RealVector b1 = b;
  for (int i = 0; i < m; ++i)
    if (b1(i) < 0) {
      a1.row(i) = -a1.row(i);
      b1(i) = -b1(i);
    }
  Tableau phase1(a1, b1, c1, feas_tol);
  for (int i = 0; i < m; ++i) phase1.set_basis(i, n + i);
  phase1.price_out_basis();
  while (phase1.step()) {
  }
  if (phase1.unbounded())
    throw InternalInconsistency("phase-1 LP cannot be unbounded");
  if (phase1.objective() > feas_tol) {
    res.status = LpResult::Status::infeasible;
    return res;
  }

  // Drive any lingering artificial variables out of the basis.
  for (int i = 0; i < m; ++i) {
    if (phase1.basis(i) < n) continue;
    int pivot_col = -1;
    for (int j = 0; j < n; ++j)
      if (std::abs(phase1.entry(i, j)) > feas_tol) {
        pivot_col = j;
        break;
      }
    if (pivot_col >= 0) phase1.pivot(i, pivot_col);
    // Otherwise the row is redundant; the artificial stays basic at zero.
  }

  // Phase two on the original columns, warm-started from the phase-1 basis.
  // Rows still carried by an artificial variable are redundant constraints
  // (the artificial sits at zero) and are dropped.
  std::vector<int> keep;
  for (int i = 0; i < m; ++i)
    if (phase1.basis(i) < n) keep.push_back(i);
  const int m2 = static_cast<int>(keep.size());
  RealMatrix a2(m2, n);
  RealVector b2(m2);
  for (int i = 0; i < m2; ++i) {
    for (int j = 0; j < n; ++j) a2(i, j) = phase1.entry(keep[i], j);
    b2(i) = phase1.rhs(keep[i]);
  }
  Tableau phase2(a2, b2, c, feas_tol);
  for (int i = 0; i < m2; ++i) phase2.set_basis(i, phase1.basis(keep[i]));
  phase2.price_out_basis();
  while (phase2.step()) {
  }
  if (phase2.unbounded()) {
    res.status = LpResult::Status::unbounded;
    res.ray = phase2.ray();
    res.x = phase2.solution();
    if ((a * res.ray).norm() > 1e-6 * std::max(1.0, a.norm()))
      throw InternalInconsistency("simplex produced an invalid ray");
    return res;
  }
  res.status = LpResult::Status::optimal;
  res.x = phase2.solution();
  res.objective = phase2.objective();
  return res;
}

std::optional<RealVector> lp_feasible_point(const RealMatrix& a,
                                            const RealVector& b,
                                            double feas_tol) {
  LpResult r = solve_lp(a, b, RealVector::Zero(a.cols()), feas_tol);
  if (r.status != LpResult::Status::optimal) return std::nullopt;
  return r.x;
}

}  // namespace sectorlab
