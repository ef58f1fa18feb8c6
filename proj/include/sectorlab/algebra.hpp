#ifndef SECTORLAB_ALGEBRA_HPP
#define SECTORLAB_ALGEBRA_HPP

#include <optional>
#include <string>
#include <vector>

#include "sectorlab/numerics.hpp"

namespace sectorlab {

// A finite-dimensional *-algebra of N x N matrices, kept as an orthonormal
// (Hilbert-Schmidt) basis. When built as an explicit direct sum of full
// matrix blocks the block layout is retained; algebras produced by commutant
// or span constructions carry only the basis.
class FiniteCStarAlgebra {
 public:
  struct BlockInfo {
    int dim = 0;
    int offset = 0;  // position of the block on the ambient diagonal
  };

  // Empty algebra; usable only as a placeholder before assignment.
  FiniteCStarAlgebra() = default;

  // ⊕_k M_{d_k}, blocks laid out consecutively; ambient N = sum of dims.
  static FiniteCStarAlgebra multi_matrix(const std::vector<int>& block_dims);

  // Full matrix algebra M_n.
  static FiniteCStarAlgebra full(int n);

  // Algebra spanned by the given matrices. Throws InvalidInput if the span is
  // not closed under product/adjoint or has no unit of its own.
  static FiniteCStarAlgebra from_span(const std::vector<Matrix>& span,
                                      int ambient_dim);

  int ambient_dim() const { return ambient_dim_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Matrix>& basis() const { return basis_; }
  const Matrix& unit() const { return unit_; }
  bool has_block_layout() const { return !blocks_.empty(); }
  const std::vector<BlockInfo>& blocks() const { return blocks_; }

  bool contains(const Matrix& m, double tol) const;
  // HS-orthogonal projection onto the algebra.
  Matrix project(const Matrix& m) const;

  // Block coordinates for explicitly laid out algebras.
  Matrix block_of(const Matrix& m, int k) const;
  Matrix assemble(const std::vector<Matrix>& block_parts) const;

  // One pair (k_i, r_i) per central summand: the summand is isomorphic to
  // M_{k_i} and acts on the carrier with multiplicity r_i (so its central
  // projection has rank k_i * r_i). Sorted by descending r then k.
  std::vector<std::pair<int, int>> factor_shape(std::uint64_t seed) const;

 private:
  int ambient_dim_ = 0;
  std::vector<BlockInfo> blocks_;
  std::vector<Matrix> basis_;
  Matrix unit_;
};

// Normalized positive linear functional, stored through its density matrix.
class StateFunctional {
 public:
  StateFunctional(Matrix density, std::string label = "");

  static StateFunctional vector_state(const Vector& psi,
                                      std::string label = "");
  static StateFunctional maximally_mixed(int n);

  const Matrix& density() const { return density_; }
  const std::string& label() const { return label_; }
  int dim() const { return static_cast<int>(density_.rows()); }

  Complex operator()(const Matrix& a) const;
  double real_expectation(const Matrix& a) const;

 private:
  Matrix density_;
  std::string label_;
};

// Linear map on matrix spaces, stored as a superoperator in the column-major
// vec convention. Direction records whether the map is meant in the
// observable (unital) or state (trace-preserving) direction.
class CPMap {
 public:
  enum class Direction { observable, state };

  static CPMap from_kraus(const std::vector<Matrix>& kraus, Direction dir);
  static CPMap from_superop(Matrix superop, int source_dim, int target_dim,
                            Direction dir);
  static CPMap from_choi(const Matrix& choi, int source_dim, int target_dim,
                         Direction dir);
  static CPMap identity(int n, Direction dir);

  int source_dim() const { return source_dim_; }
  int target_dim() const { return target_dim_; }
  Direction direction() const { return direction_; }
  const Matrix& superop() const { return superop_; }

  Matrix apply(const Matrix& x) const;
  Matrix choi() const;

  // Hilbert-Schmidt adjoint; flips the direction flag.
  CPMap dual() const;

  bool is_unital(double tol) const;
  bool is_trace_preserving(double tol) const;

 private:
  CPMap() = default;
  int source_dim_ = 0;
  int target_dim_ = 0;
  Direction direction_ = Direction::observable;
  Matrix superop_;  // target_dim^2 x source_dim^2
};

struct CpCheck {
  bool completely_positive = false;
  double min_choi_eigenvalue = 0.0;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// {X : XA = AX for all generators A}; adjoints of the generators are adjoined
// automatically so the result is a *-algebra.
FiniteCStarAlgebra commutant(const std::vector<Matrix>& generators,
                             int ambient_dim);

// Smallest unital *-algebra containing the generators.
FiniteCStarAlgebra generated_algebra(const std::vector<Matrix>& generators,
                                     int ambient_dim);

struct CenterDecomposition {
  FiniteCStarAlgebra center;
  // Minimal central projections, descending rank then lexicographic; they sum
  // to the unit of the algebra.
  std::vector<Matrix> minimal_projections;
};

CenterDecomposition center_of(const FiniteCStarAlgebra& alg,
                              std::uint64_t seed = kDefaultSeed);

CpCheck is_completely_positive(const CPMap& m);

CPMap dual_channel(const CPMap& m);

}  // namespace sectorlab

#endif  // SECTORLAB_ALGEBRA_HPP
