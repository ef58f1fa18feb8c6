#ifndef SECTORLAB_NUMERICS_HPP
#define SECTORLAB_NUMERICS_HPP

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sectorlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Global numeric knobs. eq is the operator-equality tolerance, cluster the
// eigenvalue clustering / rank-decision tolerance, feas the LP feasibility
// tolerance. The CLI may override eq (and scales the others with it).
struct Tolerances {
  double eq = 1e-9;
  double cluster = 1e-7;
  double feas = 1e-8;
};

Tolerances& tolerances();

// Seed used for all generic-element draws when none is passed explicitly.
constexpr std::uint64_t kDefaultSeed = 0x5ec701ab0001ull;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SECTORLAB_ERROR(NAME)                                   \
  class NAME : public Error {                                   \
   public:                                                      \
    explicit NAME(const std::string& what)                      \
        : Error(std::string(#NAME) + ": " + what) {}            \
  }

SECTORLAB_ERROR(InvalidInput);
SECTORLAB_ERROR(CharacterTableFailure);
SECTORLAB_ERROR(NotCovariant);
SECTORLAB_ERROR(InternalInconsistency);
SECTORLAB_ERROR(InvalidSection);
SECTORLAB_ERROR(NotInK);
SECTORLAB_ERROR(NoExtension);
SECTORLAB_ERROR(NotHCovariant);
SECTORLAB_ERROR(PropositionViolated);
SECTORLAB_ERROR(NotAnInstrumentCoupling);
SECTORLAB_ERROR(ZeroProbabilityOutcome);
SECTORLAB_ERROR(IoError);

#undef SECTORLAB_ERROR

// ---------------------------------------------------------------------------
// Matrix helpers
// ---------------------------------------------------------------------------

double hs_norm(const Matrix& a);
Complex hs_inner(const Matrix& a, const Matrix& b);  // <a,b> = Tr(a† b)

bool approx_equal(const Matrix& a, const Matrix& b, double tol);
bool approx_zero(const Matrix& a, double tol);
bool is_hermitian(const Matrix& a, double tol);
bool is_unitary(const Matrix& a, double tol);

Matrix kron(const Matrix& a, const Matrix& b);

// Column-major stacking; unvec expects rows*cols == v.size().
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols);

// Partial traces on C^{da} ⊗ C^{db} with kron(a, b) index convention.
Matrix trace_out_first(const Matrix& m, Eigen::Index da, Eigen::Index db);
Matrix trace_out_second(const Matrix& m, Eigen::Index da, Eigen::Index db);

// exp(scale*h) for Hermitian h, via eigendecomposition.
Matrix hermitian_exp(const Matrix& h, double scale);

double trace_distance(const Matrix& rho, const Matrix& sigma);

// Deterministic entrywise lexicographic order (row-major, re before im),
// entries compared after snapping to a grid of size snap.
bool lex_less(const Matrix& a, const Matrix& b, double snap = 1e-7);

// ---------------------------------------------------------------------------
// Deterministic linear algebra on spans
// ---------------------------------------------------------------------------

// Canonical orthonormal basis of span(vectors): reduced row echelon form with
// lexicographic pivot scan, then modified Gram-Schmidt in pivot order. The
// result depends only on the subspace, not on the presented spanning set.
std::vector<Vector> canonical_span(const std::vector<Vector>& vectors,
                                   double rank_tol);

// Same, for spans of matrices under the Hilbert-Schmidt inner product.
std::vector<Matrix> canonical_matrix_span(const std::vector<Matrix>& mats,
                                          double rank_tol);

// Canonical orthonormal basis of ker(m), via the normal matrix m†m.
std::vector<Vector> nullspace(const Matrix& m, double rank_tol);

int span_rank(const std::vector<Vector>& vectors, double rank_tol);

// Orthonormal projection of v onto span(basis); basis must be orthonormal.
Vector project_onto(const std::vector<Vector>& basis, const Vector& v);

// Eigenvalue clusters of an ascending list; each cluster is a run whose
// consecutive gaps are < tol.
std::vector<std::vector<int>> cluster_values(const RealVector& ascending,
                                             double tol);

// ---------------------------------------------------------------------------
// Seeded randomness (all generic-element draws go through these)
// ---------------------------------------------------------------------------

using Rng = std::mt19937_64;

double random_real(Rng& rng, double lo = -1.0, double hi = 1.0);
Matrix random_matrix(Eigen::Index n, Rng& rng);
Matrix random_hermitian(Eigen::Index n, Rng& rng);
Matrix random_unitary(Eigen::Index n, Rng& rng);
Matrix random_density(Eigen::Index n, Rng& rng);
Vector random_state_vector(Eigen::Index n, Rng& rng);
std::vector<double> random_distribution(int n, Rng& rng);

// "%.12g" rendering used by every report writer.
std::string format_float(double x);

}  // namespace sectorlab

#endif  // SECTORLAB_NUMERICS_HPP
