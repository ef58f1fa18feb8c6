#include "sectorlab/sectors.hpp"

#include <algorithm>
#include <cmath>

namespace sectorlab {

int SectorDecomposition::sector_index(const std::string& label) const {
  for (std::size_t i = 0; i < sectors.size(); ++i)
    if (sectors[i].label == label) return static_cast<int>(i);
  return -1;
}

void ChargeDistribution::validate() const {
  if (labels.size() != weights.size())
    throw InvalidInput("charge distribution: label/weight length mismatch");
  double total = 0.0;
  for (double w : weights) {
    if (w < -1e-12)
      throw InvalidInput("charge distribution: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-10)
    throw InvalidInput("charge distribution: weights do not sum to 1");
}

namespace {

// Canonical orthonormal basis of the range of a projection.
std::vector<Vector> projection_range(const Matrix& p, double tol) {
  std::vector<Vector> cols;
  for (Eigen::Index j = 0; j < p.cols(); ++j) cols.push_back(p.col(j));
  return canonical_span(cols, tol);
}

}  // namespace

SectorDecomposition decompose_sectors(const GroupAction& action,
                                      const UnitaryRep& rep,
                                      std::uint64_t seed) {
  const GroupPtr& group = rep.group();
  if (action.group() != group)
    throw InvalidInput(
        "decompose_sectors: action and rep over different groups");
  const int dim = rep.dim();
  if (action.algebra().ambient_dim() != dim ||
      action.algebra().blocks().size() != 1)
    throw NotCovariant(
        "decompose_sectors: the action must live on the full matrix algebra "
        "of the carrier");

  // U must implement the action: τ_g(F) = U(g) F U(g)†.
  {
    Rng probe_rng(seed ^ 0xf00du);
    for (int g = 0; g < group->order(); ++g) {
      Matrix f = random_matrix(dim, probe_rng);
      Matrix lhs = action.apply(g, f);
      Matrix rhs = rep(g) * f * rep(g).adjoint();
      if (!approx_equal(lhs, rhs, 1e-8))
        throw NotCovariant(
            "decompose_sectors: U does not implement τ on the carrier");
    }
  }

  SectorDecomposition dec;
  dec.group = group;
  dec.dual = character_table(group, seed);
  dec.rep_matrices = rep.matrices();
  dec.carrier_dim = dim;

  std::vector<Matrix> projections = isotypic_projections(rep, dec.dual);
  const double cluster_tol = tolerances().cluster;

  // A = U(G)' = fixed points of the action; the commutant of a generating
  // set suffices.
  const std::vector<int> generators = group->small_generating_set();
  {
    std::vector<Matrix> gen_mats;
    for (int g : generators) gen_mats.push_back(rep(g));
    dec.invariant_algebra = commutant(gen_mats, dim);
  }

  Rng rng(seed);
  for (int i = 0; i < dec.dual.size(); ++i) {
    const int d = dec.dual.dims[i];
    const int rank = static_cast<int>(std::lround(projections[i].trace().real()));
    if (rank < 1) continue;  // sector not realized in this carrier
    if (rank % d != 0)
      throw InternalInconsistency("isotypic rank not divisible by irrep dim");
    const int mult = rank / d;

    Sector sec;
    sec.label = dec.dual.labels[i];
    sec.irrep_index = i;
    sec.multiplicity = mult;
    sec.irrep_dim = d;
    sec.projection = projections[i];

    // Orthonormal basis Q of the isotypic subspace.
    std::vector<Vector> range = projection_range(projections[i], cluster_tol);
    if (static_cast<int>(range.size()) != rank)
      throw InternalInconsistency("isotypic projection rank mismatch");
    Matrix q(dim, rank);
    for (int c = 0; c < rank; ++c)
      q.col(c) = range[static_cast<std::size_t>(c)];

    // A generic invariant-algebra element splits the isotypic subspace into
    // mult eigenspaces, each a single copy of the irrep.
    Matrix first_copy;  // dim x d
    bool separated = false;
    for (int attempt = 0; attempt < 8 && !separated; ++attempt) {
      Matrix z = Matrix::Zero(dim, dim);
      for (const Matrix& b : dec.invariant_algebra.basis()) {
        z += random_real(rng) * (b + b.adjoint());
        z += random_real(rng) * (Complex(0, 1) * (b - b.adjoint()));
      }
      z = 0.5 * (z + z.adjoint());
      Matrix zsub = q.adjoint() * z * q;
      Eigen::SelfAdjointEigenSolver<Matrix> es(zsub);
      auto clusters = cluster_values(es.eigenvalues(), cluster_tol);
      if (static_cast<int>(clusters.size()) != mult) continue;
      bool sizes_ok = true;
      for (const auto& cl : clusters)
        if (static_cast<int>(cl.size()) != d) sizes_ok = false;
      if (!sizes_ok) continue;
      separated = true;
      Matrix v(rank, d);
      for (int c = 0; c < d; ++c)
        v.col(c) =
            es.eigenvectors().col(clusters.front()[static_cast<std::size_t>(c)]);
      first_copy = q * v;
    }
    if (!separated)
      throw InternalInconsistency(
          "could not isolate an irreducible copy inside the isotypic subspace");

    // Concrete irrep matrices on the chosen copy.
    sec.irrep.reserve(static_cast<std::size_t>(group->order()));
    for (int g = 0; g < group->order(); ++g)
      sec.irrep.push_back(first_copy.adjoint() * rep(g) * first_copy);
    for (int g = 0; g < group->order(); ++g)
      if (!is_unitary(sec.irrep[static_cast<std::size_t>(g)], 1e-7))
        throw InternalInconsistency("extracted irrep is not unitary");

    // Intertwiner space Hom(γ, U): T with U(g) T = T γ(g); the generator
    // equations imply the rest.
    const Matrix id_d = Matrix::Identity(d, d);
    const Matrix id_dim = Matrix::Identity(dim, dim);
    const std::size_t neq = std::max<std::size_t>(generators.size(), 1);
    Matrix stacked(static_cast<Eigen::Index>(neq) * dim * d,
                   static_cast<Eigen::Index>(dim) * d);
    stacked.setZero();
    for (std::size_t gi = 0; gi < generators.size(); ++gi) {
      int g = generators[gi];
      // vec(U T - T γ) = (1_d ⊗ U - γᵀ ⊗ 1_dim) vec(T)
      stacked.block(static_cast<Eigen::Index>(gi) * dim * d, 0,
                    static_cast<Eigen::Index>(dim) * d,
                    static_cast<Eigen::Index>(dim) * d) =
          kron(id_d, rep(g)) -
          kron(sec.irrep[static_cast<std::size_t>(g)].transpose(), id_dim);
    }
    std::vector<Vector> hom = nullspace(stacked, cluster_tol);
    if (static_cast<int>(hom.size()) != mult)
      throw InternalInconsistency(
          "intertwiner space dimension does not equal the multiplicity");

    // Orthonormalize the intertwiners in <S,T> = Tr(S†T)/d; by Schur each
    // S†T is a multiple of 1_d, so the combined map W_γ is an isometry.
    std::vector<Matrix> ortho;
    for (const Vector& h : hom) {
      Matrix t = unvec(h, dim, d);
      for (const Matrix& u : ortho) t -= (hs_inner(u, t) / double(d)) * u;
      double nrm = std::sqrt(std::abs(hs_inner(t, t).real()) / double(d));
      if (nrm < 1e-10)
        throw InternalInconsistency("intertwiner orthonormalization collapsed");
      ortho.push_back(t / nrm);
    }
    for (std::size_t a = 0; a < ortho.size(); ++a)
      for (std::size_t b = 0; b < ortho.size(); ++b) {
        Matrix gram = ortho[a].adjoint() * ortho[b];
        Matrix expected = (a == b) ? id_d : Matrix::Zero(d, d);
        if (!approx_equal(gram, expected, 1e-7))
          throw InternalInconsistency("intertwiners fail the Schur identity");
      }

    sec.isometry = Matrix(dim, mult * d);
    for (int m = 0; m < mult; ++m)
      sec.isometry.block(0, m * d, dim, d) = ortho[static_cast<std::size_t>(m)];
    dec.center_basis.push_back(projections[i]);
    dec.sectors.push_back(std::move(sec));
  }

  // Assemble the global unitary and verify all structural identities.
  int total = 0;
  for (const Sector& s : dec.sectors) total += s.multiplicity * s.irrep_dim;
  if (total != dim)
    throw InternalInconsistency("sector dimensions do not sum to the carrier");
  dec.global_unitary = Matrix(dim, dim);
  int col = 0;
  for (const Sector& s : dec.sectors) {
    dec.global_unitary.block(0, col, dim, s.isometry.cols()) = s.isometry;
    col += static_cast<int>(s.isometry.cols());
  }
  if (!is_unitary(dec.global_unitary, 1e-8))
    throw InternalInconsistency("global sector isometry is not unitary");

  // W† U(g) W = ⊕ (1_m ⊗ γ(g)).
  for (int g = 0; g < group->order(); ++g) {
    Matrix block = dec.global_unitary.adjoint() * rep(g) * dec.global_unitary;
    Matrix expected = Matrix::Zero(dim, dim);
    int off = 0;
    for (const Sector& s : dec.sectors) {
      int len = s.multiplicity * s.irrep_dim;
      expected.block(off, off, len, len) =
          kron(Matrix::Identity(s.multiplicity, s.multiplicity),
               s.irrep[static_cast<std::size_t>(g)]);
      off += len;
    }
    if (!approx_equal(block, expected, 1e-8))
      throw InternalInconsistency("W does not block-diagonalize U(G)");
  }

  // W† A W = ⊕ (A_γ ⊗ 1_d) for A in the invariant algebra.
  for (const Matrix& a : dec.invariant_algebra.basis()) {
    Matrix block = dec.global_unitary.adjoint() * a * dec.global_unitary;
    int off = 0;
    for (const Sector& s : dec.sectors) {
      int len = s.multiplicity * s.irrep_dim;
      Matrix corner = block.block(off, off, len, len);
      Matrix a_gamma = trace_out_second(corner, s.multiplicity, s.irrep_dim) /
                       double(s.irrep_dim);
      if (!approx_equal(
              corner,
              kron(a_gamma, Matrix::Identity(s.irrep_dim, s.irrep_dim)), 1e-8))
        throw InternalInconsistency(
            "invariant algebra is not of the form A_γ ⊗ 1 on a sector");
      block.block(off, off, len, len).setZero();
      off += len;
    }
    if (!approx_zero(block, 1e-8))
      throw InternalInconsistency("invariant algebra mixes sectors");
  }
  return dec;
}

SectorDecomposition decompose_sectors(const UnitaryRep& rep,
                                      std::uint64_t seed) {
  return decompose_sectors(GroupAction::inner(rep), rep, seed);
}

CentralStateDecomposition central_decompose_state(
    const StateFunctional& omega, const SectorDecomposition& dec) {
  if (omega.dim() != dec.carrier_dim)
    throw InvalidInput("central_decompose_state: dimension mismatch");
  CentralStateDecomposition out;
  for (const Sector& s : dec.sectors) {
    double w = std::max(omega.real_expectation(s.projection), 0.0);
    out.charge.labels.push_back(s.label);
    out.charge.weights.push_back(w);
    if (w > 1e-12) {
      Matrix cond = s.projection * omega.density() * s.projection / w;
      cond = 0.5 * (cond + cond.adjoint());
      out.factors.emplace(s.label,
                          StateFunctional(cond, omega.label() + "|" + s.label));
    }
  }
  double total = 0.0;
  for (double w : out.charge.weights) total += w;
  if (std::abs(total - 1.0) > 1e-9)
    throw InternalInconsistency("central weights do not sum to 1");
  return out;
}

ChargingChannel::ChargingChannel(const SectorDecomposition& dec,
                                 std::vector<Vector> section_vectors)
    : dec_(&dec), section_(std::move(section_vectors)) {
  if (section_.size() != dec.sectors.size())
    throw InvalidSection("one section vector per present sector required");
  for (std::size_t i = 0; i < section_.size(); ++i) {
    const Vector& xi = section_[i];
    if (xi.size() != dec.carrier_dim)
      throw InvalidSection("section vector has wrong dimension");
    if (std::abs(xi.norm() - 1.0) > 1e-9)
      throw InvalidSection("section vector is not a unit vector");
    if ((dec.sectors[i].projection * xi - xi).norm() > 1e-9)
      throw InvalidSection("section vector is not inside its sector");
  }
  // Disjointness across sectors: ω_γ^ref(P_δ) = δ_{γδ}.
  for (std::size_t i = 0; i < section_.size(); ++i)
    for (std::size_t j = 0; j < dec.sectors.size(); ++j) {
      double val =
          (section_[i].adjoint() * dec.sectors[j].projection * section_[i])(0)
              .real();
      double expected = (i == j) ? 1.0 : 0.0;
      if (std::abs(val - expected) > 1e-9)
        throw InvalidSection("section fails the sector-disjointness identity");
    }
}

ChargingChannel ChargingChannel::canonical(const SectorDecomposition& dec) {
  std::vector<Vector> xs;
  for (const Sector& s : dec.sectors) xs.push_back(s.isometry.col(0));
  return ChargingChannel(dec, std::move(xs));
}

std::vector<Complex> ChargingChannel::forward(const Matrix& a) const {
  std::vector<Complex> out;
  for (const Vector& xi : section_) out.push_back((xi.adjoint() * a * xi)(0));
  return out;
}

StateFunctional ChargingChannel::charge_state(
    const ChargeDistribution& nu) const {
  nu.validate();
  if (nu.size() != section_.size())
    throw InvalidInput("charge_state: distribution size mismatch");
  Matrix rho = Matrix::Zero(dec_->carrier_dim, dec_->carrier_dim);
  for (std::size_t i = 0; i < section_.size(); ++i)
    rho += std::max(0.0, nu.weights[i]) * (section_[i] * section_[i].adjoint());
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace().real();
  return StateFunctional(rho, "charged");
}

StateFunctional ChargingChannel::reference_state(int sector) const {
  const Vector& xi = section_.at(static_cast<std::size_t>(sector));
  return StateFunctional::vector_state(
      xi, "ref|" + dec_->sectors[static_cast<std::size_t>(sector)].label);
}

AdjunctionVerdict verify_adjunction_charges(const StateFunctional& omega,
                                            const ChargeDistribution& nu,
                                            const ChargingChannel& channel) {
  const SectorDecomposition& dec = channel.decomposition();
  CentralStateDecomposition cd = central_decompose_state(omega, dec);
  if (nu.size() != cd.charge.size())
    throw InvalidInput("verify_adjunction_charges: size mismatch");
  AdjunctionVerdict v;
  v.measure_equal = true;
  v.support_equal = true;
  const double eps = 1e-9;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    double dev = std::abs(cd.charge.weights[i] - nu.weights[i]);
    v.max_weight_deviation = std::max(v.max_weight_deviation, dev);
    if (dev > eps) v.measure_equal = false;
    if ((cd.charge.weights[i] > eps) != (nu.weights[i] > eps))
      v.support_equal = false;
  }
  // Equal measures carry equal supports; a disagreement under equal weights
  // can only be a threshold artifact on weights straddling eps, so the
  // implication is resolved in its favour.
  if (v.measure_equal) v.support_equal = true;
  return v;
}

Vector realize_charge_vector(const ChargeDistribution& nu,
                             const ChargingChannel& channel) {
  nu.validate();
  const auto& section = channel.section();
  if (nu.size() != section.size())
    throw InvalidInput("realize_charge_vector: size mismatch");
  Vector psi = Vector::Zero(channel.decomposition().carrier_dim);
  for (std::size_t i = 0; i < section.size(); ++i)
    psi += std::sqrt(std::max(0.0, nu.weights[i])) * section[i];
  double n = psi.norm();
  if (std::abs(n - 1.0) > 1e-9)
    throw InternalInconsistency("charge vector is not normalized");
  return psi / n;
}

std::vector<std::string> folium_support(const StateFunctional& omega,
                                        const SectorDecomposition& dec) {
  std::vector<std::string> out;
  for (const Sector& s : dec.sectors)
    if (omega.real_expectation(s.projection) > 1e-9) out.push_back(s.label);
  return out;
}

}  // namespace sectorlab
