#include "sectorlab/ssb.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace sectorlab {

namespace {

// H as a group in its own right: local indices into `subgroup` with the
// multiplication inherited from G.
GroupPtr subgroup_as_group(const GroupPtr& g, const std::vector<int>& h) {
  const int m = static_cast<int>(h.size());
  std::vector<int> local(static_cast<std::size_t>(g->order()), -1);
  for (int i = 0; i < m; ++i) local[static_cast<std::size_t>(h[i])] = i;
  std::vector<std::vector<int>> table(static_cast<std::size_t>(m),
                                      std::vector<int>(m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      int prod = g->mul(h[static_cast<std::size_t>(a)],
                        h[static_cast<std::size_t>(b)]);
      int idx = local[static_cast<std::size_t>(prod)];
      if (idx < 0)
        throw InvalidInput("subgroup is not closed under multiplication");
      table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = idx;
    }
  return FiniteGroup::from_cayley(std::move(table), "H");
}

}  // namespace

// ---------------------------------------------------------------------------
// SubgroupPair
// ---------------------------------------------------------------------------

SubgroupPair::SubgroupPair(GroupPtr g, std::vector<int> h)
    : group(std::move(g)), subgroup(std::move(h)) {
  std::sort(subgroup.begin(), subgroup.end());
  subgroup.erase(std::unique(subgroup.begin(), subgroup.end()),
                 subgroup.end());
  if (!group->is_subgroup(subgroup))
    throw InvalidInput("SubgroupPair: not a subgroup");
  coset_of.assign(static_cast<std::size_t>(group->order()), -1);
  for (int g0 = 0; g0 < group->order(); ++g0) {
    if (coset_of[static_cast<std::size_t>(g0)] >= 0) continue;
    int id = static_cast<int>(cosets.size());
    std::vector<int> coset;
    for (int h0 : subgroup) {
      int e = group->mul(h0, g0);
      if (coset_of[static_cast<std::size_t>(e)] < 0) {
        coset_of[static_cast<std::size_t>(e)] = id;
        coset.push_back(e);
      }
    }
    std::sort(coset.begin(), coset.end());
    representatives.push_back(coset.front());
    cosets.push_back(std::move(coset));
  }
}

// ---------------------------------------------------------------------------
// Symmetry classification
// ---------------------------------------------------------------------------

std::vector<SsbVerdict::Orbit> phase_diagram(const GroupAction& action,
                                             const AlgebraRep& pi) {
  const int nb = static_cast<int>(action.algebra().blocks().size());
  const int order = action.group()->order();
  std::vector<bool> seen(static_cast<std::size_t>(nb), false);
  std::vector<SsbVerdict::Orbit> orbits;
  for (int b = 0; b < nb; ++b) {
    if (seen[static_cast<std::size_t>(b)]) continue;
    SsbVerdict::Orbit orbit;
    std::set<int> members;
    for (int g = 0; g < order; ++g) members.insert(action.block_image(g, b));
    for (int m : members) {
      seen[static_cast<std::size_t>(m)] = true;
      orbit.blocks.push_back(m);
      if (pi.block_present(m)) orbit.present.push_back(m);
    }
    orbit.broken = orbit.blocks.size() > 1;
    if (!orbit.present.empty()) orbits.push_back(std::move(orbit));
  }
  return orbits;
}

SsbVerdict classify_symmetry(const GroupAction& action, const AlgebraRep& pi) {
  SsbVerdict v;
  for (std::size_t k = 0; k < action.algebra().blocks().size(); ++k)
    if (pi.block_present(static_cast<int>(k)))
      v.spectrum_blocks.push_back(static_cast<int>(k));
  v.orbits = phase_diagram(action, pi);
  v.broken = false;
  for (const auto& orbit : v.orbits)
    if (orbit.broken) v.broken = true;
  return v;
}

// ---------------------------------------------------------------------------
// Induced representation
// ---------------------------------------------------------------------------

InducedSystem::InducedSystem(const GroupAction& action, const AlgebraRep& pi,
                             SubgroupPair pair)
    : action_(&action), pi_(pi), pair_(std::move(pair)) {
  if (pair_.group != action.group())
    throw InvalidInput("InducedSystem: pair over a different group");
  const auto& alg = action.algebra();
  if (pi_.algebra().ambient_dim() != alg.ambient_dim())
    throw InvalidInput("InducedSystem: representation of a different algebra");
  const int nb = static_cast<int>(alg.blocks().size());
  const int base = pi_.dim();
  dim_ = pair_.num_cosets() * base;

  // H-implementers on the base carrier, built from the action data. The
  // multiplicity pattern must be invariant under every σ_h.
  implementers_.assign(static_cast<std::size_t>(action.group()->order()),
                       Matrix());
  std::vector<int> chunk_offsets(static_cast<std::size_t>(nb), 0);
  {
    int off = 0;
    for (int k = 0; k < nb; ++k) {
      chunk_offsets[static_cast<std::size_t>(k)] = off;
      off += pi_.multiplicities()[static_cast<std::size_t>(k)] *
             alg.blocks()[static_cast<std::size_t>(k)].dim;
    }
  }
  for (int h : pair_.subgroup) {
    const BlockAutomorphism& a = action.automorphism(h);
    Matrix v = Matrix::Zero(base, base);
    for (int j = 0; j < nb; ++j) {
      int t = a.block_perm[static_cast<std::size_t>(j)];
      int mj = pi_.multiplicities()[static_cast<std::size_t>(j)];
      int mt = pi_.multiplicities()[static_cast<std::size_t>(t)];
      if (mj != mt)
        throw NotHCovariant(
            "subgroup permutes blocks with different multiplicities in π");
      if (mj == 0) continue;
      int d = alg.blocks()[static_cast<std::size_t>(j)].dim;
      const Matrix& u = a.block_unitaries[static_cast<std::size_t>(t)];
      v.block(chunk_offsets[static_cast<std::size_t>(t)],
              chunk_offsets[static_cast<std::size_t>(j)], mj * d, mj * d) =
          kron(Matrix::Identity(mj, mj), u);
    }
    implementers_[static_cast<std::size_t>(h)] = std::move(v);
  }

  // Implementers must be unitary, compose as H, and implement τ_h on π.
  for (int h : pair_.subgroup) {
    const Matrix& v = implementers_[static_cast<std::size_t>(h)];
    if (!is_unitary(v, 1e-8))
      throw NotHCovariant("H-implementer is not unitary");
    for (int h2 : pair_.subgroup) {
      int prod = action.group()->mul(h, h2);
      if (!approx_equal(v * implementers_[static_cast<std::size_t>(h2)],
                        implementers_[static_cast<std::size_t>(prod)], 1e-8))
        throw NotHCovariant("H-implementers do not form a representation");
    }
    for (const Matrix& f : alg.basis()) {
      Matrix lhs = pi_.apply(action.apply(h, f));
      Matrix rhs = v * pi_.apply(f) * v.adjoint();
      if (!approx_equal(lhs, rhs, 1e-8))
        throw NotHCovariant("H-implementer fails the covariance relation");
    }
  }

  // Û(g): block (ċ, ċ·g) carries V(r_ċ g r_{ċg}^{-1}).
  const int nc = pair_.num_cosets();
  big_unitaries_.reserve(static_cast<std::size_t>(action.group()->order()));
  for (int g = 0; g < action.group()->order(); ++g) {
    Matrix u = Matrix::Zero(dim_, dim_);
    for (int c = 0; c < nc; ++c) {
      int cg = pair_.act(c, g);
      int h = action.group()->mul(
          action.group()->mul(pair_.representatives[c], g),
          action.group()->inv(pair_.representatives[cg]));
      u.block(c * base, cg * base, base, base) =
          implementers_[static_cast<std::size_t>(h)];
    }
    big_unitaries_.push_back(std::move(u));
  }

  // Exhaustive verification: Û is a representation and implements τ on π̄.
  for (int g = 0; g < action.group()->order(); ++g) {
    if (!is_unitary(big_unitaries_[static_cast<std::size_t>(g)], 1e-8))
      throw InternalInconsistency("induced unitary is not unitary");
    for (int g2 = 0; g2 < action.group()->order(); ++g2) {
      int prod = action.group()->mul(g, g2);
      if (!approx_equal(big_unitaries_[static_cast<std::size_t>(g)] *
                            big_unitaries_[static_cast<std::size_t>(g2)],
                        big_unitaries_[static_cast<std::size_t>(prod)], 1e-8))
        throw InternalInconsistency(
            "induced unitaries are not a representation");
    }
  }
  for (int g = 0; g < action.group()->order(); ++g)
    for (const Matrix& f : alg.basis()) {
      Matrix lhs = represent(action.apply(g, f));
      Matrix rhs = big_unitaries_[static_cast<std::size_t>(g)] * represent(f) *
                   big_unitaries_[static_cast<std::size_t>(g)].adjoint();
      if (!approx_equal(lhs, rhs, 1e-8))
        throw InternalInconsistency(
            "induced representation fails the covariance relation");
    }
}

Matrix InducedSystem::represent(const Matrix& f) const {
  const int base = pi_.dim();
  Matrix out = Matrix::Zero(dim_, dim_);
  for (int c = 0; c < pair_.num_cosets(); ++c) {
    Matrix part = pi_.apply(action_->apply(pair_.representatives[c], f));
    out.block(c * base, c * base, base, base) = part;
  }
  return out;
}

const Matrix& InducedSystem::base_implementer(int h) const {
  const Matrix& v = implementers_.at(static_cast<std::size_t>(h));
  if (v.size() == 0)
    throw InvalidInput("base_implementer: element not in the subgroup");
  return v;
}

std::vector<Matrix> InducedSystem::embed(const Matrix& f) const {
  std::vector<Matrix> out;
  for (int c = 0; c < pair_.num_cosets(); ++c)
    out.push_back(action_->apply(pair_.representatives[c], f));
  return out;
}

Matrix InducedSystem::coset_projection(int coset) const {
  const int base = pi_.dim();
  Matrix p = Matrix::Zero(dim_, dim_);
  p.block(coset * base, coset * base, base, base) =
      Matrix::Identity(base, base);
  return p;
}

InducedSystem induce_representation(const GroupAction& action,
                                    const AlgebraRep& pi,
                                    const SubgroupPair& pair) {
  return InducedSystem(action, pi, pair);
}

// ---------------------------------------------------------------------------
// Three centres
// ---------------------------------------------------------------------------

namespace {

CentreReport centre_report(const std::vector<Matrix>& image, int dim,
                           std::uint64_t seed) {
  FiniteCStarAlgebra alg = generated_algebra(image, dim);
  CenterDecomposition cd = center_of(alg, seed);
  CentreReport r;
  r.dim = cd.center.dim();
  for (const Matrix& p : cd.minimal_projections) {
    r.projection_ranks.push_back(
        static_cast<int>(std::lround(p.trace().real())));
    r.projections.push_back(p);
  }
  return r;
}

}  // namespace

ThreeCentres compute_ssb_centres(const InducedSystem& sys,
                                 std::uint64_t seed) {
  const GroupAction& action = sys.action();
  const auto& alg = action.algebra();
  ThreeCentres out;
  out.num_cosets = sys.pair().num_cosets();

  // Ĥ-sectors present: isotypic count of the H-implementing representation
  // on the base carrier.
  GroupPtr hgroup = subgroup_as_group(action.group(), sys.pair().subgroup);
  std::vector<Matrix> hmats;
  for (int i = 0; i < hgroup->order(); ++i)
    hmats.push_back(
        sys.base_implementer(sys.pair().subgroup[static_cast<std::size_t>(i)]));
  UnitaryRep hrep(hgroup, hmats);
  GroupDual hdual = character_table(hgroup, seed);
  out.num_h_sectors = 0;
  for (const Matrix& p : isotypic_projections(hrep, hdual))
    if (std::lround(p.trace().real()) > 0) ++out.num_h_sectors;

  // (i) Z_π̄(𝔉).
  std::vector<Matrix> field_image;
  for (const Matrix& f : alg.basis()) field_image.push_back(sys.represent(f));
  out.field = centre_report(field_image, sys.dim(), seed);
  if (sys.base_rep().is_factor() && out.field.dim != out.num_cosets)
    throw PropositionViolated(
        "dim of the field centre in the induced representation is not the "
        "number of cosets");

  // (ii) Z_π̄(𝔉^G), with the 1 ⊗ Z_π structure check.
  FiniteCStarAlgebra invariants = fixed_point_algebra(action);
  std::vector<Matrix> inv_image, inv_base_image;
  for (const Matrix& a : invariants.basis()) {
    inv_image.push_back(sys.represent(a));
    inv_base_image.push_back(sys.base_rep().apply(a));
  }
  out.invariants = centre_report(inv_image, sys.dim(), seed);
  CentreReport base_inv = centre_report(inv_base_image, sys.base_dim(), seed);
  if (out.invariants.dim != base_inv.dim)
    throw PropositionViolated(
        "invariant-algebra centre in the induced representation differs from "
        "the base representation");
  for (const Matrix& p : out.invariants.projections) {
    bool matched = false;
    for (const Matrix& q : base_inv.projections) {
      Matrix lifted =
          kron(Matrix::Identity(out.num_cosets, out.num_cosets), q);
      if (approx_equal(p, lifted, 1e-8)) matched = true;
    }
    if (!matched)
      throw PropositionViolated(
          "invariant-algebra centre is not of the form 1 ⊗ z");
  }
  if (out.invariants.dim != out.num_h_sectors)
    throw PropositionViolated(
        "invariant-algebra centre dim does not equal the number of present "
        "H-sectors");

  // (iii) Z_π̄(𝔉^H).
  std::vector<Matrix> dual_net;
  for (const Matrix& f : alg.basis())
    dual_net.push_back(subgroup_average(action, sys.pair().subgroup, f));
  dual_net = canonical_matrix_span(dual_net, tolerances().cluster);
  std::vector<Matrix> dual_image;
  for (const Matrix& b : dual_net) dual_image.push_back(sys.represent(b));
  out.dual_net = centre_report(dual_image, sys.dim(), seed);
  if (out.dual_net.dim != out.num_cosets * out.num_h_sectors)
    throw PropositionViolated(
        "dual-net centre dim is not (cosets) x (present H-sectors)");
  return out;
}

// ---------------------------------------------------------------------------
// Order-parameter channel
// ---------------------------------------------------------------------------

void SsbChannel::build_h_sectors(std::uint64_t seed) {
  const GroupAction& action = sys_->action();
  GroupPtr hgroup = subgroup_as_group(action.group(), sys_->pair().subgroup);
  std::vector<Matrix> hmats;
  for (int i = 0; i < hgroup->order(); ++i)
    hmats.push_back(sys_->base_implementer(
        sys_->pair().subgroup[static_cast<std::size_t>(i)]));
  UnitaryRep hrep(hgroup, hmats);
  GroupDual hdual = character_table(hgroup, seed);
  std::vector<Matrix> all = isotypic_projections(hrep, hdual);
  for (int i = 0; i < hdual.size(); ++i) {
    if (std::lround(all[static_cast<std::size_t>(i)].trace().real()) < 1)
      continue;
    labels_.push_back(hdual.labels[static_cast<std::size_t>(i)]);
    h_projections_.push_back(all[static_cast<std::size_t>(i)]);
  }
}

Matrix SsbChannel::averaged_density(const Vector& xi) const {
  Matrix d = Matrix::Zero(sys_->base_dim(), sys_->base_dim());
  for (int h : sys_->pair().subgroup) {
    Vector w = sys_->base_implementer(h) * xi;
    d += w * w.adjoint();
  }
  d /= static_cast<double>(sys_->pair().subgroup.size());
  return 0.5 * (d + d.adjoint());
}

SsbChannel::SsbChannel(const InducedSystem& sys, std::uint64_t seed)
    : sys_(&sys) {
  build_h_sectors(seed);
  // Canonical section: first basis vector of each present isotypic range,
  // shared by every coset; the reference densities are the H-averaged
  // vector states.
  std::vector<Matrix> per_sector;
  for (const Matrix& p : h_projections_) {
    std::vector<Vector> cols;
    for (Eigen::Index j = 0; j < p.cols(); ++j) cols.push_back(p.col(j));
    std::vector<Vector> range = canonical_span(cols, tolerances().cluster);
    if (range.empty())
      throw InternalInconsistency("empty isotypic range in SsbChannel");
    per_sector.push_back(averaged_density(range.front()));
  }
  h_densities_.assign(static_cast<std::size_t>(sys.pair().num_cosets()),
                      per_sector);
}

SsbChannel::SsbChannel(const InducedSystem& sys,
                       const std::vector<std::vector<Vector>>& section,
                       std::uint64_t seed)
    : sys_(&sys) {
  build_h_sectors(seed);
  if (static_cast<int>(section.size()) != sys.pair().num_cosets())
    throw InvalidSection("one section row per coset required");
  for (const auto& row : section) {
    if (row.size() != h_projections_.size())
      throw InvalidSection("one section vector per present H-sector required");
    std::vector<Matrix> densities;
    for (std::size_t t = 0; t < row.size(); ++t) {
      const Vector& xi = row[t];
      if (xi.size() != sys.base_dim() || std::abs(xi.norm() - 1.0) > 1e-9)
        throw InvalidSection("section vector is not a unit vector");
      if ((h_projections_[t] * xi - xi).norm() > 1e-9)
        throw InvalidSection("section vector is not inside its H-sector");
      densities.push_back(averaged_density(xi));
    }
    h_densities_.push_back(std::move(densities));
  }
}

int SsbChannel::num_labels() const {
  return sys_->pair().num_cosets() * static_cast<int>(labels_.size());
}

std::vector<std::vector<double>> SsbChannel::forward(const Matrix& b) const {
  const int nc = sys_->pair().num_cosets();
  std::vector<std::vector<double>> out(
      static_cast<std::size_t>(nc), std::vector<double>(labels_.size(), 0.0));
  for (int c = 0; c < nc; ++c) {
    Matrix moved = sys_->base_rep().apply(
        sys_->action().apply(sys_->pair().representatives[c], b));
    for (std::size_t s = 0; s < labels_.size(); ++s)
      out[static_cast<std::size_t>(c)][s] =
          (h_densities_[static_cast<std::size_t>(c)][s] * moved)
              .trace()
              .real();
  }
  return out;
}

StateFunctional SsbChannel::dual_state(
    const std::vector<std::vector<double>>& joint) const {
  const int nc = sys_->pair().num_cosets();
  const int base = sys_->base_dim();
  if (static_cast<int>(joint.size()) != nc)
    throw InvalidInput("dual_state: wrong coset count");
  Matrix rho = Matrix::Zero(sys_->dim(), sys_->dim());
  double total = 0.0;
  for (int c = 0; c < nc; ++c) {
    if (joint[static_cast<std::size_t>(c)].size() != labels_.size())
      throw InvalidInput("dual_state: wrong sector count");
    for (std::size_t s = 0; s < labels_.size(); ++s) {
      double w = joint[static_cast<std::size_t>(c)][s];
      if (w < -1e-12) throw InvalidInput("dual_state: negative weight");
      total += w;
      rho.block(c * base, c * base, base, base) +=
          w * h_densities_[static_cast<std::size_t>(c)][s];
    }
  }
  if (std::abs(total - 1.0) > 1e-10)
    throw InvalidInput("dual_state: weights do not sum to 1");
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace().real();
  return StateFunctional(rho, "ssb-charged");
}

CPMap SsbChannel::as_cp_map() const {
  const int n = sys_->action().algebra().ambient_dim();
  const int nl = num_labels();
  const int ns = static_cast<int>(labels_.size());
  const FiniteCStarAlgebra& alg = sys_->action().algebra();
  Matrix s = Matrix::Zero(Eigen::Index(nl) * nl, Eigen::Index(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Matrix e = Matrix::Zero(n, n);
      e(i, j) = 1.0;
      Matrix pinched = alg.project(e);
      Matrix diag = Matrix::Zero(nl, nl);
      if (pinched.norm() > 1e-14) {
        for (int c = 0; c < sys_->pair().num_cosets(); ++c) {
          Matrix moved = sys_->base_rep().apply(sys_->action().apply(
              sys_->pair().representatives[c], pinched));
          for (int t = 0; t < ns; ++t)
            diag(c * ns + t, c * ns + t) =
                (h_densities_[static_cast<std::size_t>(c)]
                             [static_cast<std::size_t>(t)] *
                 moved)
                    .trace();
        }
      }
      s.col(Eigen::Index(j) * n + i) = vec(diag);
    }
  return CPMap::from_superop(std::move(s), n, nl,
                             CPMap::Direction::observable);
}

OrderParameterReadout order_parameter_readout(const StateFunctional& omega_hat,
                                              const SsbChannel& channel) {
  const InducedSystem& sys = channel.system();
  if (omega_hat.dim() != sys.dim())
    throw InvalidInput("order_parameter_readout: dimension mismatch");
  const int nc = sys.pair().num_cosets();
  const int base = sys.base_dim();
  OrderParameterReadout out;
  out.h_sector_labels = channel.h_sector_labels();
  out.joint.assign(static_cast<std::size_t>(nc),
                   std::vector<double>(out.h_sector_labels.size(), 0.0));
  for (int c = 0; c < nc; ++c) {
    Matrix block = omega_hat.density().block(c * base, c * base, base, base);
    out.coset_marginal.push_back(block.trace().real());
    for (std::size_t s = 0; s < channel.h_projections().size(); ++s)
      out.joint[static_cast<std::size_t>(c)][s] =
          (block * channel.h_projections()[s]).trace().real();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Goldstone gap
// ---------------------------------------------------------------------------

GoldstoneReport goldstone_gap_report(const GroupAction& action,
                                     const std::vector<int>& subgroup,
                                     std::uint64_t seed) {
  const auto& alg = action.algebra();
  const double tol = tolerances().cluster;
  std::vector<Matrix> g_fixed, h_fixed;
  for (const Matrix& b : alg.basis()) {
    g_fixed.push_back(group_average(action, b));
    h_fixed.push_back(subgroup_average(action, subgroup, b));
  }
  g_fixed = canonical_matrix_span(g_fixed, tol);
  h_fixed = canonical_matrix_span(h_fixed, tol);

  GoldstoneReport rep;
  rep.dim_g_fixed = static_cast<int>(g_fixed.size());
  rep.dim_h_fixed = static_cast<int>(h_fixed.size());
  rep.gap = rep.dim_h_fixed - rep.dim_g_fixed;

  // Orthogonal complement of the G-fixed algebra inside the H-fixed one.
  std::vector<Matrix> complement;
  for (const Matrix& b : h_fixed) {
    Matrix r = b;
    for (const Matrix& g : g_fixed) r -= hs_inner(g, r) * g;
    if (r.norm() > 1e-9) complement.push_back(r);
  }
  complement = canonical_matrix_span(complement, tol);
  if (static_cast<int>(complement.size()) != rep.gap)
    throw InternalInconsistency("goldstone complement dimension mismatch");

  // The complement is G-stable when H is normal; otherwise extend to the
  // G-orbit span before decomposing.
  std::vector<Matrix> w = complement;
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<Matrix> extended = w;
    for (const Matrix& b : w)
      for (int g = 0; g < action.group()->order(); ++g)
        extended.push_back(action.apply(g, b));
    std::vector<Matrix> next = canonical_matrix_span(extended, tol);
    if (next.size() != w.size()) {
      w = std::move(next);
      grew = true;
    }
  }
  rep.complement_g_stable = (w.size() == complement.size());

  // Multiplicities of each G-irrep on the stable span via characters.
  GroupDual dual = character_table(action.group(), seed);
  const int order = action.group()->order();
  std::vector<Complex> traces(static_cast<std::size_t>(order), 0.0);
  for (int g = 0; g < order; ++g) {
    Complex tr = 0.0;
    for (const Matrix& b : w) tr += hs_inner(b, action.apply(g, b));
    traces[static_cast<std::size_t>(g)] = tr;
  }
  int content_total = 0;
  for (int i = 0; i < dual.size(); ++i) {
    Complex acc = 0.0;
    for (int g = 0; g < order; ++g)
      acc +=
          std::conj(dual.character(i, g)) * traces[static_cast<std::size_t>(g)];
    acc /= static_cast<double>(order);
    int m = static_cast<int>(std::lround(acc.real()));
    if (std::abs(acc - Complex(m, 0)) > 1e-6)
      throw InternalInconsistency("goldstone irrep multiplicity not integral");
    if (m > 0) rep.irrep_content.emplace_back(dual.labels[i], m);
    content_total += m * dual.dims[i];
  }
  if (content_total != static_cast<int>(w.size()))
    throw InternalInconsistency("goldstone irrep content does not add up");
  return rep;
}

int intertwiner_space_dim(const GroupAction& action, const AlgebraRep& pi,
                          int g) {
  const int n = pi.dim();
  const auto& basis = action.algebra().basis();
  Matrix stacked(static_cast<Eigen::Index>(basis.size()) * n * n,
                 static_cast<Eigen::Index>(n) * n);
  const Matrix id = Matrix::Identity(n, n);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    Matrix lhs = pi.apply(action.apply(g, basis[k]));  // π(τ_g F)
    Matrix rhs = pi.apply(basis[k]);                   // π(F)
    // V π(F) = π(τ_g F) V  <=>  (π(F)ᵀ ⊗ 1 - 1 ⊗ π(τ_g F)) vec(V) = 0
    stacked.block(static_cast<Eigen::Index>(k) * n * n, 0,
                  static_cast<Eigen::Index>(n) * n,
                  static_cast<Eigen::Index>(n) * n) =
        kron(rhs.transpose(), id) - kron(id, lhs);
  }
  return static_cast<int>(nullspace(stacked, tolerances().cluster).size());
}

}  // namespace sectorlab
