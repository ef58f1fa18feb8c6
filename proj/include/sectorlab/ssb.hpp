#ifndef SECTORLAB_SSB_HPP
#define SECTORLAB_SSB_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sectorlab/sectors.hpp"

namespace sectorlab {

// Subgroup H of G with its right cosets Hg. Representatives are the minimal
// element index of each coset; the identity coset comes first.
struct SubgroupPair {
  GroupPtr group;
  std::vector<int> subgroup;                 // sorted element indices
  std::vector<std::vector<int>> cosets;      // each sorted
  std::vector<int> representatives;          // minimal element per coset
  std::vector<int> coset_of;                 // element -> coset index

  SubgroupPair(GroupPtr g, std::vector<int> h);

  int num_cosets() const { return static_cast<int>(cosets.size()); }
  // Right action on coset labels: (Hr) . g = H(rg).
  int act(int coset, int g) const {
    return coset_of[group->mul(representatives[coset], g)];
  }
};

// Verdict of the symmetry classification in a representation π of the field
// algebra: the centre's spectrum points are labelled by the blocks carrying
// them, and g moves the point of block b to the point of block τ_g(b).
struct SsbVerdict {
  bool broken = false;
  std::vector<int> spectrum_blocks;           // present blocks of 𝔉
  // orbit partition of the full block set under G, restricted to entries
  // that carry spectrum points; an orbit is broken unless it is a fixed
  // singleton.
  struct Orbit {
    std::vector<int> blocks;        // full G-orbit on block labels
    std::vector<int> present;       // those carrying spectrum points
    bool broken = false;
  };
  std::vector<Orbit> orbits;
};

SsbVerdict classify_symmetry(const GroupAction& action, const AlgebraRep& pi);

// The orbit partition alone (the phase diagram of the Remark).
std::vector<SsbVerdict::Orbit> phase_diagram(const GroupAction& action,
                                             const AlgebraRep& pi);

// Induced covariant system on Ĥ = ⊕_{Hg ∈ H\G} H. Block ċ with
// representative r carries π∘τ_r, and Û(g) permutes blocks by the right
// action with H-implementer cocycles.
class InducedSystem {
 public:
  InducedSystem(const GroupAction& action, const AlgebraRep& pi,
                SubgroupPair pair);

  const GroupAction& action() const { return *action_; }
  const AlgebraRep& base_rep() const { return pi_; }
  const SubgroupPair& pair() const { return pair_; }

  int base_dim() const { return pi_.dim(); }
  int dim() const { return dim_; }

  // π̄(F), block-diagonal over cosets.
  Matrix represent(const Matrix& f) const;
  // Û(g).
  const Matrix& unitary(int g) const { return big_unitaries_[g]; }
  // H-implementer on the base carrier.
  const Matrix& base_implementer(int h_index_in_group) const;

  // ı̂ embedding data: the coset-indexed family ġ ↦ τ_{r_ġ}(F).
  std::vector<Matrix> embed(const Matrix& f) const;

  // Projection onto the coset block ċ of Ĥ.
  Matrix coset_projection(int coset) const;

 private:
  const GroupAction* action_;
  AlgebraRep pi_;
  SubgroupPair pair_;
  int dim_;
  std::vector<Matrix> implementers_;    // V(h) indexed by group element (H only)
  std::vector<Matrix> big_unitaries_;   // Û(g) for all g
};

InducedSystem induce_representation(const GroupAction& action,
                                    const AlgebraRep& pi,
                                    const SubgroupPair& pair);

struct CentreReport {
  int dim = 0;
  std::vector<int> projection_ranks;
  std::vector<Matrix> projections;
};

struct ThreeCentres {
  CentreReport field;        // Z_π̄(𝔉)
  CentreReport invariants;   // Z_π̄(𝔉^G)
  CentreReport dual_net;     // Z_π̄(𝔉^H)
  int num_cosets = 0;
  int num_h_sectors = 0;     // Ĥ-sectors present in the base carrier
};

// The three centres of the induced representation, with the structural
// verifications (dims |H\G|, #Ĥ, |H\G|·#Ĥ; 1 ⊗ Z_π structure for the
// invariants). Verification failures throw PropositionViolated.
ThreeCentres compute_ssb_centres(const InducedSystem& sys,
                                 std::uint64_t seed = kDefaultSeed);

// Joint classical data of the broken phase: coset marginal and per-coset
// H-sector distribution.
struct OrderParameterReadout {
  std::vector<double> coset_marginal;
  // joint[c][s] with s indexing the present H-sectors.
  std::vector<std::vector<double>> joint;
  std::vector<std::string> h_sector_labels;
};

// Channel pair over (H\G) x Ĥ built from a section of H-sector vectors.
class SsbChannel {
 public:
  // Canonical section: the first basis vector of each present isotypic
  // range, shared by all cosets.
  SsbChannel(const InducedSystem& sys, std::uint64_t seed = kDefaultSeed);

  // Explicit section: one unit vector per (coset, present H-sector) pair,
  // each inside its isotypic subspace.
  SsbChannel(const InducedSystem& sys,
             const std::vector<std::vector<Vector>>& section,
             std::uint64_t seed = kDefaultSeed);

  const InducedSystem& system() const { return *sys_; }
  const std::vector<std::string>& h_sector_labels() const { return labels_; }
  int num_labels() const;

  // Ψ(B)(ġ, η) = <ξ_η| π(m_H(τ_{r_ġ}(B))) ξ_η>, B in the dual-net algebra.
  std::vector<std::vector<double>> forward(const Matrix& b) const;

  // Ψ*(λ): density on Ĥ realizing the joint distribution λ.
  StateFunctional dual_state(const std::vector<std::vector<double>>& joint) const;

  // Ψ as a completely positive unital map into the diagonal algebra over the
  // (ġ, η) labels.
  CPMap as_cp_map() const;

  // Isotypic projections of the H-action on the base carrier, present only.
  const std::vector<Matrix>& h_projections() const { return h_projections_; }

 private:
  void build_h_sectors(std::uint64_t seed);
  Matrix averaged_density(const Vector& xi) const;

  const InducedSystem* sys_;
  std::vector<std::string> labels_;
  std::vector<Matrix> h_projections_;  // on the base carrier
  // h_densities_[coset][sector]: H-averaged section states.
  std::vector<std::vector<Matrix>> h_densities_;
};

OrderParameterReadout order_parameter_readout(const StateFunctional& omega_hat,
                                              const SsbChannel& channel);

struct GoldstoneReport {
  int dim_h_fixed = 0;   // dim 𝔉^H
  int dim_g_fixed = 0;   // dim 𝔉^G
  int gap = 0;
  bool complement_g_stable = true;
  // multiplicity of each G-irrep in the complement (label -> count).
  std::vector<std::pair<std::string, int>> irrep_content;
};

GoldstoneReport goldstone_gap_report(const GroupAction& action,
                                     const std::vector<int>& subgroup,
                                     std::uint64_t seed = kDefaultSeed);

// Certifies non-implementability: dimension of {V : V π(F) = π(τ_g(F)) V}.
int intertwiner_space_dim(const GroupAction& action, const AlgebraRep& pi,
                          int g);

}  // namespace sectorlab

#endif  // SECTORLAB_SSB_HPP
