#ifndef SECTORLAB_SECTORS_HPP
#define SECTORLAB_SECTORS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sectorlab/group.hpp"

namespace sectorlab {

// One isotypic component of the covariant system: carrier ≅ C^m ⊗ C^d with
// the group acting as 1_m ⊗ γ and the invariant algebra as M_m ⊗ 1_d.
struct Sector {
  std::string label;
  int irrep_index = 0;
  int multiplicity = 0;
  int irrep_dim = 0;
  Matrix projection;            // isotypic projection on the carrier
  Matrix isometry;              // W_γ: C^{m·d} -> H, column i*d+j = e_i ⊗ f_j
  std::vector<Matrix> irrep;    // γ(g), one per group element
};

struct SectorDecomposition {
  GroupPtr group;
  GroupDual dual;
  std::vector<Matrix> rep_matrices;   // U(g) on the carrier
  int carrier_dim = 0;
  std::vector<Sector> sectors;        // only sectors with m > 0
  Matrix global_unitary;              // W = [W_γ0 | W_γ1 | ...], square
  FiniteCStarAlgebra invariant_algebra;  // A = U(G)'
  std::vector<Matrix> center_basis;      // the projections P_γ

  int sector_index(const std::string& label) const;
};

// Decomposes the carrier of U into isotypic components. The action must be
// implemented by U on the full matrix algebra of the carrier.
SectorDecomposition decompose_sectors(const GroupAction& action,
                                      const UnitaryRep& rep,
                                      std::uint64_t seed = kDefaultSeed);

// Convenience: same, with the inner action of the representation itself.
SectorDecomposition decompose_sectors(const UnitaryRep& rep,
                                      std::uint64_t seed = kDefaultSeed);

struct ChargeDistribution {
  std::vector<std::string> labels;
  std::vector<double> weights;

  double operator[](std::size_t i) const { return weights[i]; }
  std::size_t size() const { return weights.size(); }
  void validate() const;
};

struct CentralStateDecomposition {
  ChargeDistribution charge;                       // μ_ω(γ) = ω(P_γ)
  std::map<std::string, StateFunctional> factors;  // ω_γ for μ_ω(γ) > 0
};

CentralStateDecomposition central_decompose_state(
    const StateFunctional& omega, const SectorDecomposition& dec);

// Section of unit vectors ξ_γ, one per present sector, each inside its
// isotypic subspace.
class ChargingChannel {
 public:
  ChargingChannel(const SectorDecomposition& dec,
                  std::vector<Vector> section_vectors);

  // Default section: first column of each sector isometry.
  static ChargingChannel canonical(const SectorDecomposition& dec);

  const std::vector<Vector>& section() const { return section_; }
  const SectorDecomposition& decomposition() const { return *dec_; }

  // Λ(A)(γ) = <ξ_γ| A ξ_γ>.
  std::vector<Complex> forward(const Matrix& a) const;
  // Λ*(ν) = Σ_γ ν_γ |ξ_γ><ξ_γ|.
  StateFunctional charge_state(const ChargeDistribution& nu) const;
  // Reference state of sector γ.
  StateFunctional reference_state(int sector) const;

 private:
  const SectorDecomposition* dec_;
  std::vector<Vector> section_;
};

struct AdjunctionVerdict {
  bool measure_equal = false;
  bool support_equal = false;
  double max_weight_deviation = 0.0;
};

// Compares μ_ω with ν at the level of weights and of supports.
AdjunctionVerdict verify_adjunction_charges(const StateFunctional& omega,
                                            const ChargeDistribution& nu,
                                            const ChargingChannel& channel);

// Ψ = Σ_γ sqrt(ν_γ) ξ_γ; a unit vector whose charge readout is ν.
Vector realize_charge_vector(const ChargeDistribution& nu,
                             const ChargingChannel& channel);

// Labels of the sectors charged by ω: {γ : ω(P_γ) > 1e-9}.
std::vector<std::string> folium_support(const StateFunctional& omega,
                                        const SectorDecomposition& dec);

}  // namespace sectorlab

#endif  // SECTORLAB_SECTORS_HPP
