#ifndef SECTORLAB_GROUP_HPP
#define SECTORLAB_GROUP_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "sectorlab/algebra.hpp"
#include "sectorlab/numerics.hpp"

namespace sectorlab {

// Finite group given by its Cayley table; element 0 is the identity.
class FiniteGroup {
 public:
  static std::shared_ptr<const FiniteGroup> cyclic(int n);
  static std::shared_ptr<const FiniteGroup> dihedral(int n);  // order 2n
  static std::shared_ptr<const FiniteGroup> symmetric3();
  static std::shared_ptr<const FiniteGroup> symmetric4();
  static std::shared_ptr<const FiniteGroup> quaternion();
  static std::shared_ptr<const FiniteGroup> from_cayley(
      std::vector<std::vector<int>> table, std::string name = "custom");

  int order() const { return order_; }
  const std::string& name() const { return name_; }
  int mul(int a, int b) const { return cayley_[a][b]; }
  int inv(int a) const { return inverse_[a]; }
  const std::vector<std::vector<int>>& cayley() const { return cayley_; }

  int num_classes() const { return static_cast<int>(classes_.size()); }
  const std::vector<std::vector<int>>& conjugacy_classes() const {
    return classes_;
  }
  int class_of(int g) const { return class_of_[g]; }

  bool is_subgroup(const std::vector<int>& elements) const;

  // Greedy small generating set (empty for the trivial group).
  std::vector<int> small_generating_set() const;

 private:
  FiniteGroup(std::vector<std::vector<int>> table, std::string name);
  void validate() const;
  void compute_classes();

  int order_;
  std::string name_;
  std::vector<std::vector<int>> cayley_;
  std::vector<int> inverse_;
  std::vector<std::vector<int>> classes_;
  std::vector<int> class_of_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

// Unitary representation, one matrix per element.
class UnitaryRep {
 public:
  UnitaryRep(GroupPtr group, std::vector<Matrix> matrices);

  // Extends generator images through the Cayley table, then verifies the
  // homomorphism property exhaustively.
  static UnitaryRep from_generators(GroupPtr group,
                                    const std::map<int, Matrix>& generators);

  const GroupPtr& group() const { return group_; }
  int dim() const { return dim_; }
  const Matrix& operator()(int g) const { return matrices_[g]; }
  const std::vector<Matrix>& matrices() const { return matrices_; }

  UnitaryRep direct_sum(const UnitaryRep& other) const;

 private:
  GroupPtr group_;
  int dim_;
  std::vector<Matrix> matrices_;
};

// Character table: one row per irreducible class, ordered by ascending
// dimension then lexicographic character tuple. Labels are "irr0", "irr1", ...
struct GroupDual {
  GroupPtr group;
  std::vector<std::string> labels;
  std::vector<int> dims;
  // characters[i][c] = character of irrep i on conjugacy class c.
  std::vector<std::vector<Complex>> characters;

  int size() const { return static_cast<int>(labels.size()); }
  Complex character(int irrep, int element) const {
    return characters[irrep][group->class_of(element)];
  }
};

GroupDual character_table(const GroupPtr& group,
                          std::uint64_t seed = kDefaultSeed);

// P_γ = (d_γ/|G|) Σ_g χ_γ(g)* U(g), one per irrep (possibly zero).
std::vector<Matrix> isotypic_projections(const UnitaryRep& rep,
                                         const GroupDual& dual);

int irrep_multiplicity(const UnitaryRep& rep, const GroupDual& dual,
                       int irrep);

// One *-automorphism of a multi-matrix algebra: a permutation of equal-sized
// blocks followed by per-block unitary conjugation. The content of block j
// lands in block perm[j].
struct BlockAutomorphism {
  std::vector<int> block_perm;
  std::vector<Matrix> block_unitaries;  // unitaries[k] acts on block k
};

// Action of a finite group on a multi-matrix algebra, stored per element.
class GroupAction {
 public:
  // Extends generator automorphisms through the Cayley table and verifies
  // the homomorphism property exhaustively.
  GroupAction(GroupPtr group, FiniteCStarAlgebra algebra,
              const std::map<int, BlockAutomorphism>& generators);

  // Inner action by a unitary representation on the full matrix algebra.
  static GroupAction inner(const UnitaryRep& rep);

  const GroupPtr& group() const { return group_; }
  const FiniteCStarAlgebra& algebra() const { return algebra_; }
  const BlockAutomorphism& automorphism(int g) const { return autos_[g]; }

  Matrix apply(int g, const Matrix& f) const;
  int block_image(int g, int block) const {
    return autos_[g].block_perm[block];
  }

  // Global unitary on the ambient space implementing τ_g (block permutation
  // composed with the block unitaries). These compose exactly as the group.
  Matrix implementing_unitary(int g) const;

 private:
  GroupAction(GroupPtr group, FiniteCStarAlgebra algebra)
      : group_(std::move(group)), algebra_(std::move(algebra)) {}
  void verify_action() const;

  GroupPtr group_;
  FiniteCStarAlgebra algebra_;
  std::vector<BlockAutomorphism> autos_;
};

// m(F) = (1/|G|) Σ_g τ_g(F); the conditional expectation onto the fixed
// points.
Matrix group_average(const GroupAction& action, const Matrix& f);

FiniteCStarAlgebra fixed_point_algebra(const GroupAction& action);

// Restriction of the averaging to a subgroup (elements must be closed).
Matrix subgroup_average(const GroupAction& action,
                        const std::vector<int>& subgroup, const Matrix& f);

// Non-faithful representations of a multi-matrix algebra: block k appears
// with multiplicity mult[k], π(⊕X_k) = ⊕_k 1_{m_k} ⊗ X_k.
class AlgebraRep {
 public:
  AlgebraRep(const FiniteCStarAlgebra& algebra, std::vector<int> mult);

  int dim() const { return dim_; }
  const std::vector<int>& multiplicities() const { return mult_; }
  const FiniteCStarAlgebra& algebra() const { return *algebra_; }

  Matrix apply(const Matrix& f) const;
  bool block_present(int k) const { return mult_[k] > 0; }
  int num_present() const;
  bool is_factor() const { return num_present() == 1; }

 private:
  std::shared_ptr<const FiniteCStarAlgebra> algebra_;
  std::vector<int> mult_;
  std::vector<int> chunk_offsets_;
  int dim_;
};

}  // namespace sectorlab

#endif  // SECTORLAB_GROUP_HPP
