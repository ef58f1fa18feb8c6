#include "doctest.h"

#include <cmath>

#include "sectorlab/ssb.hpp"

using namespace sectorlab;

namespace {

// G = Z2 swapping the two M2 blocks of F = M2 + M2.
GroupAction block_swap_action() {
  auto g = FiniteGroup::cyclic(2);
  FiniteCStarAlgebra alg = FiniteCStarAlgebra::multi_matrix({2, 2});
  BlockAutomorphism swap;
  swap.block_perm = {1, 0};
  swap.block_unitaries = {Matrix::Identity(2, 2), Matrix::Identity(2, 2)};
  return GroupAction(g, alg, {{1, swap}});
}

// S3 acting on F = M3 + M3: the 3-cycle acts by (Ad u, Ad u^2) with
// u = diag(1, ω, ω^2); transpositions swap the blocks.
GroupAction s3_action() {
  auto g = FiniteGroup::symmetric3();
  FiniteCStarAlgebra alg = FiniteCStarAlgebra::multi_matrix({3, 3});
  const Complex w = std::polar(1.0, 2.0 * M_PI / 3.0);
  Matrix u = Matrix::Zero(3, 3);
  u(0, 0) = 1;
  u(1, 1) = w;
  u(2, 2) = w * w;
  BlockAutomorphism cycle;  // element 3 = the 3-cycle (0 1 2)
  cycle.block_perm = {0, 1};
  cycle.block_unitaries = {u, u * u};
  BlockAutomorphism flip;  // element 1 = a transposition
  flip.block_perm = {1, 0};
  flip.block_unitaries = {Matrix::Identity(3, 3), Matrix::Identity(3, 3)};
  return GroupAction(g, alg, {{3, cycle}, {1, flip}});
}

std::vector<int> a3_subgroup() { return {0, 3, 4}; }

}  // namespace

TEST_CASE("subgroup pairs enumerate right cosets deterministically") {
  auto g = FiniteGroup::symmetric3();
  SubgroupPair pair(g, a3_subgroup());
  CHECK(pair.num_cosets() == 2);
  CHECK(pair.representatives[0] == 0);
  CHECK(pair.act(0, 1) == 1);
  CHECK(pair.act(1, 1) == 0);
  CHECK(pair.act(0, 3) == 0);
  CHECK_THROWS_AS(SubgroupPair(g, {0, 3}), InvalidInput);  // not closed
}

TEST_CASE("inner actions are never broken") {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 2 + static_cast<int>(rng() % 11);  // dims 2..12
    auto g = FiniteGroup::cyclic(2 + static_cast<int>(rng() % 3));
    Matrix u = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      int k = static_cast<int>(rng() % static_cast<std::uint64_t>(g->order()));
      u(i, i) = std::polar(1.0, 2.0 * M_PI * k / g->order());
    }
    Matrix q = random_unitary(n, rng);
    u = q * u * q.adjoint();
    UnitaryRep rep = UnitaryRep::from_generators(g, {{1, u}});
    GroupAction act = GroupAction::inner(rep);
    AlgebraRep pi(act.algebra(), {1});
    SsbVerdict v = classify_symmetry(act, pi);
    CHECK_FALSE(v.broken);
    for (const auto& orbit : v.orbits) CHECK(orbit.blocks.size() == 1);
  }
}

TEST_CASE("block swap is broken with one 2-orbit") {
  GroupAction act = block_swap_action();
  AlgebraRep both(act.algebra(), {1, 1});
  SsbVerdict v = classify_symmetry(act, both);
  CHECK(v.broken);
  REQUIRE(v.orbits.size() == 1);
  CHECK(v.orbits[0].blocks == std::vector<int>{0, 1});
  CHECK(v.orbits[0].broken);

  // The trivial group acting on the same algebra breaks nothing.
  FiniteCStarAlgebra alg = FiniteCStarAlgebra::multi_matrix({2, 2});
  GroupAction trivial(FiniteGroup::cyclic(1), alg, {});
  SsbVerdict tv = classify_symmetry(trivial, AlgebraRep(alg, {1, 1}));
  CHECK_FALSE(tv.broken);
}

TEST_CASE("mixed model: phase diagram separates broken and unbroken orbits") {
  auto g = FiniteGroup::cyclic(2);
  FiniteCStarAlgebra alg = FiniteCStarAlgebra::multi_matrix({2, 2, 3});
  BlockAutomorphism swap;
  swap.block_perm = {1, 0, 2};
  swap.block_unitaries = {Matrix::Identity(2, 2), Matrix::Identity(2, 2),
                          Matrix::Identity(3, 3)};
  GroupAction act(g, alg, {{1, swap}});
  AlgebraRep pi(alg, {1, 1, 1});
  auto orbits = phase_diagram(act, pi);
  REQUIRE(orbits.size() == 2);
  CHECK(orbits[0].blocks == std::vector<int>{0, 1});
  CHECK(orbits[0].broken);
  CHECK(orbits[1].blocks == std::vector<int>{2});
  CHECK_FALSE(orbits[1].broken);
  CHECK(classify_symmetry(act, pi).broken);
}

TEST_CASE("Z4 cycling four blocks gives a single 4-orbit") {
  auto g = FiniteGroup::cyclic(4);
  FiniteCStarAlgebra alg = FiniteCStarAlgebra::multi_matrix({1, 1, 1, 1});
  BlockAutomorphism cyc;
  cyc.block_perm = {1, 2, 3, 0};
  cyc.block_unitaries = {Matrix::Identity(1, 1), Matrix::Identity(1, 1),
                         Matrix::Identity(1, 1), Matrix::Identity(1, 1)};
  GroupAction act(g, alg, {{1, cyc}});
  auto orbits = phase_diagram(act, AlgebraRep(alg, {1, 1, 1, 1}));
  REQUIRE(orbits.size() == 1);
  CHECK(orbits[0].blocks.size() == 4);
  CHECK(orbits[0].broken);
}

TEST_CASE("broken elements have no implementer on the base representation") {
  GroupAction act = block_swap_action();
  AlgebraRep first(act.algebra(), {1, 0});
  CHECK(intertwiner_space_dim(act, first, 1) == 0);  // the swap
  CHECK(intertwiner_space_dim(act, first, 0) >= 1);  // the identity
}

TEST_CASE("induced representation of the block-swap model") {
  GroupAction act = block_swap_action();
  AlgebraRep first(act.algebra(), {1, 0});
  SubgroupPair pair(act.group(), {0});  // H = {e}
  InducedSystem sys = induce_representation(act, first, pair);
  CHECK(sys.dim() == 4);

  SUBCASE("the swap is now unitarily implemented") {
    for (int g = 0; g < 2; ++g)
      for (const Matrix& f : act.algebra().basis()) {
        Matrix lhs = sys.represent(act.apply(g, f));
        Matrix rhs =
            sys.unitary(g) * sys.represent(f) * sys.unitary(g).adjoint();
        CHECK(approx_equal(lhs, rhs, 1e-9));
      }
  }
  SUBCASE("three centres have dimensions (2, 1, 2)") {
    ThreeCentres tc = compute_ssb_centres(sys);
    CHECK(tc.field.dim == 2);
    CHECK(tc.invariants.dim == 1);
    CHECK(tc.dual_net.dim == 2);
    CHECK(tc.num_cosets == 2);
    CHECK(tc.num_h_sectors == 1);
  }
}

TEST_CASE("H = G induces the identity system") {
  GroupAction act = block_swap_action();
  AlgebraRep both(act.algebra(), {1, 1});
  SubgroupPair pair(act.group(), {0, 1});
  InducedSystem sys = induce_representation(act, both, pair);
  CHECK(sys.dim() == both.dim());
  for (const Matrix& f : act.algebra().basis())
    CHECK(approx_equal(sys.represent(f), both.apply(f), 1e-10));
}

TEST_CASE("subgroups must preserve the multiplicity pattern") {
  GroupAction act = block_swap_action();
  AlgebraRep first(act.algebra(), {1, 0});
  SubgroupPair full(act.group(), {0, 1});
  CHECK_THROWS_AS(induce_representation(act, first, full), NotHCovariant);
}

TEST_CASE("S3 / Z3 model: three centres are (2, 3, 6)") {
  GroupAction act = s3_action();
  AlgebraRep first(act.algebra(), {1, 0});
  SubgroupPair pair(act.group(), a3_subgroup());
  InducedSystem sys = induce_representation(act, first, pair);
  CHECK(sys.dim() == 6);
  ThreeCentres tc = compute_ssb_centres(sys);
  CHECK(tc.num_cosets == 2);
  CHECK(tc.num_h_sectors == 3);
  CHECK(tc.field.dim == 2);
  CHECK(tc.invariants.dim == 3);
  CHECK(tc.dual_net.dim == 6);
  for (const CentreReport* r : {&tc.field, &tc.invariants, &tc.dual_net}) {
    Matrix sum = Matrix::Zero(sys.dim(), sys.dim());
    for (const Matrix& p : r->projections) {
      CHECK(approx_equal(p * p, p, 1e-8));
      sum += p;
    }
    CHECK(approx_equal(sum, Matrix::Identity(sys.dim(), sys.dim()), 1e-8));
  }
}

TEST_CASE("order-parameter channel round trip") {
  GroupAction act = block_swap_action();
  AlgebraRep first(act.algebra(), {1, 0});
  SubgroupPair pair(act.group(), {0});
  InducedSystem sys = induce_representation(act, first, pair);
  SsbChannel psi(sys);
  REQUIRE(psi.h_sector_labels().size() == 1);

  SUBCASE("forward separates the cosets through the block coordinate") {
    Matrix b = Matrix::Zero(4, 4);
    b(0, 0) = 1.0;  // block-0 element
    auto vals = psi.forward(b);
    CHECK(vals[0][0] == doctest::Approx(1.0));
    CHECK(vals[1][0] == doctest::Approx(0.0));
  }
  SUBCASE("dual state of a point mass reads back as the point mass") {
    std::vector<std::vector<double>> lambda = {{0.0}, {1.0}};
    StateFunctional rho = psi.dual_state(lambda);
    OrderParameterReadout r = order_parameter_readout(rho, psi);
    CHECK(r.coset_marginal[0] == doctest::Approx(0.0));
    CHECK(r.coset_marginal[1] == doctest::Approx(1.0));
  }
  SUBCASE("random joint distributions round-trip within 1e-9") {
    Rng rng(17);
    for (int t = 0; t < 20; ++t) {
      auto w = random_distribution(2, rng);
      std::vector<std::vector<double>> lambda = {{w[0]}, {w[1]}};
      OrderParameterReadout r =
          order_parameter_readout(psi.dual_state(lambda), psi);
      CHECK(std::abs(r.joint[0][0] - w[0]) < 1e-9);
      CHECK(std::abs(r.joint[1][0] - w[1]) < 1e-9);
    }
  }
  SUBCASE("translating the state translates the order parameter") {
    std::vector<std::vector<double>> lambda = {{1.0}, {0.0}};
    StateFunctional rho = psi.dual_state(lambda);
    // ω∘Ad(Û(g)) has density Û(g)† ρ Û(g).
    Matrix moved = sys.unitary(1).adjoint() * rho.density() * sys.unitary(1);
    OrderParameterReadout r =
        order_parameter_readout(StateFunctional(moved), psi);
    CHECK(r.coset_marginal[0] == doctest::Approx(0.0));
    CHECK(r.coset_marginal[1] == doctest::Approx(1.0));
  }
  SUBCASE("uniform joint distribution gives a G-invariant state") {
    std::vector<std::vector<double>> lambda = {{0.5}, {0.5}};
    StateFunctional rho = psi.dual_state(lambda);
    for (int g = 0; g < 2; ++g) {
      Matrix moved = sys.unitary(g) * rho.density() * sys.unitary(g).adjoint();
      CHECK(approx_equal(moved, rho.density(), 1e-9));
    }
  }
  SUBCASE("the channel is unital and completely positive") {
    CPMap phi = psi.as_cp_map();
    CHECK(phi.is_unital(1e-9));
    CHECK(is_completely_positive(phi).completely_positive);
    CHECK(is_completely_positive(phi.dual()).completely_positive);
  }
}

TEST_CASE("S3 / Z3 channel round trip over six labels") {
  GroupAction act = s3_action();
  AlgebraRep first(act.algebra(), {1, 0});
  SubgroupPair pair(act.group(), a3_subgroup());
  InducedSystem sys = induce_representation(act, first, pair);
  SsbChannel psi(sys);
  REQUIRE(psi.h_sector_labels().size() == 3);
  Rng rng(23);
  auto w = random_distribution(6, rng);
  std::vector<std::vector<double>> lambda = {{w[0], w[1], w[2]},
                                             {w[3], w[4], w[5]}};
  OrderParameterReadout r =
      order_parameter_readout(psi.dual_state(lambda), psi);
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t s = 0; s < 3; ++s)
      CHECK(std::abs(r.joint[c][s] - lambda[c][s]) < 1e-9);
}

TEST_CASE("explicit sections are validated and drive the readout") {
  GroupAction act = s3_action();
  AlgebraRep first(act.algebra(), {1, 0});
  SubgroupPair pair(act.group(), a3_subgroup());
  InducedSystem sys = induce_representation(act, first, pair);
  SsbChannel canonical(sys);
  REQUIRE(canonical.h_sector_labels().size() == 3);

  // A valid custom section: basis vectors of the three isotypic lines,
  // repeated over both cosets.
  std::vector<Vector> row;
  for (const Matrix& p : canonical.h_projections()) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(p);
    row.push_back(es.eigenvectors().col(2));  // eigenvalue-1 eigenvector
  }
  SsbChannel custom(sys, {row, row});
  Rng rng(5);
  auto w = random_distribution(6, rng);
  std::vector<std::vector<double>> lambda = {{w[0], w[1], w[2]},
                                             {w[3], w[4], w[5]}};
  OrderParameterReadout r =
      order_parameter_readout(custom.dual_state(lambda), custom);
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t t = 0; t < 3; ++t)
      CHECK(std::abs(r.joint[c][t] - lambda[c][t]) < 1e-9);

  // A vector outside its sector is rejected.
  std::vector<Vector> bad = row;
  bad[0] = (row[0] + row[1]).normalized();
  CHECK_THROWS_AS(SsbChannel(sys, {bad, row}), InvalidSection);
}

TEST_CASE("with H = G the order-parameter channel is the charging channel") {
  // Inner Z2 action on M2: one coset, and the H-sector readout must agree
  // with the sector charging readout.
  auto g = FiniteGroup::cyclic(2);
  Matrix sz(2, 2);
  sz << 1, 0, 0, -1;
  UnitaryRep rep = UnitaryRep::from_generators(g, {{1, sz}});
  GroupAction act = GroupAction::inner(rep);
  AlgebraRep pi(act.algebra(), {1});
  SubgroupPair pair(g, {0, 1});
  InducedSystem sys = induce_representation(act, pi, pair);
  REQUIRE(sys.dim() == 2);
  SsbChannel psi(sys);
  REQUIRE(psi.h_sector_labels().size() == 2);

  SectorDecomposition dec = decompose_sectors(rep);
  ChargingChannel lambda = ChargingChannel::canonical(dec);
  for (const Matrix& a : dec.invariant_algebra.basis()) {
    Matrix herm = a + a.adjoint();
    auto psi_vals = psi.forward(herm);
    auto lambda_vals = lambda.forward(herm);
    // Multiplicity-free sectors: the sections agree up to phase, so the
    // functionals coincide (possibly after matching labels).
    std::vector<double> l1 = psi_vals[0];
    std::vector<double> l2;
    for (Complex v : lambda_vals) l2.push_back(v.real());
    std::sort(l1.begin(), l1.end());
    std::sort(l2.begin(), l2.end());
    for (std::size_t i = 0; i < l1.size(); ++i)
      CHECK(std::abs(l1[i] - l2[i]) < 1e-9);
  }
}

TEST_CASE("goldstone gap reports") {
  SUBCASE("H = G has zero gap") {
    GroupAction act = block_swap_action();
    GoldstoneReport r = goldstone_gap_report(act, {0, 1});
    CHECK(r.gap == 0);
    CHECK(r.irrep_content.empty());
  }
  SUBCASE("block swap with trivial H: gap 4 carried by the sign irrep") {
    GroupAction act = block_swap_action();
    GoldstoneReport r = goldstone_gap_report(act, {0});
    CHECK(r.dim_h_fixed == 8);
    CHECK(r.dim_g_fixed == 4);
    CHECK(r.gap == 4);
    CHECK(r.complement_g_stable);
    REQUIRE(r.irrep_content.size() == 1);
    CHECK(r.irrep_content[0].second == 4);
  }
  SUBCASE("inner Z2 on M2 with trivial H: gap 2 carried by the sign irrep") {
    auto g = FiniteGroup::cyclic(2);
    Matrix sz(2, 2);
    sz << 1, 0, 0, -1;
    UnitaryRep rep = UnitaryRep::from_generators(g, {{1, sz}});
    GroupAction act = GroupAction::inner(rep);
    GoldstoneReport r = goldstone_gap_report(act, {0});
    CHECK(r.dim_h_fixed == 4);
    CHECK(r.dim_g_fixed == 2);
    CHECK(r.gap == 2);
    REQUIRE(r.irrep_content.size() == 1);
    CHECK(r.irrep_content[0].second == 2);
    // The carrying irrep is the sign representation.
    GroupDual dual = character_table(g);
    for (int i = 0; i < dual.size(); ++i)
      if (dual.labels[i] == r.irrep_content[0].first)
        CHECK(std::abs(dual.characters[i][1] - Complex(-1, 0)) < 1e-8);
  }
  SUBCASE("S3 / Z3: gap 3 on a G-stable complement") {
    GroupAction act = s3_action();
    GoldstoneReport r = goldstone_gap_report(act, a3_subgroup());
    CHECK(r.dim_h_fixed == 6);
    CHECK(r.dim_g_fixed == 3);
    CHECK(r.gap == 3);
    CHECK(r.complement_g_stable);  // A3 is normal in S3
    int total = 0;
    for (const auto& [label, m] : r.irrep_content) total += m;
    CHECK(total == 3);
  }
}
