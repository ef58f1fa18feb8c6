#include "sectorlab/group.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace sectorlab {

// ---------------------------------------------------------------------------
// FiniteGroup
// ---------------------------------------------------------------------------

FiniteGroup::FiniteGroup(std::vector<std::vector<int>> table, std::string name)
    : order_(static_cast<int>(table.size())),
      name_(std::move(name)),
      cayley_(std::move(table)) {
  validate();
  inverse_.assign(order_, -1);
  for (int a = 0; a < order_; ++a)
    for (int b = 0; b < order_; ++b)
      if (cayley_[a][b] == 0) inverse_[a] = b;
  for (int a = 0; a < order_; ++a)
    if (inverse_[a] < 0)
      throw InvalidInput("group: element " + std::to_string(a) +
                         " has no inverse");
  compute_classes();
}

void FiniteGroup::validate() const {
  if (order_ <= 0) throw InvalidInput("group: empty Cayley table");
  for (int r = 0; r < order_; ++r) {
    if (static_cast<int>(cayley_[r].size()) != order_)
      throw InvalidInput("group: Cayley row " + std::to_string(r) +
                         " has wrong length");
    std::vector<bool> seen_row(order_, false), seen_col(order_, false);
    for (int c = 0; c < order_; ++c) {
      int v = cayley_[r][c];
      if (v < 0 || v >= order_)
        throw InvalidInput("group: Cayley row " + std::to_string(r) +
                           " contains out-of-range entry");
      if (seen_row[v])
        throw InvalidInput("group: Cayley row " + std::to_string(r) +
                           " repeats an element");
      seen_row[v] = true;
      int w = cayley_[c][r];
      if (seen_col[w])
        throw InvalidInput("group: Cayley column " + std::to_string(r) +
                           " repeats an element");
      seen_col[w] = true;
    }
  }
  for (int a = 0; a < order_; ++a)
    if (cayley_[0][a] != a || cayley_[a][0] != a)
      throw InvalidInput("group: element 0 is not the identity");
  for (int a = 0; a < order_; ++a)
    for (int b = 0; b < order_; ++b)
      for (int c = 0; c < order_; ++c)
        if (cayley_[cayley_[a][b]][c] != cayley_[a][cayley_[b][c]])
          throw InvalidInput("group: multiplication not associative at (" +
                             std::to_string(a) + "," + std::to_string(b) +
                             "," + std::to_string(c) + ")");
}

void FiniteGroup::compute_classes() {
  class_of_.assign(order_, -1);
  for (int g = 0; g < order_; ++g) {
    if (class_of_[g] >= 0) continue;
    int id = static_cast<int>(classes_.size());
    std::vector<int> cls;
    for (int h = 0; h < order_; ++h) {
      int conj = mul(mul(h, g), inv(h));
      if (class_of_[conj] < 0) {
        class_of_[conj] = id;
        cls.push_back(conj);
      }
    }
    std::sort(cls.begin(), cls.end());
    classes_.push_back(std::move(cls));
  }
}

bool FiniteGroup::is_subgroup(const std::vector<int>& elements) const {
  std::set<int> s(elements.begin(), elements.end());
  if (!s.count(0)) return false;
  for (int a : s) {
    if (a < 0 || a >= order_) return false;
    if (!s.count(inv(a))) return false;
    for (int b : s)
      if (!s.count(mul(a, b))) return false;
  }
  return true;
}

std::shared_ptr<const FiniteGroup> FiniteGroup::from_cayley(
    std::vector<std::vector<int>> table, std::string name) {
  return std::shared_ptr<const FiniteGroup>(
      new FiniteGroup(std::move(table), std::move(name)));
}

std::vector<int> FiniteGroup::small_generating_set() const {
  std::vector<int> gens;
  std::vector<bool> span(static_cast<std::size_t>(order_), false);
  span[0] = true;
  int covered = 1;
  auto close = [&]() {
    for (bool progress = true; progress;) {
      progress = false;
      for (int a = 0; a < order_; ++a) {
        if (!span[static_cast<std::size_t>(a)]) continue;
        for (int g : gens) {
          int p = mul(a, g);
          if (!span[static_cast<std::size_t>(p)]) {
            span[static_cast<std::size_t>(p)] = true;
            ++covered;
            progress = true;
          }
        }
      }
    }
  };
  while (covered < order_) {
    int next = -1;
    for (int a = 0; a < order_ && next < 0; ++a)
      if (!span[static_cast<std::size_t>(a)]) next = a;
    gens.push_back(next);
    close();
  }
  return gens;
}

std::shared_ptr<const FiniteGroup> FiniteGroup::cyclic(int n) {
  if (n <= 0) throw InvalidInput("cyclic: order must be positive");
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return from_cayley(std::move(t), "Z" + std::to_string(n));
}

std::shared_ptr<const FiniteGroup> FiniteGroup::dihedral(int n) {
  if (n <= 0) throw InvalidInput("dihedral: order parameter must be positive");
  // Elements 0..n-1 are rotations r^k, n..2n-1 are reflections s r^k.
  const int m = 2 * n;
  auto enc = [n](bool flip, int k) { return (flip ? n : 0) + ((k % n) + n) % n; };
  std::vector<std::vector<int>> t(m, std::vector<int>(m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      bool fa = a >= n, fb = b >= n;
      int ka = a % n, kb = b % n;
      // (s^fa r^ka)(s^fb r^kb) = s^(fa+fb) r^(kb + (fb ? -ka : ka))
      t[a][b] = enc(fa != fb, kb + (fb ? -ka : ka));
    }
  return from_cayley(std::move(t), "D" + std::to_string(n));
}

namespace {

std::vector<std::vector<int>> permutation_group_table(int n) {
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  const int order = static_cast<int>(perms.size());
  auto index_of = [&](const std::vector<int>& q) {
    return static_cast<int>(
        std::lower_bound(perms.begin(), perms.end(), q) - perms.begin());
  };
  std::vector<std::vector<int>> t(order, std::vector<int>(order));
  for (int a = 0; a < order; ++a)
    for (int b = 0; b < order; ++b) {
      std::vector<int> comp(n);
      for (int i = 0; i < n; ++i) comp[i] = perms[a][perms[b][i]];
      t[a][b] = index_of(comp);
    }
  return t;
}

}  // namespace

std::shared_ptr<const FiniteGroup> FiniteGroup::symmetric3() {
  return from_cayley(permutation_group_table(3), "S3");
}

std::shared_ptr<const FiniteGroup> FiniteGroup::symmetric4() {
  return from_cayley(permutation_group_table(4), "S4");
}

std::shared_ptr<const FiniteGroup> FiniteGroup::quaternion() {
  // Elements: 1, -1, i, -i, j, -j, k, -k.
  auto idx = [](int unit, bool neg) { return 2 * unit + (neg ? 1 : 0); };
  // unit multiplication table with signs: units 0=1, 1=i, 2=j, 3=k.
  static const int unit_mul[4][4] = {{0, 1, 2, 3},
                                     {1, 0, 3, 2},
                                     {2, 3, 0, 1},
                                     {3, 2, 1, 0}};
  static const int sign_mul[4][4] = {{+1, +1, +1, +1},
                                     {+1, -1, +1, -1},
                                     {+1, -1, -1, +1},
                                     {+1, +1, -1, -1}};
  std::vector<std::vector<int>> t(8, std::vector<int>(8));
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      int ua = a / 2, ub = b / 2;
      bool na = a % 2, nb = b % 2;
      int uc = unit_mul[ua][ub];
      bool nc = (sign_mul[ua][ub] < 0) != (na != nb);
      t[a][b] = idx(uc, nc);
    }
  return from_cayley(std::move(t), "Q8");
}

// ---------------------------------------------------------------------------
// UnitaryRep
// ---------------------------------------------------------------------------

UnitaryRep::UnitaryRep(GroupPtr group, std::vector<Matrix> matrices)
    : group_(std::move(group)), matrices_(std::move(matrices)) {
  if (static_cast<int>(matrices_.size()) != group_->order())
    throw InvalidInput("UnitaryRep: one matrix per group element required");
  dim_ = static_cast<int>(matrices_.front().rows());
  const double tol = tolerances().eq;
  for (const Matrix& u : matrices_) {
    if (u.rows() != dim_ || u.cols() != dim_)
      throw InvalidInput("UnitaryRep: mixed dimensions");
    if (!is_unitary(u, 1e-8))
      throw InvalidInput("UnitaryRep: matrix is not unitary");
  }
  if (!approx_equal(matrices_[0], Matrix::Identity(dim_, dim_), tol))
    throw InvalidInput("UnitaryRep: U(e) != 1");
  for (int a = 0; a < group_->order(); ++a)
    for (int b = 0; b < group_->order(); ++b)
      if (!approx_equal(matrices_[a] * matrices_[b],
                        matrices_[group_->mul(a, b)], 1e-8))
        throw InvalidInput("UnitaryRep: not a homomorphism");
}

UnitaryRep UnitaryRep::from_generators(
    GroupPtr group, const std::map<int, Matrix>& generators) {
  const int n = group->order();
  if (generators.empty()) throw InvalidInput("from_generators: no generators");
  int dim = static_cast<int>(generators.begin()->second.rows());
  std::vector<Matrix> mats(static_cast<std::size_t>(n));
  std::vector<bool> known(static_cast<std::size_t>(n), false);
  mats[0] = Matrix::Identity(dim, dim);
  known[0] = true;
  // Breadth-first closure over the Cayley table.
  for (bool progress = true; progress;) {
    progress = false;
    for (int g = 0; g < n; ++g) {
      if (!known[g]) continue;
      for (const auto& [h, uh] : generators) {
        int gh = group->mul(g, h);
        if (!known[gh]) {
          mats[gh] = mats[g] * uh;
          known[gh] = true;
          progress = true;
        }
      }
    }
  }
  for (int g = 0; g < n; ++g)
    if (!known[g])
      throw InvalidInput("from_generators: generators do not generate group");
  return UnitaryRep(std::move(group), std::move(mats));
}

UnitaryRep UnitaryRep::direct_sum(const UnitaryRep& other) const {
  if (group_ != other.group_)
    throw InvalidInput("direct_sum: different groups");
  std::vector<Matrix> mats;
  for (int g = 0; g < group_->order(); ++g) {
    Matrix m = Matrix::Zero(dim_ + other.dim_, dim_ + other.dim_);
    m.topLeftCorner(dim_, dim_) = matrices_[g];
    m.bottomRightCorner(other.dim_, other.dim_) = other.matrices_[g];
    mats.push_back(std::move(m));
  }
  return UnitaryRep(group_, std::move(mats));
}

// ---------------------------------------------------------------------------
// Character table
// ---------------------------------------------------------------------------

GroupDual character_table(const GroupPtr& group, std::uint64_t seed) {
  const int n = group->order();
  if (n > 1024) throw InvalidInput("character_table: group too large");
  const int r = group->num_classes();
  const auto& classes = group->conjugacy_classes();

  // Class-sum multiplication matrices: C_i C_j = Σ_k a_{ijk} C_k; the matrix
  // of C_i acting on the centre of the regular representation in the
  // class-sum basis is (M_i)_{kj} = a_{ijk}.
  std::vector<Matrix> class_mats(static_cast<std::size_t>(r),
                                 Matrix::Zero(r, r));
  std::vector<int> rep_of_class(static_cast<std::size_t>(r));
  for (int k = 0; k < r; ++k) rep_of_class[k] = classes[k].front();
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      std::vector<int> counts(static_cast<std::size_t>(n), 0);
      for (int x : classes[i])
        for (int y : classes[j]) counts[group->mul(x, y)]++;
      for (int k = 0; k < r; ++k)
        class_mats[i](k, j) =
            static_cast<double>(counts[rep_of_class[k]]);
    }

  Rng rng(seed ^ 0xc1a55e5ull);
  Eigen::ComplexEigenSolver<Matrix> ces;
  Matrix vecs;
  bool separated = false;
  for (int attempt = 0; attempt < 8 && !separated; ++attempt) {
    Matrix combo = Matrix::Zero(r, r);
    for (int i = 0; i < r; ++i) combo += random_real(rng) * class_mats[i];
    ces.compute(combo);
    if (ces.info() != Eigen::Success) continue;
    // All eigenvalues must be simple for the eigenvectors to be the common
    // eigenvectors of every class matrix.
    separated = true;
    for (int a = 0; a < r && separated; ++a)
      for (int b = a + 1; b < r; ++b)
        if (std::abs(ces.eigenvalues()(a) - ces.eigenvalues()(b)) < 1e-7) {
          separated = false;
          break;
        }
    if (separated) vecs = ces.eigenvectors();
  }
  if (!separated)
    throw CharacterTableFailure(
        "class-sum eigenvalues failed to separate after retries");

  struct Irrep {
    int dim;
    std::vector<Complex> chi;
  };
  std::vector<Irrep> irreps;
  for (int c = 0; c < r; ++c) {
    Vector v = vecs.col(c);
    // Eigenvalue of M_i on v: ω_i = |C_i| χ_i / d.
    std::vector<Complex> omega(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i)
      omega[static_cast<std::size_t>(i)] =
          (v.adjoint() * class_mats[i] * v)(0, 0) / v.squaredNorm();
    double s = 0.0;
    for (int i = 0; i < r; ++i)
      s += std::norm(omega[static_cast<std::size_t>(i)]) /
           static_cast<double>(classes[i].size());
    double d_real = std::sqrt(static_cast<double>(n) / s);
    int d = static_cast<int>(std::lround(d_real));
    if (d <= 0 || std::abs(d_real - d) > 1e-6)
      throw CharacterTableFailure("irrep dimension did not round cleanly");
    Irrep ir;
    ir.dim = d;
    ir.chi.resize(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i)
      ir.chi[static_cast<std::size_t>(i)] =
          double(d) * omega[static_cast<std::size_t>(i)] /
          static_cast<double>(classes[i].size());
    irreps.push_back(std::move(ir));
  }

  // Deterministic order: ascending dim, then lexicographic character tuple.
  auto snapped = [](Complex z) {
    return std::make_pair(std::round(z.real() * 1e6) / 1e6,
                          std::round(z.imag() * 1e6) / 1e6);
  };
  std::sort(irreps.begin(), irreps.end(), [&](const Irrep& a, const Irrep& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    for (std::size_t i = 0; i < a.chi.size(); ++i) {
      auto pa = snapped(a.chi[i]), pb = snapped(b.chi[i]);
      if (pa != pb) return pa < pb;
    }
    return false;
  });

  GroupDual dual;
  dual.group = group;
  int dim_sq = 0;
  for (std::size_t i = 0; i < irreps.size(); ++i) {
    dual.labels.push_back("irr" + std::to_string(i));
    dual.dims.push_back(irreps[i].dim);
    dual.characters.push_back(irreps[i].chi);
    dim_sq += irreps[i].dim * irreps[i].dim;
  }
  if (dim_sq != n)
    throw CharacterTableFailure("sum of squared dimensions != group order");

  // Row orthogonality check.
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) {
      Complex acc = 0.0;
      for (int c = 0; c < r; ++c)
        acc += static_cast<double>(classes[c].size()) * dual.characters[a][c] *
               std::conj(dual.characters[b][c]);
      acc /= static_cast<double>(n);
      if (std::abs(acc - (a == b ? 1.0 : 0.0)) > 1e-8)
        throw CharacterTableFailure("character orthogonality failed");
    }
  return dual;
}

std::vector<Matrix> isotypic_projections(const UnitaryRep& rep,
                                         const GroupDual& dual) {
  const auto& group = rep.group();
  if (dual.group != group)
    throw InvalidInput("isotypic_projections: dual from a different group");
  const int n = group->order();
  std::vector<Matrix> ps;
  for (int i = 0; i < dual.size(); ++i) {
    Matrix p = Matrix::Zero(rep.dim(), rep.dim());
    for (int g = 0; g < n; ++g)
      p += std::conj(dual.character(i, g)) * rep(g);
    p *= static_cast<double>(dual.dims[i]) / static_cast<double>(n);
    ps.push_back(std::move(p));
  }
  return ps;
}

int irrep_multiplicity(const UnitaryRep& rep, const GroupDual& dual,
                       int irrep) {
  const auto& group = rep.group();
  Complex acc = 0.0;
  for (int g = 0; g < group->order(); ++g)
    acc += std::conj(dual.character(irrep, g)) * rep(g).trace();
  acc /= static_cast<double>(group->order());
  int m = static_cast<int>(std::lround(acc.real()));
  if (std::abs(acc - Complex(m, 0)) > 1e-6)
    throw InternalInconsistency("irrep multiplicity did not round cleanly");
  return m;
}

// ---------------------------------------------------------------------------
// GroupAction
// ---------------------------------------------------------------------------

namespace {

BlockAutomorphism compose(const BlockAutomorphism& g,
                          const BlockAutomorphism& h) {
  const std::size_t nb = g.block_perm.size();
  BlockAutomorphism out;
  out.block_perm.resize(nb);
  out.block_unitaries.resize(nb);
  std::vector<int> g_inv(nb);
  for (std::size_t j = 0; j < nb; ++j)
    g_inv[static_cast<std::size_t>(g.block_perm[j])] = static_cast<int>(j);
  for (std::size_t j = 0; j < nb; ++j)
    out.block_perm[j] = g.block_perm[static_cast<std::size_t>(
        h.block_perm[j])];
  // (τ_g τ_h X)_k = u^g_k u^h_{σ_g^{-1}(k)} X_{σ_h^{-1} σ_g^{-1}(k)} (...)†
  for (std::size_t k = 0; k < nb; ++k) {
    int mid = g_inv[k];
    out.block_unitaries[k] =
        g.block_unitaries[k] * h.block_unitaries[static_cast<std::size_t>(mid)];
  }
  return out;
}

}  // namespace

GroupAction::GroupAction(GroupPtr group, FiniteCStarAlgebra algebra,
                         const std::map<int, BlockAutomorphism>& generators)
    : group_(std::move(group)), algebra_(std::move(algebra)) {
  if (!algebra_.has_block_layout())
    throw InvalidInput("GroupAction: algebra needs an explicit block layout");
  const int n = group_->order();
  const std::size_t nb = algebra_.blocks().size();

  for (const auto& [g, a] : generators) {
    if (g < 0 || g >= n) throw InvalidInput("GroupAction: bad generator index");
    if (a.block_perm.size() != nb || a.block_unitaries.size() != nb)
      throw InvalidInput("GroupAction: automorphism block count mismatch");
    std::vector<bool> hit(nb, false);
    for (std::size_t j = 0; j < nb; ++j) {
      int t = a.block_perm[j];
      if (t < 0 || t >= static_cast<int>(nb) || hit[static_cast<std::size_t>(t)])
        throw InvalidInput("GroupAction: block_perm is not a permutation");
      hit[static_cast<std::size_t>(t)] = true;
      if (algebra_.blocks()[j].dim !=
          algebra_.blocks()[static_cast<std::size_t>(t)].dim)
        throw InvalidInput("GroupAction: permuted blocks have unequal dims");
      const Matrix& u = a.block_unitaries[static_cast<std::size_t>(t)];
      if (u.rows() != algebra_.blocks()[static_cast<std::size_t>(t)].dim ||
          !is_unitary(u, 1e-8))
        throw InvalidInput("GroupAction: block unitary invalid");
    }
  }

  BlockAutomorphism ident;
  ident.block_perm.resize(nb);
  ident.block_unitaries.resize(nb);
  for (std::size_t j = 0; j < nb; ++j) {
    ident.block_perm[j] = static_cast<int>(j);
    ident.block_unitaries[j] =
        Matrix::Identity(algebra_.blocks()[j].dim, algebra_.blocks()[j].dim);
  }
  autos_.assign(static_cast<std::size_t>(n), ident);
  std::vector<bool> known(static_cast<std::size_t>(n), false);
  known[0] = true;
  for (bool progress = true; progress;) {
    progress = false;
    for (int g = 0; g < n; ++g) {
      if (!known[g]) continue;
      for (const auto& [h, ah] : generators) {
        int gh = group_->mul(g, h);
        if (!known[gh]) {
          autos_[static_cast<std::size_t>(gh)] =
              compose(autos_[static_cast<std::size_t>(g)], ah);
          known[gh] = true;
          progress = true;
        }
      }
    }
  }
  for (int g = 0; g < n; ++g)
    if (!known[g])
      throw InvalidInput("GroupAction: generators do not generate the group");
  verify_action();
}

GroupAction GroupAction::inner(const UnitaryRep& rep) {
  GroupAction act(rep.group(), FiniteCStarAlgebra::full(rep.dim()));
  const std::size_t n = static_cast<std::size_t>(rep.group()->order());
  act.autos_.resize(n);
  for (std::size_t g = 0; g < n; ++g) {
    act.autos_[g].block_perm = {0};
    act.autos_[g].block_unitaries = {rep(static_cast<int>(g))};
  }
  act.verify_action();
  return act;
}

namespace {

// Automorphism equality: same block permutation and block unitaries equal up
// to a phase.
bool same_automorphism(const BlockAutomorphism& x, const BlockAutomorphism& y,
                       double tol) {
  if (x.block_perm != y.block_perm) return false;
  for (std::size_t k = 0; k < x.block_unitaries.size(); ++k) {
    const Matrix& u = x.block_unitaries[k];
    const Matrix& v = y.block_unitaries[k];
    const double d = static_cast<double>(u.rows());
    Complex phase = (u * v.adjoint()).trace() / d;
    if (std::abs(std::abs(phase) - 1.0) > tol) return false;
    if (!approx_equal(u, (phase * v).eval(), tol)) return false;
  }
  return true;
}

}  // namespace

void GroupAction::verify_action() const {
  const double tol = 1e-8;
  const int n = group_->order();
  // Exhaustive homomorphism check; automorphisms are compared through their
  // block data, so per-block phases are quotiented out.
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int ab = group_->mul(a, b);
      BlockAutomorphism composed = compose(autos_[static_cast<std::size_t>(a)],
                                           autos_[static_cast<std::size_t>(b)]);
      if (!same_automorphism(composed, autos_[static_cast<std::size_t>(ab)],
                             tol))
        throw InvalidInput(
            "GroupAction: generators are inconsistent (τ_a τ_b != τ_ab)");
    }
}

Matrix GroupAction::apply(int g, const Matrix& f) const {
  if (!algebra_.contains(f, 1e-7))
    throw InvalidInput("GroupAction::apply: matrix outside the algebra");
  const auto& a = autos_[static_cast<std::size_t>(g)];
  const std::size_t nb = algebra_.blocks().size();
  std::vector<int> inv_perm(nb);
  for (std::size_t j = 0; j < nb; ++j)
    inv_perm[static_cast<std::size_t>(a.block_perm[j])] = static_cast<int>(j);
  std::vector<Matrix> parts(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    Matrix x = algebra_.block_of(f, inv_perm[k]);
    parts[k] =
        a.block_unitaries[k] * x * a.block_unitaries[k].adjoint();
  }
  return algebra_.assemble(parts);
}

Matrix GroupAction::implementing_unitary(int g) const {
  const auto& a = autos_[static_cast<std::size_t>(g)];
  const int n = algebra_.ambient_dim();
  Matrix w = Matrix::Zero(n, n);
  const auto& blocks = algebra_.blocks();
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    int t = a.block_perm[j];
    const auto& src = blocks[j];
    const auto& dst = blocks[static_cast<std::size_t>(t)];
    w.block(dst.offset, src.offset, dst.dim, src.dim) =
        a.block_unitaries[static_cast<std::size_t>(t)];
  }
  return w;
}

Matrix group_average(const GroupAction& action, const Matrix& f) {
  Matrix acc = Matrix::Zero(f.rows(), f.cols());
  const int n = action.group()->order();
  for (int g = 0; g < n; ++g) acc += action.apply(g, f);
  return acc / static_cast<double>(n);
}

Matrix subgroup_average(const GroupAction& action,
                        const std::vector<int>& subgroup, const Matrix& f) {
  if (!action.group()->is_subgroup(subgroup))
    throw InvalidInput("subgroup_average: not a subgroup");
  Matrix acc = Matrix::Zero(f.rows(), f.cols());
  for (int h : subgroup) acc += action.apply(h, f);
  return acc / static_cast<double>(subgroup.size());
}

FiniteCStarAlgebra fixed_point_algebra(const GroupAction& action) {
  std::vector<Matrix> averaged;
  for (const Matrix& b : action.algebra().basis())
    averaged.push_back(group_average(action, b));
  std::vector<Matrix> basis =
      canonical_matrix_span(averaged, tolerances().cluster);
  return FiniteCStarAlgebra::from_span(basis, action.algebra().ambient_dim());
}

// ---------------------------------------------------------------------------
// AlgebraRep
// ---------------------------------------------------------------------------

AlgebraRep::AlgebraRep(const FiniteCStarAlgebra& algebra,
                       std::vector<int> mult)
    : algebra_(std::make_shared<FiniteCStarAlgebra>(algebra)),
      mult_(std::move(mult)) {
  if (!algebra_->has_block_layout())
    throw InvalidInput("AlgebraRep: algebra needs a block layout");
  if (mult_.size() != algebra_->blocks().size())
    throw InvalidInput("AlgebraRep: one multiplicity per block required");
  dim_ = 0;
  for (std::size_t k = 0; k < mult_.size(); ++k) {
    if (mult_[k] < 0) throw InvalidInput("AlgebraRep: negative multiplicity");
    chunk_offsets_.push_back(dim_);
    dim_ += mult_[k] * algebra_->blocks()[k].dim;
  }
  if (dim_ == 0) throw InvalidInput("AlgebraRep: zero representation");
}

Matrix AlgebraRep::apply(const Matrix& f) const {
  if (!algebra_->contains(f, 1e-7))
    throw InvalidInput("AlgebraRep::apply: matrix outside the algebra");
  Matrix out = Matrix::Zero(dim_, dim_);
  for (std::size_t k = 0; k < mult_.size(); ++k) {
    if (mult_[k] == 0) continue;
    const int d = algebra_->blocks()[k].dim;
    Matrix x = algebra_->block_of(f, static_cast<int>(k));
    for (int c = 0; c < mult_[k]; ++c)
      out.block(chunk_offsets_[k] + c * d, chunk_offsets_[k] + c * d, d, d) = x;
  }
  return out;
}

int AlgebraRep::num_present() const {
  int c = 0;
  for (int m : mult_)
    if (m > 0) ++c;
  return c;
}


}  // namespace sectorlab
