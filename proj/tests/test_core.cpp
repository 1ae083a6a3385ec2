#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "cechlab/errors.hpp"
#include "cechlab/hodge.hpp"
#include "cechlab/mixed.hpp"
#include "cechlab/subcomplex.hpp"
#include "cechlab/triplets.hpp"
#include "support/random_complex.hpp"

using namespace cechlab;
using cechlab::testing::random_double_complex;
using cechlab::testing::random_matrix;
using cechlab::testing::random_spd;
using cechlab::testing::random_subcomplex;

namespace {

Matrix row(std::initializer_list<double> v) {
  Matrix m(1, static_cast<Index>(v.size()));
  Index j = 0;
  for (double x : v) m(0, j++) = x;
  return m;
}

// Two-set cover skeleton: one value and one derivative per set, one overlap value.
DoubleComplex skeleton(double s0, double s1, bool coupled = true) {
  std::map<Bigrade, InnerProductSpace> spaces{{{0, 0}, InnerProductSpace::euclidean(2)},
                                              {{0, 1}, InnerProductSpace::euclidean(2)},
                                              {{1, 0}, InnerProductSpace::euclidean(1)}};
  Matrix dv = Matrix::Zero(2, 2);
  dv(0, 0) = s0;
  dv(1, 1) = s1;
  std::map<Bigrade, Matrix> dh;
  if (coupled) dh.emplace(Bigrade{0, 0}, row({-1.0, 1.0}));
  return DoubleComplex(1, 1, std::move(spaces), std::move(dh), {{{0, 0}, dv}});
}

// Smallest nonzero eigenvalue of Dᵀ G_{k+1} D x = λ G_k x.
double generalized_poincare(const Matrix& d, const Matrix& g_in, const Matrix& g_out) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(d.transpose() * g_out * d, g_in);
  const Vector& ev = es.eigenvalues();
  const double top = ev.maxCoeff();
  double lo = top;
  for (Index i = 0; i < ev.size(); ++i)
    if (ev(i) > 1e-9 * top) lo = std::min(lo, ev(i));
  return 1.0 / std::sqrt(lo);
}

std::vector<TotalComplex> random_totals(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<TotalComplex> out;
  while (static_cast<int>(out.size()) < count) out.push_back(assemble_total(random_double_complex(rng)));
  return out;
}

}  // namespace

TEST_CASE("zero differentials assemble to zero D") {
  std::map<Bigrade, InnerProductSpace> spaces{{{0, 0}, InnerProductSpace::euclidean(3)},
                                              {{1, 0}, InnerProductSpace::euclidean(2)},
                                              {{0, 1}, InnerProductSpace::euclidean(1)},
                                              {{1, 1}, InnerProductSpace::euclidean(2)}};
  const TotalComplex t = assemble_total(DoubleComplex(1, 1, spaces, {}, {}));
  CHECK(t.max_degree() == 2);
  CHECK(t.dim(1) == 3);
  for (int k = 0; k < t.max_degree(); ++k) CHECK(t.differential(k).norm() == 0.0);
}

TEST_CASE("two-set skeleton stacks d_v over d_h") {
  const TotalComplex t = assemble_total(skeleton(2.0, 3.0));
  Matrix expected(3, 2);
  expected << 2, 0, 0, 3, -1, 1;
  CHECK(t.differential(0) == expected);
  CHECK(t.blocks(1)[0].bigrade == Bigrade{0, 1});
  CHECK(t.blocks(1)[1].bigrade == Bigrade{1, 0});
}

TEST_CASE("shape mismatch names the bigrade") {
  std::map<Bigrade, InnerProductSpace> spaces{{{0, 0}, InnerProductSpace::euclidean(2)},
                                              {{1, 0}, InnerProductSpace::euclidean(1)}};
  try {
    DoubleComplex(1, 0, spaces, {{{0, 0}, Matrix::Zero(2, 2)}}, {});
    FAIL("expected ConstructionError");
  } catch (const ConstructionError& e) {
    CHECK(std::string(e.what()).find("(0,0)") != std::string::npos);
  }
}

TEST_CASE("non positive definite Gram is rejected") {
  Matrix g(2, 2);
  g << 1, 1, 1, 1;
  CHECK_THROWS_AS(InnerProductSpace{g}, ConstructionError);
}

TEST_CASE("broken anticommutation is rejected at assembly") {
  std::map<Bigrade, InnerProductSpace> spaces{{{0, 0}, InnerProductSpace::euclidean(1)},
                                              {{1, 0}, InnerProductSpace::euclidean(1)},
                                              {{0, 1}, InnerProductSpace::euclidean(1)},
                                              {{1, 1}, InnerProductSpace::euclidean(1)}};
  const Matrix one = Matrix::Ones(1, 1);
  // d_v d_h + d_h d_v = 2 instead of 0.
  DoubleComplex dc(1, 1, spaces, {{{0, 0}, one}, {{0, 1}, one}}, {{{0, 0}, one}, {{1, 0}, one}});
  CHECK(dc.defects().anticommutator > 0.5);
  CHECK_THROWS_AS(assemble_total(dc), ConstructionError);
}

TEST_CASE("adjoint examples") {
  SUBCASE("unit weights give the transpose") {
    const TotalComplex t = TotalComplex::from_matrices({Matrix::Identity(2, 2), Matrix::Identity(1, 1)},
                                                       {row({-1.0, 1.0})});
    CHECK((adjoint(t, 1) - row({-1.0, 1.0}).transpose()).norm() < 1e-15);
  }
  SUBCASE("weighted Grams") {
    const TotalComplex t = TotalComplex::from_matrices({2.0 * Matrix::Identity(2, 2), Matrix::Identity(1, 1)},
                                                       {row({-1.0, 1.0})});
    CHECK((adjoint(t, 1) - 0.5 * row({-1.0, 1.0}).transpose()).norm() < 1e-15);
  }
}

TEST_CASE("adjoint identity on random complexes") {
  std::mt19937_64 rng(7);
  for (const TotalComplex& t : random_totals(10, 11)) {
    for (int k = 1; k <= t.max_degree(); ++k) {
      const Matrix ds = adjoint(t, k);
      for (int trial = 0; trial < 100; ++trial) {
        const Vector u = random_matrix(rng, t.dim(k - 1), 1);
        const Vector v = random_matrix(rng, t.dim(k), 1);
        const double lhs = t.inner(k, t.differential(k - 1) * u, v);
        const double rhs = t.inner(k - 1, u, ds * v);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * (t.norm(k - 1, u) * t.norm(k, v) + 1e-300));
      }
    }
  }
}

TEST_CASE("poincare constant of [-1, 1] with unit weights") {
  const TotalComplex t = TotalComplex::from_matrices({Matrix::Identity(2, 2), Matrix::Identity(1, 1)},
                                                     {row({-1.0, 1.0})});
  CHECK(poincare_constant(t, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(poincare_constant(t, 1), AssumptionError);
}

TEST_CASE("poincare constant matches generalized eigenvalue oracle, duality and monotonicity") {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (const TotalComplex& t : random_totals(20, 23)) {
    for (int k = 0; k < t.max_degree(); ++k) {
      if (numerical_rank(t.differential(k)) == 0) continue;
      const double c = poincare_constant(t, k);
      const double oracle = generalized_poincare(t.differential(k), t.gram(k), t.gram(k + 1));
      CHECK(c == doctest::Approx(oracle).epsilon(1e-8));
      CHECK(adjoint_poincare_constant(t, k + 1) == doctest::Approx(c).epsilon(1e-9));
      const SubcomplexEmbedding emb = random_subcomplex(t, rng);
      double c_sub = 0.0;
      try {
        c_sub = poincare_constant(t, k, emb);
      } catch (const AssumptionError&) {
        continue;  // differential vanishes on this random subcomplex
      }
      CHECK(c_sub <= c * (1.0 + 1e-10));
      ++checked;
    }
  }
  CHECK(checked > 10);
}

TEST_CASE("restriction to the identity subcomplex leaves the constant unchanged") {
  for (const TotalComplex& t : random_totals(5, 3)) {
    for (int k = 0; k < t.max_degree(); ++k) {
      if (numerical_rank(t.differential(k)) == 0) continue;
      CHECK(poincare_constant(t, k, SubcomplexEmbedding::identity(t)) ==
            doctest::Approx(poincare_constant(t, k)).epsilon(1e-9));
    }
  }
}

TEST_CASE("harmonic dimension equals dim ker D_k minus rank D_{k-1}") {
  for (const TotalComplex& t : random_totals(20, 31)) {
    for (int k = 0; k <= t.max_degree(); ++k) {
      auto lu_rank = [](const Matrix& m) -> Index {
        if (m.size() == 0) return 0;
        Eigen::FullPivLU<Matrix> lu(m);
        lu.setThreshold(1e-10);
        return lu.rank();
      };
      const Index kernel = t.dim(k) - lu_rank(t.differential(k));
      const Index image = lu_rank(t.differential(k - 1));
      const Matrix h = harmonic_matrix(t, k);
      CHECK(h.cols() == kernel - image);
      CHECK((h.transpose() * t.gram(k) * h - Matrix::Identity(h.cols(), h.cols())).norm() < 1e-10);
    }
  }
}

TEST_CASE("skeleton cohomology: connected vs uncoupled") {
  CHECK(harmonic_basis(assemble_total(skeleton(0.0, 0.0)), 0).size() == 1);
  CHECK(harmonic_basis(assemble_total(skeleton(0.0, 0.0, false)), 0).size() == 2);
}

TEST_CASE("hodge decomposition") {
  std::mt19937_64 rng(9);
  SUBCASE("zero vector") {
    const TotalComplex t = random_totals(1, 4).front();
    const HodgeSplit s = hodge_decompose(t, 0, t.zero(0));
    CHECK(s.b.coeffs.norm() == 0.0);
    CHECK(s.h.coeffs.norm() == 0.0);
    CHECK(s.bstar.coeffs.norm() == 0.0);
  }
  SUBCASE("random vectors") {
    for (const TotalComplex& t : random_totals(10, 41)) {
      for (int k = 0; k <= t.max_degree(); ++k) {
        for (int trial = 0; trial < 10; ++trial) {
          const Vector v = random_matrix(rng, t.dim(k), 1);
          const HodgeSplit s = hodge_decompose(t, k, t.chain(k, v));
          const double nv = t.norm(k, v);
          CHECK((s.b.coeffs + s.h.coeffs + s.bstar.coeffs - v).norm() <= 1e-10 * (v.norm() + 1e-300));
          CHECK(std::abs(t.inner(k, s.b.coeffs, s.h.coeffs)) <= 1e-10 * nv * nv);
          CHECK(std::abs(t.inner(k, s.b.coeffs, s.bstar.coeffs)) <= 1e-10 * nv * nv);
          CHECK(std::abs(t.inner(k, s.h.coeffs, s.bstar.coeffs)) <= 1e-10 * nv * nv);
          const double sum = std::pow(t.norm(k, s.b.coeffs), 2) + std::pow(t.norm(k, s.h.coeffs), 2) +
                             std::pow(t.norm(k, s.bstar.coeffs), 2);
          CHECK(sum == doctest::Approx(nv * nv).epsilon(1e-9));
          // exact part is closed, so D v = D bstar
          const Matrix& d = t.differential(k);
          CHECK((d * s.bstar.coeffs - d * v).norm() <= 1e-9 * (d.norm() * v.norm() + 1e-300));
          CHECK((d * s.h.coeffs).norm() <= 1e-9 * (d.norm() * v.norm() + 1e-300));
          if (k > 0) CHECK((adjoint(t, k) * s.h.coeffs).norm() <= 1e-9 * (v.norm() + 1.0) * adjoint(t, k).norm());
        }
      }
    }
  }
}

TEST_CASE("mixed solver") {
  std::mt19937_64 rng(13);
  for (const TotalComplex& t : random_totals(10, 51)) {
    for (int k = 0; k <= t.max_degree(); ++k) {
      const MixedSolution zero = solve_hodge_laplace_mixed(t, k, t.zero(k));
      CHECK(zero.v.coeffs.norm() == 0.0);
      CHECK(zero.u.coeffs.norm() == 0.0);
      CHECK(zero.q.coeffs.norm() == 0.0);

      const Vector f = random_matrix(rng, t.dim(k), 1);
      const MixedSolution s = solve_hodge_laplace_mixed(t, k, t.chain(k, f));
      const Matrix& g = t.gram(k);
      const Matrix h = harmonic_matrix(t, k);
      const double scale = (g * f).norm() + 1e-300;
      // first equation: G u = D_{k-1}ᵀ G v
      if (k > 0) {
        const Vector r1 = t.gram(k - 1) * s.u.coeffs - t.differential(k - 1).transpose() * g * s.v.coeffs;
        CHECK(r1.norm() <= 1e-9 * (t.gram(k - 1) * s.u.coeffs).norm() + 1e-9 * scale);
      }
      Vector r2 = g * (s.q.coeffs - f);
      if (k > 0) r2 += g * t.differential(k - 1) * s.u.coeffs;
      if (k < t.max_degree()) {
        const Matrix& d = t.differential(k);
        r2 += d.transpose() * t.gram(k + 1) * d * s.v.coeffs;
      }
      CHECK(r2.norm() <= 1e-9 * scale);
      CHECK((h.transpose() * g * s.v.coeffs).norm() <= 1e-9 * (t.norm(k, s.v.coeffs) + 1e-300));
      CHECK((s.q.coeffs - h * (h.transpose() * g * s.q.coeffs)).norm() <= 1e-9 * (s.q.coeffs.norm() + 1e-300));

      if (h.cols() > 0) {
        const Vector fh = h * random_matrix(rng, h.cols(), 1);
        const MixedSolution sh = solve_hodge_laplace_mixed(t, k, t.chain(k, fh));
        CHECK((sh.q.coeffs - fh).norm() <= 1e-9 * fh.norm());
        CHECK(sh.v.coeffs.norm() <= 1e-9 * fh.norm());
        CHECK(sh.u.coeffs.norm() <= 1e-9 * fh.norm());
      }

      const MixedSolution si = solve_subcomplex_mixed(t, k, t.chain(k, f), SubcomplexEmbedding::identity(t));
      CHECK((si.v.coeffs - s.v.coeffs).norm() <= 1e-9 * (s.v.coeffs.norm() + 1e-12));
      CHECK((si.u.coeffs - s.u.coeffs).norm() <= 1e-9 * (s.u.coeffs.norm() + 1e-12));
      CHECK((si.q.coeffs - s.q.coeffs).norm() <= 1e-9 * (s.q.coeffs.norm() + 1e-12));
    }
  }
}

TEST_CASE("subcomplex mixed solution satisfies the restricted equations") {
  std::mt19937_64 rng(17);
  for (const TotalComplex& t : random_totals(10, 61)) {
    const SubcomplexEmbedding emb = random_subcomplex(t, rng);
    for (int k = 0; k <= t.max_degree(); ++k) {
      const Vector f = random_matrix(rng, t.dim(k), 1);
      const MixedSolution s = solve_subcomplex_mixed(t, k, t.chain(k, f), emb);
      const Matrix& e = emb.map(k);
      const Matrix& g = t.gram(k);
      // Galerkin orthogonality of the second equation against B^k.
      Vector r2 = g * (s.q.coeffs - f);
      if (k > 0) r2 += g * t.differential(k - 1) * s.u.coeffs;
      if (k < t.max_degree()) {
        const Matrix& d = t.differential(k);
        r2 += d.transpose() * t.gram(k + 1) * d * s.v.coeffs;
      }
      CHECK((e.transpose() * r2).norm() <= 1e-9 * ((e.transpose() * g * f).norm() + 1e-300) + 1e-12);
      // v lies in B^k
      if (e.cols() == 0) {
        CHECK(s.v.coeffs.norm() == 0.0);
        continue;
      }
      const Vector coeff = e.colPivHouseholderQr().solve(s.v.coeffs);
      CHECK((e * coeff - s.v.coeffs).norm() <= 1e-9 * (s.v.coeffs.norm() + 1e-300));
    }
  }
}

TEST_CASE("cochain projection on random complexes") {
  std::mt19937_64 rng(19);
  for (const TotalComplex& t : random_totals(20, 71)) {
    const SubcomplexEmbedding emb = random_subcomplex(t, rng);
    const TotalComplex sub = induced_complex(t, emb);
    const CochainProjection pi = cochain_projection(t, emb);
    for (int k = 0; k <= t.max_degree(); ++k) {
      const Matrix& p = pi.pi[k];
      CHECK((p * emb.map(k) - Matrix::Identity(emb.dim(k), emb.dim(k))).norm() < 1e-10);
      if (k < t.max_degree()) {
        const Matrix defect = pi.pi[k + 1] * t.differential(k) - sub.differential(k) * p;
        CHECK(defect.norm() <= 1e-10 * std::max(1.0, t.differential(k).norm() * p.norm()));
        CHECK(pi.kappa[k] <= std::max(pi.kappa_l2[k], pi.kappa_l2[k + 1]) * (1 + 1e-10));
      }
      CHECK(std::isfinite(pi.kappa[k]));
      // ‖R_B P_𝔥 (I − Q_B)‖ ≤ κ₂(1 + κ₁), so π is bounded by (1 + κ₁)(1 + κ₂).
      CHECK(pi.kappa[k] <= (1.0 + pi.kappa1[k]) * (1.0 + pi.kappa2[k]) * (1 + 1e-10));
      CHECK(harmonic_gap(t, emb, pi, k) >= 0.0);
    }
  }
}

TEST_CASE("identity subcomplex: projection is the identity") {
  for (const TotalComplex& t : random_totals(5, 81)) {
    const SubcomplexEmbedding id = SubcomplexEmbedding::identity(t);
    const CochainProjection pi = cochain_projection(t, id);
    for (int k = 0; k <= t.max_degree(); ++k) {
      CHECK((pi.pi[k] - Matrix::Identity(t.dim(k), t.dim(k))).norm() < 1e-9);
      if (t.dim(k) > 0) CHECK(pi.kappa[k] == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(harmonic_gap(t, id, pi, k) < 1e-10);
    }
  }
}

TEST_CASE("cochain projection rejects a subcomplex with missing cohomology") {
  // ℝ² → ℝ, D = [-1, 1]: constants are harmonic; B = span(D*-direction) has none.
  const TotalComplex t = TotalComplex::from_matrices({Matrix::Identity(2, 2), Matrix::Identity(1, 1)},
                                                     {row({-1.0, 1.0})});
  const SubcomplexEmbedding emb({row({-1.0, 1.0}).transpose(), Matrix::Identity(1, 1)});
  CHECK_THROWS_AS(cochain_projection(t, emb), AssumptionError);
}

TEST_CASE("embedding that is not a cochain map is rejected") {
  const TotalComplex t = TotalComplex::from_matrices({Matrix::Identity(2, 2), Matrix::Identity(1, 1)},
                                                     {row({-1.0, 1.0})});
  const SubcomplexEmbedding emb({row({1.0, 0.0}).transpose(), Matrix(1, 0)});
  CHECK_THROWS_AS(induced_complex(t, emb), ConstructionError);
}

TEST_CASE("best approximation error") {
  std::mt19937_64 rng(29);
  for (const TotalComplex& t : random_totals(5, 91)) {
    const SubcomplexEmbedding emb = random_subcomplex(t, rng);
    for (int k = 0; k <= t.max_degree(); ++k) {
      const Matrix& e = emb.map(k);
      if (e.cols() > 0) {
        const Vector inside = e * random_matrix(rng, e.cols(), 1);
        CHECK(best_approximation_error(t, k, t.chain(k, inside), emb, NormKind::l2) <= 1e-10 * t.norm(k, inside));
        CHECK(best_approximation_error(t, k, t.chain(k, inside), emb) <= 1e-10 * t.graph_norm(k, inside));
      }
      if (e.cols() < t.dim(k)) {
        // Gram-orthogonal complement of the subcomplex in degree k
        const Matrix perp = t.factor(k).from_orthonormal(orthonormal_kernel((t.factor(k).to_orthonormal(e)).transpose()));
        const Vector v = perp * random_matrix(rng, perp.cols(), 1);
        CHECK(best_approximation_error(t, k, t.chain(k, v), emb, NormKind::l2) ==
              doctest::Approx(t.norm(k, v)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("triplet round trip") {
  std::mt19937_64 rng(3);
  Matrix m = random_matrix(rng, 4, 5);
  m(1, 2) = 0.0;
  std::stringstream ss;
  write_triplets(ss, m);
  CHECK(read_triplets(ss) == m);
  std::stringstream bad("1 2 3\n");
  CHECK_THROWS_AS(read_triplets(bad), ConstructionError);
}
