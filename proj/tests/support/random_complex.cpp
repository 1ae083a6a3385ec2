#include "random_complex.hpp"

#include <cmath>

#include "cechlab/hodge.hpp"

namespace cechlab::testing {

Matrix random_matrix(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = n(rng);
  return m;
}

Matrix random_spd(std::mt19937_64& rng, Index n) {
  const Matrix a = random_matrix(rng, n, n);
  return a * a.transpose() + 0.5 * static_cast<double>(n) * Matrix::Identity(n, n);
}

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Maps a_0..a_{len-1} of a random complex on dims[0..len], with random ranks.
std::vector<Matrix> random_chain(std::mt19937_64& rng, const std::vector<Index>& dims) {
  std::vector<Matrix> maps;
  for (std::size_t p = 0; p + 1 < dims.size(); ++p) {
    Matrix complement = Matrix::Identity(dims[p], dims[p]);
    if (p > 0) complement = orthonormal_kernel(maps.back().transpose());
    // Random rank below the maximum leaves room for cohomology.
    std::uniform_int_distribution<Index> rank(0, std::min(complement.cols(), dims[p + 1]));
    const Index r = rank(rng);
    maps.push_back(random_matrix(rng, dims[p + 1], r) * random_matrix(rng, r, complement.cols()) * complement.transpose());
  }
  return maps;
}

}  // namespace

DoubleComplex random_double_complex(std::mt19937_64& rng, const RandomComplexOptions& opts) {
  std::uniform_int_distribution<int> len(1, 2);
  std::uniform_int_distribution<Index> dimd(1, opts.max_factor_dim);
  const int p_max = len(rng);
  const int q_max = len(rng);
  std::vector<Index> xd(p_max + 1), yd(q_max + 1);
  for (auto& x : xd) x = dimd(rng);
  for (auto& y : yd) y = std::min<Index>(dimd(rng), 8 / opts.max_factor_dim);
  const auto a = random_chain(rng, xd);
  const auto b = random_chain(rng, yd);

  std::map<Bigrade, InnerProductSpace> spaces;
  std::map<Bigrade, Matrix> dh, dv;
  for (int p = 0; p <= p_max; ++p) {
    for (int q = 0; q <= q_max; ++q) {
      const Bigrade g{p, q};
      spaces.emplace(g, InnerProductSpace(random_spd(rng, xd[p] * yd[q])));
      if (p < p_max) {
        Matrix m = kron(a[p], Matrix::Identity(yd[q], yd[q]));
        if (opts.zero_horizontal) m.setZero();
        dh.emplace(g, m);
      }
      if (q < q_max) {
        const double sign = p % 2 == 0 ? 1.0 : -1.0;
        dv.emplace(g, sign * kron(Matrix::Identity(xd[p], xd[p]), b[q]));
      }
    }
  }
  return DoubleComplex(p_max, q_max, std::move(spaces), std::move(dh), std::move(dv));
}

SubcomplexEmbedding random_subcomplex(const TotalComplex& total, std::mt19937_64& rng) {
  const int kmax = total.max_degree();
  std::vector<Matrix> w(kmax + 1);
  for (int k = 0; k <= kmax; ++k) {
    const Matrix zperp = total.factor(k).from_orthonormal(
        orthonormal_range(total.orthonormal_differential(k).transpose()));
    std::uniform_int_distribution<Index> pick(0, zperp.cols());
    const Index m = pick(rng);
    w[k] = zperp * random_matrix(rng, zperp.cols(), m);
  }
  std::vector<Matrix> maps;
  for (int k = 0; k <= kmax; ++k) {
    const Matrix h = harmonic_matrix(total, k);
    Matrix hp = h;
    if (k > 0) hp += total.differential(k - 1) * random_matrix(rng, total.dim(k - 1), h.cols());
    const Matrix dw = k > 0 ? Matrix(total.differential(k - 1) * w[k - 1]) : Matrix(total.dim(k), 0);
    Matrix e(total.dim(k), hp.cols() + w[k].cols() + dw.cols());
    e << hp, w[k], dw;
    // Same subspace, Gram-orthonormal basis, times a well-conditioned mixing matrix.
    const Matrix q = total.factor(k).from_orthonormal(orthonormal_range(total.factor(k).to_orthonormal(e)));
    maps.push_back(q * (Matrix::Identity(q.cols(), q.cols()) + 0.3 * random_matrix(rng, q.cols(), q.cols()) /
                                                                   std::sqrt(static_cast<double>(q.cols()) + 1.0)));
  }
  return SubcomplexEmbedding(std::move(maps));
}

}  // namespace cechlab::testing
