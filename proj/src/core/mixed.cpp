#include "cechlab/mixed.hpp"

#include <string>

#include <Eigen/LU>

#include "cechlab/errors.hpp"
#include "cechlab/hodge.hpp"

namespace cechlab {

MixedSolution solve_hodge_laplace_mixed(const TotalComplex& total, int k, const ChainVector& f) {
  if (k < 0 || k > total.max_degree() || f.degree != k || f.coeffs.size() != total.dim(k)) {
    throw ConstructionError("load does not belong to degree " + std::to_string(k));
  }
  const Index n0 = total.dim(k - 1);
  const Index n1 = total.dim(k);
  const Matrix h = harmonic_matrix(total, k);
  const Index nh = h.cols();
  const Matrix& g1 = total.gram(k);
  const Matrix& dm = total.differential(k - 1);
  const Matrix& d = total.differential(k);

  Matrix a = Matrix::Zero(n0 + n1 + nh, n0 + n1 + nh);
  if (n0 > 0) {
    a.block(0, 0, n0, n0) = total.gram(k - 1);
    a.block(0, n0, n0, n1) = -dm.transpose() * g1;
    a.block(n0, 0, n1, n0) = g1 * dm;
  }
  a.block(n0, n0, n1, n1) = k < total.max_degree() ? Matrix(d.transpose() * total.gram(k + 1) * d)
                                                   : Matrix::Zero(n1, n1);
  a.block(n0, n0 + n1, n1, nh) = g1 * h;
  a.block(n0 + n1, n0, nh, n1) = h.transpose() * g1;

  Vector rhs = Vector::Zero(a.rows());
  rhs.segment(n0, n1) = g1 * f.coeffs;

  MixedSolution out{total.zero(k - 1), total.zero(k), total.zero(k)};
  if (a.rows() == 0) return out;
  Eigen::PartialPivLU<Matrix> lu(a);
  if (!(lu.rcond() > 1e-14)) {
    throw SingularSystemError("mixed system in degree " + std::to_string(k) + " is singular");
  }
  const Vector x = lu.solve(rhs);
  out.u.coeffs = x.head(n0);
  out.v.coeffs = x.segment(n0, n1);
  out.q.coeffs = h * x.tail(nh);
  return out;
}

MixedSolution solve_subcomplex_mixed(const TotalComplex& total, int k, const ChainVector& f,
                                     const SubcomplexEmbedding& emb) {
  if (k < 0 || k > total.max_degree() || f.degree != k || f.coeffs.size() != total.dim(k)) {
    throw ConstructionError("load does not belong to degree " + std::to_string(k));
  }
  const TotalComplex sub = induced_complex(total, emb);
  const Matrix& e = emb.map(k);
  // Load tested against B^k only: its Gram projection onto B^k.
  const Vector fb = sub.factor(k).solve(e.transpose() * total.gram(k) * f.coeffs);
  const MixedSolution s = solve_hodge_laplace_mixed(sub, k, ChainVector{k, fb});
  MixedSolution out{total.zero(k - 1), total.zero(k), total.zero(k)};
  if (k > 0) out.u.coeffs = emb.map(k - 1) * s.u.coeffs;
  out.v.coeffs = e * s.v.coeffs;
  out.q.coeffs = e * s.q.coeffs;
  return out;
}

}  // namespace cechlab
