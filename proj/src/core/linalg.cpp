#include "cechlab/linalg.hpp"

#include <limits>

#include <Eigen/SVD>

#include "cechlab/errors.hpp"

namespace cechlab {

SvdSplit svd_split(const Matrix& a, double scale) {
  SvdSplit out;
  const Index m = a.rows();
  const Index n = a.cols();
  if (m == 0 || n == 0) {
    out.range = Matrix(m, 0);
    out.kernel = Matrix::Identity(n, n);
    out.values = Vector(0);
    return out;
  }
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  Index r = 0;
  const double ref = scale < 0.0 ? s(0) : scale;
  if (s(0) > 0.0) {
    const double cut = kRankTolerance * ref;
    while (r < s.size() && s(r) > cut) ++r;
  }
  out.range = svd.matrixU().leftCols(r);
  out.kernel = svd.matrixV().rightCols(n - r);
  out.values = s.head(r);
  return out;
}

Index numerical_rank(const Matrix& a, double scale) { return svd_split(a, scale).values.size(); }

Matrix orthonormal_kernel(const Matrix& a, double scale) { return svd_split(a, scale).kernel; }

Matrix orthonormal_range(const Matrix& a, double scale) { return svd_split(a, scale).range; }

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

double smallest_singular_value(const Matrix& a) {
  if (a.size() == 0) return std::numeric_limits<double>::infinity();
  Eigen::BDCSVD<Matrix> svd(a);
  const Vector& s = svd.singularValues();
  return s(s.size() - 1);
}

GramFactor::GramFactor(const Matrix& gram) : gram_(gram) {
  if (gram.rows() != gram.cols()) throw ConstructionError("Gram matrix is not square");
  if (gram.rows() == 0) return;
  llt_.compute(gram_);
  if (llt_.info() != Eigen::Success) throw ConstructionError("Gram matrix is not positive definite");
}

Matrix GramFactor::to_orthonormal(const Matrix& x) const {
  if (dim() == 0) return Matrix(0, x.cols());
  return llt_.matrixU() * x;
}

Matrix GramFactor::from_orthonormal(const Matrix& y) const {
  if (dim() == 0) return Matrix(0, y.cols());
  return llt_.matrixU().solve(y);
}

Matrix GramFactor::solve(const Matrix& b) const {
  if (dim() == 0) return Matrix(0, b.cols());
  return llt_.solve(b);
}

Matrix GramFactor::times_inverse_transpose(const Matrix& a) const {
  if (dim() == 0) return Matrix(a.rows(), 0);
  return llt_.matrixL().solve(a.transpose()).transpose();
}

}  // namespace cechlab
