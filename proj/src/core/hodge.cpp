#include "cechlab/hodge.hpp"

#include <string>

#include "cechlab/errors.hpp"

namespace cechlab {

namespace {

void check_degree(const TotalComplex& total, int k, int lo) {
  if (k < lo || k > total.max_degree()) {
    throw ConstructionError("degree " + std::to_string(k) + " outside [" + std::to_string(lo) + "," +
                            std::to_string(total.max_degree()) + "]");
  }
}

// Orthonormal-coordinate bases of 𝔅^k and 𝔅*_k.
Matrix exact_range(const TotalComplex& total, int k) {
  return orthonormal_range(total.orthonormal_differential(k - 1));
}

Matrix coexact_range(const TotalComplex& total, int k) {
  return orthonormal_range(total.orthonormal_differential(k).transpose());
}

double smallest_nonzero_singular_value(const Matrix& op_tilde) {
  const SvdSplit s = svd_split(op_tilde);
  if (s.values.size() == 0) throw AssumptionError("no Poincaré constant (zero differential)");
  return s.values(s.values.size() - 1);
}

}  // namespace

Matrix adjoint(const TotalComplex& total, int k) {
  check_degree(total, k, 1);
  const Matrix& d = total.differential(k - 1);
  return total.factor(k - 1).solve(d.transpose() * total.gram(k));
}

HodgeSplit hodge_decompose(const TotalComplex& total, int k, const ChainVector& v) {
  check_degree(total, k, 0);
  if (v.degree != k || v.coeffs.size() != total.dim(k)) {
    throw ConstructionError("chain vector does not belong to degree " + std::to_string(k));
  }
  const GramFactor& f = total.factor(k);
  const Vector y = f.to_orthonormal(v.coeffs);
  const Matrix rb = exact_range(total, k);
  const Matrix rs = coexact_range(total, k);
  const Vector yb = rb * (rb.transpose() * y);
  const Vector ys = rs * (rs.transpose() * y);
  const Vector yh = y - yb - ys;
  return HodgeSplit{ChainVector{k, f.from_orthonormal(yb)}, ChainVector{k, f.from_orthonormal(yh)},
                    ChainVector{k, f.from_orthonormal(ys)}};
}

Matrix harmonic_matrix(const TotalComplex& total, int k) {
  check_degree(total, k, 0);
  const Matrix z = orthonormal_kernel(total.orthonormal_differential(k));
  const Matrix rb = exact_range(total, k);
  // 𝔅^k ⊂ ker D_k, so the harmonic part of ker D_k is the kernel of rbᵀ on it.
  const Matrix h = z * orthonormal_kernel(rb.transpose() * z, 1.0);
  return total.factor(k).from_orthonormal(h);
}

std::vector<ChainVector> harmonic_basis(const TotalComplex& total, int k) {
  const Matrix h = harmonic_matrix(total, k);
  std::vector<ChainVector> out;
  for (Index j = 0; j < h.cols(); ++j) out.push_back(ChainVector{k, h.col(j)});
  return out;
}

double poincare_constant(const TotalComplex& total, int k) {
  check_degree(total, k, 0);
  return 1.0 / smallest_nonzero_singular_value(total.orthonormal_differential(k));
}

double poincare_constant(const TotalComplex& total, int k, const SubcomplexEmbedding& restriction) {
  check_degree(total, k, 0);
  const Matrix& d = total.orthonormal_differential(k);
  const Matrix e = total.factor(k).to_orthonormal(restriction.map(k));
  const Matrix z = orthonormal_kernel(d);
  const Matrix x = orthonormal_kernel(z.transpose() * e, spectral_norm(e));
  const Matrix w = orthonormal_range(e * x);
  const Matrix dw = d * w;
  if (w.cols() == 0 || numerical_rank(dw, spectral_norm(d)) == 0) {
    throw AssumptionError("no Poincaré constant (zero differential)");
  }
  return 1.0 / smallest_singular_value(dw);
}

double adjoint_poincare_constant(const TotalComplex& total, int k) {
  const Matrix a = adjoint(total, k);
  const Matrix a_tilde = total.factor(k - 1).to_orthonormal(total.factor(k).times_inverse_transpose(a));
  return 1.0 / smallest_nonzero_singular_value(a_tilde);
}

}  // namespace cechlab
