#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

namespace cechlab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Relative singular-value threshold for every rank decision.
inline constexpr double kRankTolerance = 1e-10;

struct SvdSplit {
  Matrix range;   ///< orthonormal basis of the column space
  Matrix kernel;  ///< orthonormal basis of the null space
  Vector values;  ///< retained singular values, descending
};

/// Euclidean range/kernel split of `a`. Singular values at or below
/// kRankTolerance * scale are treated as zero; scale defaults to sigma_max.
SvdSplit svd_split(const Matrix& a, double scale = -1.0);

Index numerical_rank(const Matrix& a, double scale = -1.0);
Matrix orthonormal_kernel(const Matrix& a, double scale = -1.0);
Matrix orthonormal_range(const Matrix& a, double scale = -1.0);

/// Largest singular value; 0 for empty matrices.
double spectral_norm(const Matrix& a);

/// Smallest of the min(rows, cols) singular values; +inf for empty matrices.
double smallest_singular_value(const Matrix& a);

/**
 * @brief Cholesky factor of a Gram matrix, G = L Lᵀ.
 *
 * Coefficient vectors x map to Gram-orthonormal coordinates y = Lᵀ x, in which
 * the Gram inner product becomes the Euclidean one.
 */
class GramFactor {
 public:
  GramFactor() = default;
  explicit GramFactor(const Matrix& gram);

  Index dim() const { return gram_.rows(); }
  const Matrix& gram() const { return gram_; }

  Matrix to_orthonormal(const Matrix& x) const;    ///< Lᵀ x
  Matrix from_orthonormal(const Matrix& y) const;  ///< L⁻ᵀ y
  Matrix solve(const Matrix& b) const;             ///< G⁻¹ b
  Matrix times_inverse_transpose(const Matrix& a) const;  ///< a L⁻ᵀ

 private:
  Matrix gram_;
  Eigen::LLT<Matrix> llt_;
};

}  // namespace cechlab
