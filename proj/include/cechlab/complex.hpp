#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "cechlab/linalg.hpp"

namespace cechlab {

struct Bigrade {
  int p = 0;
  int q = 0;
  auto operator<=>(const Bigrade&) const = default;
};

std::string to_string(Bigrade b);

/**
 * @brief Finite-dimensional inner-product space given by its Gram matrix.
 *
 * The Gram matrix is symmetrized on construction and must be positive definite
 * (smallest eigenvalue above 1e-12 times the largest). Any cover weight is
 * already contained in the Gram; weight_exponent is bookkeeping only.
 */
class InnerProductSpace {
 public:
  InnerProductSpace() = default;
  explicit InnerProductSpace(Matrix gram, int weight_exponent = 0);
  static InnerProductSpace euclidean(Index dim);

  Index dim() const { return gram_.rows(); }
  const Matrix& gram() const { return gram_; }
  int weight_exponent() const { return weight_exponent_; }

 private:
  Matrix gram_;
  int weight_exponent_ = 0;
};

/// Relative defects of the double-complex identities (Frobenius norms divided
/// by the product of the factors' Frobenius norms).
struct DoubleComplexDefects {
  double horizontal = 0.0;      ///< d_h d_h
  double vertical = 0.0;        ///< d_v d_v
  double anticommutator = 0.0;  ///< d_v d_h + d_h d_v

  double worst() const;
};

/**
 * @brief Bounded first-quadrant double complex on [0,p_max] x [0,q_max].
 *
 * Missing spaces have dimension zero and missing differentials are zero. The
 * constructor checks shapes only; the algebraic identities are reported by
 * defects() and enforced when the total complex is assembled.
 */
class DoubleComplex {
 public:
  DoubleComplex(int p_max, int q_max, std::map<Bigrade, InnerProductSpace> spaces,
                std::map<Bigrade, Matrix> d_h, std::map<Bigrade, Matrix> d_v);

  int p_max() const { return p_max_; }
  int q_max() const { return q_max_; }
  bool contains(Bigrade b) const;
  Index dim(Bigrade b) const;
  const InnerProductSpace& space(Bigrade b) const;
  /// d_h from (p,q) to (p+1,q); shape dim(p+1,q) x dim(p,q).
  const Matrix& d_h(Bigrade b) const;
  /// d_v from (p,q) to (p,q+1); shape dim(p,q+1) x dim(p,q).
  const Matrix& d_v(Bigrade b) const;

  const std::map<Bigrade, InnerProductSpace>& spaces() const { return spaces_; }
  const std::map<Bigrade, Matrix>& horizontal() const { return d_h_; }
  const std::map<Bigrade, Matrix>& vertical() const { return d_v_; }

  DoubleComplexDefects defects() const;

 private:
  int p_max_;
  int q_max_;
  std::map<Bigrade, InnerProductSpace> spaces_;
  std::map<Bigrade, Matrix> d_h_;
  std::map<Bigrade, Matrix> d_v_;
};

/// Position of one bigraded block inside a total-degree coefficient vector.
struct Block {
  Bigrade bigrade;
  Index offset = 0;
  Index size = 0;
};

/// Coefficient vector of an element of A^k.
struct ChainVector {
  int degree = 0;
  Vector coeffs;
};

/**
 * @brief Single-graded complex with Gram matrices G_k and differentials D_k.
 *
 * Degrees run over 0..max_degree(). D_{-1} and D_{max} are the empty maps, so
 * differential(k) is defined for -1 <= k <= max_degree(). D_{k+1} D_k = 0 is
 * enforced on construction with relative tolerance 1e-12.
 */
class TotalComplex {
 public:
  TotalComplex(std::vector<std::vector<Block>> layout, std::vector<Matrix> grams,
               std::vector<Matrix> differentials);
  /// One block per degree, labelled (k,0).
  static TotalComplex from_matrices(std::vector<Matrix> grams, std::vector<Matrix> differentials);

  int max_degree() const { return static_cast<int>(factors_.size()) - 1; }
  Index dim(int k) const;
  const std::vector<Block>& blocks(int k) const { return layout_.at(k); }
  const Block& block(int k, Bigrade b) const;
  const Matrix& gram(int k) const { return factors_.at(k).gram(); }
  const GramFactor& factor(int k) const { return factors_.at(k); }
  const Matrix& differential(int k) const { return d_.at(k + 1); }
  /// D_k in Gram-orthonormal coordinates, L_{k+1}ᵀ D_k L_k⁻ᵀ.
  const Matrix& orthonormal_differential(int k) const { return d_tilde_.at(k + 1); }
  /// Graph Gram G_k + D_kᵀ G_{k+1} D_k.
  Matrix graph_gram(int k) const;

  ChainVector chain(int k, Vector coeffs) const;
  ChainVector zero(int k) const;
  double inner(int k, const Vector& a, const Vector& b) const;
  double norm(int k, const Vector& a) const;
  double graph_norm(int k, const Vector& a) const;

 private:
  std::vector<std::vector<Block>> layout_;
  std::vector<GramFactor> factors_;
  std::vector<Matrix> d_;
  std::vector<Matrix> d_tilde_;
};

/// Total complex of a double complex; degree-k blocks ordered by ascending p.
/// Throws ConstructionError if the double-complex identities fail.
TotalComplex assemble_total(const DoubleComplex& dc);

/// Relative tolerance for the complex identities.
inline constexpr double kComplexTolerance = 1e-12;

}  // namespace cechlab
