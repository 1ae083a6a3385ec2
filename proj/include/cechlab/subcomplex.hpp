#pragma once

#include <vector>

#include "cechlab/complex.hpp"

namespace cechlab {

/**
 * @brief Injective cochain map from a subcomplex B into an ambient complex A.
 *
 * E_k has one column per basis vector of B^k, in ambient coordinates. Column
 * independence is checked on construction; the cochain property is checked
 * against a concrete ambient complex by induced_complex().
 */
class SubcomplexEmbedding {
 public:
  explicit SubcomplexEmbedding(std::vector<Matrix> maps);
  static SubcomplexEmbedding identity(const TotalComplex& total);

  int max_degree() const { return static_cast<int>(maps_.size()) - 1; }
  const Matrix& map(int k) const { return maps_.at(k); }
  Index dim(int k) const { return maps_.at(k).cols(); }

 private:
  std::vector<Matrix> maps_;
};

/// Relative tolerance for D E = E D^B.
inline constexpr double kCochainTolerance = 1e-9;

/// Relative defect ‖D_k E_k − E_{k+1} D^B_k‖_F / (‖D_k‖_F ‖E_k‖_F), maximized over k.
double cochain_defect(const TotalComplex& total, const SubcomplexEmbedding& emb, const TotalComplex& sub);

/**
 * @brief Subcomplex with the restricted inner products Eᵀ G E.
 *
 * D^B_k is recovered from D_k E_k by a Gram least-squares solve; throws
 * ConstructionError if E is not a cochain map for `total`.
 */
TotalComplex induced_complex(const TotalComplex& total, const SubcomplexEmbedding& emb);

/// Per-degree projection π_k: A^k -> B^k (subcomplex coordinates) and its measured bounds.
struct CochainProjection {
  std::vector<Matrix> pi;
  std::vector<double> kappa;     ///< graph-norm operator norm of π_k
  std::vector<double> kappa_l2;  ///< operator norm in the degree-k Gram norm
  std::vector<double> kappa1;    ///< sqrt(1 + c_B²) on 𝔷^⊥(B^k); 0 if that space is trivial
  std::vector<double> kappa2;    ///< 1 / σ_min of the harmonic pairing 𝔥(B) -> 𝔥(A); 0 if trivial
};

/**
 * @brief Bounded cochain projection π = P_𝔅(B) + R_B P_𝔥 (I − E Q_B) + Q_B.
 *
 * Q_B maps into 𝔷^⊥(B) with D Q_B = P_𝔅(B) D; R_B inverts the ambient harmonic
 * projection restricted to 𝔥(B). Throws AssumptionError if the harmonic
 * spaces of A and B differ in dimension or the pairing is singular.
 */
CochainProjection cochain_projection(const TotalComplex& total, const SubcomplexEmbedding& emb);

/// Largest ‖(I − E π) q‖ over Gram-unit ambient harmonic q; 0 when 𝔥^k(A) = 0.
double harmonic_gap(const TotalComplex& total, const SubcomplexEmbedding& emb, const CochainProjection& pi,
                    int k);

enum class NormKind { l2, graph };

/// Distance from v to E_k B^k in the Gram (l2) or graph norm.
double best_approximation_error(const TotalComplex& total, int k, const ChainVector& v,
                                const SubcomplexEmbedding& emb, NormKind norm = NormKind::graph);

}  // namespace cechlab
