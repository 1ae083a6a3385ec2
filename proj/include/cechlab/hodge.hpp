#pragma once

#include <vector>

#include "cechlab/complex.hpp"
#include "cechlab/subcomplex.hpp"

namespace cechlab {

/// Gram adjoint D*_k = G_{k-1}⁻¹ D_{k-1}ᵀ G_k, mapping degree k to k-1.
Matrix adjoint(const TotalComplex& total, int k);

struct HodgeSplit {
  ChainVector b;      ///< in the range of D_{k-1}
  ChainVector h;      ///< harmonic
  ChainVector bstar;  ///< in the range of D*_{k+1}
};

HodgeSplit hodge_decompose(const TotalComplex& total, int k, const ChainVector& v);

/// Gram-orthonormal basis of ker D_k ∩ ker D*_k as matrix columns.
Matrix harmonic_matrix(const TotalComplex& total, int k);
std::vector<ChainVector> harmonic_basis(const TotalComplex& total, int k);

/// 1 / min ‖D_k u‖ / ‖u‖ over u ⊥ ker D_k.
double poincare_constant(const TotalComplex& total, int k);

/// Same infimum over u in E_k B^k that are Gram-orthogonal to the ambient ker D_k.
double poincare_constant(const TotalComplex& total, int k, const SubcomplexEmbedding& restriction);

/// 1 / min ‖D*_k v‖ / ‖v‖ over v ⊥ ker D*_k, computed from the explicit adjoint.
double adjoint_poincare_constant(const TotalComplex& total, int k);

}  // namespace cechlab
