#pragma once

#include "cechlab/complex.hpp"
#include "cechlab/subcomplex.hpp"

namespace cechlab {

struct MixedSolution {
  ChainVector u;  ///< degree k-1, u = D* v
  ChainVector v;  ///< degree k, orthogonal to harmonics
  ChainVector q;  ///< harmonic part of the load
};

/**
 * @brief Mixed Hodge-Laplace problem in degree k.
 *
 * Finds (u, v, q) with ⟨u,τ⟩ − ⟨v,Dτ⟩ = 0, ⟨Du,w⟩ + ⟨Dv,Dw⟩ + ⟨q,w⟩ = ⟨f,w⟩ and
 * v ⊥ 𝔥^k, q ∈ 𝔥^k. The harmonic constraint uses Lagrange multipliers against
 * the computed harmonic basis; the square system is solved by dense LU.
 */
MixedSolution solve_hodge_laplace_mixed(const TotalComplex& total, int k, const ChainVector& f);

/// Same problem on the embedded subcomplex. Results are returned in ambient coordinates.
MixedSolution solve_subcomplex_mixed(const TotalComplex& total, int k, const ChainVector& f,
                                     const SubcomplexEmbedding& emb);

}  // namespace cechlab
