#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "cechlab/complex.hpp"
#include "cechlab/rods/analytic.hpp"
#include "cechlab/subcomplex.hpp"

namespace cechlab::rods {

/// Sorted node list of a 1D mesh.
class Mesh1D {
 public:
  Mesh1D() = default;
  /// Throws ConstructionError unless there are >= 2 strictly increasing nodes.
  explicit Mesh1D(std::vector<double> nodes);

  const std::vector<double>& nodes() const { return nodes_; }
  double node(Index i) const { return nodes_[static_cast<std::size_t>(i)]; }
  Index num_nodes() const { return static_cast<Index>(nodes_.size()); }
  Index num_elements() const { return num_nodes() - 1; }
  double size(Index e) const { return node(e + 1) - node(e); }
  double lo() const { return nodes_.front(); }
  double hi() const { return nodes_.back(); }
  std::optional<Index> find_node(double x, double tol = 1e-12) const;

  Matrix mass() const;      ///< P1 mass matrix
  Matrix gradient() const;  ///< P1 nodal values -> P0 element derivatives
  Vector lumped() const;    ///< ∫ φ_i

 private:
  std::vector<double> nodes_;
};

/**
 * @brief Lowest-order discretization of the overlapping two-rod complex.
 *
 * Bigrades: (0,0) P1 on U0 and U1 (unweighted); (0,1) P0 on U0 and U1 (weight w);
 * (1,0) P1 on the overlap and (1,1) P0 on the overlap (weight w01/ε). The
 * outer nodes are the images of a uniform mesh of Ω_i under φ_i⁻¹; the overlap
 * carries 2m uniform elements with nodes at ∓ε and 0.
 *
 * Coefficient layout: U0 nodes left to right, then U1 nodes; U0 overlap node i
 * is U0 node n + i, U1 overlap node i is U1 node i (n outer elements per rod).
 */
class DiscreteRods {
 public:
  DiscreteRods(const RodParams& p, double h);

  const RodParams& params() const { return p_; }
  double h() const { return h_; }
  Index outer_elements() const { return n_; }
  Index overlap_elements() const { return 2 * m_; }

  const Mesh1D& mesh0() const { return mesh0_; }
  const Mesh1D& mesh1() const { return mesh1_; }
  const Mesh1D& overlap() const { return overlap_; }
  const Mesh1D& md0() const { return md0_; }
  const Mesh1D& md1() const { return md1_; }

  Index overlap_node0(Index i) const { return n_ + i; }
  Index overlap_node1(Index i) const { return i; }
  Index overlap_element0(Index j) const { return n_ + j; }
  Index overlap_element1(Index j) const { return j; }

  // The dense complexes are assembled on first access; the primal solver never needs them.
  const DoubleComplex& cech() const { return complexes().cech; }
  const TotalComplex& total() const { return complexes().total; }
  /// Non-overlapping complex on Ω0, Ω1 with the interface weight of interface_matched().
  const DoubleComplex& simplicial() const { return complexes().md; }
  const TotalComplex& simplicial_total() const { return complexes().md_total; }
  const SubcomplexEmbedding& embedding() const { return complexes().embedding; }

  /// ∫ f φ_i for the load f = (r on Ũ0, −r on Ũ1), degree-0 layout.
  Vector load_vector() const;

  /// Degree-0 coefficients interpolating u0, u1 of `sol` at the nodes.
  template <class Solution>
  Vector interpolate_displacement(const Solution& sol) const;

 private:
  RodParams p_;
  double h_;
  Index n_;
  Index m_;
  Mesh1D mesh0_, mesh1_, overlap_, md0_, md1_;

  struct Complexes {
    DoubleComplex cech;
    TotalComplex total;
    DoubleComplex md;
    TotalComplex md_total;
    SubcomplexEmbedding embedding;
  };
  struct Lazy {
    std::once_flag once;
    std::unique_ptr<const Complexes> value;
  };
  const Complexes& complexes() const;
  std::shared_ptr<Lazy> lazy_ = std::make_shared<Lazy>();
};

/// Throws ParameterError with "overlap unresolved" if h > ε.
DiscreteRods build_discrete_rods(const RodParams& p, double h);

/// Matrix realization of the pullback Ξ for given md meshes; throws
/// ConstructionError on mesh mismatch.
SubcomplexEmbedding discrete_embedding(const DiscreteRods& rods, const Mesh1D& md0, const Mesh1D& md1);
SubcomplexEmbedding discrete_embedding(const RodParams& p, double h);

struct PrimalSolution {
  Vector u0, u1;          ///< nodal values on U0, U1
  Vector sigma0, sigma1;  ///< elementwise derivatives
  Vector sigma01;         ///< u1 − u0 at overlap nodes
  double multiplier = 0.0;
};

/// P1 solve of −w σ_i' ∓ (w01/ε) 𝟙_ov (u1 − u0) = f_i, natural boundary
/// conditions, zero mean enforced by a scalar multiplier; sparse LU.
PrimalSolution solve_primal(const DiscreteRods& rods);
PrimalSolution solve_primal(const RodParams& p, double h);

/// Nodal export in the x,field,value,solution_id schema (σ at element midpoints).
void write_nodal_csv(std::ostream& os, const DiscreteRods& rods, const PrimalSolution& s,
                     std::string_view solution_id);

template <class Solution>
Vector DiscreteRods::interpolate_displacement(const Solution& sol) const {
  Vector v(mesh0_.num_nodes() + mesh1_.num_nodes());
  for (Index i = 0; i < mesh0_.num_nodes(); ++i) v(i) = sol.value(Field::u0, mesh0_.node(i));
  for (Index i = 0; i < mesh1_.num_nodes(); ++i) v(mesh0_.num_nodes() + i) = sol.value(Field::u1, mesh1_.node(i));
  return v;
}

}  // namespace cechlab::rods
