#pragma once

#include <functional>
#include <optional>
#include <string_view>

#include "cechlab/rods/analytic.hpp"
#include "cechlab/subcomplex.hpp"

namespace cechlab::estimators {

using rods::Field;
using rods::Piece;
using rods::RodParams;

/// Field tuple on the cover geometry, evaluated piece by piece.
using FieldEval = std::function<double(Field, Piece, double)>;

template <class Solution>
FieldEval fields_of(const Solution& s) {
  return [&s](Field f, Piece piece, double x) { return s.piece_value(f, piece, x); };
}

template <class A, class B>
FieldEval difference(const A& a, const B& b) {
  return [&a, &b](Field f, Piece piece, double x) { return a.piece_value(f, piece, x) - b.piece_value(f, piece, x); };
}

/// ∫ g over one piece with 32-point Gauss, subdivided so each panel spans at most `max_panel`.
double integrate(const std::function<double(double)>& g, rods::Interval iv, double max_panel);

/**
 * Squared weighted norm of a degree-0 (u0, u1) or degree-1 (σ0, σ1, σ01)
 * tuple: degree 0 is unweighted, σ_i carry w and σ01 carries w01/ε.
 */
double squared_norm(const FieldEval& v, const RodParams& p, int degree);
double weighted_norm(const FieldEval& v, const RodParams& p, int degree);

/// Norms of the exact, harmonic and coexact parts of an error.
struct HodgeParts {
  double exact = 0.0;
  double harmonic = 0.0;
  double coexact = 0.0;
};

enum class HatResidual { closed_form, integrated };

struct EstimatorOptions {
  NormKind norm = NormKind::l2;
  /// Residual of σ̂ entering estimator_u.
  HatResidual hat = HatResidual::closed_form;
};

struct ResidualNorm {
  double integrated = 0.0;
  /// 2εr√(1−ε) for the hat variant; absent for tilde.
  std::optional<double> closed_form;
};

struct PoincareBound {
  enum class Term { r_d, r_delta };
  double constant = 0.0;  ///< C = 1 / sqrt(min(r_d, r_delta))
  double r_d = 0.0;       ///< wπ²/4
  double r_delta = 0.0;   ///< 4 w01 / (1 + ε)
  Term dominant = Term::r_d;
};

PoincareBound poincare_bound(const RodParams& p);

struct ErrorReport {
  double epsilon = 0.0;
  double e_u = 0.0;
  double e_sigma = 0.0;
  HodgeParts parts_u;
  HodgeParts parts_sigma;
  double estimator_u = 0.0;
  double estimator_sigma = 0.0;
  double efficiency_u = 0.0;
  double efficiency_sigma = 0.0;
  ResidualNorm residual_hat;
  ResidualNorm residual_tilde;
  PoincareBound poincare;

  bool reliable_u() const { return estimator_u >= e_u; }
  bool reliable_sigma() const { return estimator_sigma >= e_sigma; }
};

template <class A, class B>
FieldEval derivative_difference(const A& a, const B& b) {
  return [&a, &b](Field f, Piece piece, double x) {
    return a.piece_derivative(f, piece, x) - b.piece_derivative(f, piece, x);
  };
}

/// Error report of the difference e (values) with piecewise derivatives de.
ErrorReport error_report(const FieldEval& e, const FieldEval& de, const RodParams& p, NormKind norm = NormKind::l2);

/**
 * Errors u − u_E and σ − σ_E. The displacement error is coexact and the stress
 * error exact; the harmonic part of e_u is measured against the constants.
 * In the graph norm e_u includes ‖D e_u‖ and e_σ includes ‖D e_σ‖.
 */
template <class A, class B>
ErrorReport compute_errors(const A& cech, const B& emb, const RodParams& p, NormKind norm = NormKind::l2) {
  return error_report(difference(cech, emb), derivative_difference(cech, emb), p, norm);
}

enum class Smoothing { hat, tilde };

std::string_view smoothing_name(Smoothing s);

/**
 * Embedded stress made linear on the overlap with slope ∓λ so that the rod
 * codifferentials balance the coupling term (hat) or leave a residual ±r (tilde).
 * Displacements and σ01 are those of the embedded solution.
 */
class SmoothedStress {
 public:
  SmoothedStress(const rods::EmbeddedSolution& emb, const RodParams& p, Smoothing variant);

  Smoothing variant() const { return variant_; }
  double lambda() const { return lambda_; }
  const rods::EmbeddedSolution& embedded() const { return emb_; }

  double piece_value(Field f, Piece piece, double x) const;
  double piece_derivative(Field f, Piece piece, double x) const;
  double value(Field f, double x) const;

  /// (D*σ − f)_i on rod i = 0, 1 at x in U_i, evaluated on `piece`.
  double residual(int rod, Piece piece, double x) const;

 private:
  rods::EmbeddedSolution emb_;
  RodParams p_;
  Smoothing variant_;
  double lambda_ = 0.0;
};

SmoothedStress smooth_stress(const rods::EmbeddedSolution& emb, const RodParams& p, Smoothing variant);

/// ‖D*σ − f‖ in the unweighted degree-0 norm.
ResidualNorm residual_norm(const SmoothedStress& s, const RodParams& p);

/// estimator_u = C²‖D*σ̂ − f‖, estimator_σ = C‖D*σ̃ − f‖ and the efficiencies.
ErrorReport a_posteriori(const rods::PiecewiseSolution& cech, const rods::EmbeddedSolution& emb, const RodParams& p,
                         const EstimatorOptions& opts = {});

/// Harmonic gap M_k, bounding the harmonic part of the subcomplex error.
double harmonic_error_bound(const TotalComplex& total, const SubcomplexEmbedding& emb, const CochainProjection& pi,
                            int k);

}  // namespace cechlab::estimators
