#include "cechlab/estimators.hpp"

#include <cmath>
#include <limits>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss.hpp>

namespace cechlab::estimators {

using rods::Interval;
using rods::piece_interval;

namespace {

// Panel width on the overlap, relative to the boundary-layer scale 1/μ.
double overlap_panel(const RodParams& p) { return 8.0 / std::sqrt(2.0 * p.w01 / (p.w * p.epsilon)); }

double panel_for(Piece piece, const RodParams& p) {
  return piece == Piece::overlap ? overlap_panel(p) : std::numeric_limits<double>::infinity();
}

double squared_field(const FieldEval& v, Field f, const RodParams& p) {
  double sum = 0.0;
  for (Piece piece : rods::field_pieces(f)) {
    sum += integrate([&](double x) { return std::pow(v(f, piece, x), 2); }, piece_interval(f, piece, p.epsilon),
                     panel_for(piece, p));
  }
  return sum;
}

double ratio(double estimator, double error) {
  if (error > 0.0) return estimator / error;
  return estimator > 0.0 ? std::numeric_limits<double>::infinity() : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

double integrate(const std::function<double(double)>& g, Interval iv, double max_panel) {
  using boost::math::quadrature::gauss;
  const double len = iv.length();
  if (len <= 0.0) return 0.0;
  const int panels = std::isfinite(max_panel) ? std::max(1, static_cast<int>(std::ceil(len / max_panel))) : 1;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double a = iv.lo + len * i / panels;
    const double b = i + 1 == panels ? iv.hi : iv.lo + len * (i + 1) / panels;
    sum += gauss<double, 32>::integrate(g, a, b);
  }
  return sum;
}

double squared_norm(const FieldEval& v, const RodParams& p, int degree) {
  if (degree == 0) return squared_field(v, Field::u0, p) + squared_field(v, Field::u1, p);
  return p.w * (squared_field(v, Field::sigma0, p) + squared_field(v, Field::sigma1, p)) +
         p.w01 / p.epsilon * squared_field(v, Field::sigma01, p);
}

double weighted_norm(const FieldEval& v, const RodParams& p, int degree) {
  return std::sqrt(squared_norm(v, p, degree));
}

PoincareBound poincare_bound(const RodParams& p) {
  const double pi = boost::math::constants::pi<double>();
  PoincareBound b;
  b.r_d = p.w * pi * pi / 4.0;
  b.r_delta = 4.0 * p.w01 / (1.0 + p.epsilon);
  b.dominant = b.r_d <= b.r_delta ? PoincareBound::Term::r_d : PoincareBound::Term::r_delta;
  b.constant = 1.0 / std::sqrt(std::min(b.r_d, b.r_delta));
  return b;
}

ErrorReport error_report(const FieldEval& e, const FieldEval& de, const RodParams& p, NormKind norm) {
  ErrorReport rep;
  rep.epsilon = p.epsilon;
  const double eu2 = squared_norm(e, p, 0);
  const double es2 = squared_norm(e, p, 1);

  // Component along the normalized constant pair, ‖1‖² = 2(1 + ε).
  double mean = 0.0;
  for (Field f : {Field::u0, Field::u1}) {
    for (Piece piece : rods::field_pieces(f)) {
      mean += integrate([&](double x) { return e(f, piece, x); }, piece_interval(f, piece, p.epsilon),
                        panel_for(piece, p));
    }
  }
  rep.parts_u.harmonic = std::abs(mean) / std::sqrt(2.0 * (1.0 + p.epsilon));
  rep.parts_u.coexact = std::sqrt(std::max(0.0, eu2 - rep.parts_u.harmonic * rep.parts_u.harmonic));
  rep.parts_sigma.exact = std::sqrt(es2);
  rep.e_u = std::sqrt(eu2);
  rep.e_sigma = std::sqrt(es2);

  if (norm == NormKind::graph) {
    // D e_u = (e_u0', e_u1', e_u1 − e_u0); D e_σ lives in (1,1): e_σ1 − e_σ0 − e_σ01'.
    const FieldEval du = [&](Field f, Piece piece, double x) {
      switch (f) {
        case Field::sigma0:
          return de(Field::u0, piece, x);
        case Field::sigma1:
          return de(Field::u1, piece, x);
        case Field::sigma01:
          return e(Field::u1, piece, x) - e(Field::u0, piece, x);
        default:
          return 0.0;
      }
    };
    const double du2 = squared_norm(du, p, 1);
    const Interval ov{-p.epsilon, p.epsilon};
    const auto curl = [&](double x) {
      const double v = e(Field::sigma1, Piece::overlap, x) - e(Field::sigma0, Piece::overlap, x) -
                       de(Field::sigma01, Piece::overlap, x);
      return v * v;
    };
    const double ds2 = p.w01 / p.epsilon * integrate(curl, ov, overlap_panel(p));
    rep.e_u = std::sqrt(eu2 + du2);
    rep.e_sigma = std::sqrt(es2 + ds2);
    rep.parts_u.coexact = std::sqrt(std::max(0.0, rep.e_u * rep.e_u - rep.parts_u.harmonic * rep.parts_u.harmonic));
    rep.parts_sigma.exact = rep.e_sigma;
  }
  return rep;
}

std::string_view smoothing_name(Smoothing s) { return s == Smoothing::hat ? "hat" : "tilde"; }

SmoothedStress::SmoothedStress(const rods::EmbeddedSolution& emb, const RodParams& p, Smoothing variant)
    : emb_(emb), p_(p), variant_(variant) {
  const double s01 = emb_.piece_value(Field::sigma01, Piece::overlap, 0.0);
  lambda_ = variant == Smoothing::hat ? p.w01 / (p.w * p.epsilon) * s01 : (p.w01 / p.epsilon * s01 + p.r) / p.w;
}

double SmoothedStress::piece_value(Field f, Piece piece, double x) const {
  if (piece == Piece::overlap) {
    const double eps = p_.epsilon;
    if (f == Field::sigma0) return emb_.piece_value(Field::sigma0, Piece::outer, -eps) - lambda_ * (x + eps);
    if (f == Field::sigma1) return emb_.piece_value(Field::sigma1, Piece::outer, eps) + lambda_ * (x - eps);
  }
  return emb_.piece_value(f, piece, x);
}

double SmoothedStress::piece_derivative(Field f, Piece piece, double x) const {
  if (piece == Piece::overlap) {
    if (f == Field::sigma0) return -lambda_;
    if (f == Field::sigma1) return lambda_;
  }
  return emb_.piece_derivative(f, piece, x);
}

double SmoothedStress::value(Field f, double x) const {
  return piece_value(f, rods::locate(f, x, p_.epsilon), x);
}

double SmoothedStress::residual(int rod, Piece piece, double x) const {
  const Field sf = rod == 0 ? Field::sigma0 : Field::sigma1;
  const double sign = rod == 0 ? -1.0 : 1.0;
  double r = -p_.w * piece_derivative(sf, piece, x);
  if (piece == Piece::overlap) {
    r += sign * p_.w01 / p_.epsilon * piece_value(Field::sigma01, Piece::overlap, x);
  } else {
    r += sign * p_.r;  // − f_i with f0 = r, f1 = −r
  }
  return r;
}

SmoothedStress smooth_stress(const rods::EmbeddedSolution& emb, const RodParams& p, Smoothing variant) {
  return SmoothedStress(emb, p, variant);
}

ResidualNorm residual_norm(const SmoothedStress& s, const RodParams& p) {
  double sum = 0.0;
  for (int rod = 0; rod < 2; ++rod) {
    const Field f = rod == 0 ? Field::u0 : Field::u1;
    for (Piece piece : rods::field_pieces(f)) {
      sum += integrate([&](double x) { return std::pow(s.residual(rod, piece, x), 2); },
                       piece_interval(f, piece, p.epsilon), panel_for(piece, p));
    }
  }
  ResidualNorm n;
  n.integrated = std::sqrt(sum);
  if (s.variant() == Smoothing::hat) n.closed_form = 2.0 * p.epsilon * std::abs(p.r) * std::sqrt(1.0 - p.epsilon);
  return n;
}

ErrorReport a_posteriori(const rods::PiecewiseSolution& cech, const rods::EmbeddedSolution& emb, const RodParams& p,
                         const EstimatorOptions& opts) {
  ErrorReport rep = compute_errors(cech, emb, p, opts.norm);
  rep.residual_hat = residual_norm(smooth_stress(emb, p, Smoothing::hat), p);
  rep.residual_tilde = residual_norm(smooth_stress(emb, p, Smoothing::tilde), p);
  rep.poincare = poincare_bound(p);
  const double c = rep.poincare.constant;
  const double hat = opts.hat == HatResidual::closed_form ? *rep.residual_hat.closed_form : rep.residual_hat.integrated;
  rep.estimator_u = c * c * hat;
  rep.estimator_sigma = c * rep.residual_tilde.integrated;
  rep.efficiency_u = ratio(rep.estimator_u, rep.e_u);
  rep.efficiency_sigma = ratio(rep.estimator_sigma, rep.e_sigma);
  return rep;
}

double harmonic_error_bound(const TotalComplex& total, const SubcomplexEmbedding& emb, const CochainProjection& pi,
                            int k) {
  return harmonic_gap(total, emb, pi, k);
}

}  // namespace cechlab::estimators
