#include "cechlab/rods/analytic.hpp"

#include <cmath>
#include <sstream>

#include "cechlab/errors.hpp"

namespace cechlab::rods {

namespace {

// cosh(a)/sinh(b) and sinh(a)/sinh(b) for |a| <= b, without overflow for large b.
double cosh_over_sinh(double a, double b) {
  if (b < 20.0) return std::cosh(a) / std::sinh(b);
  const double t = std::abs(a);
  return std::exp(t - b) * (1.0 + std::exp(-2.0 * t)) / (1.0 - std::exp(-2.0 * b));
}

double sinh_over_sinh(double a, double b) {
  if (b < 20.0) return std::sinh(a) / std::sinh(b);
  const double t = std::abs(a);
  return std::copysign(std::exp(t - b) * (1.0 - std::exp(-2.0 * t)) / (1.0 - std::exp(-2.0 * b)), a);
}

std::string format_interval(Interval iv) {
  std::ostringstream os;
  os << '[' << iv.lo << ", " << iv.hi << ']';
  return os.str();
}

void check_domain(Field f, double x, Interval iv) {
  if (!(x >= iv.lo && x <= iv.hi)) {
    std::ostringstream os;
    os << field_name(f) << " evaluated at x = " << x << " outside its domain " << format_interval(iv);
    throw DomainError(os.str());
  }
}

}  // namespace

void RodParams::validate() const {
  auto fail = [](const std::string& m) { throw ParameterError(m); };
  if (!std::isfinite(epsilon) || !(epsilon > 0.0 && epsilon < 1.0)) fail("epsilon must lie in (0,1)");
  if (!std::isfinite(r)) fail("r must be finite");
  if (!std::isfinite(w) || !(w > 0.0)) fail("w must be positive");
  if (!std::isfinite(w01) || !(w01 > 0.0)) fail("w01 must be positive");
}

std::string_view field_name(Field f) {
  switch (f) {
    case Field::u0: return "u0";
    case Field::u1: return "u1";
    case Field::sigma0: return "sigma0";
    case Field::sigma1: return "sigma1";
    case Field::sigma01: return "sigma01";
  }
  return "?";
}

Interval field_domain(Field f, double eps) {
  switch (f) {
    case Field::u0:
    case Field::sigma0: return {-1.0, eps};
    case Field::u1:
    case Field::sigma1: return {-eps, 1.0};
    case Field::sigma01: return {-eps, eps};
  }
  return {};
}

std::vector<Piece> field_pieces(Field f) {
  switch (f) {
    case Field::u0:
    case Field::sigma0: return {Piece::outer, Piece::overlap};
    case Field::u1:
    case Field::sigma1: return {Piece::overlap, Piece::outer};
    case Field::sigma01: return {Piece::overlap};
  }
  return {};
}

Interval piece_interval(Field f, Piece p, double eps) {
  if (p == Piece::overlap) return {-eps, eps};
  switch (f) {
    case Field::u0:
    case Field::sigma0: return {-1.0, -eps};
    case Field::u1:
    case Field::sigma1: return {eps, 1.0};
    case Field::sigma01: break;
  }
  throw DomainError("sigma01 has no outer piece");
}

Piece locate(Field f, double x, double eps) {
  switch (f) {
    case Field::u0:
    case Field::sigma0: return x <= -eps ? Piece::outer : Piece::overlap;
    case Field::u1:
    case Field::sigma1: return x >= eps ? Piece::outer : Piece::overlap;
    case Field::sigma01: return Piece::overlap;
  }
  return Piece::overlap;
}

PiecewiseSolution::PiecewiseSolution(const RodParams& p) : p_(p) {
  p.validate();
  const double eps = p.epsilon;
  mu_ = std::sqrt(2.0 * p.w01 / (p.w * eps));
  a_ = -p.r / p.w;
  c1_ = p.r * (eps - 1.0) / p.w;
  k_ = p.r * (eps - 1.0) / (2.0 * p.w * mu_);
  // Continuity at ∓ε with c2 = 0, then shift by the zero-mean constant.
  const double rw = p.r / p.w;
  b0_ = piece_value(Field::u0, Piece::overlap, -eps) + 0.5 * rw * eps * eps - rw * eps;
  b1_ = piece_value(Field::u1, Piece::overlap, eps) - 0.5 * rw * eps * eps + rw * eps;
  auto outer0 = [rw](double x) { return -rw * x * x * x / 6.0 - 0.5 * rw * x * x; };
  auto outer1 = [rw](double x) { return rw * x * x * x / 6.0 - 0.5 * rw * x * x; };
  // On the overlap u0 + u1 = c1 x + c2 integrates to 2ε c2.
  const double mean = outer0(-eps) - outer0(-1.0) + outer1(1.0) - outer1(eps) + (1.0 - eps) * (b0_ + b1_);
  c2_ = -mean / (1.0 + eps);
  b0_ += 0.5 * c2_;
  b1_ += 0.5 * c2_;
}

double PiecewiseSolution::c3() const { return k_ / std::sinh(mu_ * p_.epsilon); }

double PiecewiseSolution::c3_cosh(double x) const { return k_ * cosh_over_sinh(mu_ * x, mu_ * p_.epsilon); }

double PiecewiseSolution::c3_sinh(double x) const { return k_ * sinh_over_sinh(mu_ * x, mu_ * p_.epsilon); }

double PiecewiseSolution::piece_value(Field f, Piece piece, double x) const {
  const double rw = p_.r / p_.w;
  if (piece == Piece::overlap) {
    switch (f) {
      case Field::u0: return 0.5 * (c1_ * x + c2_) - c3_cosh(x);
      case Field::u1: return 0.5 * (c1_ * x + c2_) + c3_cosh(x);
      case Field::sigma0: return 0.5 * c1_ - mu_ * c3_sinh(x);
      case Field::sigma1: return 0.5 * c1_ + mu_ * c3_sinh(x);
      case Field::sigma01: return 2.0 * c3_cosh(x);
    }
  }
  switch (f) {
    case Field::u0: return -0.5 * rw * x * x + a_ * x + b0_;
    case Field::u1: return 0.5 * rw * x * x + a_ * x + b1_;
    case Field::sigma0: return -rw * (x + 1.0);
    case Field::sigma1: return rw * (x - 1.0);
    case Field::sigma01: break;
  }
  throw DomainError("sigma01 has no outer piece");
}

double PiecewiseSolution::piece_derivative(Field f, Piece piece, double x) const {
  const double rw = p_.r / p_.w;
  if (piece == Piece::overlap) {
    switch (f) {
      case Field::u0: return piece_value(Field::sigma0, piece, x);
      case Field::u1: return piece_value(Field::sigma1, piece, x);
      case Field::sigma0: return -mu_ * mu_ * c3_cosh(x);
      case Field::sigma1: return mu_ * mu_ * c3_cosh(x);
      case Field::sigma01: return 2.0 * mu_ * c3_sinh(x);
    }
  }
  switch (f) {
    case Field::u0: return piece_value(Field::sigma0, piece, x);
    case Field::u1: return piece_value(Field::sigma1, piece, x);
    case Field::sigma0: return -rw;
    case Field::sigma1: return rw;
    case Field::sigma01: break;
  }
  throw DomainError("sigma01 has no outer piece");
}

double PiecewiseSolution::value(Field f, double x) const {
  check_domain(f, x, field_domain(f, p_.epsilon));
  return piece_value(f, locate(f, x, p_.epsilon), x);
}

double PiecewiseSolution::derivative(Field f, double x) const {
  check_domain(f, x, field_domain(f, p_.epsilon));
  return piece_derivative(f, locate(f, x, p_.epsilon), x);
}

PiecewiseSolution solve_cech_analytic(const RodParams& p) { return PiecewiseSolution(p); }

MdSolution::MdSolution(const RodParams& p) : p_(p) {
  p.validate();
  a_ = -p.r / p.w;
  b0_ = p.r / (2.0 * p.w01);
  b1_ = -b0_;
}

double MdSolution::u_S0(double y) const { return -0.5 * p_.r / p_.w * y * y + a_ * y + b0_; }
double MdSolution::u_S1(double y) const { return 0.5 * p_.r / p_.w * y * y + a_ * y + b1_; }
double MdSolution::sigma_S0(double y) const { return -p_.r / p_.w * y + a_; }
double MdSolution::sigma_S1(double y) const { return p_.r / p_.w * y + a_; }

double MdSolution::value(Field f, double y) const {
  switch (f) {
    case Field::u0: check_domain(f, y, {-1.0, 0.0}); return u_S0(y);
    case Field::sigma0: check_domain(f, y, {-1.0, 0.0}); return sigma_S0(y);
    case Field::u1: check_domain(f, y, {0.0, 1.0}); return u_S1(y);
    case Field::sigma1: check_domain(f, y, {0.0, 1.0}); return sigma_S1(y);
    case Field::sigma01: check_domain(f, y, {0.0, 0.0}); return sigma_S01();
  }
  return 0.0;
}

MdSolution solve_simplicial_analytic(const RodParams& p) { return MdSolution(p); }

EmbeddedSolution::EmbeddedSolution(MdSolution md, double epsilon) : md_(std::move(md)), eps_(epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in (0,1)");
}

double EmbeddedSolution::piece_value(Field f, Piece piece, double x) const {
  const double s = 1.0 - eps_;
  if (piece == Piece::overlap) {
    switch (f) {
      case Field::u0: return s * md_.u_S0(0.0);
      case Field::u1: return s * md_.u_S1(0.0);
      case Field::sigma0:
      case Field::sigma1: return 0.0;
      case Field::sigma01: return s * md_.sigma_S01();
    }
  }
  switch (f) {
    case Field::u0: return s * md_.u_S0((x + eps_) / s);
    case Field::u1: return s * md_.u_S1((x - eps_) / s);
    case Field::sigma0: return md_.sigma_S0((x + eps_) / s);
    case Field::sigma1: return md_.sigma_S1((x - eps_) / s);
    case Field::sigma01: break;
  }
  throw DomainError("sigma01 has no outer piece");
}

double EmbeddedSolution::piece_derivative(Field f, Piece piece, double x) const {
  if (piece == Piece::overlap) return 0.0;
  const double rws = md_.params().r / md_.params().w / (1.0 - eps_);
  switch (f) {
    case Field::u0: return piece_value(Field::sigma0, piece, x);
    case Field::u1: return piece_value(Field::sigma1, piece, x);
    case Field::sigma0: return -rws;
    case Field::sigma1: return rws;
    case Field::sigma01: break;
  }
  throw DomainError("sigma01 has no outer piece");
}

double EmbeddedSolution::value(Field f, double x) const {
  check_domain(f, x, field_domain(f, eps_));
  return piece_value(f, locate(f, x, eps_), x);
}

double EmbeddedSolution::derivative(Field f, double x) const {
  check_domain(f, x, field_domain(f, eps_));
  return piece_derivative(f, locate(f, x, eps_), x);
}

EmbeddedSolution embed(const MdSolution& md, const RodParams& p) {
  p.validate();
  return EmbeddedSolution(md, p.epsilon);
}

RodParams interface_matched(const RodParams& p) {
  RodParams q = p;
  q.w01 = 2.0 * p.w01;
  return q;
}

EmbeddedSolution embedded_reference(const RodParams& p) {
  return embed(solve_simplicial_analytic(interface_matched(p)), p);
}

}  // namespace cechlab::rods
