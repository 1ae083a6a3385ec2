#pragma once

#include <array>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace cechlab::rods {

/// Two rods on U0 = (−1, ε) and U1 = (−ε, 1) coupled on the overlap (−ε, ε).
struct RodParams {
  double epsilon = 0.2;
  double r = 1.0;    ///< load magnitude, f = (r on Ũ0, −r on Ũ1)
  double w = 1.0;    ///< rod stiffness
  double w01 = 1.0;  ///< overlap coupling

  /// Throws ParameterError unless ε ∈ (0,1), w > 0, w01 > 0 and all are finite.
  void validate() const;
};

enum class Field { u0, u1, sigma0, sigma1, sigma01 };

inline constexpr std::array<Field, 5> kAllFields{Field::u0, Field::u1, Field::sigma0, Field::sigma1,
                                                 Field::sigma01};

std::string_view field_name(Field f);

/// Smooth piece of a field: the part outside the overlap, or the overlap itself.
enum class Piece { outer, overlap };

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

/// Closed domain of a field on the cover geometry.
Interval field_domain(Field f, double epsilon);
/// Pieces of a field in increasing x (σ01 lives on the overlap only).
std::vector<Piece> field_pieces(Field f);
Interval piece_interval(Field f, Piece p, double epsilon);
/// Piece owning x; the breakpoints ∓ε belong to the outer pieces.
Piece locate(Field f, double x, double epsilon);

/**
 * @brief Closed-form solution of the overlapping two-rod problem.
 *
 * Outside the overlap u_i is quadratic and σ_i linear; on the overlap the
 * coupling gives σ01 = 2 c3 cosh(μx) with μ = sqrt(2 w01 / (w ε)).
 */
class PiecewiseSolution {
 public:
  explicit PiecewiseSolution(const RodParams& p);

  const RodParams& params() const { return p_; }
  double mu() const { return mu_; }
  double A0() const { return a_; }
  double A1() const { return a_; }
  double B0() const { return b0_; }
  double B1() const { return b1_; }
  double c1() const { return c1_; }
  double c2() const { return c2_; }
  double c3() const;
  double c4() const { return c3(); }
  std::array<double, 2> breakpoints() const { return {-p_.epsilon, p_.epsilon}; }

  /// Throws DomainError outside field_domain().
  double value(Field f, double x) const;
  double derivative(Field f, double x) const;
  double piece_value(Field f, Piece piece, double x) const;
  double piece_derivative(Field f, Piece piece, double x) const;

 private:
  // c3 cosh(μx), μ c3 sinh(μx), μ² c3 cosh(μx), evaluated without forming c3.
  double c3_cosh(double x) const;
  double c3_sinh(double x) const;

  RodParams p_;
  double mu_ = 0.0;
  double a_ = 0.0;
  double c1_ = 0.0;
  double c2_ = 0.0;
  double k_ = 0.0;  // c3 sinh(με)
  double b0_ = 0.0;
  double b1_ = 0.0;
};

PiecewiseSolution solve_cech_analytic(const RodParams& p);

/**
 * @brief Solution of the non-overlapping problem on Ω0 = (−1,0), Ω1 = (0,1)
 * with a point interface of weight w01 at y = 0.
 */
class MdSolution {
 public:
  explicit MdSolution(const RodParams& p);

  const RodParams& params() const { return p_; }
  double A_S0() const { return a_; }
  double A_S1() const { return a_; }
  double B_S0() const { return b0_; }
  double B_S1() const { return b1_; }
  double sigma_S01() const { return b1_ - b0_; }

  double u_S0(double y) const;
  double u_S1(double y) const;
  double sigma_S0(double y) const;
  double sigma_S1(double y) const;

  /// Fields on the md geometry (u0, σ0 on [−1,0]; u1, σ1 on [0,1]; σ01 at y = 0).
  double value(Field f, double y) const;

 private:
  RodParams p_;
  double a_ = 0.0;
  double b0_ = 0.0;
  double b1_ = 0.0;
};

MdSolution solve_simplicial_analytic(const RodParams& p);

/**
 * @brief Pullback of an MdSolution to the cover geometry.
 *
 * Outside the overlap u_E,i = (1−ε) u_S,i ∘ φ_i with φ0 = (x+ε)/(1−ε),
 * φ1 = (x−ε)/(1−ε); on the overlap u_E,i is the constant (1−ε) u_S,i(0), σ_E,i = 0
 * and σ_E,01 = (1−ε) σ_S01.
 */
class EmbeddedSolution {
 public:
  EmbeddedSolution(MdSolution md, double epsilon);

  const MdSolution& md() const { return md_; }
  double epsilon() const { return eps_; }

  double value(Field f, double x) const;
  double derivative(Field f, double x) const;
  double piece_value(Field f, Piece piece, double x) const;
  double piece_derivative(Field f, Piece piece, double x) const;

 private:
  MdSolution md_;
  double eps_;
};

EmbeddedSolution embed(const MdSolution& md, const RodParams& p);

/**
 * Parameters of the md problem compared against the overlapping one: the point
 * interface carries the overlap stiffness integrated across the overlap,
 * (w01/ε)·2ε = 2·w01.
 */
RodParams interface_matched(const RodParams& p);

/// embed(solve_simplicial_analytic(interface_matched(p)), p).
EmbeddedSolution embedded_reference(const RodParams& p);

template <class Solution>
double evaluate(const Solution& sol, Field f, double x) {
  return sol.value(f, x);
}

inline void write_field_csv_header(std::ostream& os) { os << "x,field,value,solution_id\n"; }

/// Appends `samples` uniformly spaced points per piece (endpoints included,
/// evaluated with the piece's own formula).
template <class Solution>
void write_field_csv(std::ostream& os, const Solution& sol, double epsilon, std::string_view solution_id,
                     int samples) {
  char buf[96];
  for (Field f : kAllFields) {
    for (Piece piece : field_pieces(f)) {
      const Interval iv = piece_interval(f, piece, epsilon);
      for (int i = 0; i < samples; ++i) {
        const double x = i + 1 == samples ? iv.hi : iv.lo + iv.length() * i / (samples - 1);
        std::snprintf(buf, sizeof buf, "%.17g", x);
        os << buf << ',' << field_name(f) << ',';
        std::snprintf(buf, sizeof buf, "%.17g", sol.piece_value(f, piece, x) + 0.0);
        os << buf << ',' << solution_id << '\n';
      }
    }
  }
}

}  // namespace cechlab::rods
