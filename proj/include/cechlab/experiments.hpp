#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cechlab/complex.hpp"
#include "cechlab/estimators.hpp"

namespace cechlab::experiments {

using rods::RodParams;

struct SweepConfig {
  std::vector<double> epsilons{0.2, 0.05, 0.0125, 0.003125, 7.8125e-4, 1.953125e-4};
  double r = 1.0;
  double w = 1.0;
  double w01 = 1.0;
  double h = 1.0 / 64;  ///< mesh size for complex-check
  int samples = 100;    ///< per piece, for fields
  NormKind norm = NormKind::l2;
  estimators::HatResidual hat = estimators::HatResidual::closed_form;
  bool precise = false;
  std::string out;  ///< empty: stdout

  /// Throws ParameterError: ε in (0,1) strictly decreasing, w, w01, h > 0, samples >= 2.
  void validate() const;
  RodParams params(double epsilon) const;
};

/**
 * Reads `key = value` lines ('#' starts a comment) on top of `base`.
 * Keys: epsilons (comma separated), r, w, w01, h, samples, norm (l2|graph),
 * hat_residual (closed_form|integrated), precise (true|false), out.
 * Throws ParameterError on unknown keys or malformed values.
 */
SweepConfig parse_config(std::istream& in, SweepConfig base = {});
SweepConfig load_config(const std::string& path, SweepConfig base = {});

std::vector<double> parse_list(const std::string& text);
NormKind parse_norm(const std::string& text);

struct RateRow {
  estimators::ErrorReport report;
  std::optional<double> rate_u;
  std::optional<double> rate_sigma;
};

struct RateTable {
  std::vector<RateRow> rows;
  bool all_reliable() const;
};

double rate(double e1, double e2, double eps1, double eps2);

/// Analytic solve, embedding, errors and estimators per ε (run concurrently; rows keep the list order).
RateTable run_table1(const SweepConfig& cfg);
void write_table_csv(std::ostream& os, const RateTable& t, bool precise);

/// Samples of all fields for the overlapping and the embedded solution.
void write_fields_csv(std::ostream& os, const RodParams& p, int samples);

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct CheckReport {
  std::vector<Check> checks;
  std::vector<std::string> notes;  ///< measured values that are not pass/fail
  bool all_pass() const;
};

struct ComplexCheckOptions {
  /// Test hook: flip the sign of d_h(0,0)(0, n) before checking.
  bool flip_sign = false;
  int samples = 50;
  unsigned seed = 7;
  std::string dump_dir;  ///< if set, writes D_k and G_k as triplet files
};

/// Copy of `dc` with entry (row, col) of d_h(b) negated.
DoubleComplex flip_sign(const DoubleComplex& dc, Bigrade b, Index row, Index col);

/// Invariants of the discrete rods complex, its Hodge theory, the embedding and the cochain projection.
CheckReport complex_check(const RodParams& p, double h, const ComplexCheckOptions& opts = {});
void write_check_report(std::ostream& os, const CheckReport& r);

}  // namespace cechlab::experiments
