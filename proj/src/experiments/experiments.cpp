#include "cechlab/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <random>
#include <sstream>

#include "cechlab/errors.hpp"
#include "cechlab/hodge.hpp"
#include "cechlab/rods/fem.hpp"
#include "cechlab/subcomplex.hpp"
#include "cechlab/triplets.hpp"

namespace cechlab::experiments {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || trim(text.substr(used)) != "") throw ParameterError("bad number for " + key + ": '" + text + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ParameterError("bad boolean for " + key + ": '" + text + "'");
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

void SweepConfig::validate() const {
  if (epsilons.empty()) throw ParameterError("epsilon list is empty");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0 && epsilons[i] < 1.0)) throw ParameterError("epsilon must lie in (0,1): " + fmt("%g", epsilons[i]));
    if (i > 0 && !(epsilons[i] < epsilons[i - 1])) throw ParameterError("epsilon list must be strictly decreasing");
  }
  params(epsilons.front()).validate();
  if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("h must be positive");
  if (samples < 2) throw ParameterError("samples must be at least 2");
}

RodParams SweepConfig::params(double epsilon) const { return RodParams{epsilon, r, w, w01}; }

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ParameterError("empty entry in list '" + text + "'");
    out.push_back(parse_double("epsilons", item));
  }
  return out;
}

NormKind parse_norm(const std::string& text) {
  if (text == "l2") return NormKind::l2;
  if (text == "graph") return NormKind::graph;
  throw ParameterError("norm must be l2 or graph, got '" + text + "'");
}

SweepConfig parse_config(std::istream& in, SweepConfig cfg) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParameterError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "epsilons") {
      cfg.epsilons = parse_list(value);
    } else if (key == "r") {
      cfg.r = parse_double(key, value);
    } else if (key == "w") {
      cfg.w = parse_double(key, value);
    } else if (key == "w01") {
      cfg.w01 = parse_double(key, value);
    } else if (key == "h") {
      cfg.h = parse_double(key, value);
    } else if (key == "samples") {
      const double s = parse_double(key, value);
      if (s != std::floor(s) || std::abs(s) > 1e9) throw ParameterError("samples must be an integer");
      cfg.samples = static_cast<int>(s);
    } else if (key == "norm") {
      cfg.norm = parse_norm(value);
    } else if (key == "hat_residual") {
      if (value == "closed_form") {
        cfg.hat = estimators::HatResidual::closed_form;
      } else if (value == "integrated") {
        cfg.hat = estimators::HatResidual::integrated;
      } else {
        throw ParameterError("hat_residual must be closed_form or integrated");
      }
    } else if (key == "precise") {
      cfg.precise = parse_bool(key, value);
    } else if (key == "out") {
      cfg.out = value;
    } else {
      throw ParameterError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

SweepConfig load_config(const std::string& path, SweepConfig base) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot read config file " + path);
  return parse_config(in, std::move(base));
}

bool RateTable::all_reliable() const {
  for (const RateRow& r : rows) {
    if (!r.report.reliable_u() || !r.report.reliable_sigma()) return false;
  }
  return true;
}

double rate(double e1, double e2, double eps1, double eps2) { return std::log(e1 / e2) / std::log(eps1 / eps2); }

RateTable run_table1(const SweepConfig& cfg) {
  cfg.validate();
  estimators::EstimatorOptions opts;
  opts.norm = cfg.norm;
  opts.hat = cfg.hat;
  std::vector<std::future<estimators::ErrorReport>> jobs;
  for (double eps : cfg.epsilons) {
    jobs.push_back(std::async(std::launch::async, [&cfg, opts, eps] {
      const RodParams p = cfg.params(eps);
      return estimators::a_posteriori(rods::solve_cech_analytic(p), rods::embedded_reference(p), p, opts);
    }));
  }
  RateTable t;
  for (auto& j : jobs) t.rows.push_back(RateRow{j.get(), std::nullopt, std::nullopt});
  for (std::size_t i = 0; i + 1 < t.rows.size(); ++i) {
    const auto& a = t.rows[i].report;
    const auto& b = t.rows[i + 1].report;
    t.rows[i].rate_u = rate(a.e_u, b.e_u, a.epsilon, b.epsilon);
    t.rows[i].rate_sigma = rate(a.e_sigma, b.e_sigma, a.epsilon, b.epsilon);
  }
  return t;
}

void write_table_csv(std::ostream& os, const RateTable& t, bool precise) {
  const char* sci = precise ? "%.17g" : "%.3e";
  const char* fix = precise ? "%.17g" : "%.3f";
  auto opt = [&](const std::optional<double>& v) { return v ? fmt(fix, *v) : std::string(); };
  os << "epsilon,error_u,rate_u,efficiency_u,error_sigma,rate_sigma,efficiency_sigma\n";
  for (const RateRow& row : t.rows) {
    const auto& r = row.report;
    os << fmt(sci, r.epsilon) << ',' << fmt(sci, r.e_u) << ',' << opt(row.rate_u) << ',' << fmt(fix, r.efficiency_u)
       << ',' << fmt(sci, r.e_sigma) << ',' << opt(row.rate_sigma) << ',' << fmt(fix, r.efficiency_sigma) << '\n';
  }
}

void write_fields_csv(std::ostream& os, const RodParams& p, int samples) {
  p.validate();
  if (samples < 2) throw ParameterError("samples must be at least 2");
  rods::write_field_csv_header(os);
  rods::write_field_csv(os, rods::solve_cech_analytic(p), p.epsilon, "cech", samples);
  rods::write_field_csv(os, rods::embedded_reference(p), p.epsilon, "embedded", samples);
}

bool CheckReport::all_pass() const {
  for (const Check& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

DoubleComplex flip_sign(const DoubleComplex& dc, Bigrade b, Index row, Index col) {
  std::map<Bigrade, Matrix> dh = dc.horizontal();
  Matrix& m = dh.at(b);
  if (row < 0 || row >= m.rows() || col < 0 || col >= m.cols()) throw ParameterError("flip_sign entry out of range");
  m(row, col) = -m(row, col);
  return DoubleComplex(dc.p_max(), dc.q_max(), dc.spaces(), std::move(dh), dc.vertical());
}

namespace {

class Checker {
 public:
  explicit Checker(CheckReport& r) : r_(r) {}

  // Passes if value <= limit.
  void at_most(const std::string& name, double value, double limit) {
    r_.checks.push_back({name, value <= limit, fmt("%.3e", value) + " <= " + fmt("%.1e", limit)});
  }
  void equal(const std::string& name, Index value, Index expected) {
    r_.checks.push_back({name, value == expected, std::to_string(value) + " == " + std::to_string(expected)});
  }
  void note(const std::string& text) { r_.notes.push_back(text); }

 private:
  CheckReport& r_;
};

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void dump(const std::string& dir, const TotalComplex& t) {
  std::filesystem::create_directories(dir);
  for (int k = 0; k <= t.max_degree(); ++k) {
    std::ofstream g(dir + "/G" + std::to_string(k) + ".txt");
    write_triplets(g, t.gram(k));
    if (k < t.max_degree()) {
      std::ofstream d(dir + "/D" + std::to_string(k) + ".txt");
      write_triplets(d, t.differential(k));
    }
  }
}

}  // namespace

CheckReport complex_check(const RodParams& p, double h, const ComplexCheckOptions& opts) {
  const rods::DiscreteRods rods(p, h);
  CheckReport report;
  Checker c(report);

  const DoubleComplex dc =
      opts.flip_sign ? flip_sign(rods.cech(), {0, 0}, 0, rods.overlap_node0(0)) : rods.cech();
  const DoubleComplexDefects def = dc.defects();
  c.at_most("d_h d_h = 0", def.horizontal, kComplexTolerance);
  c.at_most("d_v d_v = 0", def.vertical, kComplexTolerance);
  c.at_most("d_h d_v + d_v d_h = 0", def.anticommutator, kComplexTolerance);
  if (!report.all_pass()) {
    c.note("remaining checks skipped: the double complex is invalid");
    return report;
  }

  const TotalComplex& t = rods.total();
  if (!opts.dump_dir.empty()) dump(opts.dump_dir, t);
  const int top = t.max_degree();

  double dd = 0.0;
  for (int k = 0; k + 1 < top; ++k) {
    const Matrix& a = t.differential(k + 1);
    const Matrix& b = t.differential(k);
    dd = std::max(dd, (a * b).norm() / std::max(a.norm() * b.norm(), std::numeric_limits<double>::min()));
  }
  c.at_most("D D = 0", dd, kComplexTolerance);

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  auto random = [&](Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = normal(rng);
    return v;
  };

  double adj = 0.0;
  for (int k = 1; k <= top; ++k) {
    const Matrix ds = adjoint(t, k);
    for (int s = 0; s < opts.samples; ++s) {
      const Vector u = random(t.dim(k - 1));
      const Vector v = random(t.dim(k));
      const Vector du = t.differential(k - 1) * u;
      const double lhs = t.inner(k, du, v);
      const double rhs = t.inner(k - 1, u, ds * v);
      adj = std::max(adj, std::abs(lhs - rhs) / (t.norm(k, du) * t.norm(k, v) + t.norm(k - 1, u) * t.norm(k - 1, ds * v)));
    }
  }
  c.at_most("<Du,v> = <u,D*v>", adj, 1e-10);

  double recon = 0.0, orth = 0.0;
  for (int k = 0; k <= top; ++k) {
    for (int s = 0; s < opts.samples; ++s) {
      const Vector v = random(t.dim(k));
      const HodgeSplit hs = hodge_decompose(t, k, t.chain(k, v));
      const double nv2 = t.inner(k, v, v);
      recon = std::max(recon, t.norm(k, hs.b.coeffs + hs.h.coeffs + hs.bstar.coeffs - v) / std::sqrt(nv2));
      orth = std::max({orth, std::abs(t.inner(k, hs.b.coeffs, hs.h.coeffs)) / nv2,
                       std::abs(t.inner(k, hs.b.coeffs, hs.bstar.coeffs)) / nv2,
                       std::abs(t.inner(k, hs.h.coeffs, hs.bstar.coeffs)) / nv2});
    }
  }
  c.at_most("Hodge decomposition reconstructs", recon, 1e-9);
  c.at_most("Hodge parts orthogonal", orth, 1e-9);

  c.equal("dim h^0", harmonic_matrix(t, 0).cols(), 1);
  for (int k = 1; k <= top; ++k) c.equal("dim h^" + std::to_string(k), harmonic_matrix(t, k).cols(), 0);
  std::map<Bigrade, Matrix> zero_dh;
  for (const auto& [b, m] : dc.horizontal()) zero_dh.emplace(b, Matrix::Zero(m.rows(), m.cols()));
  const TotalComplex uncoupled =
      assemble_total(DoubleComplex(dc.p_max(), dc.q_max(), dc.spaces(), std::move(zero_dh), dc.vertical()));
  c.equal("dim h^0 without coupling", harmonic_matrix(uncoupled, 0).cols(), 2);

  for (int k = 0; k < top; ++k) {
    const double primal = poincare_constant(t, k);
    const double dual = adjoint_poincare_constant(t, k + 1);
    c.at_most("Poincare duality k=" + std::to_string(k), std::abs(primal - dual) / primal, 1e-9);
  }

  const SubcomplexEmbedding& emb = rods.embedding();
  const TotalComplex& md = rods.simplicial_total();
  c.at_most("embedding is a cochain map", cochain_defect(t, emb, md), 1e-10);
  for (int k = 0; k < top; ++k) {
    if (emb.dim(k) == 0 || md.differential(k).norm() == 0.0) continue;
    c.at_most("restricted Poincare <= full k=" + std::to_string(k),
              poincare_constant(t, k, emb) - poincare_constant(t, k), 1e-12 * poincare_constant(t, k));
  }

  const CochainProjection pi = cochain_projection(t, emb);
  double pe = 0.0, comm = 0.0;
  bool finite = true;
  double bound_excess = -std::numeric_limits<double>::infinity();
  for (int k = 0; k <= top; ++k) {
    pe = std::max(pe, max_abs(pi.pi[k] * emb.map(k) - Matrix::Identity(emb.dim(k), emb.dim(k))));
    if (k < top) {
      const Matrix lhs = md.differential(k) * pi.pi[k];
      const Matrix rhs = pi.pi[k + 1] * t.differential(k);
      comm = std::max(comm, max_abs(lhs - rhs) / std::max(1.0, max_abs(rhs)));
    }
    finite = finite && std::isfinite(pi.kappa[k]);
    if (emb.dim(k) > 0) {
      const double bound = 1.0 + pi.kappa1[k] + pi.kappa1[k] * pi.kappa2[k];
      bound_excess = std::max(bound_excess, pi.kappa[k] / bound - 1.0);
      c.note("k=" + std::to_string(k) + ": kappa=" + fmt("%.6g", pi.kappa[k]) + " kappa1=" +
             fmt("%.6g", pi.kappa1[k]) + " kappa2=" + fmt("%.6g", pi.kappa2[k]));
    }
  }
  c.at_most("pi E = id", pe, 1e-12);
  c.at_most("D pi = pi D", comm, 1e-10);
  report.checks.push_back({"graph-norm bound finite", finite, finite ? "yes" : "no"});
  c.at_most("kappa <= 1 + kappa1 + kappa1 kappa2 (relative excess)", bound_excess, 1e-10);

  const SubcomplexEmbedding id = SubcomplexEmbedding::identity(t);
  const CochainProjection pid = cochain_projection(t, id);
  double id_dev = 0.0;
  for (int k = 0; k <= top; ++k) {
    if (t.dim(k) > 0) id_dev = std::max(id_dev, std::abs(pid.kappa[k] - 1.0));
  }
  c.at_most("identity subcomplex kappa = 1", id_dev, 1e-10);

  const double gap = estimators::harmonic_error_bound(t, emb, pi, 0);
  c.note("harmonic gap M_0 = " + fmt("%.3e", gap));
  const double c0 = poincare_constant(t, 0);
  c.note("discrete Poincare constant k=0: " + fmt("%.6f", c0) + " (estimator bound " +
         fmt("%.6f", estimators::poincare_bound(p).constant) + ")");
  return report;
}

void write_check_report(std::ostream& os, const CheckReport& r) {
  for (const Check& c : r.checks) os << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
  for (const std::string& n : r.notes) os << "note: " << n << '\n';
}

}  // namespace cechlab::experiments
