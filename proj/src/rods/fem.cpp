#include "cechlab/rods/fem.hpp"

#include <cmath>
#include <algorithm>
#include <cstdio>
#include <map>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "cechlab/errors.hpp"

namespace cechlab::rods {

Mesh1D::Mesh1D(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw ConstructionError("mesh needs at least two nodes");
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > nodes_[i - 1])) throw ConstructionError("mesh nodes are not strictly increasing");
  }
}

std::optional<Index> Mesh1D::find_node(double x, double tol) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), x - tol);
  if (it != nodes_.end() && std::abs(*it - x) <= tol) return static_cast<Index>(it - nodes_.begin());
  return std::nullopt;
}

Matrix Mesh1D::mass() const {
  Matrix m = Matrix::Zero(num_nodes(), num_nodes());
  for (Index e = 0; e < num_elements(); ++e) {
    const double h = size(e);
    m(e, e) += h / 3.0;
    m(e + 1, e + 1) += h / 3.0;
    m(e, e + 1) += h / 6.0;
    m(e + 1, e) += h / 6.0;
  }
  return m;
}

Matrix Mesh1D::gradient() const {
  Matrix g = Matrix::Zero(num_elements(), num_nodes());
  for (Index e = 0; e < num_elements(); ++e) {
    g(e, e) = -1.0 / size(e);
    g(e, e + 1) = 1.0 / size(e);
  }
  return g;
}

Vector Mesh1D::lumped() const {
  Vector v = Vector::Zero(num_nodes());
  for (Index e = 0; e < num_elements(); ++e) {
    v(e) += 0.5 * size(e);
    v(e + 1) += 0.5 * size(e);
  }
  return v;
}

namespace {

const RodParams& checked(const RodParams& p, double h) {
  p.validate();
  if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("mesh size must be positive");
  if (h > p.epsilon) throw ParameterError("overlap unresolved: h = " + std::to_string(h) + " > epsilon = " +
                                          std::to_string(p.epsilon));
  return p;
}

Index count(double length, double h) { return static_cast<Index>(std::ceil(length / h - 1e-9)); }

std::vector<double> uniform(double a, double b, Index n) {
  std::vector<double> x(static_cast<std::size_t>(n + 1));
  for (Index j = 0; j <= n; ++j) x[static_cast<std::size_t>(j)] = a + (b - a) * static_cast<double>(j) / n;
  x.front() = a;
  x.back() = b;
  return x;
}

std::vector<double> overlap_nodes(double eps, Index m) {
  std::vector<double> x = uniform(-eps, eps, 2 * m);
  x[static_cast<std::size_t>(m)] = 0.0;
  return x;
}

Mesh1D make_mesh0(const RodParams& p, Index n, Index m) {
  std::vector<double> x = uniform(-1.0, -p.epsilon, n);
  const std::vector<double> ov = overlap_nodes(p.epsilon, m);
  x.insert(x.end(), ov.begin() + 1, ov.end());
  return Mesh1D(std::move(x));
}

Mesh1D make_mesh1(const RodParams& p, Index n, Index m) {
  std::vector<double> x = overlap_nodes(p.epsilon, m);
  const std::vector<double> out = uniform(p.epsilon, 1.0, n);
  x.insert(x.end(), out.begin() + 1, out.end());
  return Mesh1D(std::move(x));
}

Matrix block_diag(const Matrix& a, const Matrix& b) {
  Matrix m = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  m.topLeftCorner(a.rows(), a.cols()) = a;
  m.bottomRightCorner(b.rows(), b.cols()) = b;
  return m;
}

Matrix element_gram(const Mesh1D& mesh, double weight) {
  Matrix g = Matrix::Zero(mesh.num_elements(), mesh.num_elements());
  for (Index e = 0; e < mesh.num_elements(); ++e) g(e, e) = weight * mesh.size(e);
  return g;
}

DoubleComplex make_cech(const RodParams& p, const Mesh1D& u0, const Mesh1D& u1, const Mesh1D& ov, Index n) {
  const double ow = p.w01 / p.epsilon;
  const Index n0 = u0.num_nodes(), n1 = u1.num_nodes(), e0 = u0.num_elements(), e1 = u1.num_elements();
  const Index no = ov.num_nodes(), eo = ov.num_elements();
  std::map<Bigrade, InnerProductSpace> spaces{
      {{0, 0}, InnerProductSpace(block_diag(u0.mass(), u1.mass()))},
      {{0, 1}, InnerProductSpace(block_diag(element_gram(u0, p.w), element_gram(u1, p.w)))},
      {{1, 0}, InnerProductSpace(ow * ov.mass(), 1)},
      {{1, 1}, InnerProductSpace(element_gram(ov, ow), 1)}};
  Matrix jump = Matrix::Zero(no, n0 + n1);
  for (Index i = 0; i < no; ++i) {
    jump(i, n + i) = -1.0;
    jump(i, n0 + i) = 1.0;
  }
  Matrix sjump = Matrix::Zero(eo, e0 + e1);
  for (Index j = 0; j < eo; ++j) {
    sjump(j, n + j) = -1.0;
    sjump(j, e0 + j) = 1.0;
  }
  std::map<Bigrade, Matrix> dh{{{0, 0}, jump}, {{0, 1}, sjump}};
  std::map<Bigrade, Matrix> dv{{{0, 0}, block_diag(u0.gradient(), u1.gradient())}, {{1, 0}, -ov.gradient()}};
  return DoubleComplex(1, 1, std::move(spaces), std::move(dh), std::move(dv));
}

DoubleComplex make_simplicial(const RodParams& p, const Mesh1D& s0, const Mesh1D& s1) {
  const RodParams q = interface_matched(p);
  const Index n0 = s0.num_nodes();
  std::map<Bigrade, InnerProductSpace> spaces{
      {{0, 0}, InnerProductSpace(block_diag(s0.mass(), s1.mass()))},
      {{0, 1}, InnerProductSpace(block_diag(element_gram(s0, q.w), element_gram(s1, q.w)))},
      {{1, 0}, InnerProductSpace(Matrix::Constant(1, 1, q.w01))}};
  Matrix jump = Matrix::Zero(1, n0 + s1.num_nodes());
  jump(0, n0 - 1) = -1.0;
  jump(0, n0) = 1.0;
  return DoubleComplex(1, 1, std::move(spaces), {{{0, 0}, jump}}, {{{0, 0}, block_diag(s0.gradient(), s1.gradient())}});
}

}  // namespace

DiscreteRods::DiscreteRods(const RodParams& p, double h)
    : p_(checked(p, h)),
      h_(h),
      n_(count(1.0 - p.epsilon, h)),
      m_(count(p.epsilon, h)),
      mesh0_(make_mesh0(p, n_, m_)),
      mesh1_(make_mesh1(p, n_, m_)),
      overlap_(overlap_nodes(p.epsilon, m_)),
      md0_(uniform(-1.0, 0.0, n_)),
      md1_(uniform(0.0, 1.0, n_)) {}

const DiscreteRods::Complexes& DiscreteRods::complexes() const {
  std::call_once(lazy_->once, [this] {
    DoubleComplex cech = make_cech(p_, mesh0_, mesh1_, overlap_, n_);
    TotalComplex total = assemble_total(cech);
    DoubleComplex md = make_simplicial(p_, md0_, md1_);
    TotalComplex md_total = assemble_total(md);
    SubcomplexEmbedding emb = discrete_embedding(*this, md0_, md1_);
    lazy_->value = std::make_unique<const Complexes>(
        Complexes{std::move(cech), std::move(total), std::move(md), std::move(md_total), std::move(emb)});
  });
  return *lazy_->value;
}

Vector DiscreteRods::load_vector() const {
  Vector b = Vector::Zero(mesh0_.num_nodes() + mesh1_.num_nodes());
  for (Index e = 0; e < n_; ++e) {
    const double half = 0.5 * p_.r * mesh0_.size(e);
    b(e) += half;
    b(e + 1) += half;
  }
  const Index off = mesh0_.num_nodes();
  for (Index e = 2 * m_; e < mesh1_.num_elements(); ++e) {
    const double half = 0.5 * p_.r * mesh1_.size(e);
    b(off + e) -= half;
    b(off + e + 1) -= half;
  }
  return b;
}

DiscreteRods build_discrete_rods(const RodParams& p, double h) { return DiscreteRods(p, h); }

SubcomplexEmbedding discrete_embedding(const DiscreteRods& rods, const Mesh1D& md0, const Mesh1D& md1) {
  const double eps = rods.params().epsilon;
  const double s = 1.0 - eps;
  const Mesh1D& u0 = rods.mesh0();
  const Mesh1D& u1 = rods.mesh1();
  const Index n = rods.outer_elements();
  const Index no = rods.overlap().num_nodes();
  if (md0.lo() != -1.0 || md0.hi() != 0.0 || md1.lo() != 0.0 || md1.hi() != 1.0 || md0.num_elements() != n ||
      md1.num_elements() != n) {
    throw ConstructionError("mesh mismatch: md meshes do not cover (-1,0), (0,1) with " + std::to_string(n) +
                            " elements each");
  }
  const Index n0 = u0.num_nodes();
  const Index s0 = md0.num_nodes();
  // Outer cover node j of rod i must be the preimage of md node j.
  auto match = [](const Mesh1D& cover, Index ci, const Mesh1D& md, Index mi, double shift, double scale) {
    if (std::abs((cover.node(ci) - shift) / scale - md.node(mi)) > 1e-12) {
      throw ConstructionError("mesh mismatch: cover node " + std::to_string(cover.node(ci)) +
                              " is not the image of md node " + std::to_string(md.node(mi)));
    }
  };
  Matrix e00 = Matrix::Zero(n0 + u1.num_nodes(), s0 + md1.num_nodes());
  for (Index j = 0; j <= n; ++j) {
    match(u0, j, md0, j, -eps, s);
    e00(j, j) = s;
    match(u1, no - 1 + j, md1, j, eps, s);
    e00(n0 + no - 1 + j, s0 + j) = s;
  }
  for (Index i = 0; i < no; ++i) {
    e00(rods.overlap_node0(i), s0 - 1) = s;
    e00(n0 + rods.overlap_node1(i), s0) = s;
  }
  const Index e0 = u0.num_elements();
  const Index eo = rods.overlap_elements();
  Matrix e01 = Matrix::Zero(e0 + u1.num_elements(), 2 * n);
  for (Index e = 0; e < n; ++e) {
    e01(e, e) = 1.0;
    e01(e0 + eo + e, n + e) = 1.0;
  }
  // Degree 1 blocks: (0,1) then (1,0) in both complexes.
  Matrix e1 = Matrix::Zero(e01.rows() + no, e01.cols() + 1);
  e1.topLeftCorner(e01.rows(), e01.cols()) = e01;
  e1.bottomRightCorner(no, 1).setConstant(s);
  return SubcomplexEmbedding({e00, e1, Matrix(eo, 0)});
}

SubcomplexEmbedding discrete_embedding(const RodParams& p, double h) {
  return build_discrete_rods(p, h).embedding();
}

PrimalSolution solve_primal(const DiscreteRods& rods) {
  const RodParams& p = rods.params();
  const Mesh1D& u0 = rods.mesh0();
  const Mesh1D& u1 = rods.mesh1();
  const Index n0 = u0.num_nodes();
  const Index nn = n0 + u1.num_nodes();
  const Index n = rods.outer_elements();
  const double ow = p.w01 / p.epsilon;
  std::vector<Eigen::Triplet<double>> t;
  auto stiffness = [&](const Mesh1D& mesh, Index off) {
    for (Index e = 0; e < mesh.num_elements(); ++e) {
      const double k = p.w / mesh.size(e);
      t.emplace_back(off + e, off + e, k);
      t.emplace_back(off + e + 1, off + e + 1, k);
      t.emplace_back(off + e, off + e + 1, -k);
      t.emplace_back(off + e + 1, off + e, -k);
    }
  };
  stiffness(u0, 0);
  stiffness(u1, n0);
  // (w01/ε) ∫ (u1 − u0)(v1 − v0) over the overlap.
  const Mesh1D& ov = rods.overlap();
  for (Index e = 0; e < ov.num_elements(); ++e) {
    const double h = ov.size(e);
    const Index a[2] = {n + e, n0 + e};
    const double sign[2] = {-1.0, 1.0};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const double c = ow * sign[i] * sign[j];
        t.emplace_back(a[i], a[j], c * h / 3.0);
        t.emplace_back(a[i] + 1, a[j] + 1, c * h / 3.0);
        t.emplace_back(a[i], a[j] + 1, c * h / 6.0);
        t.emplace_back(a[i] + 1, a[j], c * h / 6.0);
      }
    }
  }
  Vector mean(nn);
  mean << u0.lumped(), u1.lumped();
  for (Index i = 0; i < nn; ++i) {
    t.emplace_back(i, nn, mean(i));
    t.emplace_back(nn, i, mean(i));
  }
  Eigen::SparseMatrix<double> a(nn + 1, nn + 1);
  a.setFromTriplets(t.begin(), t.end());
  a.makeCompressed();
  Vector rhs = Vector::Zero(nn + 1);
  rhs.head(nn) = rods.load_vector();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw SingularSystemError("primal system is singular");
  const Vector x = lu.solve(rhs);
  if (lu.info() != Eigen::Success) throw SingularSystemError("primal solve failed");

  PrimalSolution s;
  s.u0 = x.head(n0);
  s.u1 = x.segment(n0, u1.num_nodes());
  s.multiplier = x(nn);
  s.sigma0 = u0.gradient() * s.u0;
  s.sigma1 = u1.gradient() * s.u1;
  s.sigma01.resize(ov.num_nodes());
  for (Index i = 0; i < ov.num_nodes(); ++i) s.sigma01(i) = s.u1(rods.overlap_node1(i)) - s.u0(rods.overlap_node0(i));
  return s;
}

PrimalSolution solve_primal(const RodParams& p, double h) { return solve_primal(build_discrete_rods(p, h)); }

void write_nodal_csv(std::ostream& os, const DiscreteRods& rods, const PrimalSolution& s,
                     std::string_view solution_id) {
  char buf[128];
  auto row = [&](double x, Field f, double v) {
    std::snprintf(buf, sizeof buf, "%.17g,", x);
    os << buf << field_name(f) << ',';
    std::snprintf(buf, sizeof buf, "%.17g,", v + 0.0);
    os << buf << solution_id << '\n';
  };
  const Mesh1D& u0 = rods.mesh0();
  const Mesh1D& u1 = rods.mesh1();
  for (Index i = 0; i < u0.num_nodes(); ++i) row(u0.node(i), Field::u0, s.u0(i));
  for (Index i = 0; i < u1.num_nodes(); ++i) row(u1.node(i), Field::u1, s.u1(i));
  for (Index e = 0; e < u0.num_elements(); ++e) row(0.5 * (u0.node(e) + u0.node(e + 1)), Field::sigma0, s.sigma0(e));
  for (Index e = 0; e < u1.num_elements(); ++e) row(0.5 * (u1.node(e) + u1.node(e + 1)), Field::sigma1, s.sigma1(e));
  for (Index i = 0; i < rods.overlap().num_nodes(); ++i) row(rods.overlap().node(i), Field::sigma01, s.sigma01(i));
}

}  // namespace cechlab::rods
