#include "cechlab/complex.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "cechlab/errors.hpp"

namespace cechlab {

namespace {

double relative_product_defect(const Matrix& product, double scale) {
  if (product.size() == 0 || scale == 0.0) return 0.0;
  return product.norm() / scale;
}

}  // namespace

std::string to_string(Bigrade b) {
  return "(" + std::to_string(b.p) + "," + std::to_string(b.q) + ")";
}

InnerProductSpace::InnerProductSpace(Matrix gram, int weight_exponent)
    : weight_exponent_(weight_exponent) {
  if (gram.rows() != gram.cols()) throw ConstructionError("Gram matrix is not square");
  gram_ = 0.5 * (gram + gram.transpose());
  if (gram_.rows() == 0) return;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram_, Eigen::EigenvaluesOnly);
  const Vector& ev = eig.eigenvalues();
  const double top = ev(ev.size() - 1);
  if (!(top > 0.0) || ev(0) <= 1e-12 * top) {
    throw ConstructionError("Gram matrix is not positive definite");
  }
}

InnerProductSpace InnerProductSpace::euclidean(Index dim) {
  return InnerProductSpace(Matrix::Identity(dim, dim));
}

double DoubleComplexDefects::worst() const {
  return std::max({horizontal, vertical, anticommutator});
}

DoubleComplex::DoubleComplex(int p_max, int q_max, std::map<Bigrade, InnerProductSpace> spaces,
                             std::map<Bigrade, Matrix> d_h, std::map<Bigrade, Matrix> d_v)
    : p_max_(p_max), q_max_(q_max), spaces_(std::move(spaces)), d_h_(std::move(d_h)),
      d_v_(std::move(d_v)) {
  if (p_max < 0 || q_max < 0) throw ConstructionError("negative bigrade bounds");
  for (const auto& [b, s] : spaces_) {
    if (!contains(b)) throw ConstructionError("space at bigrade " + to_string(b) + " lies outside the quadrant");
  }
  for (int p = 0; p <= p_max; ++p) {
    for (int q = 0; q <= q_max; ++q) spaces_.try_emplace(Bigrade{p, q}, InnerProductSpace::euclidean(0));
  }
  auto fill = [this](std::map<Bigrade, Matrix>& maps, int dp, int dq, const char* name) {
    for (const auto& [b, m] : maps) {
      if (!contains(b)) {
        throw ConstructionError(std::string(name) + " at bigrade " + to_string(b) + " lies outside the quadrant");
      }
    }
    for (int p = 0; p <= p_max_; ++p) {
      for (int q = 0; q <= q_max_; ++q) {
        const Bigrade src{p, q};
        const Bigrade dst{p + dp, q + dq};
        const Index rows = contains(dst) ? dim(dst) : 0;
        auto it = maps.find(src);
        if (it == maps.end()) {
          maps.emplace(src, Matrix::Zero(rows, dim(src)));
          continue;
        }
        if (it->second.rows() != rows || it->second.cols() != dim(src)) {
          throw ConstructionError(std::string(name) + " at bigrade " + to_string(src) + " has shape " +
                                  std::to_string(it->second.rows()) + "x" + std::to_string(it->second.cols()) +
                                  ", expected " + std::to_string(rows) + "x" + std::to_string(dim(src)));
        }
      }
    }
  };
  fill(d_h_, 1, 0, "d_h");
  fill(d_v_, 0, 1, "d_v");
}

bool DoubleComplex::contains(Bigrade b) const {
  return b.p >= 0 && b.q >= 0 && b.p <= p_max_ && b.q <= q_max_;
}

Index DoubleComplex::dim(Bigrade b) const { return contains(b) ? spaces_.at(b).dim() : 0; }

const InnerProductSpace& DoubleComplex::space(Bigrade b) const { return spaces_.at(b); }

const Matrix& DoubleComplex::d_h(Bigrade b) const { return d_h_.at(b); }

const Matrix& DoubleComplex::d_v(Bigrade b) const { return d_v_.at(b); }

DoubleComplexDefects DoubleComplex::defects() const {
  DoubleComplexDefects out;
  for (int p = 0; p <= p_max_; ++p) {
    for (int q = 0; q <= q_max_; ++q) {
      const Bigrade b{p, q};
      if (p + 1 <= p_max_) {
        const Matrix& a = d_h(Bigrade{p + 1, q});
        out.horizontal = std::max(out.horizontal,
                                  relative_product_defect(a * d_h(b), a.norm() * d_h(b).norm()));
      }
      if (q + 1 <= q_max_) {
        const Matrix& a = d_v(Bigrade{p, q + 1});
        out.vertical = std::max(out.vertical,
                                relative_product_defect(a * d_v(b), a.norm() * d_v(b).norm()));
      }
      if (p + 1 <= p_max_ && q + 1 <= q_max_) {
        const Matrix& vh = d_v(Bigrade{p + 1, q});
        const Matrix& hv = d_h(Bigrade{p, q + 1});
        const double scale = std::max(vh.norm() * d_h(b).norm(), hv.norm() * d_v(b).norm());
        out.anticommutator = std::max(out.anticommutator,
                                      relative_product_defect(vh * d_h(b) + hv * d_v(b), scale));
      }
    }
  }
  return out;
}

TotalComplex::TotalComplex(std::vector<std::vector<Block>> layout, std::vector<Matrix> grams,
                           std::vector<Matrix> differentials)
    : layout_(std::move(layout)) {
  const std::size_t n = grams.size();
  if (n == 0) throw ConstructionError("total complex needs at least one degree");
  if (layout_.size() != n) throw ConstructionError("block layout does not cover every degree");
  if (differentials.size() + 1 != n) {
    throw ConstructionError("expected " + std::to_string(n - 1) + " differentials, got " +
                            std::to_string(differentials.size()));
  }
  for (std::size_t k = 0; k < n; ++k) {
    Index total = 0;
    for (const Block& b : layout_[k]) {
      if (b.offset != total) throw ConstructionError("blocks of degree " + std::to_string(k) + " are not contiguous");
      total += b.size;
    }
    if (total != grams[k].rows()) {
      throw ConstructionError("blocks of degree " + std::to_string(k) + " do not match the Gram size");
    }
    factors_.emplace_back(InnerProductSpace(grams[k]).gram());
  }
  d_.reserve(n + 1);
  d_.push_back(Matrix(dim(0), 0));
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const Matrix& m = differentials[k];
    if (m.rows() != dim(static_cast<int>(k + 1)) || m.cols() != dim(static_cast<int>(k))) {
      throw ConstructionError("D_" + std::to_string(k) + " has shape " + std::to_string(m.rows()) + "x" +
                              std::to_string(m.cols()));
    }
    d_.push_back(m);
  }
  d_.push_back(Matrix(0, dim(max_degree())));
  for (int k = 0; k + 1 <= max_degree() - 1; ++k) {
    const Matrix& a = differential(k + 1);
    const Matrix& b = differential(k);
    if (relative_product_defect(a * b, a.norm() * b.norm()) > kComplexTolerance) {
      throw ConstructionError("D_" + std::to_string(k + 1) + " D_" + std::to_string(k) + " != 0");
    }
  }
  d_tilde_.reserve(d_.size());
  for (int k = -1; k <= max_degree(); ++k) {
    const Matrix& m = differential(k);
    if (k < 0 || k == max_degree()) {
      d_tilde_.push_back(m);
      continue;
    }
    d_tilde_.push_back(factor(k + 1).to_orthonormal(factor(k).times_inverse_transpose(m)));
  }
}

TotalComplex TotalComplex::from_matrices(std::vector<Matrix> grams, std::vector<Matrix> differentials) {
  std::vector<std::vector<Block>> layout;
  for (std::size_t k = 0; k < grams.size(); ++k) {
    layout.push_back({Block{Bigrade{static_cast<int>(k), 0}, 0, grams[k].rows()}});
  }
  return TotalComplex(std::move(layout), std::move(grams), std::move(differentials));
}

Index TotalComplex::dim(int k) const {
  if (k < 0 || k > max_degree()) return 0;
  return factors_[k].dim();
}

const Block& TotalComplex::block(int k, Bigrade b) const {
  for (const Block& blk : layout_.at(k)) {
    if (blk.bigrade == b) return blk;
  }
  throw ConstructionError("degree " + std::to_string(k) + " has no block " + to_string(b));
}

Matrix TotalComplex::graph_gram(int k) const {
  const Matrix& d = differential(k);
  if (k == max_degree()) return gram(k);
  return gram(k) + d.transpose() * gram(k + 1) * d;
}

ChainVector TotalComplex::chain(int k, Vector coeffs) const {
  if (coeffs.size() != dim(k)) {
    throw ConstructionError("chain vector of size " + std::to_string(coeffs.size()) + " in degree " +
                            std::to_string(k) + " of dimension " + std::to_string(dim(k)));
  }
  return ChainVector{k, std::move(coeffs)};
}

ChainVector TotalComplex::zero(int k) const { return ChainVector{k, Vector::Zero(dim(k))}; }

double TotalComplex::inner(int k, const Vector& a, const Vector& b) const { return a.dot(gram(k) * b); }

double TotalComplex::norm(int k, const Vector& a) const { return std::sqrt(std::max(0.0, inner(k, a, a))); }

double TotalComplex::graph_norm(int k, const Vector& a) const {
  const double base = inner(k, a, a);
  if (k == max_degree()) return std::sqrt(std::max(0.0, base));
  const Vector da = differential(k) * a;
  return std::sqrt(std::max(0.0, base + inner(k + 1, da, da)));
}

TotalComplex assemble_total(const DoubleComplex& dc) {
  const double defect = dc.defects().worst();
  if (defect > kComplexTolerance) {
    throw ConstructionError("double complex identities violated (relative defect " + std::to_string(defect) + ")");
  }
  const int kmax = dc.p_max() + dc.q_max();
  std::vector<std::vector<Block>> layout(kmax + 1);
  std::vector<Matrix> grams;
  for (int k = 0; k <= kmax; ++k) {
    Index offset = 0;
    for (int p = 0; p <= dc.p_max(); ++p) {
      const int q = k - p;
      if (q < 0 || q > dc.q_max()) continue;
      const Bigrade b{p, q};
      layout[k].push_back(Block{b, offset, dc.dim(b)});
      offset += dc.dim(b);
    }
    Matrix g = Matrix::Zero(offset, offset);
    for (const Block& blk : layout[k]) g.block(blk.offset, blk.offset, blk.size, blk.size) = dc.space(blk.bigrade).gram();
    grams.push_back(std::move(g));
  }
  std::vector<Matrix> diffs;
  for (int k = 0; k < kmax; ++k) {
    Matrix d = Matrix::Zero(grams[k + 1].rows(), grams[k].rows());
    for (const Block& src : layout[k]) {
      for (const Block& dst : layout[k + 1]) {
        if (dst.bigrade == Bigrade{src.bigrade.p + 1, src.bigrade.q}) {
          d.block(dst.offset, src.offset, dst.size, src.size) += dc.d_h(src.bigrade);
        } else if (dst.bigrade == Bigrade{src.bigrade.p, src.bigrade.q + 1}) {
          d.block(dst.offset, src.offset, dst.size, src.size) += dc.d_v(src.bigrade);
        }
      }
    }
    diffs.push_back(std::move(d));
  }
  return TotalComplex(std::move(layout), std::move(grams), std::move(diffs));
}

}  // namespace cechlab
