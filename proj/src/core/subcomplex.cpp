#include "cechlab/subcomplex.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cechlab/errors.hpp"
#include "cechlab/hodge.hpp"

namespace cechlab {

SubcomplexEmbedding::SubcomplexEmbedding(std::vector<Matrix> maps) : maps_(std::move(maps)) {
  if (maps_.empty()) throw ConstructionError("embedding needs at least one degree");
  for (std::size_t k = 0; k < maps_.size(); ++k) {
    if (numerical_rank(maps_[k]) != maps_[k].cols()) {
      throw ConstructionError("embedding columns of degree " + std::to_string(k) + " are linearly dependent");
    }
  }
}

SubcomplexEmbedding SubcomplexEmbedding::identity(const TotalComplex& total) {
  std::vector<Matrix> maps;
  for (int k = 0; k <= total.max_degree(); ++k) maps.push_back(Matrix::Identity(total.dim(k), total.dim(k)));
  return SubcomplexEmbedding(std::move(maps));
}

double cochain_defect(const TotalComplex& total, const SubcomplexEmbedding& emb, const TotalComplex& sub) {
  double worst = 0.0;
  for (int k = 0; k < total.max_degree(); ++k) {
    const Matrix& d = total.differential(k);
    const Matrix& e = emb.map(k);
    const double scale = d.norm() * e.norm();
    if (scale == 0.0) continue;
    const Matrix defect = d * e - emb.map(k + 1) * sub.differential(k);
    worst = std::max(worst, defect.norm() / scale);
  }
  return worst;
}

TotalComplex induced_complex(const TotalComplex& total, const SubcomplexEmbedding& emb) {
  if (emb.max_degree() != total.max_degree()) {
    throw ConstructionError("embedding has " + std::to_string(emb.max_degree() + 1) + " degrees, complex has " +
                            std::to_string(total.max_degree() + 1));
  }
  std::vector<Matrix> grams;
  for (int k = 0; k <= total.max_degree(); ++k) {
    const Matrix& e = emb.map(k);
    if (e.rows() != total.dim(k)) {
      throw ConstructionError("embedding of degree " + std::to_string(k) + " has " + std::to_string(e.rows()) +
                              " rows, expected " + std::to_string(total.dim(k)));
    }
    grams.push_back(e.transpose() * total.gram(k) * e);
  }
  std::vector<Matrix> diffs;
  for (int k = 0; k < total.max_degree(); ++k) {
    const Matrix& e = emb.map(k);
    const Matrix& e1 = emb.map(k + 1);
    const Matrix& d = total.differential(k);
    const Matrix de = d * e;
    const Matrix rhs = e1.transpose() * total.gram(k + 1) * de;
    Matrix db = grams[k + 1].rows() == 0 ? Matrix(0, rhs.cols()) : Matrix(grams[k + 1].llt().solve(rhs));
    // Basis vectors that D annihilates up to roundoff map to exact zeros.
    const double dn = d.norm();
    for (Index j = 0; j < de.cols(); ++j) {
      if (de.col(j).norm() <= 1e-13 * dn * e.col(j).norm()) db.col(j).setZero();
    }
    diffs.push_back(std::move(db));
  }
  TotalComplex sub = TotalComplex::from_matrices(std::move(grams), std::move(diffs));
  const double defect = cochain_defect(total, emb, sub);
  if (defect > kCochainTolerance) {
    throw ConstructionError("embedding is not a cochain map (relative defect " + std::to_string(defect) + ")");
  }
  return sub;
}

namespace {

double operator_norm(const Matrix& op, const Matrix& gram_in, const Matrix& gram_out) {
  if (op.size() == 0) return 0.0;
  const GramFactor in(gram_in);
  const GramFactor out(gram_out);
  return spectral_norm(out.to_orthonormal(in.times_inverse_transpose(op)));
}

}  // namespace

CochainProjection cochain_projection(const TotalComplex& total, const SubcomplexEmbedding& emb) {
  const TotalComplex sub = induced_complex(total, emb);
  CochainProjection out;
  for (int k = 0; k <= total.max_degree(); ++k) {
    const Matrix& e = emb.map(k);
    const Matrix& g = total.gram(k);
    const GramFactor& fb = sub.factor(k);
    const Index na = total.dim(k);
    const Index nb = sub.dim(k);

    const Matrix rb = fb.from_orthonormal(orthonormal_range(sub.orthonormal_differential(k - 1)));
    const Matrix p_exact = rb * (rb.transpose() * e.transpose() * g);

    Matrix q = Matrix::Zero(nb, na);
    const Matrix n = fb.from_orthonormal(orthonormal_range(sub.orthonormal_differential(k).transpose()));
    double kappa1 = 0.0;
    if (n.cols() > 0) {
      const Matrix& g1 = total.gram(k + 1);
      const Matrix y = emb.map(k + 1) * sub.differential(k) * n;
      const Matrix normal = y.transpose() * g1 * y;
      q = n * normal.llt().solve(y.transpose() * g1 * total.differential(k));
      const double c = poincare_constant(sub, k);
      kappa1 = std::sqrt(1.0 + c * c);
    }

    const Matrix h = harmonic_matrix(total, k);
    const Matrix hb = harmonic_matrix(sub, k);
    if (h.cols() != hb.cols()) {
      throw AssumptionError("harmonic dimension mismatch in degree " + std::to_string(k) + ": ambient " +
                            std::to_string(h.cols()) + ", subcomplex " + std::to_string(hb.cols()) +
                            " (harmonic assumption violated)");
    }
    Matrix r_harm = Matrix::Zero(nb, na);
    double kappa2 = 0.0;
    if (h.cols() > 0) {
      const Matrix m = h.transpose() * g * e * hb;
      const double smin = smallest_singular_value(m);
      if (smin < kRankTolerance) {
        throw AssumptionError("harmonic pairing is singular in degree " + std::to_string(k) +
                              " (harmonic assumption violated)");
      }
      kappa2 = 1.0 / smin;
      r_harm = hb * m.partialPivLu().solve(h.transpose() * g);
    }

    Matrix pi = p_exact + r_harm * (Matrix::Identity(na, na) - e * q) + q;

    const Matrix gamma = total.graph_gram(k);
    out.kappa.push_back(operator_norm(pi, gamma, e.transpose() * gamma * e));
    out.kappa_l2.push_back(operator_norm(pi, g, sub.gram(k)));
    out.kappa1.push_back(kappa1);
    out.kappa2.push_back(kappa2);
    out.pi.push_back(std::move(pi));
  }
  return out;
}

double harmonic_gap(const TotalComplex& total, const SubcomplexEmbedding& emb, const CochainProjection& pi,
                    int k) {
  const Matrix h = harmonic_matrix(total, k);
  if (h.cols() == 0) return 0.0;
  const Matrix residual = h - emb.map(k) * (pi.pi.at(k) * h);
  return spectral_norm(total.factor(k).to_orthonormal(residual));
}

double best_approximation_error(const TotalComplex& total, int k, const ChainVector& v,
                                const SubcomplexEmbedding& emb, NormKind norm) {
  if (v.degree != k || v.coeffs.size() != total.dim(k)) {
    throw ConstructionError("chain vector does not belong to degree " + std::to_string(k));
  }
  const GramFactor f(norm == NormKind::graph ? total.graph_gram(k) : total.gram(k));
  const Vector y = f.to_orthonormal(v.coeffs);
  const Matrix q = orthonormal_range(f.to_orthonormal(emb.map(k)));
  return (y - q * (q.transpose() * y)).norm();
}

}  // namespace cechlab
