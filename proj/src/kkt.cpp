#include "snmf/kkt.hpp"

#include <algorithm>
#include <cmath>

namespace snmf {

double KktResidual::max_component() const {
  return std::max(
      {stationarity_x, stationarity_y, primal_x, primal_y, nonneg, dual, complementarity});
}

namespace {

// ||(U V^T - A) V - M||_F = ||U (V^T V) - A V - M||_F.
double stationarity(const SparseSymMatrix& a, const DenseMatrix& u, const DenseMatrix& v,
                    const DenseMatrix& multiplier) {
  DenseMatrix r = matmul(u, gram(v));
  r -= sparse_dense_mul(a, v);
  r -= multiplier;
  return frobenius_norm(r);
}

}  // namespace

KktResidual kkt_residual(const SparseSymMatrix& a, const AdmmState& s) {
  const DenseMatrix& l = s.l;
  for (const DenseMatrix* m : {&s.x, &s.y, &s.lambda, &s.gamma}) {
    if (!m->same_shape(l) || l.rows() != a.order()) {
      throw Error(ErrorCode::DimensionMismatch, "kkt_residual: state shapes disagree");
    }
  }

  KktResidual r;
  r.stationarity_x = stationarity(a, s.x, s.y, s.lambda);
  r.stationarity_y = stationarity(a, s.y, s.x, s.gamma);
  r.primal_x = frobenius_distance(s.x, l);
  r.primal_y = frobenius_distance(s.y, l);

  const DenseMatrix dual_sum = s.lambda + s.gamma;
  double neg_l = 0.0;
  double neg_dual = 0.0;
  for (std::size_t i = 0; i < l.size(); ++i) {
    const double lv = l.values()[i];
    const double dv = dual_sum.values()[i];
    if (lv < 0.0) neg_l += lv * lv;
    if (dv < 0.0) neg_dual += dv * dv;
  }
  r.nonneg = std::sqrt(neg_l);
  r.dual = std::sqrt(neg_dual);
  r.complementarity = std::abs(inner(dual_sum, l));
  r.norm = r.max_component() / std::max(1.0, std::sqrt(a.frobenius_norm_squared()));
  return r;
}

}  // namespace snmf
