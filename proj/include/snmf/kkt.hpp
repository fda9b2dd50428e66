#ifndef SNMF_KKT_HPP
#define SNMF_KKT_HPP

#include "snmf/admm_state.hpp"
#include "snmf/linalg.hpp"

namespace snmf {

// Residuals of the simplified KKT system of the split problem, with the
// nonnegativity multiplier eliminated as Omega = -(Lambda + Gamma):
//   (X Y^T - A) Y - Lambda = 0      (Y X^T - A) X - Gamma = 0
//   X - L = 0    Y - L = 0    L >= 0    Lambda + Gamma >= 0
//   <Lambda + Gamma, L> = 0
// Components are raw Frobenius norms (or |inner product|); `norm` is their
// maximum divided by max(1, ||A||_F).
struct KktResidual {
  double stationarity_x = 0.0;
  double stationarity_y = 0.0;
  double primal_x = 0.0;
  double primal_y = 0.0;
  double nonneg = 0.0;
  double dual = 0.0;
  double complementarity = 0.0;
  double norm = 0.0;

  double max_component() const;
};

KktResidual kkt_residual(const SparseSymMatrix& a, const AdmmState& state);

}  // namespace snmf

#endif  // SNMF_KKT_HPP
