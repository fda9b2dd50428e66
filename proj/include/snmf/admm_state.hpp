#ifndef SNMF_ADMM_STATE_HPP
#define SNMF_ADMM_STATE_HPP

#include <cstddef>

#include "snmf/linalg.hpp"

namespace snmf {

// Full iterate of ADMM on the double split
//   minimize 1/2 ||A - X Y^T||_F^2  s.t.  L >= 0, L = X, L = Y.
struct AdmmState {
  DenseMatrix x;
  DenseMatrix y;
  DenseMatrix l;       // always elementwise >= 0
  DenseMatrix lambda;  // multiplier for L = X
  DenseMatrix gamma;   // multiplier for L = Y
  std::size_t iteration = 0;

  // X = Y = L = init, zero duals.
  static AdmmState from_init(const DenseMatrix& init);
};

}  // namespace snmf

#endif  // SNMF_ADMM_STATE_HPP
