#include "snmf/costmodel.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "snmf/admm.hpp"
#include "snmf/factor_init.hpp"

namespace snmf {

CostEstimate flops_admm(std::size_t n, std::size_t k) {
  if (n < 2 || k < 1 || k >= n) {
    throw Error(ErrorCode::InvalidK, "cost model needs n >= 2 and 1 <= k < n");
  }
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  const double lg = std::log2(nd);

  CostEstimate c;
  c.n = n;
  c.k = k;
  c.q = static_cast<std::size_t>(std::bit_width(n));
  c.flops_admm =
      (2.0 / 3.0) * kd * kd * kd + 6.0 * nd * kd * kd + 4.0 * nd * lg * kd + 22.0 * nd * kd;
  c.flops_per_update_split =
      (1.0 / 3.0) * kd * kd * kd + 3.0 * nd * kd * kd + 2.0 * nd * lg * kd + 5.0 * nd * kd;
  c.approx_flops = 2.0 * nd * kd * (3.0 * kd + 2.0 * lg);
  return c;
}

double time_admm_iteration(const SparseSymMatrix& a, std::size_t k, std::size_t iterations,
                           std::size_t repeats, std::uint64_t seed, double rho) {
  if (iterations < 1 || repeats < 1) {
    throw Error(ErrorCode::InvalidConfig, "timing needs at least one iteration and repeat");
  }
  const AdmmState start = AdmmState::from_init(random_factor(a, k, seed));
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < repeats; ++r) {
    AdmmState state = start;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t it = 0; it < iterations; ++it) state = admm_step(a, std::move(state), rho);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    best = std::min(best, secs / static_cast<double>(iterations));
  }
  return best;
}

}  // namespace snmf
