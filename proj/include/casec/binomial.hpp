#pragma once

#include <cstdint>

namespace casec {

// P(X <= k) for X ~ Binomial(n, p), evaluated by direct summation of
// log-binomial terms. Exact up to double rounding; no approximations.
double binomial_cdf(std::int64_t k, std::int64_t n, double p);

// One-sided Clopper-Pearson bounds, accurate to 1e-9 by bisection on the
// exact CDF.
//
// Upper: smallest p with P(X <= k | n, p) <= alpha; by convention 1.0 when
// k == n (the left tail never falls below alpha).
// Lower: largest p with P(X >= k | n, p) <= alpha; 0.0 when k == 0.
//
// Preconditions: 0 <= k <= n, n >= 1, alpha in (0,1). Violations throw
// std::invalid_argument.
double binomial_upper_bound(std::int64_t k, std::int64_t n, double alpha);
double binomial_lower_bound(std::int64_t k, std::int64_t n, double alpha);

}  // namespace casec
