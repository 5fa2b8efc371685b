#include "casec/binomial.hpp"

#include <cmath>
#include <stdexcept>

namespace casec {

namespace {

void check_domain(std::int64_t k, std::int64_t n, double alpha) {
    if (n < 1) throw std::invalid_argument("binomial bound: n must be >= 1");
    if (k < 0 || k > n) throw std::invalid_argument("binomial bound: k outside [0, n]");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("binomial bound: alpha outside (0, 1)");
}

double log_choose(std::int64_t n, std::int64_t k) {
    return std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) -
           std::lgamma(double(n - k) + 1.0);
}

}  // namespace

double binomial_cdf(std::int64_t k, std::int64_t n, double p) {
    if (k < 0) return 0.0;
    if (k >= n) return 1.0;
    if (p <= 0.0) return 1.0;
    if (p >= 1.0) return 0.0;
    double log_p = std::log(p);
    double log_q = std::log1p(-p);
    double sum = 0.0;
    for (std::int64_t i = 0; i <= k; ++i)
        sum += std::exp(log_choose(n, i) + double(i) * log_p + double(n - i) * log_q);
    return sum > 1.0 ? 1.0 : sum;
}

double binomial_upper_bound(std::int64_t k, std::int64_t n, double alpha) {
    check_domain(k, n, alpha);
    if (k == n) return 1.0;
    // cdf(k; n, p) is strictly decreasing in p on (0,1); bisect for the
    // smallest p with cdf <= alpha.
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 64 && hi - lo > 1e-12; ++iter) {
        double mid = 0.5 * (lo + hi);
        if (binomial_cdf(k, n, mid) <= alpha)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double binomial_lower_bound(std::int64_t k, std::int64_t n, double alpha) {
    check_domain(k, n, alpha);
    if (k == 0) return 0.0;
    // P(X >= k | p) = 1 - cdf(k-1; n, p) is increasing in p; bisect for the
    // largest p with the right tail still <= alpha.
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 64 && hi - lo > 1e-12; ++iter) {
        double mid = 0.5 * (lo + hi);
        if (1.0 - binomial_cdf(k - 1, n, mid) <= alpha)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

}  // namespace casec
