#pragma once

#include "fubini/combinatorics.hpp"
#include "fubini/polynomial.hpp"
#include "fubini/rational.hpp"
#include "fubini/series.hpp"

#include <stdexcept>
#include <vector>

namespace fubini {

/// The degeneracy parameter. Any rational is allowed, 0 included; every
/// family below is polynomial in it.
struct Lambda {
    Rational value;

    explicit Lambda(Rational v)
        : value(std::move(v))
    {
    }
    Lambda(long num, long den)
        : value(num, den)
    {
    }

    friend bool operator==(const Lambda&, const Lambda&) = default;
};

/// e_lambda^x(t) truncated at t^order; the t^k/k! coefficient is (x)_{k,lambda}.
inline TruncatedSeries degenerate_exp_series(const Rational& x, const Lambda& lambda, int order)
{
    std::vector<Rational> egf;
    Rational falling(1);
    for (int k = 0; k <= order; ++k) {
        egf.push_back(falling);
        falling *= x - lambda.value * Rational(k);
    }
    return TruncatedSeries::from_egf(order, egf);
}

/// phi_{n,lambda}(x) = sum_k {n brace k}_lambda x^k.
inline Polynomial bell_poly_degenerate(long n, const Lambda& lambda)
{
    std::vector<Rational> c;
    for (long k = 0; k <= n; ++k) {
        c.push_back(stirling2_degenerate(n, k, lambda.value));
    }
    return Polynomial(std::move(c));
}

/// F^{(r)}_{n,lambda}(y) = sum_k C(k+r-1, k) {n brace k}_lambda k! y^k.
inline Polynomial fubini_poly_degenerate_order(long n, long r, const Lambda& lambda)
{
    if (r < 1) {
        throw std::invalid_argument("Fubini order r must be >= 1");
    }
    std::vector<Rational> c;
    for (long k = 0; k <= n; ++k) {
        c.push_back(binomial(k + r - 1, k) * stirling2_degenerate(n, k, lambda.value) * factorial(k));
    }
    return Polynomial(std::move(c));
}

inline Polynomial fubini_poly_degenerate(long n, const Lambda& lambda)
{
    std::vector<Rational> c;
    for (long k = 0; k <= n; ++k) {
        c.push_back(stirling2_degenerate(n, k, lambda.value) * factorial(k));
    }
    return Polynomial(std::move(c));
}

/// Classical Fubini polynomial F_n(x) = sum_k S(n,k) k! x^k.
inline Polynomial fubini_poly_classical(long n)
{
    std::vector<Rational> c;
    for (long k = 0; k <= n; ++k) {
        c.push_back(stirling2_classical(n, k) * factorial(k));
    }
    return Polynomial(std::move(c));
}

} // namespace fubini
