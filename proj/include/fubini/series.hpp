#pragma once

#include "fubini/polynomial.hpp"
#include "fubini/rational.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace fubini {

/// Formal power series in t truncated after t^order. Coefficients are kept
/// in the plain t^k basis; egf_coeff() and from_egf() convert to and from
/// the exponential convention (coefficient of t^k/k!).
class TruncatedSeries {
public:
    explicit TruncatedSeries(int order)
        : coeffs_(check_order(order) + 1)
    {
    }

    TruncatedSeries(int order, std::span<const Rational> coefficients)
        : TruncatedSeries(order)
    {
        for (std::size_t k = 0; k < coefficients.size() && k < coeffs_.size(); ++k) {
            coeffs_[k] = coefficients[k];
        }
    }

    static TruncatedSeries one(int order)
    {
        TruncatedSeries s(order);
        s.coeffs_[0] = Rational(1);
        return s;
    }

    /// Builds a series from values v_k that multiply t^k/k!.
    static TruncatedSeries from_egf(int order, std::span<const Rational> egf)
    {
        TruncatedSeries s(order);
        for (std::size_t k = 0; k < egf.size() && k < s.coeffs_.size(); ++k) {
            s.coeffs_[k] = egf[k] / Rational(detail::factorial_exact(k));
        }
        return s;
    }

    int order() const { return static_cast<int>(coeffs_.size()) - 1; }
    const Rational& coeff(std::size_t k) const { return coeffs_.at(k); }
    Rational& coeff(std::size_t k) { return coeffs_.at(k); }
    std::span<const Rational> coefficients() const { return coeffs_; }

    /// Value multiplying t^k/k!.
    Rational egf_coeff(std::size_t k) const { return coeffs_.at(k) * Rational(detail::factorial_exact(k)); }

    std::vector<Rational> egf_coefficients() const
    {
        std::vector<Rational> out;
        out.reserve(coeffs_.size());
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            out.push_back(egf_coeff(k));
        }
        return out;
    }

    TruncatedSeries& operator+=(const TruncatedSeries& other)
    {
        require_same_order(other);
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            coeffs_[k] += other.coeffs_[k];
        }
        return *this;
    }
    TruncatedSeries& operator-=(const TruncatedSeries& other)
    {
        require_same_order(other);
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            coeffs_[k] -= other.coeffs_[k];
        }
        return *this;
    }
    TruncatedSeries& operator*=(const Rational& scalar)
    {
        for (auto& c : coeffs_) {
            c *= scalar;
        }
        return *this;
    }

    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
    friend TruncatedSeries operator*(TruncatedSeries a, const Rational& s) { return a *= s; }
    friend TruncatedSeries operator*(const Rational& s, TruncatedSeries a) { return a *= s; }

    friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;

    void require_same_order(const TruncatedSeries& other) const
    {
        if (other.coeffs_.size() != coeffs_.size()) {
            throw std::invalid_argument("truncated series order mismatch");
        }
    }

private:
    static std::size_t check_order(int order)
    {
        if (order < 0) {
            throw std::invalid_argument("series order must be nonnegative");
        }
        return static_cast<std::size_t>(order);
    }

    std::vector<Rational> coeffs_;
};

/// Cauchy product, truncated at the common order.
inline TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b)
{
    a.require_same_order(b);
    const auto n = static_cast<std::size_t>(a.order());
    TruncatedSeries out(a.order());
    for (std::size_t i = 0; i <= n; ++i) {
        if (a.coeff(i).is_zero()) {
            continue;
        }
        for (std::size_t j = 0; i + j <= n; ++j) {
            out.coeff(i + j) += a.coeff(i) * b.coeff(j);
        }
    }
    return out;
}

inline TruncatedSeries series_reciprocal(const TruncatedSeries& a)
{
    if (a.coeff(0).is_zero()) {
        throw std::domain_error("series reciprocal needs a nonzero constant term");
    }
    const auto n = static_cast<std::size_t>(a.order());
    const Rational inv0 = a.coeff(0).reciprocal();
    TruncatedSeries out(a.order());
    out.coeff(0) = inv0;
    for (std::size_t k = 1; k <= n; ++k) {
        Rational acc;
        for (std::size_t i = 1; i <= k; ++i) {
            acc += a.coeff(i) * out.coeff(k - i);
        }
        out.coeff(k) = -acc * inv0;
    }
    return out;
}

/// exp(a) for a with zero constant term, from k b_k = sum_{i=1..k} i a_i b_{k-i}.
inline TruncatedSeries series_exp(const TruncatedSeries& a)
{
    if (!a.coeff(0).is_zero()) {
        throw std::domain_error("series exp needs a zero constant term");
    }
    const auto n = static_cast<std::size_t>(a.order());
    TruncatedSeries out(a.order());
    out.coeff(0) = Rational(1);
    for (std::size_t k = 1; k <= n; ++k) {
        Rational acc;
        for (std::size_t i = 1; i <= k; ++i) {
            acc += Rational(static_cast<long>(i)) * a.coeff(i) * out.coeff(k - i);
        }
        out.coeff(k) = acc / Rational(static_cast<long>(k));
    }
    return out;
}

inline TruncatedSeries series_pow(const TruncatedSeries& a, unsigned exponent)
{
    TruncatedSeries result = TruncatedSeries::one(a.order());
    TruncatedSeries base = a;
    while (exponent > 0) {
        if (exponent & 1U) {
            result = series_mul(result, base);
        }
        exponent >>= 1U;
        if (exponent > 0) {
            base = series_mul(base, base);
        }
    }
    return result;
}

} // namespace fubini
