#pragma once

#include "fubini/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fubini {

namespace detail {

inline BigInt factorial_exact(unsigned long n)
{
    BigInt out;
    mpz_fac_ui(out.get_mpz_t(), n);
    return out;
}

} // namespace detail

/// Dense univariate polynomial over the rationals. Coefficient k multiplies
/// x^k. Trailing zeros are stripped on every construction, so the zero
/// polynomial has no coefficients.
class Polynomial {
public:
    static constexpr int kZeroDegree = -1;

    Polynomial() = default;

    explicit Polynomial(std::vector<Rational> coefficients)
        : coeffs_(std::move(coefficients))
    {
        trim();
    }

    Polynomial(std::initializer_list<Rational> coefficients)
        : coeffs_(coefficients)
    {
        trim();
    }

    static Polynomial constant(const Rational& c) { return Polynomial(std::vector<Rational> {c}); }

    static Polynomial monomial(const Rational& c, std::size_t degree)
    {
        std::vector<Rational> v(degree + 1);
        v[degree] = c;
        return Polynomial(std::move(v));
    }

    /// Degree, or kZeroDegree for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }

    Rational coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Rational(); }
    std::span<const Rational> coefficients() const { return coeffs_; }

    /// Coefficient list padded with zeros to `size` entries (never truncated).
    std::vector<Rational> padded(std::size_t size) const
    {
        std::vector<Rational> out(coeffs_);
        if (out.size() < size) {
            out.resize(size);
        }
        return out;
    }

    Polynomial& operator+=(const Polynomial& other)
    {
        if (other.coeffs_.size() > coeffs_.size()) {
            coeffs_.resize(other.coeffs_.size());
        }
        for (std::size_t i = 0; i < other.coeffs_.size(); ++i) {
            coeffs_[i] += other.coeffs_[i];
        }
        trim();
        return *this;
    }

    Polynomial& operator-=(const Polynomial& other)
    {
        if (other.coeffs_.size() > coeffs_.size()) {
            coeffs_.resize(other.coeffs_.size());
        }
        for (std::size_t i = 0; i < other.coeffs_.size(); ++i) {
            coeffs_[i] -= other.coeffs_[i];
        }
        trim();
        return *this;
    }

    Polynomial& operator*=(const Rational& scalar)
    {
        if (scalar.is_zero()) {
            coeffs_.clear();
            return *this;
        }
        for (auto& c : coeffs_) {
            c *= scalar;
        }
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
    friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
    {
        if (a.is_zero() || b.is_zero()) {
            return {};
        }
        std::vector<Rational> out(a.coeffs_.size() + b.coeffs_.size() - 1);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (a.coeffs_[i].is_zero()) {
                continue;
            }
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
                out[i + j] += a.coeffs_[i] * b.coeffs_[j];
            }
        }
        return Polynomial(std::move(out));
    }

    /// Multiplies by x^k.
    Polynomial shifted(std::size_t k) const
    {
        if (is_zero()) {
            return {};
        }
        std::vector<Rational> out(k);
        out.insert(out.end(), coeffs_.begin(), coeffs_.end());
        return Polynomial(std::move(out));
    }

    /// p(c x).
    Polynomial scale_argument(const Rational& c) const
    {
        std::vector<Rational> out(coeffs_);
        Rational power(1);
        for (auto& v : out) {
            v *= power;
            power *= c;
        }
        return Polynomial(std::move(out));
    }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

    friend std::ostream& operator<<(std::ostream& os, const Polynomial& p)
    {
        os << '[';
        for (std::size_t i = 0; i < p.coeffs_.size(); ++i) {
            os << (i ? ", " : "") << p.coeffs_[i];
        }
        return os << ']';
    }

private:
    void trim()
    {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) {
            coeffs_.pop_back();
        }
    }

    std::vector<Rational> coeffs_;
};

inline Rational poly_eval(const Polynomial& p, const Rational& x)
{
    Rational acc;
    const auto c = p.coefficients();
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc *= x;
        acc += *it;
    }
    return acc;
}

/// r-th formal derivative.
inline Polynomial poly_derivative(const Polynomial& p, unsigned r)
{
    const auto c = p.coefficients();
    if (r == 0) {
        return p;
    }
    if (c.size() <= r) {
        return {};
    }
    std::vector<Rational> out(c.size() - r);
    for (std::size_t k = r; k < c.size(); ++k) {
        // k (k-1) ... (k-r+1)
        BigInt falling(1);
        for (std::size_t j = 0; j < r; ++j) {
            falling *= static_cast<unsigned long>(k - j);
        }
        out[k - r] = c[k] * Rational(falling);
    }
    return Polynomial(std::move(out));
}

/// Exact value of the integral of y^(r-1) p(y) e^(-y) over (0, inf), i.e.
/// sum_k p_k (r+k-1)!.
inline Rational gamma_weight_integral(const Polynomial& p, int r)
{
    if (r < 1) {
        throw std::invalid_argument("gamma_weight_integral requires r >= 1");
    }
    Rational acc;
    const auto c = p.coefficients();
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (!c[k].is_zero()) {
            acc += c[k] * Rational(detail::factorial_exact(static_cast<unsigned long>(r) - 1 + k));
        }
    }
    return acc;
}

} // namespace fubini
