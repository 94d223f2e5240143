#pragma once

#include "fubini/fault.hpp"
#include "fubini/polynomial.hpp"
#include "fubini/rational.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fubini {

/// Memo tables for factorials and the signed Stirling numbers of both kinds.
/// Rows are appended on demand and never modified afterwards. Lookups return
/// copies: a reference would dangle once a later lookup grows the table. One instance
/// lives per thread (see comb_cache()), so no locking is needed.
class CombCache {
public:
    BigInt factorial(std::size_t n)
    {
        while (factorials_.size() <= n) {
            const auto i = factorials_.size();
            factorials_.push_back(i == 0 ? BigInt(1) : factorials_.back() * static_cast<unsigned long>(i));
        }
        return factorials_[n];
    }

    /// Signed Stirling numbers of the first kind: (x)_n = sum_k s(n,k) x^k.
    BigInt stirling1(std::size_t n, std::size_t k)
    {
        grow(stirling1_, n, [](const std::vector<BigInt>& prev, std::size_t row, std::size_t j) {
            // s(row, j) = s(row-1, j-1) - (row-1) s(row-1, j)
            BigInt v = j > 0 ? prev[j - 1] : BigInt(0);
            if (j < prev.size()) {
                v -= BigInt(static_cast<unsigned long>(row - 1)) * prev[j];
            }
            return v;
        });
        return k <= n ? stirling1_[n][k] : zero_;
    }

    /// Stirling numbers of the second kind: x^n = sum_k S(n,k) (x)_k.
    BigInt stirling2(std::size_t n, std::size_t k)
    {
        grow(stirling2_, n, [](const std::vector<BigInt>& prev, std::size_t, std::size_t j) {
            // S(row, j) = j S(row-1, j) + S(row-1, j-1)
            BigInt v = j > 0 ? prev[j - 1] : BigInt(0);
            if (j < prev.size()) {
                v += BigInt(static_cast<unsigned long>(j)) * prev[j];
            }
            return v;
        });
        return k <= n ? stirling2_[n][k] : zero_;
    }

    std::size_t cached_rows() const { return std::max(stirling1_.size(), stirling2_.size()); }

private:
    using Rule = std::function<BigInt(const std::vector<BigInt>&, std::size_t, std::size_t)>;

    static void grow(std::vector<std::vector<BigInt>>& table, std::size_t n, const Rule& rule)
    {
        if (table.empty()) {
            table.push_back({BigInt(1)});
        }
        while (table.size() <= n) {
            const auto row = table.size();
            std::vector<BigInt> next(row + 1);
            for (std::size_t j = 0; j <= row; ++j) {
                next[j] = rule(table.back(), row, j);
            }
            table.push_back(std::move(next));
        }
    }

    std::vector<BigInt> factorials_;
    std::vector<std::vector<BigInt>> stirling1_;
    std::vector<std::vector<BigInt>> stirling2_;
    BigInt zero_ {0};
};

inline CombCache& comb_cache()
{
    thread_local CombCache cache;
    return cache;
}

namespace detail {

inline void require_nonnegative(long n, long k, const char* what)
{
    if (n < 0 || k < 0) {
        throw std::invalid_argument(std::string(what) + " requires nonnegative indices");
    }
}

inline Rational with_offset(BigInt value, fault::Table table, long n, long k = 0)
{
    Rational out(value);
    if (fault::any_active()) {
        out += fault::offset(table, n, k);
    }
    return out;
}

inline BigInt binomial_exact(long n, long k)
{
    if (k < 0) {
        return 0;
    }
    BigInt out;
    mpz_bin_ui(out.get_mpz_t(), BigInt(n).get_mpz_t(), static_cast<unsigned long>(k));
    return out;
}

} // namespace detail

inline Rational factorial(long n)
{
    if (n < 0) {
        throw std::invalid_argument("factorial of a negative number");
    }
    return detail::with_offset(comb_cache().factorial(static_cast<std::size_t>(n)), fault::Table::Factorial, n);
}

/// C(n,k) = n(n-1)...(n-k+1)/k! for k >= 0, any integer n (so C(-3,2) = 6).
/// Zero when k < 0, and when 0 <= n < k.
inline Rational binomial(long n, long k)
{
    return detail::with_offset(detail::binomial_exact(n, k), fault::Table::Binomial, n, k);
}

/// Signed Stirling number of the first kind; zero for k > n.
inline Rational stirling1(long n, long k)
{
    detail::require_nonnegative(n, k, "stirling1");
    return detail::with_offset(comb_cache().stirling1(static_cast<std::size_t>(n), static_cast<std::size_t>(k)),
                               fault::Table::Stirling1, n, k);
}

inline Rational stirling2_classical(long n, long k)
{
    detail::require_nonnegative(n, k, "stirling2");
    return detail::with_offset(comb_cache().stirling2(static_cast<std::size_t>(n), static_cast<std::size_t>(k)),
                               fault::Table::Stirling2, n, k);
}

/// Lah number L(n,k) = n!/k! C(n-1,k-1); L(0,0) = 1 and L(n,0) = 0 for n >= 1.
inline Rational lah(long n, long k)
{
    detail::require_nonnegative(n, k, "lah");
    BigInt value(0);
    if (n == 0 && k == 0) {
        value = 1;
    } else if (k >= 1 && k <= n) {
        auto& cache = comb_cache();
        value = cache.factorial(static_cast<std::size_t>(n)) / cache.factorial(static_cast<std::size_t>(k))
            * detail::binomial_exact(n - 1, k - 1);
    }
    return detail::with_offset(value, fault::Table::Lah, n, k);
}

/// Rising factorial x(x+1)...(x+n-1).
inline Rational rising_factorial(const Rational& x, long n)
{
    Rational out(1);
    for (long j = 0; j < n; ++j) {
        out *= x + Rational(j);
    }
    return out;
}

/// (y)_{n,lambda} = y(y - lambda)...(y - (n-1)lambda) expanded in powers of y.
inline Polynomial falling_factorial_coeffs(long n, const Rational& lambda)
{
    if (n < 0) {
        throw std::invalid_argument("falling_factorial_coeffs requires n >= 0");
    }
    std::vector<Rational> c {Rational(1)};
    for (long j = 0; j < n; ++j) {
        const Rational root = lambda * Rational(j);
        std::vector<Rational> next(c.size() + 1);
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] -= root * c[i];
        }
        c = std::move(next);
    }
    return Polynomial(std::move(c));
}

/// Degenerate Stirling number of the second kind, via
/// sum_m lambda^(n-m) s(n,m) S(m,k).
inline Rational stirling2_degenerate(long n, long k, const Rational& lambda)
{
    detail::require_nonnegative(n, k, "stirling2_degenerate");
    if (k > n) {
        return {};
    }
    Rational acc;
    Rational lambda_power(1);
    for (long m = n; m >= k; --m) {
        acc += lambda_power * stirling1(n, m) * stirling2_classical(m, k);
        lambda_power *= lambda;
    }
    return acc;
}

/// Partial Bell polynomial B_{n,k}(x_1, ..., x_{n-k+1}) by direct enumeration
/// of (l_1, l_2, ...) with sum l_i = k and sum i l_i = n. `x[i-1]` holds x_i.
/// B_{0,0} = 1; zero when k > n.
inline Rational partial_bell(long n, long k, std::span<const Rational> x)
{
    detail::require_nonnegative(n, k, "partial_bell");
    if (k > n) {
        return {};
    }
    if (n == 0) {
        return Rational(1);
    }
    const long width = n - k + 1;
    if (static_cast<long>(x.size()) < width) {
        throw std::invalid_argument("partial_bell needs " + std::to_string(width) + " arguments, got "
                                    + std::to_string(x.size()));
    }

    // term(i) = x_i / i!
    std::vector<Rational> scaled(static_cast<std::size_t>(width) + 1);
    for (long i = 1; i <= width; ++i) {
        scaled[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i - 1)] / factorial(i);
    }

    Rational total;
    // Assign multiplicities from the largest part size downwards.
    std::function<void(long, long, long, const Rational&)> visit =
        [&](long part, long parts_left, long weight_left, const Rational& product) {
            if (part == 0) {
                if (parts_left == 0 && weight_left == 0) {
                    total += product;
                }
                return;
            }
            // Remaining parts of size < part can carry at most (part-1) each.
            for (long l = 0; l <= parts_left && l * part <= weight_left; ++l) {
                const long rest_parts = parts_left - l;
                const long rest_weight = weight_left - l * part;
                if (rest_weight < rest_parts || rest_weight > rest_parts * (part - 1)) {
                    continue;
                }
                Rational next = product;
                if (l > 0) {
                    next *= scaled[static_cast<std::size_t>(part)].pow(static_cast<unsigned>(l)) / factorial(l);
                }
                visit(part - 1, rest_parts, rest_weight, next);
            }
        };
    visit(width, k, n, factorial(n));
    return total;
}

} // namespace fubini
