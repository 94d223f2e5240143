#pragma once

#include "fubini/combinatorics.hpp"
#include "fubini/degenerate.hpp"
#include "fubini/distribution.hpp"
#include "fubini/polynomial.hpp"
#include "fubini/rational.hpp"
#include "fubini/series.hpp"

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fubini {

/// Raw moments E[S_k^m] of S_k = Y_1 + ... + Y_k for iid copies of Y, built
/// row by row from E[S_k^m] = sum_j C(m,j) E[S_{k-1}^{m-j}] E[Y^j], with S_0 = 0.
class SumMomentTable {
public:
    explicit SumMomentTable(Distribution dist)
        : dist_(std::move(dist))
    {
    }

    const Distribution& distribution() const { return dist_; }

    const Rational& raw_moment(long m)
    {
        require(m >= 0, "moment order must be nonnegative");
        while (static_cast<long>(moments_.size()) <= m) {
            moments_.push_back(dist_.raw_moment(static_cast<long>(moments_.size())));
        }
        return moments_[static_cast<std::size_t>(m)];
    }

    const Rational& get(long k, long m)
    {
        require(k >= 0 && m >= 0, "sum moments need k, m >= 0");
        if (m >= width_) {
            widen(std::max<long>(m + 1, 2 * width_));
        }
        while (static_cast<long>(rows_.size()) <= k) {
            append_row();
        }
        return rows_[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)];
    }

private:
    static void require(bool ok, const char* message)
    {
        if (!ok) {
            throw std::invalid_argument(message);
        }
    }

    void widen(long width)
    {
        const auto rows = rows_.size();
        width_ = width;
        rows_.clear();
        for (std::size_t k = 0; k < rows; ++k) {
            append_row();
        }
    }

    void append_row()
    {
        const auto width = static_cast<std::size_t>(width_);
        std::vector<Rational> row(width);
        if (rows_.empty()) {
            row[0] = Rational(1);
        } else {
            const auto& prev = rows_.back();
            for (std::size_t m = 0; m < width; ++m) {
                Rational acc;
                for (std::size_t j = 0; j <= m; ++j) {
                    if (prev[m - j].is_zero()) {
                        continue;
                    }
                    acc += binomial(static_cast<long>(m), static_cast<long>(j)) * prev[m - j]
                        * raw_moment(static_cast<long>(j));
                }
                row[m] = std::move(acc);
            }
        }
        rows_.push_back(std::move(row));
    }

    Distribution dist_;
    std::vector<Rational> moments_;
    std::vector<std::vector<Rational>> rows_;
    long width_ = 8;
};

/// The probabilistic layer for one (Y, lambda) pair, with memoized
/// intermediate tables. Not thread-safe; use one instance per thread.
class ProbabilisticModel {
public:
    ProbabilisticModel(Distribution dist, Lambda lambda)
        : sums_(std::move(dist))
        , lambda_(std::move(lambda))
    {
    }

    const Distribution& distribution() const { return sums_.distribution(); }
    const Lambda& lambda() const { return lambda_; }

    Rational raw_moment(long m) { return sums_.raw_moment(m); }

    /// E[(Y)_{n,lambda}].
    Rational degenerate_moment(long n)
    {
        const Polynomial& c = falling(n);
        Rational acc;
        for (std::size_t i = 0; i < c.coefficients().size(); ++i) {
            acc += c.coefficients()[i] * sums_.raw_moment(static_cast<long>(i));
        }
        return acc;
    }

    Rational sum_raw_moment(long k, long m) { return sums_.get(k, m); }

    /// E[(S_k)_{n,lambda}].
    const Rational& sum_degenerate_moment(long k, long n)
    {
        const auto key = std::make_pair(k, n);
        if (auto it = sum_degenerate_.find(key); it != sum_degenerate_.end()) {
            return it->second;
        }
        const Polynomial& c = falling(n);
        Rational acc;
        for (std::size_t i = 0; i < c.coefficients().size(); ++i) {
            acc += c.coefficients()[i] * sums_.get(k, static_cast<long>(i));
        }
        return sum_degenerate_.emplace(key, std::move(acc)).first->second;
    }

    /// {n brace k}_{Y,lambda} as the alternating sum
    /// (1/k!) sum_j C(k,j) (-1)^{k-j} E[(S_j)_{n,lambda}]; zero for k > n.
    const Rational& stirling2(long n, long k)
    {
        if (n < 0 || k < 0) {
            throw std::invalid_argument("probabilistic Stirling numbers need n, k >= 0");
        }
        const auto key = std::make_pair(n, k);
        if (auto it = stirling_.find(key); it != stirling_.end()) {
            return it->second;
        }
        Rational acc;
        if (k <= n) {
            for (long j = 0; j <= k; ++j) {
                Rational term = binomial(k, j) * sum_degenerate_moment(j, n);
                if ((k - j) % 2 == 1) {
                    acc -= term;
                } else {
                    acc += term;
                }
            }
            acc /= factorial(k);
        }
        return stirling_.emplace(key, std::move(acc)).first->second;
    }

    /// phi^Y_{n,lambda}(x) = sum_k {n brace k}_{Y,lambda} x^k.
    Polynomial bell_poly(long n)
    {
        std::vector<Rational> c;
        for (long k = 0; k <= n; ++k) {
            c.push_back(stirling2(n, k));
        }
        return Polynomial(std::move(c));
    }

    /// F^Y_{n,lambda}(x) = sum_k {n brace k}_{Y,lambda} k! x^k.
    const Polynomial& fubini_poly(long n) { return fubini_poly_order(n, 1); }

    /// F^{(r,Y)}_{n,lambda}(x) = sum_i C(r+i-1, i) i! {n brace i}_{Y,lambda} x^i.
    const Polynomial& fubini_poly_order(long n, long r)
    {
        if (r < 1) {
            throw std::invalid_argument("Fubini order r must be >= 1");
        }
        if (n < 0) {
            throw std::invalid_argument("n must be >= 0");
        }
        const auto key = std::make_pair(n, r);
        if (auto it = fubini_.find(key); it != fubini_.end()) {
            return it->second;
        }
        std::vector<Rational> c;
        for (long i = 0; i <= n; ++i) {
            c.push_back(binomial(r + i - 1, i) * factorial(i) * stirling2(n, i));
        }
        return fubini_.emplace(key, Polynomial(std::move(c))).first->second;
    }

    /// E[e_lambda^Y(t)] to order N; the t^n/n! coefficient is E[(Y)_{n,lambda}].
    TruncatedSeries mgf_series(int order)
    {
        std::vector<Rational> egf;
        for (int n = 0; n <= order; ++n) {
            egf.push_back(degenerate_moment(n));
        }
        return TruncatedSeries::from_egf(order, egf);
    }

private:
    const Polynomial& falling(long n)
    {
        if (n < 0) {
            throw std::invalid_argument("n must be >= 0");
        }
        while (static_cast<long>(falling_.size()) <= n) {
            falling_.push_back(falling_factorial_coeffs(static_cast<long>(falling_.size()), lambda_.value));
        }
        return falling_[static_cast<std::size_t>(n)];
    }

    SumMomentTable sums_;
    Lambda lambda_;
    std::vector<Polynomial> falling_;
    std::map<std::pair<long, long>, Rational> sum_degenerate_;
    std::map<std::pair<long, long>, Rational> stirling_;
    std::map<std::pair<long, long>, Polynomial> fubini_;
};

// One-shot entry points. Each builds a fresh model; reuse a
// ProbabilisticModel when evaluating many values for the same (Y, lambda).

inline Rational raw_moment(const Distribution& dist, long m) { return dist.raw_moment(m); }

inline Rational degenerate_moment(const Distribution& dist, long n, const Lambda& lambda)
{
    return ProbabilisticModel(dist, lambda).degenerate_moment(n);
}

inline Rational sum_raw_moment(const Distribution& dist, long k, long m) { return SumMomentTable(dist).get(k, m); }

inline Rational sum_degenerate_moment(const Distribution& dist, long k, long n, const Lambda& lambda)
{
    return ProbabilisticModel(dist, lambda).sum_degenerate_moment(k, n);
}

inline Rational prob_stirling2(const Distribution& dist, long n, long k, const Lambda& lambda)
{
    return ProbabilisticModel(dist, lambda).stirling2(n, k);
}

inline Polynomial prob_bell_poly(const Distribution& dist, long n, const Lambda& lambda)
{
    return ProbabilisticModel(dist, lambda).bell_poly(n);
}

inline Polynomial prob_fubini_poly(const Distribution& dist, long n, const Lambda& lambda)
{
    return ProbabilisticModel(dist, lambda).fubini_poly(n);
}

inline Polynomial prob_fubini_poly_order(const Distribution& dist, long n, long r, const Lambda& lambda)
{
    return ProbabilisticModel(dist, lambda).fubini_poly_order(n, r);
}

inline TruncatedSeries mgf_degenerate_series(const Distribution& dist, const Lambda& lambda, int order)
{
    return ProbabilisticModel(dist, lambda).mgf_series(order);
}

} // namespace fubini
