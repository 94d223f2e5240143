#pragma once

#include "fubini/degenerate.hpp"
#include "fubini/distribution.hpp"
#include "fubini/probabilistic.hpp"
#include "fubini/rational.hpp"

#include <cmath>
#include <cstdint>
#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace fubini::mc {

/// Counter-based generator: output i is the SplitMix64 finalizer applied to
/// key + i * golden-ratio increment, so streams are reproducible across
/// platforms and independent of call interleaving.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed)
        : key_(mix(seed ^ 0x6a09e667f3bcc909ULL))
    {
    }

    std::uint64_t next() { return mix(key_ + (counter_++) * 0x9e3779b97f4a7c15ULL); }

    /// Uniform double in the open interval (0, 1).
    double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

    /// Standard normal via the Marsaglia polar method.
    double normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u;
        double v;
        double s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double factor = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * factor;
        has_spare_ = true;
        return u * factor;
    }

    std::uint64_t counter() const { return counter_; }

private:
    static std::uint64_t mix(std::uint64_t z)
    {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Poisson by sequential-search inversion; rates above 10 are split into
/// independent pieces of rate <= 10 and summed.
inline double sample_poisson(double alpha, CounterRng& rng)
{
    double total = 0.0;
    while (alpha > 0.0) {
        const double piece = std::min(alpha, 10.0);
        alpha -= piece;
        const double u = rng.uniform();
        double p = std::exp(-piece);
        double cdf = p;
        long x = 0;
        while (u > cdf && x < 1000) {
            ++x;
            p *= piece / static_cast<double>(x);
            cdf += p;
        }
        total += static_cast<double>(x);
    }
    return total;
}

/// Gamma(shape, rate): Marsaglia-Tsang squeeze for shape >= 1, and
/// Gamma(shape+1) * U^(1/shape) for shape < 1.
inline double sample_gamma(double shape, double rate, CounterRng& rng)
{
    if (shape < 1.0) {
        const double boosted = sample_gamma(shape + 1.0, 1.0, rng);
        return boosted * std::pow(rng.uniform(), 1.0 / shape) / rate;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
        double x;
        double v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) {
            return d * v / rate;
        }
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
            return d * v / rate;
        }
    }
}

/// Draws from a Distribution in double precision.
class Sampler {
public:
    explicit Sampler(const Distribution& dist)
        : dist_(dist)
    {
        if (const auto* d = dist.as<FiniteDiscrete>()) {
            double acc = 0.0;
            for (const auto& [value, weight] : d->atoms) {
                acc += weight.to_double();
                values_.push_back(value.to_double());
                cdf_.push_back(acc);
            }
            cdf_.back() = 1.0;
        }
    }

    double operator()(CounterRng& rng) const
    {
        switch (dist_.kind()) {
        case DistributionKind::PointMass:
            return dist_.as<PointMass>()->value.to_double();
        case DistributionKind::Bernoulli:
            return rng.uniform() < dist_.as<Bernoulli>()->p.to_double() ? 1.0 : 0.0;
        case DistributionKind::Poisson:
            return sample_poisson(dist_.as<Poisson>()->alpha.to_double(), rng);
        case DistributionKind::Gamma: {
            const auto* g = dist_.as<GammaDist>();
            return sample_gamma(g->alpha.to_double(), g->beta.to_double(), rng);
        }
        case DistributionKind::FiniteDiscrete: {
            const double u = rng.uniform();
            for (std::size_t i = 0; i < cdf_.size(); ++i) {
                if (u < cdf_[i]) {
                    return values_[i];
                }
            }
            return values_.back();
        }
        }
        throw std::logic_error("unsupported distribution");
    }

private:
    Distribution dist_;
    std::vector<double> values_;
    std::vector<double> cdf_;
};

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    Rational exact;
    /// (estimate - exact) / stderr; zero when stderr is zero and the
    /// estimate equals the exact value, infinite when they differ.
    double z_score = 0.0;
    long samples = 0;
    std::uint64_t seed = 0;
};

inline constexpr long kMinSamples = 1000;
inline constexpr double kZThreshold = 5.0;

/// Estimates E[(S_k)_{n,lambda}] from `samples` draws of S_k and compares
/// against the exact value.
inline McEstimate estimate_sum_degenerate_moment(const Distribution& dist, long k, long n, const Lambda& lambda,
                                                 long samples, std::uint64_t seed)
{
    if (samples < kMinSamples) {
        throw std::invalid_argument("Monte Carlo needs at least " + std::to_string(kMinSamples) + " samples");
    }
    if (k < 0 || n < 0) {
        throw std::invalid_argument("k and n must be nonnegative");
    }
    const Sampler sampler(dist);
    CounterRng rng(seed);
    const double step = lambda.value.to_double();

    // Welford running mean and variance.
    double mean = 0.0;
    double m2 = 0.0;
    for (long s = 1; s <= samples; ++s) {
        double sum = 0.0;
        for (long i = 0; i < k; ++i) {
            sum += sampler(rng);
        }
        double value = 1.0;
        for (long j = 0; j < n; ++j) {
            value *= sum - static_cast<double>(j) * step;
        }
        const double delta = value - mean;
        mean += delta / static_cast<double>(s);
        m2 += delta * (value - mean);
    }

    McEstimate out;
    out.samples = samples;
    out.seed = seed;
    out.estimate = mean;
    out.exact = sum_degenerate_moment(dist, k, n, lambda);
    const double variance = m2 / static_cast<double>(samples - 1);
    out.std_error = std::sqrt(variance / static_cast<double>(samples));
    const double gap = mean - out.exact.to_double();
    if (out.std_error > 0.0) {
        out.z_score = gap / out.std_error;
    } else {
        const double tolerance = 1e-12 * std::max(1.0, std::abs(out.exact.to_double()));
        out.z_score = std::abs(gap) <= tolerance ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), gap);
    }
    return out;
}

} // namespace fubini::mc
