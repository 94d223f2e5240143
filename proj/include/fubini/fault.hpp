#pragma once

// Test hooks for mutation-sensitivity runs. A perturbation adds `delta` to a
// single table entry or raw moment as observed through the public lookup
// functions; memoized tables always hold the true values, so installing and
// removing perturbations never corrupts later computations.

#include "fubini/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fubini {

enum class DistributionKind : std::uint8_t { PointMass, Bernoulli, Poisson, Gamma, FiniteDiscrete };

namespace fault {

enum class Table : std::uint8_t { Factorial, Binomial, Stirling1, Stirling2, Lah, RawMoment };

struct Perturbation {
    Table table = Table::Factorial;
    long n = 0;
    long k = 0; // unused for Factorial and RawMoment
    DistributionKind distribution = DistributionKind::PointMass; // RawMoment only
    Rational delta = Rational(1);

    std::string describe() const
    {
        static constexpr const char* kNames[] = {"factorial", "binomial", "stirling1", "stirling2", "lah", "moment"};
        static constexpr const char* kKinds[] = {"point", "bernoulli", "poisson", "gamma", "discrete"};
        std::string out = kNames[static_cast<int>(table)];
        if (table == Table::RawMoment) {
            out += std::string("[") + kKinds[static_cast<int>(distribution)] + "]";
        }
        out += "(" + std::to_string(n);
        if (table != Table::Factorial && table != Table::RawMoment) {
            out += "," + std::to_string(k);
        }
        return out + ")+" + delta.to_string();
    }
};

namespace detail {

inline std::vector<Perturbation>& active()
{
    thread_local std::vector<Perturbation> list;
    return list;
}

} // namespace detail

inline bool any_active() { return !detail::active().empty(); }

/// Sum of the deltas registered for a table entry on the calling thread.
inline Rational offset(Table table, long n, long k = 0)
{
    Rational total;
    for (const auto& p : detail::active()) {
        if (p.table == table && p.n == n && p.k == k) {
            total += p.delta;
        }
    }
    return total;
}

inline Rational moment_offset(DistributionKind kind, long m)
{
    Rational total;
    for (const auto& p : detail::active()) {
        if (p.table == Table::RawMoment && p.distribution == kind && p.n == m) {
            total += p.delta;
        }
    }
    return total;
}

/// Installs perturbations on the calling thread for the lifetime of the guard.
class ScopedPerturbations {
public:
    explicit ScopedPerturbations(std::vector<Perturbation> perturbations)
        : saved_(std::move(detail::active()))
    {
        detail::active() = std::move(perturbations);
    }
    ~ScopedPerturbations() { detail::active() = std::move(saved_); }

    ScopedPerturbations(const ScopedPerturbations&) = delete;
    ScopedPerturbations& operator=(const ScopedPerturbations&) = delete;

private:
    std::vector<Perturbation> saved_;
};

} // namespace fault
} // namespace fubini
