#pragma once

#include "fubini/combinatorics.hpp"
#include "fubini/fault.hpp"
#include "fubini/rational.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace fubini {

struct PointMass {
    Rational value;
};
struct Bernoulli {
    Rational p;
};
struct Poisson {
    Rational alpha;
};
/// Shape alpha, rate beta: density beta e^{-beta y} (beta y)^{alpha-1} / Gamma(alpha).
struct GammaDist {
    Rational alpha;
    Rational beta;
};
struct FiniteDiscrete {
    std::vector<std::pair<Rational, Rational>> atoms; // (value, weight)
};

/// A random variable described by its exact raw moments. Parameters are
/// validated on construction.
class Distribution {
public:
    using Model = std::variant<PointMass, Bernoulli, Poisson, GammaDist, FiniteDiscrete>;

    explicit Distribution(Model model)
        : model_(std::move(model))
    {
        validate();
    }

    static Distribution point(Rational c) { return Distribution(PointMass {std::move(c)}); }
    static Distribution bernoulli(Rational p) { return Distribution(Bernoulli {std::move(p)}); }
    static Distribution poisson(Rational alpha) { return Distribution(Poisson {std::move(alpha)}); }
    static Distribution gamma(Rational alpha, Rational beta)
    {
        return Distribution(GammaDist {std::move(alpha), std::move(beta)});
    }
    static Distribution discrete(std::vector<std::pair<Rational, Rational>> atoms)
    {
        return Distribution(FiniteDiscrete {std::move(atoms)});
    }

    /// Parses `point:c`, `bernoulli:p`, `poisson:a`, `gamma:a,b` or
    /// `discrete:v1=w1,v2=w2,...`. Throws std::invalid_argument naming the
    /// bad token, or the violated parameter constraint.
    static Distribution parse(std::string_view spec)
    {
        const auto colon = spec.find(':');
        if (colon == std::string_view::npos) {
            throw std::invalid_argument("distribution spec '" + std::string(spec) + "' lacks ':'");
        }
        const std::string_view family = spec.substr(0, colon);
        const std::string_view args = spec.substr(colon + 1);
        const auto fields = split(args, ',');

        auto expect_fields = [&](std::size_t count) {
            if (fields.size() != count) {
                throw std::invalid_argument("distribution '" + std::string(family) + "' expects " + std::to_string(count)
                                            + " parameter(s), got '" + std::string(args) + "'");
            }
        };

        if (family == "point") {
            expect_fields(1);
            return point(Rational::parse(fields[0]));
        }
        if (family == "bernoulli") {
            expect_fields(1);
            return bernoulli(Rational::parse(fields[0]));
        }
        if (family == "poisson") {
            expect_fields(1);
            return poisson(Rational::parse(fields[0]));
        }
        if (family == "gamma") {
            expect_fields(2);
            return gamma(Rational::parse(fields[0]), Rational::parse(fields[1]));
        }
        if (family == "discrete") {
            std::vector<std::pair<Rational, Rational>> atoms;
            for (auto field : fields) {
                const auto eq = field.find('=');
                if (eq == std::string_view::npos) {
                    throw std::invalid_argument("discrete atom '" + std::string(field) + "' is not value=weight");
                }
                atoms.emplace_back(Rational::parse(field.substr(0, eq)), Rational::parse(field.substr(eq + 1)));
            }
            return discrete(std::move(atoms));
        }
        throw std::invalid_argument("unknown distribution family '" + std::string(family) + "'");
    }

    const Model& model() const { return model_; }

    DistributionKind kind() const { return static_cast<DistributionKind>(model_.index()); }

    template <typename T>
    const T* as() const
    {
        return std::get_if<T>(&model_);
    }

    /// Canonical spec string; parse(spec()) reproduces the distribution.
    std::string spec() const
    {
        return std::visit(
            [](const auto& m) -> std::string {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, PointMass>) {
                    return "point:" + m.value.to_string();
                } else if constexpr (std::is_same_v<T, Bernoulli>) {
                    return "bernoulli:" + m.p.to_string();
                } else if constexpr (std::is_same_v<T, Poisson>) {
                    return "poisson:" + m.alpha.to_string();
                } else if constexpr (std::is_same_v<T, GammaDist>) {
                    return "gamma:" + m.alpha.to_string() + "," + m.beta.to_string();
                } else {
                    std::string out = "discrete:";
                    for (std::size_t i = 0; i < m.atoms.size(); ++i) {
                        out += (i ? "," : "") + m.atoms[i].first.to_string() + "=" + m.atoms[i].second.to_string();
                    }
                    return out;
                }
            },
            model_);
    }

    /// E[Y^m].
    Rational raw_moment(long m) const
    {
        if (m < 0) {
            throw std::invalid_argument("moment order must be nonnegative");
        }
        Rational value = std::visit([m](const auto& d) { return moment_of(d, m); }, model_);
        if (fault::any_active()) {
            value += fault::moment_offset(kind(), m);
        }
        return value;
    }

    friend bool operator==(const Distribution& a, const Distribution& b) { return a.spec() == b.spec(); }

private:
    static std::vector<std::string_view> split(std::string_view text, char sep)
    {
        std::vector<std::string_view> out;
        std::size_t start = 0;
        while (true) {
            const auto pos = text.find(sep, start);
            out.push_back(text.substr(start, pos - start));
            if (pos == std::string_view::npos) {
                return out;
            }
            start = pos + 1;
        }
    }

    static Rational moment_of(const PointMass& d, long m) { return d.value.pow(static_cast<unsigned>(m)); }

    static Rational moment_of(const Bernoulli& d, long m) { return m == 0 ? Rational(1) : d.p; }

    static Rational moment_of(const Poisson& d, long m)
    {
        // Touchard polynomial: sum_k S(m,k) alpha^k.
        Rational acc;
        for (long k = 0; k <= m; ++k) {
            acc += stirling2_classical(m, k) * d.alpha.pow(static_cast<unsigned>(k));
        }
        return acc;
    }

    static Rational moment_of(const GammaDist& d, long m)
    {
        return rising_factorial(d.alpha, m) / d.beta.pow(static_cast<unsigned>(m));
    }

    static Rational moment_of(const FiniteDiscrete& d, long m)
    {
        Rational acc;
        for (const auto& [value, weight] : d.atoms) {
            acc += weight * value.pow(static_cast<unsigned>(m));
        }
        return acc;
    }

    void validate() const
    {
        std::visit(
            [](const auto& d) {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, Bernoulli>) {
                    if (d.p < Rational(0) || d.p > Rational(1)) {
                        throw std::invalid_argument("bernoulli requires 0 <= p <= 1, got " + d.p.to_string());
                    }
                } else if constexpr (std::is_same_v<T, Poisson>) {
                    if (d.alpha <= Rational(0)) {
                        throw std::invalid_argument("poisson requires alpha > 0, got " + d.alpha.to_string());
                    }
                } else if constexpr (std::is_same_v<T, GammaDist>) {
                    if (d.alpha <= Rational(0) || d.beta <= Rational(0)) {
                        throw std::invalid_argument("gamma requires alpha > 0 and beta > 0");
                    }
                } else if constexpr (std::is_same_v<T, FiniteDiscrete>) {
                    if (d.atoms.empty()) {
                        throw std::invalid_argument("discrete distribution needs at least one atom");
                    }
                    Rational total;
                    for (const auto& atom : d.atoms) {
                        if (atom.second <= Rational(0)) {
                            throw std::invalid_argument("discrete weight " + atom.second.to_string()
                                                        + " is not positive");
                        }
                        total += atom.second;
                    }
                    if (total != Rational(1)) {
                        throw std::invalid_argument("discrete weights sum to " + total.to_string() + ", not 1");
                    }
                }
            },
            model_);
    }

    Model model_;
};

} // namespace fubini
