#include "fubini/polynomial.hpp"
#include "fubini/rational.hpp"
#include "fubini/series.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <sstream>

using fubini::Polynomial;
using fubini::Rational;
using fubini::TruncatedSeries;

namespace {

Rational q(const char* text) { return Rational::parse(text); }

TruncatedSeries series(int order, std::vector<Rational> c) { return TruncatedSeries(order, c); }

TruncatedSeries random_series(oracle::RationalGen& gen, int order, bool zero_constant)
{
    std::vector<Rational> c;
    for (int i = 0; i <= order; ++i) {
        c.push_back(gen());
    }
    if (zero_constant) {
        c[0] = Rational(0);
    }
    return TruncatedSeries(order, c);
}

} // namespace

TEST(Rational, ParseAndFormatCanonical)
{
    EXPECT_EQ(q("6/4").to_string(), "3/2");
    EXPECT_EQ(q("-6/4").to_string(), "-3/2");
    EXPECT_EQ(q("10/5").to_string(), "2");
    EXPECT_EQ(q("0/7").to_string(), "0");
    EXPECT_EQ(q("-12").to_string(), "-12");
    EXPECT_TRUE(q("8/4").is_integer());
    EXPECT_EQ(q("1/3").sign(), 1);
    EXPECT_EQ(q("-1/3").sign(), -1);
}

TEST(Rational, RejectsMalformedInput)
{
    EXPECT_THROW(q("1/0"), std::invalid_argument);
    EXPECT_THROW(q("abc"), std::invalid_argument);
    EXPECT_THROW(q(""), std::invalid_argument);
    EXPECT_THROW(q("1/2/3"), std::invalid_argument);
    EXPECT_THROW(q("1.5"), std::invalid_argument);
    EXPECT_THROW(q("4/-6"), std::invalid_argument);
    EXPECT_THROW(Rational(1, 0), std::domain_error);
    EXPECT_THROW(Rational(0).reciprocal(), std::domain_error);
}

TEST(Rational, FieldAxiomsOnRandomSamples)
{
    oracle::RationalGen gen(7);
    for (int trial = 0; trial < 500; ++trial) {
        const Rational a = gen();
        const Rational b = gen();
        const Rational c = gen();
        EXPECT_EQ(a + b, b + a);
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ((a + b) + c, a + (b + c));
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ(a + Rational(0), a);
        EXPECT_EQ(a * Rational(1), a);
        EXPECT_EQ(a + (-a), Rational(0));
        if (!a.is_zero() && !b.is_zero()) {
            EXPECT_EQ((a / b) * (b / a), Rational(1));
            EXPECT_EQ(a * a.reciprocal(), Rational(1));
        }
    }
}

TEST(Rational, PowAndOrdering)
{
    EXPECT_EQ(q("-2/3").pow(3), q("-8/27"));
    EXPECT_EQ(q("5").pow(0), Rational(1));
    EXPECT_LT(q("-7/2"), q("-3"));
    EXPECT_GT(q("13/4"), q("3"));
    EXPECT_DOUBLE_EQ(q("7/4").to_double(), 1.75);
}

TEST(Polynomial, TrimsAndReportsDegree)
{
    EXPECT_EQ(Polynomial({1, 2, 0, 0}).degree(), 1);
    EXPECT_TRUE(Polynomial({0, 0}).is_zero());
    EXPECT_EQ(Polynomial().degree(), Polynomial::kZeroDegree);
    EXPECT_EQ(Polynomial({1, 2}).coeff(5), Rational(0));
}

TEST(Polynomial, EvalExamples)
{
    EXPECT_EQ(fubini::poly_eval(Polynomial(), q("7/2")), Rational(0));
    EXPECT_EQ(fubini::poly_eval(Polynomial({0, 1, 2}), Rational(1)), Rational(3));
    EXPECT_EQ(fubini::poly_eval(Polynomial({0, q("1/2"), 2}), Rational(1)), q("5/2"));
}

TEST(Polynomial, DerivativeExamples)
{
    EXPECT_EQ(fubini::poly_derivative(Polynomial({0, 1, 2}), 1), Polynomial({1, 4}));
    EXPECT_TRUE(fubini::poly_derivative(Polynomial({5}), 3).is_zero());
    EXPECT_EQ(fubini::poly_derivative(Polynomial({0, 0, 0, 1}), 2), Polynomial({0, 6}));
    EXPECT_EQ(fubini::poly_derivative(Polynomial({3, 4}), 0), Polynomial({3, 4}));
}

TEST(Polynomial, DerivativeComposes)
{
    oracle::RationalGen gen(11);
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<Rational> c;
        const long degree = gen.integer(0, 9);
        for (long i = 0; i <= degree; ++i) {
            c.push_back(gen());
        }
        const Polynomial p(c);
        const auto r = static_cast<unsigned>(gen.integer(0, 5));
        const auto s = static_cast<unsigned>(gen.integer(0, 5));
        EXPECT_EQ(fubini::poly_derivative(fubini::poly_derivative(p, r), s), fubini::poly_derivative(p, r + s));
    }
}

TEST(Polynomial, ArithmeticAgreesWithEvaluation)
{
    oracle::RationalGen gen(13);
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<Rational> a;
        std::vector<Rational> b;
        for (long i = 0; i <= gen.integer(0, 6); ++i) {
            a.push_back(gen());
        }
        for (long i = 0; i <= gen.integer(0, 6); ++i) {
            b.push_back(gen());
        }
        const Polynomial pa(a);
        const Polynomial pb(b);
        const Rational x = gen();
        const Rational c = gen();
        using fubini::poly_eval;
        EXPECT_EQ(poly_eval(pa * pb, x), poly_eval(pa, x) * poly_eval(pb, x));
        EXPECT_EQ(poly_eval(pa + pb, x), poly_eval(pa, x) + poly_eval(pb, x));
        EXPECT_EQ(poly_eval(pa - pb, x), poly_eval(pa, x) - poly_eval(pb, x));
        EXPECT_EQ(poly_eval(pa.scale_argument(c), x), poly_eval(pa, c * x));
        EXPECT_EQ(poly_eval(pa.shifted(3), x), poly_eval(pa, x) * x.pow(3));
    }
}

TEST(Polynomial, GammaWeightIntegral)
{
    EXPECT_EQ(fubini::gamma_weight_integral(Polynomial({0, 0, 1}), 1), Rational(2));
    EXPECT_EQ(fubini::gamma_weight_integral(Polynomial({1}), 2), Rational(1));
    EXPECT_EQ(fubini::gamma_weight_integral(Polynomial({0, 1}), 3), Rational(6));
    for (std::size_t k = 0; k <= 20; ++k) {
        EXPECT_EQ(fubini::gamma_weight_integral(Polynomial::monomial(Rational(1), k), 1),
                  Rational(fubini::detail::factorial_exact(k)))
            << "k=" << k;
    }
    EXPECT_THROW(fubini::gamma_weight_integral(Polynomial({1}), 0), std::invalid_argument);
}

TEST(Series, MulExamples)
{
    EXPECT_EQ(fubini::series_mul(series(2, {1, 1}), series(2, {1, 1})), series(2, {1, 2, 1}));
    EXPECT_EQ(fubini::series_mul(series(2, {1, 1, 1}), series(2, {1, -1})), series(2, {1}));
    // e_1^1(t) truncates to 1 + t.
    EXPECT_EQ(fubini::series_mul(series(2, {1, 1, 0}), series(2, {1, 1, 0})), series(2, {1, 2, 1}));
}

TEST(Series, ReciprocalExamples)
{
    EXPECT_EQ(fubini::series_reciprocal(series(3, {1, -1})), series(3, {1, 1, 1, 1}));
    EXPECT_EQ(fubini::series_reciprocal(series(2, {1})), series(2, {1}));
    const auto gf = fubini::series_reciprocal(series(2, {1, -1}));
    EXPECT_EQ(gf.egf_coefficients(), (std::vector<Rational> {1, 1, 2}));
    EXPECT_THROW(fubini::series_reciprocal(series(2, {0, 1})), std::domain_error);
}

TEST(Series, ExpExamples)
{
    EXPECT_EQ(fubini::series_exp(series(3, {})), series(3, {1}));
    EXPECT_EQ(fubini::series_exp(series(3, {0, 1})), series(3, {1, 1, q("1/2"), q("1/6")}));
    EXPECT_EQ(fubini::series_exp(series(2, {0, 1})).egf_coefficients(), (std::vector<Rational> {1, 1, 1}));
    EXPECT_THROW(fubini::series_exp(series(2, {1})), std::domain_error);
}

TEST(Series, ReciprocalInvertsRandomSeries)
{
    oracle::RationalGen gen(17);
    for (int trial = 0; trial < 40; ++trial) {
        auto a = random_series(gen, 12, false);
        a.coeff(0) = gen.nonzero();
        EXPECT_EQ(fubini::series_mul(fubini::series_reciprocal(a), a), TruncatedSeries::one(12));
    }
}

TEST(Series, ExpIsAdditive)
{
    oracle::RationalGen gen(19);
    for (int trial = 0; trial < 30; ++trial) {
        const auto a = random_series(gen, 10, true);
        const auto b = random_series(gen, 10, true);
        auto sum = a;
        sum += b;
        EXPECT_EQ(fubini::series_exp(sum), fubini::series_mul(fubini::series_exp(a), fubini::series_exp(b)));
    }
}

TEST(Series, PowMatchesRepeatedMul)
{
    oracle::RationalGen gen(23);
    const auto a = random_series(gen, 9, false);
    auto acc = TruncatedSeries::one(9);
    for (unsigned e = 0; e <= 5; ++e) {
        EXPECT_EQ(fubini::series_pow(a, e), acc) << "e=" << e;
        acc = fubini::series_mul(acc, a);
    }
}

TEST(Series, EgfRoundTripAndOrderChecks)
{
    const std::vector<Rational> egf {1, 3, q("-5/2"), 7};
    const auto s = TruncatedSeries::from_egf(3, egf);
    EXPECT_EQ(s.coeff(3), q("7/6"));
    EXPECT_EQ(s.egf_coefficients(), egf);
    EXPECT_THROW(fubini::series_mul(TruncatedSeries(2), TruncatedSeries(3)), std::invalid_argument);
    EXPECT_THROW(TruncatedSeries(-1), std::invalid_argument);
}
