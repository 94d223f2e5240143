#pragma once

#include <gmpxx.h>

#include <cctype>
#include <compare>
#include <concepts>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fubini {

using BigInt = mpz_class;

/// Exact rational number, always held in lowest terms with a positive
/// denominator. Zero is 0/1.
class Rational {
public:
    Rational() = default;

    template <std::integral T>
    Rational(T value) // NOLINT(google-explicit-constructor)
    {
        if constexpr (std::is_signed_v<T>) {
            value_ = mpq_class(mpz_class(static_cast<long>(value)));
        } else {
            value_ = mpq_class(mpz_class(static_cast<unsigned long>(value)));
        }
    }

    Rational(const BigInt& value) // NOLINT(google-explicit-constructor)
        : value_(value)
    {
    }

    Rational(const BigInt& numerator, const BigInt& denominator)
    {
        if (denominator == 0) {
            throw std::domain_error("rational with zero denominator");
        }
        value_ = mpq_class(numerator, denominator);
        value_.canonicalize();
    }

    Rational(long numerator, long denominator)
        : Rational(BigInt(numerator), BigInt(denominator))
    {
    }

    explicit Rational(const mpq_class& q)
        : value_(q)
    {
        value_.canonicalize();
    }

    /// Parses `n`, `-n`, `p/q` or `-p/q` (decimal integers). Throws
    /// std::invalid_argument naming the offending text.
    static Rational parse(std::string_view text)
    {
        auto fail = [&]() -> std::invalid_argument {
            return std::invalid_argument("invalid rational '" + std::string(text) + "'");
        };
        auto is_integer = [](std::string_view s) {
            std::size_t i = 0;
            if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
                i = 1;
            }
            if (i >= s.size()) {
                return false;
            }
            for (; i < s.size(); ++i) {
                if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
                    return false;
                }
            }
            return true;
        };
        auto to_bigint = [](std::string_view s) {
            if (!s.empty() && s[0] == '+') {
                s.remove_prefix(1);
            }
            return BigInt(std::string(s), 10);
        };

        const auto slash = text.find('/');
        if (slash == std::string_view::npos) {
            if (!is_integer(text)) {
                throw fail();
            }
            return Rational(to_bigint(text));
        }
        const auto num = text.substr(0, slash);
        const auto den = text.substr(slash + 1);
        if (!is_integer(num) || !is_integer(den) || den[0] == '-' || den[0] == '+') {
            throw fail();
        }
        const BigInt d = to_bigint(den);
        if (d == 0) {
            throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        }
        return Rational(to_bigint(num), d);
    }

    const mpq_class& raw() const { return value_; }
    BigInt numerator() const { return value_.get_num(); }
    BigInt denominator() const { return value_.get_den(); }

    bool is_zero() const { return sgn(value_) == 0; }
    bool is_integer() const { return value_.get_den() == 1; }
    int sign() const { return sgn(value_); }

    double to_double() const { return value_.get_d(); }

    /// Wire format: `n` for integers, `-p/q` otherwise.
    std::string to_string() const { return value_.get_str(10); }

    Rational pow(unsigned exponent) const
    {
        mpz_class num;
        mpz_class den;
        mpz_pow_ui(num.get_mpz_t(), value_.get_num_mpz_t(), exponent);
        mpz_pow_ui(den.get_mpz_t(), value_.get_den_mpz_t(), exponent);
        return Rational(mpq_class(num, den));
    }

    Rational reciprocal() const
    {
        if (is_zero()) {
            throw std::domain_error("reciprocal of zero");
        }
        return Rational(mpq_class(1) / value_);
    }

    Rational& operator+=(const Rational& other)
    {
        value_ += other.value_;
        return *this;
    }
    Rational& operator-=(const Rational& other)
    {
        value_ -= other.value_;
        return *this;
    }
    Rational& operator*=(const Rational& other)
    {
        value_ *= other.value_;
        return *this;
    }
    Rational& operator/=(const Rational& other)
    {
        if (other.is_zero()) {
            throw std::domain_error("division by zero");
        }
        value_ /= other.value_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

private:
    mpq_class value_;
};

} // namespace fubini
