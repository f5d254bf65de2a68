#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace vnlab {

/// Exact rational number with 64-bit numerator and denominator, kept in
/// lowest terms with a positive denominator.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT: implicit by design of integer literals
    Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) { normalize(); }

    [[nodiscard]] constexpr std::int64_t num() const { return num_; }
    [[nodiscard]] constexpr std::int64_t den() const { return den_; }
    [[nodiscard]] double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    [[nodiscard]] bool is_integer() const { return den_ == 1; }

    /// "7", "-3/2".
    [[nodiscard]] std::string to_string() const
    {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Accepts "a", "a/b" and finite decimals such as "1.25".
    static Rational parse(const std::string& text);

    friend Rational operator+(const Rational& a, const Rational& b)
    {
        const std::int64_t g = std::gcd(a.den_, b.den_);
        return {checked_add(checked_mul(a.num_, b.den_ / g), checked_mul(b.num_, a.den_ / g)),
                checked_mul(a.den_ / g, b.den_)};
    }
    friend Rational operator-(const Rational& a) { return {-a.num_, a.den_}; }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b)
    {
        const std::int64_t g1 = std::gcd(a.num_, b.den_);
        const std::int64_t g2 = std::gcd(b.num_, a.den_);
        const std::int64_t s1 = g1 == 0 ? 1 : g1;
        const std::int64_t s2 = g2 == 0 ? 1 : g2;
        return {checked_mul(a.num_ / s1, b.num_ / s2), checked_mul(a.den_ / s2, b.den_ / s1)};
    }
    friend Rational operator/(const Rational& a, const Rational& b)
    {
        if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
        return a * Rational(b.den_, b.num_);
    }

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        // denominators are positive, so cross multiplication preserves order
        const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
        const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
        return lhs <=> rhs;
    }

private:
    void normalize()
    {
        if (den_ == 0) throw std::domain_error("Rational: zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        const std::int64_t g = std::gcd(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    static std::int64_t checked_mul(std::int64_t a, std::int64_t b)
    {
        std::int64_t out = 0;
        if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("Rational: overflow");
        return out;
    }
    static std::int64_t checked_add(std::int64_t a, std::int64_t b)
    {
        std::int64_t out = 0;
        if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("Rational: overflow");
        return out;
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace vnlab
