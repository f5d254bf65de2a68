#pragma once

#include <optional>
#include <string>

#include "vnlab/rational.hpp"

namespace vnlab {

/// Exponent q of an l_q ball: a finite rational q >= 1, or infinity.
class Exponent {
public:
    static Exponent finite(Rational q);
    static Exponent infinity() { return Exponent{}; }
    /// "2", "3/2", "1.5", "inf".
    static Exponent parse(const std::string& text);

    [[nodiscard]] bool is_infinite() const { return !value_.has_value(); }
    [[nodiscard]] bool is_finite() const { return value_.has_value(); }
    /// Throws for the infinite exponent.
    [[nodiscard]] Rational rational() const;
    [[nodiscard]] double to_double() const;
    /// 1/q, zero at infinity.
    [[nodiscard]] Rational inverse() const;
    /// 1/q' = 1 - 1/q for the conjugate exponent q'.
    [[nodiscard]] Rational conjugate_inverse() const { return Rational(1) - inverse(); }
    [[nodiscard]] std::string to_string() const;

    [[nodiscard]] bool equals(std::int64_t q) const { return is_finite() && *value_ == Rational(q); }

    friend bool operator==(const Exponent&, const Exponent&) = default;

private:
    std::optional<Rational> value_;
};

}  // namespace vnlab
