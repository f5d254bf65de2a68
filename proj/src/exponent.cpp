#include "vnlab/exponent.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vnlab {

namespace {

std::int64_t parse_integer(const std::string& text)
{
    std::size_t used = 0;
    const long long value = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument("not an integer: '" + text + "'");
    return value;
}

}  // namespace

Rational Rational::parse(const std::string& text)
{
    if (text.empty()) throw std::invalid_argument("empty rational");
    if (const auto slash = text.find('/'); slash != std::string::npos) {
        return {parse_integer(text.substr(0, slash)), parse_integer(text.substr(slash + 1))};
    }
    if (const auto dot = text.find('.'); dot != std::string::npos) {
        const std::string whole = text.substr(0, dot);
        const std::string frac = text.substr(dot + 1);
        if (frac.size() > 15) throw std::invalid_argument("too many decimals: '" + text + "'");
        for (char c : frac) {
            if (!std::isdigit(static_cast<unsigned char>(c))) throw std::invalid_argument("bad decimal: '" + text + "'");
        }
        std::int64_t scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        const bool negative = !whole.empty() && whole.front() == '-';
        const std::int64_t w = (whole.empty() || whole == "-" || whole == "+") ? 0 : parse_integer(whole);
        const std::int64_t f = frac.empty() ? 0 : parse_integer(frac);
        const std::int64_t magnitude = std::abs(w) * scale + f;
        return {negative ? -magnitude : magnitude, scale};
    }
    return Rational(parse_integer(text));
}

Exponent Exponent::finite(Rational q)
{
    if (q < Rational(1)) throw std::invalid_argument("exponent q must be >= 1, got " + q.to_string());
    Exponent e;
    e.value_ = q;
    return e;
}

Exponent Exponent::parse(const std::string& text)
{
    if (text == "inf" || text == "infinity" || text == "Inf" || text == "oo") return infinity();
    return finite(Rational::parse(text));
}

Rational Exponent::rational() const
{
    if (!value_) throw std::logic_error("infinite exponent has no rational value");
    return *value_;
}

double Exponent::to_double() const
{
    return value_ ? value_->to_double() : std::numeric_limits<double>::infinity();
}

Rational Exponent::inverse() const
{
    return value_ ? Rational(1) / *value_ : Rational(0);
}

std::string Exponent::to_string() const
{
    return value_ ? value_->to_string() : std::string("inf");
}

}  // namespace vnlab
