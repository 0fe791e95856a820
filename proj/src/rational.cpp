#include "rashba/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace rashba {

Rational rational_from_double(double x) {
    if (!std::isfinite(x)) {
        throw std::invalid_argument("rational_from_double: non-finite input");
    }
    if (x == 0.0) return Rational(0);
    int exp = 0;
    const double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| in [0.5, 1)
    const auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
    exp -= 53;
    BigInt num = scaled;
    if (exp >= 0) {
        return Rational(num << exp);
    }
    return Rational(num, BigInt(1) << (-exp));
}

double to_double(const Rational& r) {
    return r.convert_to<double>();
}

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

std::optional<Rational> parse_decimal(std::string_view s) {
    // [+-]? digits [. digits]? ([eE][+-]?digits)?
    int sign = 1;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        if (s.front() == '-') sign = -1;
        s.remove_prefix(1);
    }
    long exp10 = 0;
    if (auto epos = s.find_first_of("eE"); epos != std::string_view::npos) {
        std::string_view es = s.substr(epos + 1);
        s = s.substr(0, epos);
        int esign = 1;
        if (!es.empty() && (es.front() == '+' || es.front() == '-')) {
            if (es.front() == '-') esign = -1;
            es.remove_prefix(1);
        }
        if (!all_digits(es) || es.size() > 6) return std::nullopt;
        exp10 = esign * std::stol(std::string(es));
    }
    std::string_view int_part = s;
    std::string_view frac_part;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        int_part = s.substr(0, dot);
        frac_part = s.substr(dot + 1);
    }
    if (int_part.empty() && frac_part.empty()) return std::nullopt;
    if (!int_part.empty() && !all_digits(int_part)) return std::nullopt;
    if (!frac_part.empty() && !all_digits(frac_part)) return std::nullopt;

    BigInt digits = 0;
    for (char c : int_part) digits = digits * 10 + (c - '0');
    for (char c : frac_part) digits = digits * 10 + (c - '0');
    exp10 -= static_cast<long>(frac_part.size());

    Rational value(digits);
    if (exp10 > 0) {
        value *= Rational(boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(exp10)));
    } else if (exp10 < 0) {
        value /= Rational(boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(-exp10)));
    }
    return sign < 0 ? Rational(-value) : value;
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) return std::nullopt;

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        std::string_view num = text.substr(0, slash);
        std::string_view den = text.substr(slash + 1);
        int sign = 1;
        if (!num.empty() && (num.front() == '+' || num.front() == '-')) {
            if (num.front() == '-') sign = -1;
            num.remove_prefix(1);
        }
        if (!all_digits(num) || !all_digits(den)) return std::nullopt;
        const BigInt n{std::string(num)};
        const BigInt d{std::string(den)};
        if (d == 0) return std::nullopt;
        Rational r(n, d);
        return sign < 0 ? Rational(-r) : r;
    }
    return parse_decimal(text);
}

std::string to_string(const Rational& r) {
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

}  // namespace rashba
