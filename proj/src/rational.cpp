#include "bml/rational.hpp"

#include <charconv>
#include <stdexcept>

namespace bml {

namespace {

std::int64_t parse_digits(std::string_view s, std::string_view whole) {
    if (s.empty()) return 0;
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || v < 0)
        throw std::invalid_argument("not a number: " + std::string(whole));
    return v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty number");
    bool negative = false;
    std::string_view body = text;
    if (body.front() == '-') {
        negative = true;
        body.remove_prefix(1);
    }
    Rational q;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        const auto num = body.substr(0, slash);
        const auto den = body.substr(slash + 1);
        if (num.empty() || den.empty()) throw std::invalid_argument("bad fraction: " + std::string(text));
        const std::int64_t d = parse_digits(den, text);
        if (d == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
        q = Rational(parse_digits(num, text), d);
    } else {
        const auto dot = body.find('.');
        const auto int_part = body.substr(0, dot);
        const auto frac_part = dot == std::string_view::npos ? std::string_view{} : body.substr(dot + 1);
        if (int_part.empty() && frac_part.empty()) throw std::invalid_argument("not a number: " + std::string(text));
        if (frac_part.size() > 15) throw std::invalid_argument("too many decimal places: " + std::string(text));
        std::int64_t scale = 1;
        for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
        q = Rational(parse_digits(int_part, text)) + Rational(parse_digits(frac_part, text), scale);
    }
    return negative ? -q : q;
}

std::string to_decimal(const Rational& q, int places) {
    if (q < 0) throw std::domain_error("to_decimal expects a non-negative value");
    __int128 scale = 1;
    for (int i = 0; i < places; ++i) scale *= 10;
    const __int128 num = q.numerator();
    const __int128 den = q.denominator();
    const __int128 scaled = (2 * num * scale + den) / (2 * den);
    const auto whole = static_cast<std::int64_t>(scaled / scale);
    auto frac = static_cast<std::int64_t>(scaled % scale);
    std::string out = std::to_string(whole);
    if (places > 0) {
        std::string digits = std::to_string(frac);
        out += '.';
        out.append(static_cast<std::size_t>(places) - digits.size(), '0');
        out += digits;
    }
    return out;
}

double to_double(const Rational& q) {
    return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

std::int64_t round_half_up(const Rational& q, std::int64_t n) {
    const __int128 num = static_cast<__int128>(q.numerator()) * n;
    const __int128 den = q.denominator();
    return static_cast<std::int64_t>((2 * num + den) / (2 * den));
}

}  // namespace bml
