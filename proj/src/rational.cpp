#include "ncdlab/rational.hpp"

#include <charconv>
#include <limits>
#include <numeric>

#include "ncdlab/error.hpp"

namespace ncdlab {
namespace {

using Wide = __int128;

std::int64_t narrow(Wide v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw Error(ErrorKind::Resource, "rational arithmetic overflow");
    return static_cast<std::int64_t>(v);
}

Wide wgcd(Wide a, Wide b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        const Wide t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Rational make(Wide num, Wide den) {
    if (den == 0) throw Error(ErrorKind::Domain, "rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const Wide g = wgcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return Rational(narrow(num), narrow(den));
}

std::int64_t parse_int(std::string_view s, std::string_view whole) {
    std::int64_t v = 0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end || s.empty())
        throw Error(ErrorKind::Parse, "not a rational literal: '" + std::string(whole) + "'");
    return v;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw Error(ErrorKind::Domain, "rational with zero denominator");
    Wide n = num, d = den;
    if (d < 0) {
        n = -n;
        d = -d;
    }
    const Wide g = wgcd(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    num_ = narrow(n);
    den_ = narrow(d);
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const auto n = parse_int(text.substr(0, slash), text);
        const auto d = parse_int(text.substr(slash + 1), text);
        if (d == 0) throw Error(ErrorKind::Parse, "zero denominator in '" + std::string(text) + "'");
        return Rational(n, d);
    }
    if (const auto dot = text.find('.'); dot != std::string_view::npos) {
        const auto int_part = text.substr(0, dot);
        const auto frac = text.substr(dot + 1);
        if (frac.empty() || frac.size() > 17 || frac.find_first_not_of("0123456789") != std::string_view::npos)
            throw Error(ErrorKind::Parse, "not a rational literal: '" + std::string(text) + "'");
        const bool negative = !int_part.empty() && int_part.front() == '-';
        const std::int64_t whole =
            int_part.empty() || int_part == "-" ? 0 : parse_int(int_part, text);
        std::int64_t scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        const Rational f(parse_int(frac, text), scale);
        const Rational w(whole < 0 ? -whole : whole);
        const Rational mag = w + f;
        return negative ? Rational(0) - mag : mag;
    }
    return Rational(parse_int(text, text));
}

Rational operator+(const Rational& a, const Rational& b) {
    return make(Wide(a.num_) * b.den_ + Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
    return make(Wide(a.num_) * b.den_ - Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
    return make(Wide(a.num_) * b.num_, Wide(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw Error(ErrorKind::Domain, "rational division by zero");
    return make(Wide(a.num_) * b.den_, Wide(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const Wide l = Wide(a.num_) * b.den_;
    const Wide r = Wide(b.num_) * a.den_;
    return l <=> r;
}

}  // namespace ncdlab
