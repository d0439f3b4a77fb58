#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace reconfig {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

// Always "num/den", even for integers. Instance files use this form.
inline std::string rat_to_fraction_string(const Rat& r) {
    return rat_num(r).str() + "/" + rat_den(r).str();
}

// "num/den" when den != 1, plain integer otherwise.
inline std::string rat_to_string(const Rat& r) {
    if (rat_den(r) == 1) return rat_num(r).str();
    return rat_to_fraction_string(r);
}

// Fixed-point decimal with `digits` fractional digits, round half away from zero.
inline std::string rat_to_decimal(const Rat& r, int digits = 4) {
    Int num = rat_num(r);
    Int den = rat_den(r);
    bool neg = num < 0;
    if (neg) num = -num;
    Int scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    Int scaled = num * scale;
    Int q = scaled / den;
    Int rem = scaled % den;
    if (2 * rem >= den) ++q;
    Int whole = q / scale;
    Int frac = q % scale;
    std::string fs = frac.str();
    fs.insert(fs.begin(), static_cast<size_t>(digits) - fs.size(), '0');
    std::string out = (neg && (whole != 0 || frac != 0)) ? "-" : "";
    out += whole.str();
    if (digits > 0) out += "." + fs;
    return out;
}

// Accepts "a/b" or "a". Throws std::invalid_argument on malformed input.
inline Rat parse_rational(std::string_view text) {
    auto parse_int = [](std::string_view s) -> Int {
        if (s.empty()) throw std::invalid_argument("empty number");
        size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) throw std::invalid_argument("bad number");
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("bad number");
        return Int(std::string(s));
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rat(parse_int(text));
    Int num = parse_int(text.substr(0, slash));
    Int den = parse_int(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rat(num, den);
}

inline double rat_to_double(const Rat& r) { return r.template convert_to<double>(); }

}  // namespace reconfig
