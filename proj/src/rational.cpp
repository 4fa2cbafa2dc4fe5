#include "matchfree/rational.hpp"

#include <stdexcept>

namespace matchfree {

Integer binom(long n, long k) {
    if (n < 0 || k < 0 || k > n) return Integer(0);
    Integer out;
    mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return out;
}

std::string to_string(const Rational& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    try {
        Integer num(text.substr(0, slash));
        Integer den = slash == std::string::npos ? Integer(1) : Integer(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        Rational r(num, den);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("not a rational: '" + text + "'");
    }
}

}  // namespace matchfree
