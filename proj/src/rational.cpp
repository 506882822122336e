#include "elrf/rational.hpp"

#include <ostream>
#include <stdexcept>

#include "elrf/errors.hpp"

namespace elrf {

Rational::Rational(long num, long den) {
    if (den == 0) throw StructuralError("rational with zero denominator");
    v_ = mpq_class(num);
    v_ /= mpq_class(den);
}

Rational::Rational(mpz_class num, mpz_class den) {
    if (den == 0) throw StructuralError("rational with zero denominator");
    v_ = mpq_class(std::move(num));
    v_ /= mpq_class(std::move(den));
}

Rational::Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

Rational Rational::parse(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            return Rational(mpz_class(text));
        }
        mpz_class num(text.substr(0, slash));
        mpz_class den(text.substr(slash + 1));
        return Rational(std::move(num), std::move(den));
    } catch (const std::invalid_argument&) {
        throw StructuralError("not a rational literal: '" + text + "'");
    }
}

Rational Rational::abs() const { return Rational(mpq_class(::abs(v_))); }

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw StructuralError("rational division by zero");
    v_ /= o.v_;
    return *this;
}

Rational operator+(Rational a, const Rational& b) { return a += b; }
Rational operator-(Rational a, const Rational& b) { return a -= b; }
Rational operator*(Rational a, const Rational& b) { return a *= b; }
Rational operator/(Rational a, const Rational& b) { return a /= b; }

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }
Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }

}  // namespace elrf
