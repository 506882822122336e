#include "elrf/linexpr.hpp"

#include <sstream>

#include "elrf/errors.hpp"

namespace elrf {

LinExpr LinExpr::var(const VarId& v, Rational coeff) {
    LinExpr e;
    e.add_term(v, coeff);
    return e;
}

Rational LinExpr::coeff(const VarId& v) const {
    const auto it = terms_.find(v);
    return it == terms_.end() ? Rational(0) : it->second;
}

void LinExpr::add_term(const VarId& v, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(v, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

LinExpr& LinExpr::operator+=(const LinExpr& o) {
    for (const auto& [v, c] : o.terms_) add_term(v, c);
    constant_ += o.constant_;
    return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& o) {
    for (const auto& [v, c] : o.terms_) add_term(v, -c);
    constant_ -= o.constant_;
    return *this;
}

LinExpr& LinExpr::operator*=(const Rational& s) {
    if (s.is_zero()) {
        terms_.clear();
        constant_ = Rational(0);
        return *this;
    }
    for (auto& [v, c] : terms_) c *= s;
    constant_ *= s;
    return *this;
}

LinExpr LinExpr::operator-() const {
    LinExpr e(*this);
    e *= Rational(-1);
    return e;
}

Rational LinExpr::eval(const Assignment& point) const {
    Rational acc = constant_;
    for (const auto& [v, c] : terms_) {
        const auto it = point.find(v);
        if (it == point.end()) throw StructuralError("unassigned variable in eval: " + v);
        acc += c * it->second;
    }
    return acc;
}

LinExpr LinExpr::substitute(const VarId& v, const LinExpr& replacement) const {
    const auto it = terms_.find(v);
    if (it == terms_.end()) return *this;
    const Rational c = it->second;
    LinExpr e(*this);
    e.terms_.erase(v);
    LinExpr scaled(replacement);
    scaled *= c;
    e += scaled;
    return e;
}

LinExpr LinExpr::substitute_values(const Assignment& values) const {
    LinExpr e;
    e.constant_ = constant_;
    for (const auto& [v, c] : terms_) {
        const auto it = values.find(v);
        if (it == values.end())
            e.add_term(v, c);
        else
            e.constant_ += c * it->second;
    }
    return e;
}

LinExpr LinExpr::rename(const std::map<VarId, VarId>& renaming) const {
    LinExpr e;
    e.constant_ = constant_;
    for (const auto& [v, c] : terms_) {
        const auto it = renaming.find(v);
        e.add_term(it == renaming.end() ? v : it->second, c);
    }
    return e;
}

std::string LinExpr::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [v, c] : terms_) {
        if (first) {
            if (c == Rational(1))
                os << v;
            else if (c == Rational(-1))
                os << "-" << v;
            else
                os << c << "*" << v;
            first = false;
            continue;
        }
        const Rational mag = c.abs();
        os << (c.sign() < 0 ? " - " : " + ");
        if (mag == Rational(1))
            os << v;
        else
            os << mag << "*" << v;
    }
    if (!constant_.is_zero()) {
        if (first)
            os << constant_;
        else
            os << (constant_.sign() < 0 ? " - " : " + ") << constant_.abs();
    }
    return os.str();
}

LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
LinExpr operator*(const Rational& s, LinExpr e) { return e *= s; }

}  // namespace elrf
