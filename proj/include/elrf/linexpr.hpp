#pragma once

#include <map>
#include <string>
#include <vector>

#include "elrf/rational.hpp"

namespace elrf {

using VarId = std::string;
using Assignment = std::map<VarId, Rational>;

/// Linear expression: rational coefficients over named variables plus a
/// rational constant. Zero coefficients are never stored.
class LinExpr {
public:
    LinExpr() = default;
    explicit LinExpr(Rational constant) : constant_(std::move(constant)) {}

    static LinExpr var(const VarId& v, Rational coeff = Rational(1));

    Rational coeff(const VarId& v) const;
    const Rational& constant() const { return constant_; }
    void set_constant(Rational c) { constant_ = std::move(c); }
    const std::map<VarId, Rational>& terms() const { return terms_; }

    void add_term(const VarId& v, const Rational& c);

    bool is_constant() const { return terms_.empty(); }
    bool is_zero() const { return terms_.empty() && constant_.is_zero(); }

    LinExpr& operator+=(const LinExpr& o);
    LinExpr& operator-=(const LinExpr& o);
    LinExpr& operator*=(const Rational& s);
    LinExpr operator-() const;

    /// Exact evaluation; every referenced variable must be assigned.
    Rational eval(const Assignment& point) const;

    /// Replaces v by an expression (v itself must not occur in replacement).
    LinExpr substitute(const VarId& v, const LinExpr& replacement) const;

    /// Substitutes the given values; unassigned variables stay symbolic.
    LinExpr substitute_values(const Assignment& values) const;

    LinExpr rename(const std::map<VarId, VarId>& renaming) const;

    /// Debug form, e.g. "x + 3/2*y - 1".
    std::string str() const;

    bool operator==(const LinExpr& o) const {
        return terms_ == o.terms_ && constant_ == o.constant_;
    }

private:
    std::map<VarId, Rational> terms_;
    Rational constant_;
};

LinExpr operator+(LinExpr a, const LinExpr& b);
LinExpr operator-(LinExpr a, const LinExpr& b);
LinExpr operator*(const Rational& s, LinExpr e);

}  // namespace elrf
