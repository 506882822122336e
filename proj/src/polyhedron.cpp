#include "elrf/polyhedron.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "elrf/errors.hpp"

namespace elrf {

bool Constraint::satisfied_by(const Assignment& point) const {
    const Rational v = expr.eval(point);
    switch (rel) {
        case Rel::Geq0: return v.sign() >= 0;
        case Rel::Gt0: return v.sign() > 0;
        case Rel::Eq0: return v.is_zero();
    }
    return false;
}

Constraint Constraint::normalized() const {
    Constraint c(*this);
    if (c.expr.terms().empty()) {
        // Variable-free rows normalize to a sign-only constant.
        const int s = c.expr.constant().sign();
        c.expr = LinExpr(Rational(s));
        return c;
    }
    // Coefficient content = gcd of numerators / lcm of denominators; the
    // constant term scales along so same-slope rows get identical term maps.
    mpz_class num_gcd = 0;
    mpz_class den_lcm = 1;
    for (const auto& [v, q] : c.expr.terms()) {
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), num_gcd.get_mpz_t(), q.numerator().get_mpz_t());
        num_gcd = ::abs(g);
        mpz_class l;
        mpz_lcm(l.get_mpz_t(), den_lcm.get_mpz_t(), q.denominator().get_mpz_t());
        den_lcm = l;
    }
    Rational scale(den_lcm, num_gcd);
    if (c.rel == Rel::Eq0 && c.expr.terms().begin()->second.sign() < 0) scale = -scale;
    c.expr *= scale;
    return c;
}

bool Constraint::trivially_true() const {
    if (!expr.is_constant()) return false;
    const int s = expr.constant().sign();
    switch (rel) {
        case Rel::Geq0: return s >= 0;
        case Rel::Gt0: return s > 0;
        case Rel::Eq0: return s == 0;
    }
    return false;
}

bool Constraint::trivially_false() const { return expr.is_constant() && !trivially_true(); }

std::string Constraint::str() const {
    const char* op = rel == Rel::Geq0 ? " >= 0" : rel == Rel::Gt0 ? " > 0" : " = 0";
    return expr.str() + op;
}

bool Constraint::operator<(const Constraint& o) const {
    if (rel != o.rel) return static_cast<int>(rel) < static_cast<int>(o.rel);
    if (expr.terms() != o.expr.terms()) return expr.terms() < o.expr.terms();
    return expr.constant() < o.expr.constant();
}

Constraint geq0(LinExpr e) { return Constraint{std::move(e), Rel::Geq0}; }
Constraint gt0(LinExpr e) { return Constraint{std::move(e), Rel::Gt0}; }
Constraint eq0(LinExpr e) { return Constraint{std::move(e), Rel::Eq0}; }

void Polyhedron::validate() const {
    const std::set<VarId> declared(vars.begin(), vars.end());
    if (declared.size() != vars.size()) throw StructuralError("duplicate variable in polyhedron");
    for (const auto& row : rows)
        for (const auto& [v, c] : row.expr.terms())
            if (!declared.count(v))
                throw StructuralError("constraint references undeclared variable: " + v);
}

bool Polyhedron::has_var(const VarId& v) const {
    return std::find(vars.begin(), vars.end(), v) != vars.end();
}

bool Polyhedron::has_strict_rows() const {
    return std::any_of(rows.begin(), rows.end(),
                       [](const Constraint& c) { return c.rel == Rel::Gt0; });
}

bool Polyhedron::contains(const Assignment& point) const {
    return std::all_of(rows.begin(), rows.end(),
                       [&](const Constraint& c) { return c.satisfied_by(point); });
}

std::vector<Constraint> Polyhedron::normalized_rows_sorted() const {
    std::vector<Constraint> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.normalized());
    std::sort(out.begin(), out.end());
    return out;
}

std::string Polyhedron::str() const {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < rows.size(); ++i) os << (i ? "; " : "") << rows[i].str();
    os << "}";
    return os.str();
}

Polyhedron conjoin(const Polyhedron& a, const Polyhedron& b) {
    Polyhedron out = a;
    const std::set<VarId> seen(a.vars.begin(), a.vars.end());
    for (const auto& v : b.vars)
        if (!seen.count(v)) out.vars.push_back(v);
    out.rows.insert(out.rows.end(), b.rows.begin(), b.rows.end());
    return out;
}

Polyhedron conjoin(Polyhedron a, const std::vector<Constraint>& extra) {
    a.rows.insert(a.rows.end(), extra.begin(), extra.end());
    return a;
}

}  // namespace elrf
