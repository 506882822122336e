#include "elrf/loop.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "elrf/errors.hpp"
#include "elrf/lp.hpp"

namespace elrf {

VarId primed(const VarId& v) { return v + "'"; }

void SlcLoop::validate() const {
    if (vars.empty()) throw StructuralError("loop needs at least one variable");
    if (vars.size() != primed_vars.size())
        throw StructuralError("primed variable list does not match variable list");
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (primed_vars[i] != primed(vars[i]))
            throw StructuralError("primed id not derived from " + vars[i]);
    std::set<VarId> expected(vars.begin(), vars.end());
    expected.insert(primed_vars.begin(), primed_vars.end());
    const std::set<VarId> actual(body.vars.begin(), body.vars.end());
    if (expected != actual)
        throw StructuralError("body variable set must be the loop variables plus primes");
    body.validate();
    if (body.has_strict_rows()) throw StructuralError("loop body contains a strict row");
}

Rational CandidateFn::coeff(const VarId& v) const {
    const auto it = coeffs.find(v);
    return it == coeffs.end() ? Rational(0) : it->second;
}

Rational CandidateFn::eval(const Assignment& point) const { return as_expr().eval(point); }

LinExpr CandidateFn::as_expr() const {
    LinExpr e(constant);
    for (const auto& [v, c] : coeffs) e.add_term(v, c);
    return e;
}

LinExpr CandidateFn::as_primed_expr() const {
    LinExpr e(constant);
    for (const auto& [v, c] : coeffs) e.add_term(primed(v), c);
    return e;
}

std::string CandidateFn::str(const std::vector<VarId>& var_order) const {
    LinExpr e(constant);
    for (const auto& v : var_order) e.add_term(v, coeff(v));
    return e.str();
}

CandidateFn negated(const CandidateFn& f) {
    CandidateFn g;
    g.constant = -f.constant;
    for (const auto& [v, c] : f.coeffs) g.coeffs[v] = -c;
    return g;
}

SlcLoop canonicalize(const std::vector<RawConstraint>& raw, const std::vector<VarId>& vars) {
    if (vars.empty()) throw StructuralError("loop needs at least one variable");
    SlcLoop loop;
    loop.vars = vars;
    for (const auto& v : vars) loop.primed_vars.push_back(primed(v));
    loop.body.vars = vars;
    loop.body.vars.insert(loop.body.vars.end(), loop.primed_vars.begin(),
                          loop.primed_vars.end());

    const std::set<VarId> declared(loop.body.vars.begin(), loop.body.vars.end());
    for (const auto& rc : raw) {
        for (const auto* side : {&rc.lhs, &rc.rhs})
            for (const auto& [v, c] : side->terms())
                if (!declared.count(v))
                    throw StructuralError("constraint references undeclared variable: " + v);
        switch (rc.rel) {
            case RawRel::Le: loop.body.rows.push_back(geq0(rc.rhs - rc.lhs)); break;
            case RawRel::Ge: loop.body.rows.push_back(geq0(rc.lhs - rc.rhs)); break;
            case RawRel::Eq: loop.body.rows.push_back(eq0(rc.lhs - rc.rhs)); break;
            case RawRel::Lt:
            case RawRel::Gt:
                throw PreconditionError(
                    "strict relation in a loop body; bodies are non-strict conjunctions");
        }
    }
    loop.validate();
    return loop;
}

SlcLoop affine_lift(const SlcLoop& loop) {
    loop.validate();
    const std::set<VarId> taken(loop.body.vars.begin(), loop.body.vars.end());
    VarId fresh = "$u";
    for (int i = 1; taken.count(fresh) || taken.count(primed(fresh)); ++i)
        fresh = "$u" + std::to_string(i);

    SlcLoop lifted = loop;
    lifted.vars.push_back(fresh);
    lifted.primed_vars.push_back(primed(fresh));
    // Keep the body variable order in sync: vars then primed copies.
    lifted.body.vars = lifted.vars;
    lifted.body.vars.insert(lifted.body.vars.end(), lifted.primed_vars.begin(),
                            lifted.primed_vars.end());
    lifted.body.rows.push_back(eq0(LinExpr::var(fresh) - LinExpr(Rational(1))));
    lifted.body.rows.push_back(eq0(LinExpr::var(primed(fresh)) - LinExpr(Rational(1))));
    lifted.validate();
    return lifted;
}

bool body_satisfiable(const SlcLoop& loop) {
    loop.validate();
    return lp_solve(loop.body).feasible();
}

}  // namespace elrf
