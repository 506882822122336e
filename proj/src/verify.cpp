#include "elrf/verify.hpp"

#include <algorithm>

#include "elrf/errors.hpp"
#include "elrf/lp.hpp"

namespace elrf {

namespace {

bool unsat_with(const SlcLoop& loop, const std::vector<Constraint>& extra) {
    return lp_solve(conjoin(loop.body, extra)).status == LpStatus::Infeasible;
}

Constraint decrease_violated(const CandidateFn& rho) {
    // 1 + rho(x') - rho(x) > 0
    return gt0(LinExpr(Rational(1)) + rho.as_primed_expr() - rho.as_expr());
}

Constraint positivity_violated(const CandidateFn& rho) {
    // -rho(x) > 0
    return gt0(-rho.as_expr());
}

Constraint above_threshold(const CandidateFn& f, const Rational& k) {
    // f(x) - k >= 0
    return geq0(f.as_expr() - LinExpr(k));
}

void check_over_loop_vars(const SlcLoop& loop, const CandidateFn& fn, const char* what) {
    for (const auto& [v, c] : fn.coeffs)
        if (std::find(loop.vars.begin(), loop.vars.end(), v) == loop.vars.end())
            throw PreconditionError(std::string(what) +
                                    " references a non-loop variable: " + v);
}

}  // namespace

bool verify_lrf(const SlcLoop& loop, const CandidateFn& rho) {
    loop.validate();
    check_over_loop_vars(loop, rho, "rho");
    return unsat_with(loop, {decrease_violated(rho)}) &&
           unsat_with(loop, {positivity_violated(rho)});
}

bool verify_increasing(const SlcLoop& loop, const CandidateFn& f) {
    loop.validate();
    check_over_loop_vars(loop, f, "f");
    if (!f.is_linear())
        throw PreconditionError(
            "increasing-function candidates must be linear: a constant offset never "
            "changes whether a function is increasing");
    // f(x) + 1 - f(x') > 0 must be impossible under the body.
    return unsat_with(loop, {gt0(f.as_expr() + LinExpr(Rational(1)) - f.as_primed_expr())});
}

bool verify_elrf_decrease(const SlcLoop& loop, const CandidateFn& f_dec,
                          const CandidateFn& rho, const Rational& k) {
    if (!verify_increasing(loop, f_dec)) throw PreconditionError("f is not increasing");
    check_over_loop_vars(loop, rho, "rho");
    return unsat_with(loop, {above_threshold(f_dec, k), decrease_violated(rho)});
}

bool verify_elrf_positivity(const SlcLoop& loop, const CandidateFn& f_pos,
                            const CandidateFn& rho, const Rational& k) {
    if (!verify_increasing(loop, f_pos)) throw PreconditionError("f is not increasing");
    check_over_loop_vars(loop, rho, "rho");
    return unsat_with(loop, {above_threshold(f_pos, k), positivity_violated(rho)});
}

bool verify_elrf(const SlcLoop& loop, const CandidateFn& f, const CandidateFn& rho,
                 const Rational& k) {
    if (!verify_increasing(loop, f)) throw PreconditionError("f is not increasing");
    check_over_loop_vars(loop, rho, "rho");
    return unsat_with(loop, {above_threshold(f, k), decrease_violated(rho)}) &&
           unsat_with(loop, {above_threshold(f, k), positivity_violated(rho)});
}

ExistentialCheck verify_elrf_existential(const SlcLoop& loop, const CandidateFn& f,
                                         const CandidateFn& rho) {
    if (!verify_increasing(loop, f)) throw PreconditionError("f is not increasing");
    check_over_loop_vars(loop, rho, "rho");
    if (!body_satisfiable(loop)) return ExistentialCheck{true, Rational(0)};

    // The case split with the conclusion coefficients fully instantiated:
    // the duals range over multipliers and the threshold products only.
    std::vector<std::pair<ParamLin, Rel>> premise;
    for (const auto& row : loop.body.rows)
        premise.emplace_back(ParamLin::concrete(row.expr), row.rel);
    ParamLin threshold_row;
    for (const auto& v : loop.vars) {
        const Rational c = f.coeff(v);
        if (!c.is_zero()) threshold_row.coeffs.emplace(v, LinExpr(c));
    }
    threshold_row.offset = -LinExpr::var(threshold_param());
    premise.emplace_back(std::move(threshold_row), Rel::Geq0);
    const std::vector<VarId> params = {threshold_param()};

    ParamLin dec_conclusion;
    for (const auto& v : loop.vars) {
        const Rational a = rho.coeff(v);
        if (!a.is_zero()) {
            dec_conclusion.coeffs.emplace(v, LinExpr(a));
            dec_conclusion.coeffs.emplace(primed(v), LinExpr(-a));
        }
    }
    dec_conclusion.offset = LinExpr(Rational(-1));
    ParamLin pos_conclusion;
    for (const auto& v : loop.vars) {
        const Rational a = rho.coeff(v);
        if (!a.is_zero()) pos_conclusion.coeffs.emplace(v, LinExpr(a));
    }
    // Affine rho: the constant cancels in the decrease conclusion and lands
    // in the positivity offset.
    pos_conclusion.offset = LinExpr(rho.constant);

    DualSystem dec = farkas_dual(loop.body.vars, premise, dec_conclusion, params, "$l");
    dec.extra_multiplier = dec.multipliers.back();
    DualSystem pos = farkas_dual(loop.body.vars, premise, pos_conclusion, params, "$lp");
    pos.extra_multiplier = pos.multipliers.back();
    const LinearizedPair d = linearize(dec);
    const LinearizedPair p = linearize(pos);

    struct Case {
        const Polyhedron* a;
        const Polyhedron* b;
        bool dec2, pos2;
    };
    const Case cases[] = {{&d.case1, &p.case1, false, false},
                          {&d.case1, &p.case2, false, true},
                          {&d.case2, &p.case1, true, false},
                          {&d.case2, &p.case2, true, true}};
    for (const auto& c : cases) {
        const Polyhedron sys = conjoin(*c.a, *c.b);
        const LpOutcome r = lp_solve(sys);
        if (!r.feasible()) continue;
        const Assignment& sol = *r.point;
        Rational k(0);
        if (c.dec2) k = max(k, sol.at(d.threshold_product) / sol.at(d.lambda_var));
        if (c.pos2) k = max(k, sol.at(p.threshold_product) / sol.at(p.lambda_var));
        return ExistentialCheck{true, std::move(k)};
    }
    return ExistentialCheck{false, std::nullopt};
}

bool verify_certificate(const SlcLoop& loop, const Certificate& cert) {
    switch (cert.kind) {
        case CertKind::TriviallyTerminating:
            return !body_satisfiable(loop);
        case CertKind::Lrf:
            return cert.rho && verify_lrf(loop, *cert.rho);
        case CertKind::Elrf:
        case CertKind::EventualAffine: {
            if (!cert.rho || !cert.k || cert.f.empty()) return false;
            if (cert.f.size() == 1) return verify_elrf(loop, cert.f[0], *cert.rho, *cert.k);
            return verify_elrf_decrease(loop, cert.f[0], *cert.rho, *cert.k) &&
                   verify_elrf_positivity(loop, cert.f[1], *cert.rho, *cert.k);
        }
        case CertKind::NotFound:
            return false;
    }
    return false;
}

}  // namespace elrf
