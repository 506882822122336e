#include "elrf/detect.hpp"

#include <algorithm>
#include <set>

#include "elrf/errors.hpp"
#include "elrf/lp.hpp"
#include "elrf/verify.hpp"

namespace elrf {

namespace {

Certificate trivially_terminating(const SlcLoop& loop, DetectAlgo algo) {
    Certificate c;
    c.kind = CertKind::TriviallyTerminating;
    c.loop_vars = loop.vars;
    c.algo = algo;
    return c;
}

Certificate not_found(const SlcLoop& loop, DetectAlgo algo,
                      std::vector<std::string> diagnostics = {}) {
    Certificate c;
    c.kind = CertKind::NotFound;
    c.loop_vars = loop.vars;
    c.algo = algo;
    c.diagnostics = std::move(diagnostics);
    return c;
}

// Canonical witness: pin the strict multipliers via the shared slack, then
// minimize the sum of |rho coefficient| surrogates, then the sum over every
// remaining variable. Deterministic pivoting makes the result reproducible.
Assignment canonical_witness(const Polyhedron& case_system,
                             const std::vector<VarId>& rho_params) {
    Polyhedron aug = case_system;
    std::map<VarId, VarId> surrogate;
    for (const auto& v : case_system.vars) {
        const VarId w = "$w_" + v;
        surrogate.emplace(v, w);
        aug.vars.push_back(w);
        aug.rows.push_back(geq0(LinExpr::var(w) - LinExpr::var(v)));
        aug.rows.push_back(geq0(LinExpr::var(w) + LinExpr::var(v)));
    }
    LinExpr rho_size;
    for (const auto& a : rho_params)
        if (surrogate.count(a)) rho_size += LinExpr::var(surrogate.at(a));
    LinExpr total_size;
    for (const auto& [v, w] : surrogate) total_size += LinExpr::var(w);

    Assignment point = lexicographic_opt(
        aug, {{rho_size, LpSense::Minimize}, {total_size, LpSense::Minimize}});
    for (const auto& [v, w] : surrogate) point.erase(w);
    return point;
}

// Reads the rho coefficients out of a witness and clears denominators by the
// lcm (a positive integer, so the decrease-by-1 condition is preserved).
CandidateFn rho_from_witness(const SlcLoop& loop, const Assignment& sol) {
    CandidateFn rho;
    mpz_class den_lcm = 1;
    for (const auto& v : loop.vars) {
        const auto it = sol.find(rho_param(v));
        if (it == sol.end()) continue;
        mpz_class l;
        mpz_lcm(l.get_mpz_t(), den_lcm.get_mpz_t(), it->second.denominator().get_mpz_t());
        den_lcm = l;
    }
    const Rational scale{den_lcm};
    for (const auto& v : loop.vars) {
        const auto it = sol.find(rho_param(v));
        if (it == sol.end()) continue;
        const Rational c = it->second * scale;
        if (!c.is_zero()) rho.coeffs.emplace(v, c);
    }
    return rho;
}

CandidateFn f_from_products(const std::vector<VarId>& loop_vars, const Assignment& sol,
                            const std::map<VarId, VarId>& products, const VarId& lambda) {
    const Rational l = sol.at(lambda);
    if (l.sign() <= 0) throw Error("internal: case-2 multiplier is not positive");
    CandidateFn f;
    for (const auto& v : loop_vars) {
        const auto it = products.find(v);
        if (it == products.end()) continue;
        const Rational c = sol.at(it->second) / l;
        if (!c.is_zero()) f.coeffs.emplace(v, c);
    }
    return f;
}

// Rows expressing p/lambda ∈ INC, homogenized by the strictly positive
// multiplier: m·b + d ⋈ 0 becomes m·p + d·lambda ⋈ 0.
std::vector<Constraint> homogenized_inc(const IncSpace& inc,
                                        const std::map<VarId, VarId>& products,
                                        const VarId& lambda) {
    std::vector<Constraint> rows;
    for (const auto& row : inc.space.rows) {
        LinExpr e;
        for (const auto& [b, c] : row.expr.terms()) {
            if (b.rfind("$b_", 0) != 0)
                throw StructuralError("INC row over unexpected variable: " + b);
            e.add_term(products.at(b.substr(3)), c);
        }
        e.add_term(lambda, row.expr.constant());
        rows.push_back(Constraint{std::move(e), row.rel});
    }
    return rows;
}

struct CaseSystem {
    CaseTag tag;
    Polyhedron system;
    bool dec2 = false;
    bool pos2 = false;
};

CaseWitnessRefs make_refs(const CaseSystem& cs, const LinearizedPair& d,
                          const LinearizedPair& p) {
    CaseWitnessRefs refs;
    if (cs.dec2) {
        refs.dec_lambda = d.lambda_var;
        refs.dec_threshold_product = d.threshold_product;
        refs.dec_f_products = d.f_products;
    }
    if (cs.pos2) {
        refs.pos_lambda = p.lambda_var;
        refs.pos_threshold_product = p.threshold_product;
        refs.pos_f_products = p.f_products;
    }
    return refs;
}

}  // namespace

bool IncSpace::contains(const CandidateFn& f, const std::vector<VarId>& loop_vars) const {
    if (!f.is_linear()) return false;
    Assignment point;
    for (const auto& v : loop_vars) point[inc_param(v)] = f.coeff(v);
    return space.contains(point);
}

Certificate detect_lrf(const SlcLoop& loop) {
    loop.validate();
    if (!body_satisfiable(loop)) return trivially_terminating(loop, DetectAlgo::PlainLrf);
    const DecPos dp = build_dec_pos(loop, std::nullopt);
    const Polyhedron conjoined = conjoin(dp.dec.system, dp.pos.system);
    if (!lp_solve(conjoined).feasible()) return not_found(loop, DetectAlgo::PlainLrf);

    Certificate cert;
    cert.kind = CertKind::Lrf;
    cert.loop_vars = loop.vars;
    cert.algo = DetectAlgo::PlainLrf;
    cert.raw_solution = canonical_witness(conjoined, dp.rho_params);
    cert.rho = rho_from_witness(loop, cert.raw_solution);
    if (!verify_lrf(loop, *cert.rho))
        throw Error("internal: detected ranking function failed verification");
    return cert;
}

Polyhedron lrf_space(const SlcLoop& loop, const FmOptions& opts) {
    loop.validate();
    if (!body_satisfiable(loop)) throw PreconditionError("loop body is unsatisfiable");
    const DecPos dp = build_dec_pos(loop, std::nullopt);
    const Polyhedron conjoined = conjoin(dp.dec.system, dp.pos.system);
    std::set<VarId> eliminate(dp.dec.multipliers.begin(), dp.dec.multipliers.end());
    eliminate.insert(dp.pos.multipliers.begin(), dp.pos.multipliers.end());
    return fm_project(conjoined, eliminate, opts);
}

IncSpace inc_space(const SlcLoop& loop, const FmOptions& opts) {
    loop.validate();
    if (!body_satisfiable(loop)) throw PreconditionError("loop body is unsatisfiable");
    ParamLin conclusion;
    std::vector<VarId> params;
    for (std::size_t i = 0; i < loop.vars.size(); ++i) {
        params.push_back(inc_param(loop.vars[i]));
        conclusion.coeffs.emplace(loop.vars[i], -LinExpr::var(params.back()));
        conclusion.coeffs.emplace(loop.primed_vars[i], LinExpr::var(params.back()));
    }
    conclusion.offset = LinExpr(Rational(-1));
    const DualSystem dual = farkas_dual(loop.body, conclusion, params, "$li");
    const std::set<VarId> eliminate(dual.multipliers.begin(), dual.multipliers.end());
    IncSpace inc;
    inc.space = fm_project(dual.system, eliminate, opts);
    return inc;
}

Certificate detect_elrf_given_f(const SlcLoop& loop, const CandidateFn& f) {
    loop.validate();
    if (!body_satisfiable(loop)) return trivially_terminating(loop, DetectAlgo::GivenF);
    if (!verify_increasing(loop, f))
        throw PreconditionError(
            "f is not increasing for this loop: f(x') >= 1 + f(x) fails on some transition");

    const DecPos dp = build_dec_pos(loop, ThresholdPremise{f});
    const LinearizedPair d = linearize(dp.dec);
    const LinearizedPair p = linearize(dp.pos);
    const CaseSystem cases[] = {
        {CaseTag::Phi11, conjoin(d.case1, p.case1), false, false},
        {CaseTag::Phi12, conjoin(d.case1, p.case2), false, true},
        {CaseTag::Phi21, conjoin(d.case2, p.case1), true, false},
        {CaseTag::Phi22Relaxed, conjoin(d.case2, p.case2), true, true},
    };
    for (const auto& cs : cases) {
        if (!lp_solve(cs.system).feasible()) continue;
        Certificate cert;
        cert.kind = CertKind::Elrf;
        cert.loop_vars = loop.vars;
        cert.algo = DetectAlgo::GivenF;
        cert.case_tag = cs.tag;
        cert.case_vars = make_refs(cs, d, p);
        cert.raw_solution = canonical_witness(cs.system, dp.rho_params);
        cert.rho = rho_from_witness(loop, cert.raw_solution);
        cert.k = extract_threshold(cs.tag, cert.raw_solution, cert.case_vars);
        cert.f = {f};
        if (!verify_elrf(loop, f, *cert.rho, *cert.k))
            throw Error("internal: detected eventual ranking function failed verification");
        return cert;
    }
    return not_found(loop, DetectAlgo::GivenF);
}

Certificate detect_elrf(const SlcLoop& loop, const DetectOptions& opts) {
    loop.validate();
    if (!body_satisfiable(loop)) return trivially_terminating(loop, DetectAlgo::FullAuto);
    const IncSpace inc = inc_space(loop, opts.fm);
    const bool inc_empty = !lp_solve(inc.space).feasible();

    const DecPos dp = build_dec_pos(loop, ThresholdPremise{});
    const LinearizedPair d = linearize(dp.dec);
    const LinearizedPair p = linearize(dp.pos);

    std::vector<CaseSystem> cases;
    cases.push_back({CaseTag::Phi11, conjoin(d.case1, p.case1), false, false});
    if (!inc_empty) {
        const auto inc_dec = homogenized_inc(inc, d.f_products, d.lambda_var);
        const auto inc_pos = homogenized_inc(inc, p.f_products, p.lambda_var);
        cases.push_back(
            {CaseTag::Phi12, conjoin(conjoin(d.case1, p.case2), inc_pos), false, true});
        cases.push_back(
            {CaseTag::Phi21, conjoin(conjoin(d.case2, inc_dec), p.case1), true, false});
        cases.push_back({CaseTag::Phi22Relaxed,
                         conjoin(conjoin(conjoin(d.case2, inc_dec), p.case2), inc_pos), true,
                         true});
    }
    for (const auto& cs : cases) {
        if (!lp_solve(cs.system).feasible()) continue;
        Certificate cert;
        cert.kind = CertKind::Elrf;
        cert.loop_vars = loop.vars;
        cert.algo = DetectAlgo::FullAuto;
        cert.case_tag = cs.tag;
        cert.case_vars = make_refs(cs, d, p);
        cert.raw_solution = canonical_witness(cs.system, dp.rho_params);
        cert.rho = rho_from_witness(loop, cert.raw_solution);
        cert.k = extract_threshold(cs.tag, cert.raw_solution, cert.case_vars);
        switch (cs.tag) {
            case CaseTag::Phi11:
                // A plain ranking function; -rho is increasing and any
                // threshold works.
                cert.f = {negated(*cert.rho)};
                break;
            case CaseTag::Phi12:
                cert.f = {f_from_products(loop.vars, cert.raw_solution, p.f_products,
                                          p.lambda_var)};
                break;
            case CaseTag::Phi21:
                cert.f = {f_from_products(loop.vars, cert.raw_solution, d.f_products,
                                          d.lambda_var)};
                break;
            case CaseTag::Phi22Relaxed:
                cert.f = {f_from_products(loop.vars, cert.raw_solution, d.f_products,
                                          d.lambda_var),
                          f_from_products(loop.vars, cert.raw_solution, p.f_products,
                                          p.lambda_var)};
                break;
        }
        if (!verify_certificate(loop, cert))
            throw Error("internal: detected eventual ranking function failed verification");
        return cert;
    }
    std::vector<std::string> diagnostics;
    if (inc_empty)
        diagnostics.push_back("INC empty");
    else
        diagnostics.push_back("phi22 relaxed only");
    return not_found(loop, DetectAlgo::FullAuto, std::move(diagnostics));
}

Certificate detect_affine(const SlcLoop& loop, AffineMode mode,
                          const std::optional<CandidateFn>& f, const DetectOptions& opts) {
    loop.validate();
    if (!body_satisfiable(loop)) {
        Certificate c = trivially_terminating(
            loop, mode == AffineMode::Lrf ? DetectAlgo::PlainLrf
                                          : mode == AffineMode::ElrfGivenF
                                                ? DetectAlgo::GivenF
                                                : DetectAlgo::FullAuto);
        c.affine_lifted = true;
        return c;
    }
    const SlcLoop lifted = affine_lift(loop);
    const VarId u = lifted.vars.back();

    Certificate inner;
    switch (mode) {
        case AffineMode::Lrf:
            inner = detect_lrf(lifted);
            break;
        case AffineMode::ElrfGivenF: {
            if (!f) throw PreconditionError("affine detection with a given f needs f");
            if (!verify_increasing(loop, *f))
                throw PreconditionError(
                    "f is not increasing for this loop: f(x') >= 1 + f(x) fails on some "
                    "transition");
            inner = detect_elrf_given_f(lifted, *f);
            break;
        }
        case AffineMode::Elrf:
            inner = detect_elrf(lifted, opts);
            break;
    }

    inner.affine_lifted = true;
    inner.loop_vars = loop.vars;
    if (!inner.found() || inner.kind == CertKind::TriviallyTerminating) return inner;

    // Fold the coefficient on the pinned variable into the constant of rho;
    // for each recovered f, the pinned coefficient shifts the threshold
    // instead so that f stays linear.
    CandidateFn& rho = *inner.rho;
    const auto it = rho.coeffs.find(u);
    if (it != rho.coeffs.end()) {
        rho.constant += it->second;
        rho.coeffs.erase(it);
    }
    if (inner.k) {
        Rational folded_k = *inner.k;
        bool first = true;
        for (auto& fn : inner.f) {
            const auto uf = fn.coeffs.find(u);
            Rational shift(0);
            if (uf != fn.coeffs.end()) {
                shift = uf->second;
                fn.coeffs.erase(uf);
            }
            const Rational candidate = *inner.k - shift;
            folded_k = first ? candidate : max(folded_k, candidate);
            first = false;
        }
        inner.k = folded_k;
    }
    if (inner.kind == CertKind::Elrf) inner.kind = CertKind::EventualAffine;
    if (!verify_certificate(loop, inner))
        throw Error("internal: affine certificate failed verification");
    return inner;
}

Rational extract_threshold(CaseTag tag, const Assignment& raw_solution,
                           const CaseWitnessRefs& refs) {
    auto ratio = [&](const std::optional<VarId>& product, const std::optional<VarId>& lambda) {
        const Rational l = raw_solution.at(*lambda);
        if (l.sign() <= 0) throw Error("internal: case-2 multiplier is not positive");
        return raw_solution.at(*product) / l;
    };
    switch (tag) {
        case CaseTag::Phi11: return Rational(0);
        case CaseTag::Phi12: return ratio(refs.pos_threshold_product, refs.pos_lambda);
        case CaseTag::Phi21: return ratio(refs.dec_threshold_product, refs.dec_lambda);
        case CaseTag::Phi22Relaxed:
            return max(ratio(refs.dec_threshold_product, refs.dec_lambda),
                       ratio(refs.pos_threshold_product, refs.pos_lambda));
    }
    throw Error("internal: unknown case tag");
}

bool check_case2_reconstruction(const SlcLoop& loop, const Certificate& cert) {
    if (!cert.case_tag || cert.case_tag == CaseTag::Phi11) return true;
    const SlcLoop target = cert.affine_lifted ? affine_lift(loop) : loop;

    std::optional<ThresholdPremise> extra;
    if (cert.algo == DetectAlgo::GivenF) {
        // The given f is stored unchanged (it never mentions the lifted var).
        if (cert.f.empty()) return false;
        extra = ThresholdPremise{cert.f.front()};
    } else {
        extra = ThresholdPremise{};
    }
    const DecPos dp = build_dec_pos(target, extra);

    Assignment pinned_rho;
    for (const auto& v : target.vars) {
        const auto it = cert.raw_solution.find(rho_param(v));
        if (it != cert.raw_solution.end()) pinned_rho[rho_param(v)] = it->second;
    }

    auto side_ok = [&](const DualSystem& dual, const std::optional<VarId>& lambda,
                       const std::optional<VarId>& threshold_product,
                       const std::map<VarId, VarId>& f_products) {
        const Rational l = cert.raw_solution.at(*lambda);
        if (l.sign() <= 0) return false;
        std::map<VarId, Rational> values;
        values[threshold_param()] = cert.raw_solution.at(*threshold_product) / l;
        for (const auto& [v, prod] : f_products)
            values[inc_param(v)] = cert.raw_solution.at(prod) / l;
        Polyhedron concrete = instantiate_products(dual, values);
        for (auto& row : concrete.rows) row.expr = row.expr.substitute_values(pinned_rho);
        std::vector<VarId> kept;
        for (const auto& v : concrete.vars)
            if (!pinned_rho.count(v)) kept.push_back(v);
        concrete.vars = std::move(kept);
        return lp_solve(concrete).feasible();
    };

    bool ok = true;
    if (cert.case_vars.dec_lambda)
        ok = ok && side_ok(dp.dec, cert.case_vars.dec_lambda,
                           cert.case_vars.dec_threshold_product, cert.case_vars.dec_f_products);
    if (cert.case_vars.pos_lambda)
        ok = ok && side_ok(dp.pos, cert.case_vars.pos_lambda,
                           cert.case_vars.pos_threshold_product, cert.case_vars.pos_f_products);
    return ok;
}

}  // namespace elrf
