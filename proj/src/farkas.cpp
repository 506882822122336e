#include "elrf/farkas.hpp"

#include <algorithm>
#include <set>

#include "elrf/errors.hpp"

namespace elrf {

ParamLin ParamLin::concrete(const LinExpr& e) {
    ParamLin p;
    for (const auto& [v, c] : e.terms()) p.coeffs.emplace(v, LinExpr(c));
    p.offset = LinExpr(e.constant());
    return p;
}

LinExpr ParamLin::coeff(const VarId& v) const {
    const auto it = coeffs.find(v);
    return it == coeffs.end() ? LinExpr() : it->second;
}

VarId rho_param(const VarId& loop_var) { return "$a_" + loop_var; }
VarId inc_param(const VarId& loop_var) { return "$b_" + loop_var; }
VarId threshold_param() { return "$k"; }

DualSystem farkas_dual(const std::vector<VarId>& universal_vars,
                       const std::vector<std::pair<ParamLin, Rel>>& premise,
                       const ParamLin& conclusion, const std::vector<VarId>& params,
                       const std::string& multiplier_prefix) {
    DualSystem dual;
    dual.params = params;
    const std::set<VarId> param_set(params.begin(), params.end());

    // Equality premise rows become two opposed inequality rows, each with its
    // own nonnegative multiplier; multipliers are numbered by expanded order.
    for (const auto& [row, rel] : premise) {
        if (rel == Rel::Gt0)
            throw PreconditionError("strict premise row is outside this duality");
        dual.premise_rows.push_back(row);
        if (rel == Rel::Eq0) {
            ParamLin neg;
            for (const auto& [v, e] : row.coeffs) neg.coeffs.emplace(v, -e);
            neg.offset = -row.offset;
            dual.premise_rows.push_back(std::move(neg));
        }
    }
    for (std::size_t i = 0; i < dual.premise_rows.size(); ++i)
        dual.multipliers.push_back(multiplier_prefix + std::to_string(i + 1));

    // lambda_i * (parametric entry) introduces one placeholder per
    // (multiplier, parameter) pair; concrete parts stay linear in lambda_i.
    std::map<std::pair<VarId, VarId>, VarId> product_ids;
    auto scaled_by_multiplier = [&](const VarId& lambda, const LinExpr& entry) {
        LinExpr out;
        if (!entry.constant().is_zero()) out.add_term(lambda, entry.constant());
        for (const auto& [p, c] : entry.terms()) {
            if (!param_set.count(p))
                throw StructuralError("premise entry references non-parameter variable: " + p);
            const auto key = std::make_pair(lambda, p);
            auto it = product_ids.find(key);
            if (it == product_ids.end()) {
                VarId prod = lambda + "*" + p;
                dual.products.push_back(ProductDef{prod, lambda, p});
                it = product_ids.emplace(key, std::move(prod)).first;
            }
            out.add_term(it->second, c);
        }
        return out;
    };

    // One coefficient-matching equality per universal variable:
    //   conclusion_coeff_j - sum_i lambda_i * premise_coeff_ij = 0.
    std::vector<Constraint> rows;
    for (const auto& u : universal_vars) {
        LinExpr e = conclusion.coeff(u);
        for (std::size_t i = 0; i < dual.premise_rows.size(); ++i)
            e -= scaled_by_multiplier(dual.multipliers[i], dual.premise_rows[i].coeff(u));
        rows.push_back(eq0(std::move(e)));
    }
    // Offset row: d - sum_i lambda_i * b_i >= 0.
    LinExpr off = conclusion.offset;
    for (std::size_t i = 0; i < dual.premise_rows.size(); ++i)
        off -= scaled_by_multiplier(dual.multipliers[i], dual.premise_rows[i].offset);
    rows.push_back(geq0(std::move(off)));
    for (const auto& lambda : dual.multipliers) rows.push_back(geq0(LinExpr::var(lambda)));

    // System variables: multipliers, then parameters that occur linearly
    // (conclusion parameters), then product placeholders.
    dual.system.vars = dual.multipliers;
    std::set<VarId> present;
    for (const auto& row : rows)
        for (const auto& [v, c] : row.expr.terms()) present.insert(v);
    for (const auto& p : params)
        if (present.count(p)) dual.system.vars.push_back(p);
    for (const auto& pd : dual.products) dual.system.vars.push_back(pd.product);
    dual.system.rows = std::move(rows);
    dual.system.validate();
    return dual;
}

DualSystem farkas_dual(const Polyhedron& premise, const ParamLin& conclusion,
                       const std::vector<VarId>& params,
                       const std::string& multiplier_prefix) {
    premise.validate();
    std::vector<std::pair<ParamLin, Rel>> rows;
    rows.reserve(premise.rows.size());
    for (const auto& row : premise.rows)
        rows.emplace_back(ParamLin::concrete(row.expr), row.rel);
    return farkas_dual(premise.vars, rows, conclusion, params, multiplier_prefix);
}

DecPos build_dec_pos(const SlcLoop& loop, const std::optional<ThresholdPremise>& extra) {
    loop.validate();
    DecPos out;
    for (const auto& v : loop.vars) out.rho_params.push_back(rho_param(v));

    std::vector<std::pair<ParamLin, Rel>> premise;
    for (const auto& row : loop.body.rows)
        premise.emplace_back(ParamLin::concrete(row.expr), row.rel);
    std::vector<VarId> params = out.rho_params;
    if (extra) {
        // The row f(x) - k >= 0. Its offset is the parameter -k; with f
        // parametric its coefficients are the inc_param variables.
        ParamLin row;
        if (extra->fixed_f) {
            if (!extra->fixed_f->is_linear())
                throw PreconditionError("threshold premise needs a linear f");
            for (const auto& v : loop.vars) {
                const Rational c = extra->fixed_f->coeff(v);
                if (!c.is_zero()) row.coeffs.emplace(v, LinExpr(c));
            }
        } else {
            for (const auto& v : loop.vars) {
                params.push_back(inc_param(v));
                row.coeffs.emplace(v, LinExpr::var(inc_param(v)));
            }
        }
        params.push_back(threshold_param());
        row.offset = -LinExpr::var(threshold_param());
        premise.emplace_back(std::move(row), Rel::Geq0);
    }

    // DEC: body (and threshold row) implies rho(x) - rho(x') - 1 >= 0.
    ParamLin dec_conclusion;
    for (std::size_t i = 0; i < loop.vars.size(); ++i) {
        dec_conclusion.coeffs.emplace(loop.vars[i], LinExpr::var(out.rho_params[i]));
        dec_conclusion.coeffs.emplace(loop.primed_vars[i],
                                      -LinExpr::var(out.rho_params[i]));
    }
    dec_conclusion.offset = LinExpr(Rational(-1));
    out.dec = farkas_dual(loop.body.vars, premise, dec_conclusion, params, "$l");

    // POS: the same premise implies rho(x) >= 0.
    ParamLin pos_conclusion;
    for (std::size_t i = 0; i < loop.vars.size(); ++i)
        pos_conclusion.coeffs.emplace(loop.vars[i], LinExpr::var(out.rho_params[i]));
    out.pos = farkas_dual(loop.body.vars, premise, pos_conclusion, params, "$lp");

    if (extra) {
        out.dec.extra_multiplier = out.dec.multipliers.back();
        out.pos.extra_multiplier = out.pos.multipliers.back();
    }
    return out;
}

LinearizedPair linearize(const DualSystem& dual) {
    if (dual.products.empty())
        throw StructuralError("linearize: dual system has no threshold products");
    const VarId lambda = dual.products.front().multiplier;
    for (const auto& pd : dual.products)
        if (pd.multiplier != lambda)
            throw StructuralError("linearize: products attached to more than one multiplier");
    if (dual.extra_multiplier && *dual.extra_multiplier != lambda)
        throw StructuralError("linearize: products not on the threshold multiplier");

    LinearizedPair pair;
    pair.lambda_var = lambda;
    for (const auto& pd : dual.products) {
        if (pd.param == threshold_param())
            pair.threshold_product = pd.product;
        else if (pd.param.rfind("$b_", 0) == 0)
            pair.f_products.emplace(pd.param.substr(3), pd.product);
        else
            throw StructuralError("linearize: unexpected product parameter " + pd.param);
    }
    if (pair.threshold_product.empty())
        throw StructuralError("linearize: no k product on the threshold multiplier");

    std::set<VarId> zeroed = {lambda};
    for (const auto& pd : dual.products) zeroed.insert(pd.product);

    // Case 1: lambda and every product pinned to 0, then dropped.
    Assignment zeros;
    for (const auto& v : zeroed) zeros[v] = Rational(0);
    pair.case1.vars.clear();
    for (const auto& v : dual.system.vars)
        if (!zeroed.count(v)) pair.case1.vars.push_back(v);
    for (const auto& row : dual.system.rows) {
        Constraint c{row.expr.substitute_values(zeros), row.rel};
        if (c.trivially_true()) continue;
        pair.case1.rows.push_back(std::move(c));
    }

    // Case 2: lambda > 0, products kept as free variables.
    pair.case2 = dual.system;
    for (auto& row : pair.case2.rows) {
        if (row.rel == Rel::Geq0 && row.expr == LinExpr::var(lambda)) {
            row.rel = Rel::Gt0;
            return pair;
        }
    }
    pair.case2.rows.push_back(gt0(LinExpr::var(lambda)));
    return pair;
}

Polyhedron instantiate_products(const DualSystem& dual,
                                const std::map<VarId, Rational>& param_values) {
    Polyhedron out = dual.system;
    std::set<VarId> dropped;
    for (const auto& pd : dual.products) {
        const auto it = param_values.find(pd.param);
        if (it == param_values.end())
            throw StructuralError("instantiate_products: missing value for " + pd.param);
        const LinExpr replacement = it->second * LinExpr::var(pd.multiplier);
        for (auto& row : out.rows) row.expr = row.expr.substitute(pd.product, replacement);
        dropped.insert(pd.product);
    }
    std::vector<VarId> kept;
    for (const auto& v : out.vars)
        if (!dropped.count(v)) kept.push_back(v);
    out.vars = std::move(kept);
    return out;
}

}  // namespace elrf
