#pragma once

#include <optional>
#include <utility>

#include "elrf/loop.hpp"

namespace elrf {

/// Linear form over universally quantified variables whose coefficients and
/// offset are themselves linear expressions over parameters. Concrete rows
/// are the special case where every entry is a constant expression.
struct ParamLin {
    std::map<VarId, LinExpr> coeffs;
    LinExpr offset;

    static ParamLin concrete(const LinExpr& e);
    LinExpr coeff(const VarId& v) const;
};

/// Records the bilinear definition product = param * multiplier that a
/// placeholder variable stands for inside an otherwise linear dual system.
struct ProductDef {
    VarId product;
    VarId multiplier;
    VarId param;
};

/// Existential multiplier system produced by Farkas' Lemma from a universally
/// quantified implication: one nonnegative multiplier per premise row, one
/// coefficient-matching equality per universal variable, one offset row.
/// Products of a multiplier with a parameter (threshold or parametric
/// coefficients in the premise) appear through placeholder variables listed
/// in `products`, keeping `system` linear.
struct DualSystem {
    std::vector<VarId> multipliers;
    std::vector<VarId> params;
    Polyhedron system;
    std::vector<ProductDef> products;
    std::vector<ParamLin> premise_rows;           // expanded, one per multiplier
    std::optional<VarId> extra_multiplier;        // multiplier of the threshold row
};

DualSystem farkas_dual(const std::vector<VarId>& universal_vars,
                       const std::vector<std::pair<ParamLin, Rel>>& premise,
                       const ParamLin& conclusion, const std::vector<VarId>& params,
                       const std::string& multiplier_prefix = "$l");

/// Convenience overload for a concrete, non-strict premise.
DualSystem farkas_dual(const Polyhedron& premise, const ParamLin& conclusion,
                       const std::vector<VarId>& params,
                       const std::string& multiplier_prefix = "$l");

/// Deterministic parameter naming shared across detection and tests.
VarId rho_param(const VarId& loop_var);   // coefficient of rho on loop_var
VarId inc_param(const VarId& loop_var);   // coefficient of an increasing fn
VarId threshold_param();                  // the threshold k

/// The f(x) >= k premise row: f fixed, or parametric over inc_param(v).
struct ThresholdPremise {
    std::optional<CandidateFn> fixed_f;
    bool parametric() const { return !fixed_f.has_value(); }
};

struct DecPos {
    DualSystem dec;
    DualSystem pos;
    std::vector<VarId> rho_params;   // one per loop variable, in loop order
};

/// DEC encodes rho(x) >= 1 + rho(x') and POS encodes rho(x) >= 0 under the
/// loop body, optionally strengthened by the premise row f(x) >= k. Without
/// the extra row this degenerates to the plain linear-ranking dual systems.
DecPos build_dec_pos(const SlcLoop& loop, const std::optional<ThresholdPremise>& extra);

/// The two branches of the threshold-multiplier case split: case1 pins the
/// multiplier and all its products to zero; case2 adds multiplier > 0 and
/// keeps the products as free variables (k and the parametric coefficients
/// are recovered as product/multiplier).
struct LinearizedPair {
    Polyhedron case1;
    Polyhedron case2;
    VarId lambda_var;
    VarId threshold_product;                 // P, standing for k * lambda
    std::map<VarId, VarId> f_products;       // loop var -> product for b_v * lambda
};

LinearizedPair linearize(const DualSystem& dual);

/// The dual system at concrete parameter values: every product placeholder is
/// replaced by value(param) * multiplier, which is linear again. This is the
/// un-linearized form used to check witness reconstruction.
Polyhedron instantiate_products(const DualSystem& dual,
                                const std::map<VarId, Rational>& param_values);

}  // namespace elrf
