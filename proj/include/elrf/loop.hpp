#pragma once

#include <optional>

#include "elrf/polyhedron.hpp"

namespace elrf {

/// The primed copy of a loop variable: x -> x'.
VarId primed(const VarId& v);

/// Single-path linear constraint loop: n variables x, their primed copies x',
/// and a body polyhedron over both. Bodies are non-strict (Geq0/Eq0 only).
struct SlcLoop {
    std::vector<VarId> vars;
    std::vector<VarId> primed_vars;
    Polyhedron body;

    void validate() const;
};

/// Candidate linear function over the loop variables; a nonzero constant makes
/// it affine. Carries the vectors written a and b throughout detection.
struct CandidateFn {
    std::map<VarId, Rational> coeffs;
    Rational constant;

    Rational coeff(const VarId& v) const;
    Rational eval(const Assignment& point) const;
    LinExpr as_expr() const;
    /// Same function over the primed copies of its variables.
    LinExpr as_primed_expr() const;
    bool is_linear() const { return constant.is_zero(); }

    std::string str(const std::vector<VarId>& var_order) const;

    bool operator==(const CandidateFn& o) const {
        return coeffs == o.coeffs && constant == o.constant;
    }
};

CandidateFn negated(const CandidateFn& f);

enum class RawRel { Le, Ge, Eq, Lt, Gt };

struct RawConstraint {
    LinExpr lhs;
    RawRel rel = RawRel::Le;
    LinExpr rhs;
};

/// Rewrites user constraints to canonical expr >= 0 / expr = 0 rows over the
/// declared variables and their primed copies. Strict relations are rejected:
/// loop bodies are non-strict in this model.
SlcLoop canonicalize(const std::vector<RawConstraint>& raw, const std::vector<VarId>& vars);

/// Loop over n+1 variables: a fresh variable pinned to 1 in both the current
/// and next state, appended last. An eventual linear ranking function of the
/// lifted loop corresponds to an eventual affine one of the original.
SlcLoop affine_lift(const SlcLoop& loop);

bool body_satisfiable(const SlcLoop& loop);

}  // namespace elrf
