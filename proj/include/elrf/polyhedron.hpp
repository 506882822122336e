#pragma once

#include <string>
#include <vector>

#include "elrf/linexpr.hpp"

namespace elrf {

enum class Rel { Geq0, Gt0, Eq0 };

/// Canonically oriented constraint: expr >= 0, expr > 0, or expr = 0.
struct Constraint {
    LinExpr expr;
    Rel rel = Rel::Geq0;

    bool satisfied_by(const Assignment& point) const;

    /// Scales so coefficients are integers with content 1; orients equalities
    /// so the first nonzero coefficient is positive. Used for deduplication
    /// and structural comparison, never for solving.
    Constraint normalized() const;

    /// True for a variable-free row that holds (resp. fails) for every point.
    bool trivially_true() const;
    bool trivially_false() const;

    std::string str() const;

    bool operator==(const Constraint& o) const { return rel == o.rel && expr == o.expr; }
    bool operator<(const Constraint& o) const;
};

Constraint geq0(LinExpr e);
Constraint gt0(LinExpr e);
Constraint eq0(LinExpr e);

/// Finite conjunction of constraints over an ordered variable set.
struct Polyhedron {
    std::vector<VarId> vars;
    std::vector<Constraint> rows;

    /// Throws StructuralError if a row references an undeclared variable.
    void validate() const;

    bool has_var(const VarId& v) const;
    bool has_strict_rows() const;

    /// Exact membership; the point must assign every declared variable.
    bool contains(const Assignment& point) const;

    /// Normalized rows in a deterministic order, for structural equality.
    std::vector<Constraint> normalized_rows_sorted() const;

    std::string str() const;
};

/// Conjunction with variable lists merged (left order first, new vars appended).
Polyhedron conjoin(const Polyhedron& a, const Polyhedron& b);

/// Conjunction with extra rows over the same variable set.
Polyhedron conjoin(Polyhedron a, const std::vector<Constraint>& extra);

}  // namespace elrf
