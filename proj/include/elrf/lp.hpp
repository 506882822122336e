#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "elrf/polyhedron.hpp"

namespace elrf {

enum class LpStatus { Feasible, Infeasible, Unbounded, Optimal };
enum class LpSense { Maximize, Minimize };

struct LpOutcome {
    LpStatus status = LpStatus::Infeasible;
    std::optional<Assignment> point;
    std::optional<Rational> objective_value;

    bool feasible() const {
        return status == LpStatus::Feasible || status == LpStatus::Optimal;
    }
};

/// Exact feasibility over mixed strict/non-strict constraints. Strict rows are
/// honored exactly: every e > 0 is rewritten to e >= s with one shared fresh
/// slack s, 0 <= s <= 1 is added, and s is maximized; the system is feasible
/// iff the optimum is positive.
LpOutcome lp_solve(const Polyhedron& system);

/// Exact optimization. With strict rows present, feasibility is decided first
/// as above, the objective is optimized over the closure, and the returned
/// point is adjusted to satisfy the strict rows; if the optimum is attained
/// only on a strict boundary (supremum not attained), throws Error rather
/// than returning a point that violates a strict row.
LpOutcome lp_solve(const Polyhedron& system, const LinExpr& objective, LpSense sense);

/// system ⟹ row, decided by infeasibility of system ∧ ¬row.
bool entails(const Polyhedron& system, const Constraint& row);

/// Mutual inclusion over the union of the two variable sets.
bool equivalent(const Polyhedron& a, const Polyhedron& b);

/// Optimizes the objectives in order, pinning each stage's optimum before the
/// next, and returns a point of the final stage. Strict rows are pinned via
/// the shared-slack construction as a zeroth stage. Throws Error if the system
/// is infeasible or any stage is unbounded.
Assignment lexicographic_opt(const Polyhedron& system,
                             const std::vector<std::pair<LinExpr, LpSense>>& objectives);

}  // namespace elrf
