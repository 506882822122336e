#pragma once

#include <cstddef>
#include <set>

#include "elrf/polyhedron.hpp"

namespace elrf {

struct FmOptions {
    /// Hard cap on intermediate row count; exceeding it raises
    /// ResourceLimitError rather than silently degrading.
    std::size_t row_cap = 10'000;
};

/// Equivalent system with no row implied by the others. An infeasible input
/// collapses to the single row -1 >= 0.
Polyhedron remove_redundant(const Polyhedron& system);

/// Exact projection onto vars \ eliminate. Equalities are used for Gaussian
/// substitution before inequality elimination; a combined inequality is strict
/// iff either parent is strict; redundant rows are removed after each step.
Polyhedron fm_project(const Polyhedron& system, const std::set<VarId>& eliminate,
                      const FmOptions& opts = {});

}  // namespace elrf
