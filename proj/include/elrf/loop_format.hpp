#pragma once

#include <optional>
#include <string>

#include "elrf/loop.hpp"

namespace elrf {

/// Parsed loop file: the loop itself plus the optional `increasing:` and
/// `candidate:` functions.
struct LoopFile {
    SlcLoop loop;
    std::optional<CandidateFn> increasing;
    std::optional<CandidateFn> candidate;
};

/// Grammar (one item per line, '#' starts a comment):
///   vars: x, y
///   body:
///     x >= 0
///     y' <= y - 1
///   increasing: -1*y
///   candidate: 1*x + 1
/// Constraint relations are <=, >=, =; terms are q*v, q, v, v' with q a
/// rational literal like 3/2 or -2. Strict relations and double primes are
/// rejected with positions.
LoopFile parse_loop_file(const std::string& text);

std::string print_loop_file(const LoopFile& file);

/// Human constraint form with the constant moved across the relation, e.g.
/// "b1 <= -2" for the row -b1 - 2 >= 0. Reparses to the identical row.
std::string human_constraint(const Constraint& row);

}  // namespace elrf
