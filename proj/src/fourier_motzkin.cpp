#include "elrf/fourier_motzkin.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <utility>

#include "elrf/errors.hpp"
#include "elrf/lp.hpp"

namespace elrf {

namespace {

Polyhedron canonical_false(std::vector<VarId> vars) {
    Polyhedron out;
    out.vars = std::move(vars);
    out.rows.push_back(geq0(LinExpr(Rational(-1))));
    return out;
}

// Cheap pre-filters: drop trivially true rows, deduplicate, keep only the
// tightest row among rows sharing a normalized coefficient vector, and merge
// opposed inequality pairs into equalities. Exact but incomplete; the LP pass
// below finishes the job.
std::vector<Constraint> syntactic_reduce(const std::vector<Constraint>& rows, bool* false_row) {
    *false_row = false;
    // Key: relation class (equality vs inequality) + normalized terms.
    std::map<std::pair<bool, std::map<VarId, Rational>>, Constraint> tightest;
    std::vector<std::pair<bool, std::map<VarId, Rational>>> order;
    for (const auto& row : rows) {
        if (row.trivially_true()) continue;
        if (row.trivially_false()) {
            *false_row = true;
            return {};
        }
        const Constraint n = row.normalized();
        const auto key = std::make_pair(n.rel == Rel::Eq0, n.expr.terms());
        auto it = tightest.find(key);
        if (it == tightest.end()) {
            tightest.emplace(key, n);
            order.push_back(key);
            continue;
        }
        Constraint& kept = it->second;
        if (n.rel == Rel::Eq0) {
            // Two equalities with equal slopes but different constants conflict.
            if (kept.expr.constant() != n.expr.constant()) {
                *false_row = true;
                return {};
            }
        } else {
            // Same slope: the smaller constant is tighter; on ties > beats >=.
            const Rational kc = kept.expr.constant();
            const Rational nc = n.expr.constant();
            if (nc < kc || (nc == kc && n.rel == Rel::Gt0)) kept = n;
        }
    }
    // Merge e >= 0 with -e >= 0 into e = 0 (and detect e > 0 with -e >= 0).
    std::vector<Constraint> out;
    std::map<std::map<VarId, Rational>, std::size_t> emitted_ineq;
    for (const auto& key : order) {
        auto it = tightest.find(key);
        if (it == tightest.end()) continue;
        Constraint c = it->second;
        tightest.erase(it);
        if (c.rel == Rel::Eq0) {
            out.push_back(std::move(c));
            continue;
        }
        std::map<VarId, Rational> negated;
        for (const auto& [v, q] : c.expr.terms()) negated.emplace(v, -q);
        const auto op = emitted_ineq.find(negated);
        if (op != emitted_ineq.end() && out[op->second].rel != Rel::Eq0) {
            // other: e + a >= 0 and c: -e + b >= 0 bound e to [-a, b].
            Constraint& other = out[op->second];
            const Rational a = other.expr.constant();
            const Rational b = c.expr.constant();
            if (-a > b || (-a == b && (other.rel == Rel::Gt0 || c.rel == Rel::Gt0))) {
                *false_row = true;
                return {};
            }
            if (-a == b) {
                other = eq0(other.expr).normalized();
                continue;
            }
        }
        emitted_ineq.emplace(c.expr.terms(), out.size());
        out.push_back(std::move(c));
    }
    return out;
}

std::size_t count_sign(const std::vector<Constraint>& rows, const VarId& v, int sign) {
    std::size_t n = 0;
    for (const auto& row : rows)
        if (row.rel != Rel::Eq0 && row.expr.coeff(v).sign() == sign) ++n;
    return n;
}

}  // namespace

Polyhedron remove_redundant(const Polyhedron& system) {
    system.validate();
    bool false_row = false;
    std::vector<Constraint> rows = syntactic_reduce(system.rows, &false_row);
    if (false_row) return canonical_false(system.vars);

    Polyhedron current;
    current.vars = system.vars;
    current.rows = std::move(rows);
    if (lp_solve(current).status == LpStatus::Infeasible) return canonical_false(system.vars);

    // Drop any row implied by the remaining ones. Keeping a row only makes
    // later implication checks easier, so one forward pass is enough.
    for (std::size_t i = 0; i < current.rows.size();) {
        Polyhedron rest;
        rest.vars = current.vars;
        for (std::size_t j = 0; j < current.rows.size(); ++j)
            if (j != i) rest.rows.push_back(current.rows[j]);
        if (entails(rest, current.rows[i]))
            current.rows.erase(current.rows.begin() + static_cast<std::ptrdiff_t>(i));
        else
            ++i;
    }
    return current;
}

Polyhedron fm_project(const Polyhedron& system, const std::set<VarId>& eliminate,
                      const FmOptions& opts) {
    system.validate();
    for (const auto& v : eliminate)
        if (!system.has_var(v))
            throw StructuralError("cannot eliminate undeclared variable: " + v);

    Polyhedron current = remove_redundant(system);
    std::set<VarId> remaining = eliminate;
    while (!remaining.empty()) {
        // Prefer a variable pinned by an equality (substitution is cheap);
        // otherwise minimize the pos*neg combination fan-out.
        VarId chosen;
        bool have_eq = false;
        std::size_t best_cost = 0;
        bool first = true;
        for (const auto& v : system.vars) {
            if (!remaining.count(v)) continue;
            bool in_eq = false;
            for (const auto& row : current.rows)
                if (row.rel == Rel::Eq0 && !row.expr.coeff(v).is_zero()) {
                    in_eq = true;
                    break;
                }
            if (in_eq && !have_eq) {
                chosen = v;
                have_eq = true;
                continue;
            }
            if (have_eq) continue;
            const std::size_t cost =
                count_sign(current.rows, v, 1) * count_sign(current.rows, v, -1);
            if (first || cost < best_cost) {
                chosen = v;
                best_cost = cost;
                first = false;
            }
        }
        remaining.erase(chosen);

        std::vector<Constraint> next;
        bool substituted = false;
        // Gaussian substitution from the first equality containing the variable.
        for (std::size_t e = 0; e < current.rows.size() && !substituted; ++e) {
            const Constraint& eq = current.rows[e];
            if (eq.rel != Rel::Eq0) continue;
            const Rational alpha = eq.expr.coeff(chosen);
            if (alpha.is_zero()) continue;
            // chosen = -(eq.expr - alpha*chosen) / alpha
            LinExpr solved = eq.expr;
            solved.add_term(chosen, -alpha);
            solved *= Rational(-1) / alpha;
            for (std::size_t j = 0; j < current.rows.size(); ++j) {
                if (j == e) continue;
                Constraint row = current.rows[j];
                row.expr = row.expr.substitute(chosen, solved);
                next.push_back(std::move(row));
            }
            substituted = true;
        }
        if (!substituted) {
            std::vector<const Constraint*> lower, upper, rest;
            for (const auto& row : current.rows) {
                const int s = row.expr.coeff(chosen).sign();
                if (s > 0)
                    lower.push_back(&row);
                else if (s < 0)
                    upper.push_back(&row);
                else
                    rest.push_back(&row);
            }
            if (lower.size() * upper.size() + rest.size() > opts.row_cap)
                throw ResourceLimitError("Fourier-Motzkin row cap exceeded while eliminating " +
                                         chosen);
            for (const auto* r : rest) next.push_back(*r);
            for (const auto* lo : lower) {
                for (const auto* up : upper) {
                    const Rational a = lo->expr.coeff(chosen);   // > 0
                    const Rational b = up->expr.coeff(chosen);   // < 0
                    LinExpr combined = (-b) * lo->expr + a * up->expr;
                    const Rel rel = (lo->rel == Rel::Gt0 || up->rel == Rel::Gt0) ? Rel::Gt0
                                                                                 : Rel::Geq0;
                    next.push_back(Constraint{std::move(combined), rel});
                }
            }
        }
        current.rows = std::move(next);
        if (current.rows.size() > opts.row_cap)
            throw ResourceLimitError("Fourier-Motzkin row cap exceeded");
        std::vector<VarId> kept;
        for (const auto& v : current.vars)
            if (v != chosen) kept.push_back(v);
        current.vars = std::move(kept);
        current = remove_redundant(current);
    }
    return current;
}

}  // namespace elrf
