#include "elrf/lp.hpp"

#include <algorithm>
#include <cstddef>

#include "elrf/errors.hpp"

namespace elrf {

namespace {

const VarId kSlackVar = "$slack";

// Dense exact-rational simplex in standard form: min c·y, A y = b, y >= 0,
// with Bland's rule in both phases, so termination is guaranteed and no
// numerical tolerance exists anywhere.
class Simplex {
public:
    Simplex(std::vector<std::vector<Rational>> a, std::vector<Rational> b)
        : a_(std::move(a)), b_(std::move(b)), n_(a_.empty() ? 0 : a_[0].size()) {}

    // Returns false if infeasible.
    bool phase1() {
        const std::size_t m = a_.size();
        artificial_start_ = n_;
        for (std::size_t i = 0; i < m; ++i) {
            if (b_[i].sign() < 0) {
                for (auto& x : a_[i]) x = -x;
                b_[i] = -b_[i];
            }
        }
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t k = 0; k < m; ++k) a_[k].push_back(Rational(i == k ? 1 : 0));
            basis_.push_back(n_ + i);
        }
        n_ += m;
        std::vector<Rational> cost(n_);
        for (std::size_t j = artificial_start_; j < n_; ++j) cost[j] = Rational(1);
        if (!minimize(cost)) throw Error("phase 1 unbounded");  // cannot happen: cost >= 0
        if (objective_value(cost).sign() > 0) return false;
        drive_out_artificials();
        return true;
    }

    // Returns false on unbounded.
    bool phase2(std::vector<Rational> cost) {
        cost.resize(n_, Rational(0));
        return minimize(cost);
    }

    std::vector<Rational> solution() const {
        std::vector<Rational> x(n_);
        for (std::size_t i = 0; i < basis_.size(); ++i) x[basis_[i]] = b_[i];
        return x;
    }

private:
    Rational objective_value(const std::vector<Rational>& cost) const {
        Rational v(0);
        for (std::size_t i = 0; i < basis_.size(); ++i) v += cost[basis_[i]] * b_[i];
        return v;
    }

    Rational reduced_cost(const std::vector<Rational>& cost, std::size_t j) const {
        Rational r = cost[j];
        for (std::size_t i = 0; i < basis_.size(); ++i) r -= cost[basis_[i]] * a_[i][j];
        return r;
    }

    void pivot(std::size_t row, std::size_t col) {
        const Rational p = a_[row][col];
        for (auto& x : a_[row]) x /= p;
        b_[row] /= p;
        for (std::size_t i = 0; i < a_.size(); ++i) {
            if (i == row || a_[i][col].is_zero()) continue;
            const Rational f = a_[i][col];
            for (std::size_t j = 0; j < n_; ++j) a_[i][j] -= f * a_[row][j];
            b_[i] -= f * b_[row];
        }
        basis_[row] = col;
    }

    bool minimize(const std::vector<Rational>& cost) {
        for (;;) {
            // Bland: entering column = smallest index with negative reduced cost.
            std::size_t enter = n_;
            for (std::size_t j = 0; j < n_; ++j) {
                if (reduced_cost(cost, j).sign() < 0) {
                    enter = j;
                    break;
                }
            }
            if (enter == n_) return true;
            // Ratio test; ties broken by smallest basic variable index.
            std::size_t leave = a_.size();
            Rational best(0);
            for (std::size_t i = 0; i < a_.size(); ++i) {
                if (a_[i][enter].sign() <= 0) continue;
                const Rational ratio = b_[i] / a_[i][enter];
                if (leave == a_.size() || ratio < best ||
                    (ratio == best && basis_[i] < basis_[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == a_.size()) return false;
            pivot(leave, enter);
        }
    }

    void drive_out_artificials() {
        for (std::size_t i = 0; i < basis_.size();) {
            if (basis_[i] < artificial_start_) {
                ++i;
                continue;
            }
            std::size_t col = artificial_start_;
            for (std::size_t j = 0; j < artificial_start_; ++j) {
                if (!a_[i][j].is_zero()) {
                    col = j;
                    break;
                }
            }
            if (col == artificial_start_) {
                // Redundant row; drop it.
                a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(i));
                b_.erase(b_.begin() + static_cast<std::ptrdiff_t>(i));
                basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
            } else {
                pivot(i, col);  // b_[i] is 0 here, so feasibility is preserved
                ++i;
            }
        }
        for (auto& row : a_) row.resize(artificial_start_);
        n_ = artificial_start_;
    }

    std::vector<std::vector<Rational>> a_;
    std::vector<Rational> b_;
    std::size_t n_;
    std::size_t artificial_start_ = 0;
    std::vector<std::size_t> basis_;
};

// Column layout for a polyhedron over free variables: each variable v maps to
// a pair v+ - v-, followed by one surplus column per inequality row.
struct ColumnMap {
    std::vector<VarId> vars;
    std::size_t surplus_start = 0;

    std::size_t pos(std::size_t var_index) const { return 2 * var_index; }
    std::size_t neg(std::size_t var_index) const { return 2 * var_index + 1; }
};

struct ClosedLp {
    std::vector<std::vector<Rational>> a;
    std::vector<Rational> b;
    ColumnMap cols;
};

// All rows must be Geq0 or Eq0.
ClosedLp build_closed(const Polyhedron& sys) {
    ClosedLp lp;
    lp.cols.vars = sys.vars;
    std::size_t n_ineq = 0;
    for (const auto& row : sys.rows)
        if (row.rel != Rel::Eq0) ++n_ineq;
    lp.cols.surplus_start = 2 * sys.vars.size();
    const std::size_t ncols = lp.cols.surplus_start + n_ineq;

    std::size_t surplus = lp.cols.surplus_start;
    for (const auto& row : sys.rows) {
        std::vector<Rational> r(ncols);
        for (std::size_t v = 0; v < sys.vars.size(); ++v) {
            const Rational c = row.expr.coeff(sys.vars[v]);
            if (c.is_zero()) continue;
            r[lp.cols.pos(v)] = c;
            r[lp.cols.neg(v)] = -c;
        }
        if (row.rel != Rel::Eq0) r[surplus++] = Rational(-1);
        lp.a.push_back(std::move(r));
        lp.b.push_back(-row.expr.constant());
    }
    return lp;
}

Assignment extract_point(const std::vector<Rational>& x, const ColumnMap& cols) {
    Assignment point;
    for (std::size_t v = 0; v < cols.vars.size(); ++v)
        point[cols.vars[v]] = x[cols.pos(v)] - x[cols.neg(v)];
    return point;
}

// Feasibility / optimization over a system with only Geq0/Eq0 rows.
LpOutcome solve_closed(const Polyhedron& sys, const LinExpr* objective, LpSense sense) {
    if (sys.has_strict_rows()) throw StructuralError("strict row reached the closed solver");
    if (sys.rows.empty()) {
        Assignment zeros;
        for (const auto& v : sys.vars) zeros[v] = Rational(0);
        if (objective == nullptr) return LpOutcome{LpStatus::Feasible, std::move(zeros), {}};
        if (!objective->is_constant())
            return LpOutcome{LpStatus::Unbounded, std::nullopt, std::nullopt};
        return LpOutcome{LpStatus::Optimal, std::move(zeros), objective->constant()};
    }
    ClosedLp lp = build_closed(sys);
    Simplex splx(std::move(lp.a), std::move(lp.b));
    if (!splx.phase1()) return LpOutcome{LpStatus::Infeasible, std::nullopt, std::nullopt};
    if (objective == nullptr) {
        return LpOutcome{LpStatus::Feasible, extract_point(splx.solution(), lp.cols),
                         std::nullopt};
    }
    std::vector<Rational> cost(lp.cols.surplus_start);
    const Rational flip(sense == LpSense::Maximize ? -1 : 1);
    for (std::size_t v = 0; v < lp.cols.vars.size(); ++v) {
        const Rational c = objective->coeff(lp.cols.vars[v]);
        cost[lp.cols.pos(v)] = flip * c;
        cost[lp.cols.neg(v)] = -(flip * c);
    }
    if (!splx.phase2(std::move(cost)))
        return LpOutcome{LpStatus::Unbounded, std::nullopt, std::nullopt};
    Assignment point = extract_point(splx.solution(), lp.cols);
    Rational value = objective->eval(point);
    return LpOutcome{LpStatus::Optimal, std::move(point), std::move(value)};
}

// Rewrites strict rows with the shared slack s and appends 0 <= s <= 1.
Polyhedron slacked(const Polyhedron& sys) {
    Polyhedron out;
    out.vars = sys.vars;
    out.vars.push_back(kSlackVar);
    for (const auto& row : sys.rows) {
        if (row.rel == Rel::Gt0) {
            LinExpr e = row.expr;
            e.add_term(kSlackVar, Rational(-1));
            out.rows.push_back(geq0(std::move(e)));
        } else {
            out.rows.push_back(row);
        }
    }
    out.rows.push_back(geq0(LinExpr::var(kSlackVar)));
    out.rows.push_back(geq0(LinExpr(Rational(1)) - LinExpr::var(kSlackVar)));
    return out;
}

LpOutcome strict_feasibility(const Polyhedron& sys) {
    const Polyhedron relaxed = slacked(sys);
    const LinExpr s = LinExpr::var(kSlackVar);
    LpOutcome r = solve_closed(relaxed, &s, LpSense::Maximize);
    if (r.status == LpStatus::Infeasible || r.objective_value->sign() <= 0)
        return LpOutcome{LpStatus::Infeasible, std::nullopt, std::nullopt};
    r.point->erase(kSlackVar);
    return LpOutcome{LpStatus::Feasible, std::move(r.point), std::nullopt};
}

}  // namespace

LpOutcome lp_solve(const Polyhedron& system) {
    system.validate();
    if (!system.has_strict_rows()) return solve_closed(system, nullptr, LpSense::Minimize);
    return strict_feasibility(system);
}

LpOutcome lp_solve(const Polyhedron& system, const LinExpr& objective, LpSense sense) {
    system.validate();
    for (const auto& [v, c] : objective.terms())
        if (!system.has_var(v))
            throw StructuralError("objective references undeclared variable: " + v);
    if (!system.has_strict_rows()) return solve_closed(system, &objective, sense);

    LpOutcome feas = strict_feasibility(system);
    if (feas.status == LpStatus::Infeasible) return feas;

    // Optimize over the closure; the supremum over the strictly feasible set
    // equals the optimum over the closure because the former is dense in it.
    Polyhedron closure = system;
    for (auto& row : closure.rows)
        if (row.rel == Rel::Gt0) row.rel = Rel::Geq0;
    LpOutcome opt = solve_closed(closure, &objective, sense);
    if (opt.status == LpStatus::Unbounded) return opt;
    if (system.contains(*opt.point)) return opt;

    // Look for a strictly feasible point among the optimizers.
    Polyhedron pinned = system;
    pinned.rows.push_back(eq0(objective - LinExpr(*opt.objective_value)));
    LpOutcome interior = strict_feasibility(pinned);
    if (interior.status == LpStatus::Infeasible)
        throw Error("objective supremum is not attained under the strict constraints");
    return LpOutcome{LpStatus::Optimal, std::move(interior.point),
                     std::move(opt.objective_value)};
}

bool entails(const Polyhedron& system, const Constraint& row) {
    auto refuted = [&](Constraint negation) {
        Polyhedron probe = system;
        for (const auto& [v, c] : negation.expr.terms())
            if (!probe.has_var(v)) probe.vars.push_back(v);
        probe.rows.push_back(std::move(negation));
        return lp_solve(probe).status == LpStatus::Infeasible;
    };
    switch (row.rel) {
        case Rel::Geq0: return refuted(gt0(-row.expr));
        case Rel::Gt0: return refuted(geq0(-row.expr));
        case Rel::Eq0: return refuted(gt0(row.expr)) && refuted(gt0(-row.expr));
    }
    return false;
}

bool equivalent(const Polyhedron& a, const Polyhedron& b) {
    const Polyhedron au = conjoin(a, Polyhedron{b.vars, {}});
    const Polyhedron bu = conjoin(b, Polyhedron{a.vars, {}});
    return std::all_of(b.rows.begin(), b.rows.end(),
                       [&](const Constraint& r) { return entails(au, r); }) &&
           std::all_of(a.rows.begin(), a.rows.end(),
                       [&](const Constraint& r) { return entails(bu, r); });
}

Assignment lexicographic_opt(const Polyhedron& system,
                             const std::vector<std::pair<LinExpr, LpSense>>& objectives) {
    Polyhedron current = system;
    if (current.has_strict_rows()) {
        current = slacked(current);
        const LinExpr s = LinExpr::var(kSlackVar);
        LpOutcome r = solve_closed(current, &s, LpSense::Maximize);
        if (r.status == LpStatus::Infeasible || r.objective_value->sign() <= 0)
            throw Error("lexicographic_opt: system is infeasible");
        current.rows.push_back(eq0(s - LinExpr(*r.objective_value)));
    }
    std::optional<Assignment> last;
    for (const auto& [objective, sense] : objectives) {
        LpOutcome r = solve_closed(current, &objective, sense);
        if (r.status == LpStatus::Infeasible)
            throw Error("lexicographic_opt: system is infeasible");
        if (r.status == LpStatus::Unbounded)
            throw Error("lexicographic_opt: stage objective is unbounded");
        current.rows.push_back(eq0(objective - LinExpr(*r.objective_value)));
        last = std::move(r.point);
    }
    if (!last) {
        LpOutcome r = solve_closed(current, nullptr, LpSense::Minimize);
        if (r.status == LpStatus::Infeasible)
            throw Error("lexicographic_opt: system is infeasible");
        last = std::move(r.point);
    }
    last->erase(kSlackVar);
    return *last;
}

}  // namespace elrf
