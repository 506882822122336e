#include "elrf/oracle.hpp"

#include <random>
#include <set>
#include <sstream>

#include "elrf/errors.hpp"
#include "elrf/lp.hpp"

namespace elrf {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Small signed integer in [-bound, bound], independent of library
// distributions so seeds reproduce everywhere.
long draw(std::mt19937_64& rng, long bound) {
    return static_cast<long>(rng() % (2 * static_cast<unsigned long>(bound) + 1)) - bound;
}

mpz_class ceil_abs(const Rational& r) {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), mpz_class(::abs(r.numerator())).get_mpz_t(),
               r.denominator().get_mpz_t());
    return q;
}

// Maximizes a seeded random objective over the system, boxing the chosen
// variables so the optimum exists; the box grows until it contains a feasible
// point. The system must be satisfiable.
Assignment sample_point(const Polyhedron& system, const std::vector<VarId>& choose,
                        std::uint64_t seed, const mpz_class& start_box) {
    std::mt19937_64 rng(seed);
    LinExpr objective;
    for (const auto& v : choose) objective.add_term(v, Rational(draw(rng, 3)));

    mpz_class box = start_box + 16;
    for (int attempt = 0; attempt < 64; ++attempt) {
        Polyhedron boxed = system;
        for (const auto& v : choose) {
            boxed.rows.push_back(geq0(LinExpr(Rational(box)) - LinExpr::var(v)));
            boxed.rows.push_back(geq0(LinExpr::var(v) + LinExpr(Rational(box))));
        }
        const LpOutcome r = lp_solve(boxed, objective, LpSense::Maximize);
        if (r.status == LpStatus::Optimal) return *r.point;
        box *= 2;
    }
    throw Error("internal: could not box a feasible point");
}

std::string render_point(const std::vector<VarId>& vars, const Assignment& p) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < vars.size(); ++i)
        os << (i ? ", " : "") << vars[i] << "=" << p.at(vars[i]);
    os << ")";
    return os.str();
}

}  // namespace

std::optional<Assignment> step(const SlcLoop& loop, const Assignment& point,
                               const StepStrategy& strategy) {
    loop.validate();
    Polyhedron pinned = loop.body;
    mpz_class magnitude = 0;
    for (const auto& v : loop.vars) {
        const auto it = point.find(v);
        if (it == point.end()) throw PreconditionError("point does not assign " + v);
        pinned.rows.push_back(eq0(LinExpr::var(v) - LinExpr(it->second)));
        const mpz_class c = ceil_abs(it->second);
        if (c > magnitude) magnitude = c;
    }

    Assignment full;
    if (strategy.kind == StepStrategy::Kind::LpWitness) {
        const LpOutcome r = lp_solve(pinned);
        if (!r.feasible()) return std::nullopt;
        full = *r.point;
    } else {
        if (lp_solve(pinned).status == LpStatus::Infeasible) return std::nullopt;
        full = sample_point(pinned, loop.primed_vars, strategy.seed, magnitude);
    }
    Assignment next;
    for (std::size_t i = 0; i < loop.vars.size(); ++i)
        next[loop.vars[i]] = full.at(loop.primed_vars[i]);
    return next;
}

Trace simulate(const SlcLoop& loop, const Assignment& start, const StepStrategy& strategy,
               int max_steps) {
    Trace trace;
    trace.points.push_back(start);
    for (int i = 0; i < max_steps; ++i) {
        StepStrategy stepwise = strategy;
        if (strategy.kind == StepStrategy::Kind::Randomized)
            stepwise.seed = mix_seed(strategy.seed, static_cast<std::uint64_t>(i));
        auto next = step(loop, trace.points.back(), stepwise);
        if (!next) {
            trace.terminated = true;
            return trace;
        }
        trace.points.push_back(std::move(*next));
    }
    return trace;
}

TraceReport check_certificate_on_traces(const SlcLoop& loop, const Certificate& cert,
                                        int trials, int max_steps, std::uint64_t seed) {
    loop.validate();
    if (cert.kind != CertKind::Lrf && cert.kind != CertKind::Elrf &&
        cert.kind != CertKind::EventualAffine)
        throw PreconditionError("trace check needs an LRF or eventual certificate");
    if (!cert.rho) throw PreconditionError("certificate has no rho");
    const bool eventual = cert.kind != CertKind::Lrf;
    if (eventual && (!cert.k || cert.f.empty()))
        throw PreconditionError("eventual certificate needs k and f");

    // Start points come from the body's projection onto the unprimed
    // variables, so every sampled start has at least one successor.
    std::set<VarId> primed_set(loop.primed_vars.begin(), loop.primed_vars.end());
    const Polyhedron projection = fm_project(loop.body, primed_set);
    const bool dead = lp_solve(projection).status == LpStatus::Infeasible;

    TraceReport report;
    report.trials = trials;
    for (int t = 0; t < trials; ++t) {
        Assignment start;
        if (dead) {
            for (const auto& v : loop.vars) start[v] = Rational(0);
        } else {
            start = sample_point(projection, loop.vars, mix_seed(seed, 2 * t), 0);
        }
        const Trace trace =
            simulate(loop, start, StepStrategy::randomized(mix_seed(seed, 2 * t + 1)),
                     max_steps);
        for (std::size_t i = 0; i + 1 < trace.points.size(); ++i) {
            const Assignment& x = trace.points[i];
            const Assignment& xp = trace.points[i + 1];
            ++report.total_transitions;

            const Rational rho_x = cert.rho->eval(x);
            const Rational rho_xp = cert.rho->eval(xp);
            bool check_decrease = true;
            bool check_positivity = true;
            if (eventual) {
                if (cert.f.size() == 1) {
                    const bool armed = cert.f[0].eval(x) >= *cert.k;
                    check_decrease = armed;
                    check_positivity = armed;
                } else {
                    check_decrease = cert.f[0].eval(x) >= *cert.k;
                    check_positivity = cert.f[1].eval(x) >= *cert.k;
                }
            }
            if (check_decrease && !(rho_x >= Rational(1) + rho_xp)) {
                std::ostringstream os;
                os << "decrease violated: rho" << render_point(loop.vars, x) << " = " << rho_x
                   << " < 1 + rho" << render_point(loop.vars, xp) << " = "
                   << Rational(1) + rho_xp;
                report.violations.push_back(
                    {t, static_cast<int>(i), os.str()});
            }
            if (check_positivity && rho_x.sign() < 0) {
                std::ostringstream os;
                os << "positivity violated: rho" << render_point(loop.vars, x) << " = "
                   << rho_x << " < 0";
                report.violations.push_back({t, static_cast<int>(i), os.str()});
            }
        }
    }
    return report;
}

SlcLoop random_loop(int n_vars, int n_rows, int coeff_bound, std::uint64_t seed) {
    if (n_vars < 1 || n_rows < 1 || coeff_bound < 1)
        throw PreconditionError("random_loop needs positive sizes");
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(attempt)));
        SlcLoop loop;
        for (int i = 1; i <= n_vars; ++i) loop.vars.push_back("x" + std::to_string(i));
        for (const auto& v : loop.vars) loop.primed_vars.push_back(primed(v));
        loop.body.vars = loop.vars;
        loop.body.vars.insert(loop.body.vars.end(), loop.primed_vars.begin(),
                              loop.primed_vars.end());
        for (int r = 0; r < n_rows; ++r) {
            LinExpr e;
            for (int guard = 0; guard < 16 && e.terms().empty(); ++guard) {
                e = LinExpr(Rational(draw(rng, coeff_bound)));
                for (const auto& v : loop.body.vars)
                    e.add_term(v, Rational(draw(rng, coeff_bound)));
            }
            const Rel rel = (rng() % 8 == 0) ? Rel::Eq0 : Rel::Geq0;
            loop.body.rows.push_back(Constraint{std::move(e), rel});
        }
        if (lp_solve(loop.body).feasible()) return loop;
    }
    throw ResourceLimitError("random_loop: retry cap exhausted without a satisfiable body");
}

}  // namespace elrf
