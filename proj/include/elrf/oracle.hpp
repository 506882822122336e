#pragma once

#include <cstdint>

#include "elrf/detect.hpp"

namespace elrf {

/// Successor selection when simulating a loop body. lp_witness takes the
/// solver's feasible point; randomized perturbs a seeded objective so traces
/// explore different corners of the transition relation.
struct StepStrategy {
    enum class Kind { LpWitness, Randomized };
    Kind kind = Kind::LpWitness;
    std::uint64_t seed = 0;

    static StepStrategy lp_witness() { return StepStrategy{Kind::LpWitness, 0}; }
    static StepStrategy randomized(std::uint64_t seed) {
        return StepStrategy{Kind::Randomized, seed};
    }
};

/// Some successor of point under the body, or nullopt when none exists.
std::optional<Assignment> step(const SlcLoop& loop, const Assignment& point,
                               const StepStrategy& strategy);

struct Trace {
    std::vector<Assignment> points;
    bool terminated = false;  // no successor existed at the last point
};

Trace simulate(const SlcLoop& loop, const Assignment& start, const StepStrategy& strategy,
               int max_steps);

struct TraceViolation {
    int trial = 0;
    int step_index = 0;
    std::string detail;
};

struct TraceReport {
    int trials = 0;
    long total_transitions = 0;
    std::vector<TraceViolation> violations;

    bool clean() const { return violations.empty(); }
};

/// Empirical certificate check: simulates seeded traces from sampled start
/// points and tests the ranking conditions on every transition — always for
/// an LRF, above the threshold for an eventual one, and per conjunct for the
/// min-pair case. Violations are reported, never thrown.
TraceReport check_certificate_on_traces(const SlcLoop& loop, const Certificate& cert,
                                        int trials, int max_steps, std::uint64_t seed);

/// Deterministic random loop with integer body coefficients in
/// [-coeff_bound, coeff_bound]; regenerates until the body is satisfiable,
/// up to a retry cap.
SlcLoop random_loop(int n_vars, int n_rows, int coeff_bound, std::uint64_t seed);

}  // namespace elrf
