#pragma once

#include "elrf/detect.hpp"

namespace elrf {

// Certificate checkers, independent of the detection path: each one rebuilds
// its query systems from the loop and the candidate alone.

/// True iff both negation systems, body ∧ {1 + rho(x') - rho(x) > 0} and
/// body ∧ {-rho(x) > 0}, are infeasible. Affine rho is permitted.
bool verify_lrf(const SlcLoop& loop, const CandidateFn& rho);

/// True iff body ∧ {f(x) + 1 - f(x') > 0} is infeasible. f must be linear:
/// a constant offset never changes whether a function is increasing, so
/// affine candidates are rejected rather than silently truncated.
bool verify_increasing(const SlcLoop& loop, const CandidateFn& f);

/// Fixed-threshold check of the eventual ranking conditions.
bool verify_elrf(const SlcLoop& loop, const CandidateFn& f, const CandidateFn& rho,
                 const Rational& k);

/// One-conjunct variants used for min-pair certificates.
bool verify_elrf_decrease(const SlcLoop& loop, const CandidateFn& f_dec,
                          const CandidateFn& rho, const Rational& k);
bool verify_elrf_positivity(const SlcLoop& loop, const CandidateFn& f_pos,
                            const CandidateFn& rho, const Rational& k);

struct ExistentialCheck {
    bool ok = false;
    std::optional<Rational> k;
};

/// Threshold-free check: runs the case split with rho's coefficients pinned
/// and returns a concrete threshold on success.
ExistentialCheck verify_elrf_existential(const SlcLoop& loop, const CandidateFn& f,
                                         const CandidateFn& rho);

/// Dispatch on certificate kind, including the min-pair route.
bool verify_certificate(const SlcLoop& loop, const Certificate& cert);

}  // namespace elrf
