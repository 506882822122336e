#pragma once

#include "elrf/farkas.hpp"
#include "elrf/fourier_motzkin.hpp"

namespace elrf {

enum class CertKind { Lrf, Elrf, EventualAffine, TriviallyTerminating, NotFound };
enum class CaseTag { Phi11, Phi12, Phi21, Phi22Relaxed };

/// Which detection route produced a certificate (used by the reconstruction
/// self-check to rebuild the matching dual systems).
enum class DetectAlgo { PlainLrf, GivenF, FullAuto };

/// Variable ids inside raw_solution needed to recover thresholds and
/// increasing-function coefficients from a case-2 witness.
struct CaseWitnessRefs {
    std::optional<VarId> dec_lambda;
    std::optional<VarId> dec_threshold_product;
    std::map<VarId, VarId> dec_f_products;   // loop var -> product id
    std::optional<VarId> pos_lambda;
    std::optional<VarId> pos_threshold_product;
    std::map<VarId, VarId> pos_f_products;
};

struct Certificate {
    CertKind kind = CertKind::NotFound;
    std::optional<CandidateFn> rho;
    std::optional<Rational> k;
    /// One increasing function, or the pair {f_dec, f_pos} whose pointwise
    /// minimum is the (non-linear) increasing function of the relaxed case.
    std::vector<CandidateFn> f;
    std::optional<CaseTag> case_tag;
    Assignment raw_solution;
    std::vector<std::string> diagnostics;
    std::vector<VarId> loop_vars;
    DetectAlgo algo = DetectAlgo::PlainLrf;
    bool affine_lifted = false;
    CaseWitnessRefs case_vars;

    bool found() const {
        return kind == CertKind::Lrf || kind == CertKind::Elrf ||
               kind == CertKind::EventualAffine || kind == CertKind::TriviallyTerminating;
    }
};

/// Coefficient vectors b for which b·x is increasing for the loop, as a
/// polyhedron over inc_param(v) in loop-variable order. May be empty.
struct IncSpace {
    Polyhedron space;
    bool contains(const CandidateFn& f, const std::vector<VarId>& loop_vars) const;
};

struct DetectOptions {
    FmOptions fm;
};

Certificate detect_lrf(const SlcLoop& loop);

/// Exact space of linear-ranking coefficient vectors over rho_param(v).
Polyhedron lrf_space(const SlcLoop& loop, const FmOptions& opts = {});

IncSpace inc_space(const SlcLoop& loop, const FmOptions& opts = {});

/// Decision procedure given an increasing function: tests the four case
/// systems DECi ∧ POSj and extracts (rho, k) from the first feasible one.
Certificate detect_elrf_given_f(const SlcLoop& loop, const CandidateFn& f);

/// Fully automated detection. Case phi22 is tested in its linear relaxation
/// (no p/lambda = p'/lambda' coupling), so its certificates carry the
/// min-pair increasing functions; a NotFound verdict therefore does not
/// refute existence under the exact bilinear case, which the diagnostics
/// record.
Certificate detect_elrf(const SlcLoop& loop, const DetectOptions& opts = {});

enum class AffineMode { Lrf, ElrfGivenF, Elrf };

/// Runs the corresponding linear detector on the lifted loop and folds the
/// lifted coefficient into the constant of rho (and into the threshold for
/// the recovered increasing functions).
Certificate detect_affine(const SlcLoop& loop, AffineMode mode,
                          const std::optional<CandidateFn>& f = {},
                          const DetectOptions& opts = {});

/// Threshold recovery: k = 0 for case (1,1), P'/lambda' for (1,2),
/// P/lambda for (2,1), max of both for (2,2).
Rational extract_threshold(CaseTag tag, const Assignment& raw_solution,
                           const CaseWitnessRefs& refs);

/// Rebuilds the dual systems for the certificate's loop and case, substitutes
/// k = P/lambda (and b = p/lambda) from the raw solution back into the
/// un-linearized dual, and checks feasibility with rho pinned.
bool check_case2_reconstruction(const SlcLoop& loop, const Certificate& cert);

}  // namespace elrf
