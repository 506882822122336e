#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "elrf/certificate_json.hpp"
#include "elrf/errors.hpp"
#include "elrf/loop_format.hpp"
#include "elrf/lp.hpp"
#include "elrf/oracle.hpp"
#include "elrf/verify.hpp"

namespace py = pybind11;
using namespace elrf;

namespace {

// Certificates cross into Python as plain dicts via the JSON schema, so the
// two surfaces can never drift apart.
py::dict cert_to_dict(const Certificate& cert) {
    const py::module json = py::module::import("json");
    return json.attr("loads")(emit_json(cert));
}

DetectOptions options_with_cap(std::size_t fm_row_cap) {
    DetectOptions opts;
    opts.fm.row_cap = fm_row_cap;
    return opts;
}

std::vector<std::string> pretty_rows(const Polyhedron& space,
                                     const std::map<VarId, VarId>& rename) {
    std::vector<std::string> rows;
    for (const auto& row : space.rows)
        rows.push_back(human_constraint(Constraint{row.expr.rename(rename), row.rel}));
    return rows;
}

CandidateFn candidate_from_dict(const py::dict& d) {
    CandidateFn fn;
    for (const auto& item : d) {
        const std::string key = py::cast<std::string>(item.first);
        const Rational q = Rational::parse(py::cast<std::string>(py::str(item.second)));
        if (key == "constant")
            fn.constant = q;
        else if (!q.is_zero())
            fn.coeffs.emplace(key, q);
    }
    return fn;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Termination of rational SLC loops via eventual linear ranking functions";

    py::register_exception<ParseError>(m, "LoopParseError", PyExc_ValueError);
    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
    py::register_exception<ResourceLimitError>(m, "ResourceLimitError", PyExc_RuntimeError);

    py::class_<LoopFile>(m, "Loop")
        .def_static("parse", &parse_loop_file, py::arg("text"),
                    "Parse the loop-file grammar (vars:/body:/increasing:/candidate:).")
        .def_property_readonly("vars",
                               [](const LoopFile& f) { return f.loop.vars; })
        .def_property_readonly("has_increasing",
                               [](const LoopFile& f) { return f.increasing.has_value(); })
        .def_property_readonly("has_candidate",
                               [](const LoopFile& f) { return f.candidate.has_value(); })
        .def("__str__", &print_loop_file)
        .def("__repr__", [](const LoopFile& f) {
            std::ostringstream os;
            os << "<Loop over";
            for (const auto& v : f.loop.vars) os << " " << v;
            os << ", " << f.loop.body.rows.size() << " rows>";
            return os.str();
        });

    m.def("parse_loop", &parse_loop_file, py::arg("text"));
    m.def("print_loop", &print_loop_file, py::arg("loop"));

    m.def(
        "detect_lrf",
        [](const LoopFile& f, bool affine) {
            return cert_to_dict(affine ? detect_affine(f.loop, AffineMode::Lrf)
                                       : detect_lrf(f.loop));
        },
        py::arg("loop"), py::arg("affine") = false);

    m.def(
        "detect_elrf",
        [](const LoopFile& f, bool affine, std::size_t fm_row_cap) {
            const DetectOptions opts = options_with_cap(fm_row_cap);
            Certificate cert;
            if (f.increasing)
                cert = affine
                           ? detect_affine(f.loop, AffineMode::ElrfGivenF, f.increasing, opts)
                           : detect_elrf_given_f(f.loop, *f.increasing);
            else
                cert = affine ? detect_affine(f.loop, AffineMode::Elrf, {}, opts)
                              : detect_elrf(f.loop, opts);
            return cert_to_dict(cert);
        },
        py::arg("loop"), py::arg("affine") = false, py::arg("fm_row_cap") = 10000,
        "Algorithm 1 when the loop file carries an increasing: line, otherwise "
        "the fully automated search.");

    m.def(
        "inc_space",
        [](const LoopFile& f, std::size_t fm_row_cap) {
            const IncSpace inc = inc_space(f.loop, options_with_cap(fm_row_cap).fm);
            std::map<VarId, VarId> rename;
            for (std::size_t i = 0; i < f.loop.vars.size(); ++i)
                rename[inc_param(f.loop.vars[i])] = "b" + std::to_string(i + 1);
            return pretty_rows(inc.space, rename);
        },
        py::arg("loop"), py::arg("fm_row_cap") = 10000,
        "Rows of the increasing-function space over b1..bn.");

    m.def(
        "lrf_space",
        [](const LoopFile& f, std::size_t fm_row_cap) {
            const Polyhedron space = lrf_space(f.loop, options_with_cap(fm_row_cap).fm);
            std::map<VarId, VarId> rename;
            for (std::size_t i = 0; i < f.loop.vars.size(); ++i)
                rename[rho_param(f.loop.vars[i])] = "a" + std::to_string(i + 1);
            return pretty_rows(space, rename);
        },
        py::arg("loop"), py::arg("fm_row_cap") = 10000,
        "Rows of the linear-ranking coefficient space over a1..an.");

    m.def(
        "verify",
        [](const LoopFile& f, const std::optional<std::string>& k) {
            if (!f.candidate) throw PreconditionError("loop file has no candidate: line");
            py::dict out;
            if (f.increasing) {
                if (k) {
                    out["verified"] =
                        verify_elrf(f.loop, *f.increasing, *f.candidate, Rational::parse(*k));
                    out["k"] = *k;
                } else {
                    const ExistentialCheck r =
                        verify_elrf_existential(f.loop, *f.increasing, *f.candidate);
                    out["verified"] = r.ok;
                    if (r.k) out["k"] = r.k->str();
                }
            } else {
                out["verified"] = verify_lrf(f.loop, *f.candidate);
            }
            return out;
        },
        py::arg("loop"), py::arg("k") = std::nullopt,
        "Check the candidate: line (eventually, when increasing: is present).");

    m.def(
        "verify_certificate_dict",
        [](const LoopFile& f, const py::dict& cert) {
            const py::module json = py::module::import("json");
            const std::string text = py::cast<std::string>(json.attr("dumps")(cert));
            return verify_certificate(f.loop, parse_certificate_json(text));
        },
        py::arg("loop"), py::arg("certificate"));

    m.def(
        "simulate",
        [](const LoopFile& f, const py::dict& rho, const std::optional<py::dict>& increasing,
           const std::optional<std::string>& k, int trials, int max_steps,
           std::uint64_t seed) {
            Certificate cert;
            cert.loop_vars = f.loop.vars;
            cert.rho = candidate_from_dict(rho);
            if (increasing) {
                cert.kind = CertKind::Elrf;
                cert.f = {candidate_from_dict(*increasing)};
                cert.k = k ? Rational::parse(*k) : Rational(0);
            } else {
                cert.kind = CertKind::Lrf;
            }
            const TraceReport report =
                check_certificate_on_traces(f.loop, cert, trials, max_steps, seed);
            py::dict out;
            out["trials"] = report.trials;
            out["transitions"] = report.total_transitions;
            py::list violations;
            for (const auto& v : report.violations) {
                py::dict item;
                item["trial"] = v.trial;
                item["step"] = v.step_index;
                item["detail"] = v.detail;
                violations.append(item);
            }
            out["violations"] = violations;
            return out;
        },
        py::arg("loop"), py::arg("rho"), py::arg("increasing") = std::nullopt,
        py::arg("k") = std::nullopt, py::arg("trials") = 100, py::arg("steps") = 1000,
        py::arg("seed") = 0,
        "Trace-check a candidate certificate; coefficient dicts map var -> rational string.");
}
