#include "elrf/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "elrf/certificate_json.hpp"
#include "elrf/errors.hpp"
#include "elrf/loop_format.hpp"
#include "elrf/lp.hpp"
#include "elrf/oracle.hpp"
#include "elrf/verify.hpp"

namespace elrf {

namespace {

using ordered_json = nlohmann::ordered_json;

LoopFile load_loop(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open loop file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_loop_file(buf.str());
}

DetectOptions options_from_env() {
    DetectOptions opts;
    if (const char* cap = std::getenv("ELRF_FM_ROW_CAP")) {
        char* end = nullptr;
        const long value = std::strtol(cap, &end, 10);
        if (end == cap || *end != '\0' || value <= 0)
            throw PreconditionError("ELRF_FM_ROW_CAP must be a positive integer");
        opts.fm.row_cap = static_cast<std::size_t>(value);
    }
    return opts;
}

const char* case_label(CaseTag tag) {
    switch (tag) {
        case CaseTag::Phi11: return "DEC1_POS1";
        case CaseTag::Phi12: return "DEC1_POS2";
        case CaseTag::Phi21: return "DEC2_POS1";
        case CaseTag::Phi22Relaxed: return "DEC2_POS2_RELAXED";
    }
    return "";
}

void print_certificate(const Certificate& cert, std::ostream& out, std::ostream& err) {
    switch (cert.kind) {
        case CertKind::TriviallyTerminating:
            out << "terminates trivially: the loop body is unsatisfiable\n";
            return;
        case CertKind::NotFound:
            out << "not found\n";
            for (const auto& d : cert.diagnostics) err << "note: " << d << "\n";
            return;
        case CertKind::Lrf:
            out << (cert.rho->constant.is_zero() ? "linear" : "affine")
                << " ranking function found\n";
            break;
        case CertKind::Elrf:
            out << "eventual linear ranking function found (case "
                << case_label(*cert.case_tag) << ")\n";
            break;
        case CertKind::EventualAffine:
            out << "eventual affine ranking function found (case "
                << case_label(*cert.case_tag) << ")\n";
            break;
    }
    out << "rho = " << cert.rho->str(cert.loop_vars) << "\n";
    if (cert.k) out << "k = " << cert.k->str() << "\n";
    if (cert.f.size() == 1) out << "f = " << cert.f[0].str(cert.loop_vars) << "\n";
    if (cert.f.size() == 2)
        out << "f = min(" << cert.f[0].str(cert.loop_vars) << ", "
            << cert.f[1].str(cert.loop_vars) << ")\n";
    for (const auto& d : cert.diagnostics) err << "note: " << d << "\n";
}

// INC rows are printed over b1..bn in loop-variable order.
std::vector<std::string> inc_rows_pretty(const IncSpace& inc,
                                         const std::vector<VarId>& loop_vars) {
    std::map<VarId, VarId> rename;
    for (std::size_t i = 0; i < loop_vars.size(); ++i)
        rename[inc_param(loop_vars[i])] = "b" + std::to_string(i + 1);
    std::vector<std::string> rows;
    for (const auto& row : inc.space.rows)
        rows.push_back(human_constraint(Constraint{row.expr.rename(rename), row.rel}));
    return rows;
}

int cmd_detect(const LoopFile& file, bool lrf_only, bool affine, bool json,
               const DetectOptions& opts, std::ostream& out, std::ostream& err) {
    Certificate cert;
    if (lrf_only) {
        cert = affine ? detect_affine(file.loop, AffineMode::Lrf, {}, opts)
                      : detect_lrf(file.loop);
    } else if (file.increasing) {
        cert = affine
                   ? detect_affine(file.loop, AffineMode::ElrfGivenF, file.increasing, opts)
                   : detect_elrf_given_f(file.loop, *file.increasing);
    } else {
        cert = affine ? detect_affine(file.loop, AffineMode::Elrf, {}, opts)
                      : detect_elrf(file.loop, opts);
    }
    if (json)
        out << emit_json(cert) << "\n";
    else
        print_certificate(cert, out, err);
    return 0;
}

int cmd_inc(const LoopFile& file, bool json, const DetectOptions& opts, std::ostream& out) {
    const IncSpace inc = inc_space(file.loop, opts.fm);
    const bool empty = lp_solve(inc.space).status == LpStatus::Infeasible;
    const auto rows = inc_rows_pretty(inc, file.loop.vars);
    if (json) {
        ordered_json o;
        o["status"] = empty ? "INC_EMPTY" : "INC_SPACE";
        ordered_json names = ordered_json::array();
        for (std::size_t i = 0; i < file.loop.vars.size(); ++i)
            names.push_back("b" + std::to_string(i + 1));
        o["vars"] = names;
        o["rows"] = rows;
        out << o.dump() << "\n";
        return 0;
    }
    if (empty) {
        out << "INC is empty: no linear function is increasing for this loop\n";
        return 0;
    }
    for (const auto& r : rows) out << r << "\n";
    return 0;
}

int cmd_verify(const LoopFile& file, const std::optional<Rational>& k, bool json,
               std::ostream& out) {
    if (!file.candidate)
        throw PreconditionError("verify needs a candidate: line in the loop file");
    bool ok = false;
    std::optional<Rational> used_k = k;
    if (file.increasing) {
        if (k) {
            ok = verify_elrf(file.loop, *file.increasing, *file.candidate, *k);
        } else {
            const ExistentialCheck r =
                verify_elrf_existential(file.loop, *file.increasing, *file.candidate);
            ok = r.ok;
            used_k = r.k;
        }
    } else {
        ok = verify_lrf(file.loop, *file.candidate);
        used_k.reset();
    }
    if (json) {
        ordered_json o;
        o["status"] = ok ? "VERIFIED" : "REJECTED";
        if (ok && used_k) o["k"] = used_k->str();
        out << o.dump() << "\n";
        return 0;
    }
    out << (ok ? "VERIFIED" : "REJECTED");
    if (ok && used_k) out << " (k = " << used_k->str() << ")";
    out << "\n";
    return 0;
}

int cmd_simulate(const LoopFile& file, const std::optional<Rational>& k, int trials,
                 int max_steps, std::uint64_t seed, bool json, std::ostream& out) {
    if (!file.candidate)
        throw PreconditionError("simulate needs a candidate: line in the loop file");
    Certificate cert;
    cert.loop_vars = file.loop.vars;
    cert.rho = file.candidate;
    if (file.increasing) {
        cert.kind = CertKind::Elrf;
        cert.f = {*file.increasing};
        cert.k = k ? *k : Rational(0);
    } else {
        cert.kind = CertKind::Lrf;
    }
    const TraceReport report =
        check_certificate_on_traces(file.loop, cert, trials, max_steps, seed);
    if (json) {
        ordered_json o;
        o["status"] = report.clean() ? "NO_VIOLATIONS" : "VIOLATIONS";
        o["trials"] = report.trials;
        o["transitions"] = report.total_transitions;
        ordered_json v = ordered_json::array();
        for (const auto& viol : report.violations) {
            ordered_json item;
            item["trial"] = viol.trial;
            item["step"] = viol.step_index;
            item["detail"] = viol.detail;
            v.push_back(item);
        }
        o["violations"] = v;
        out << o.dump() << "\n";
        return 0;
    }
    out << report.trials << " traces, " << report.total_transitions << " transitions, "
        << report.violations.size() << " violations\n";
    for (const auto& viol : report.violations)
        out << "trial " << viol.trial << " step " << viol.step_index << ": " << viol.detail
            << "\n";
    return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Termination of rational single-path linear-constraint loops via "
                 "eventual linear ranking functions"};
    app.require_subcommand(1);

    std::string path;
    bool affine = false, json = false;
    std::string k_text;
    int trials = 100;
    int max_steps = 1000;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* cmd, bool with_affine) {
        cmd->add_option("file", path, "loop file")->required();
        cmd->add_flag("--json", json, "machine-readable certificate output");
        if (with_affine) cmd->add_flag("--affine", affine, "search affine functions");
    };
    CLI::App* detect_lrf_cmd = app.add_subcommand("detect-lrf", "linear ranking function");
    add_common(detect_lrf_cmd, true);
    CLI::App* detect_elrf_cmd =
        app.add_subcommand("detect-elrf", "eventual linear ranking function");
    add_common(detect_elrf_cmd, true);
    CLI::App* inc_cmd = app.add_subcommand("inc", "space of increasing functions");
    add_common(inc_cmd, false);
    CLI::App* verify_cmd = app.add_subcommand("verify", "check the candidate function");
    add_common(verify_cmd, false);
    verify_cmd->add_option("--k", k_text, "threshold (rational, e.g. 3/2)");
    CLI::App* sim_cmd = app.add_subcommand("simulate", "trace-check the candidate");
    add_common(sim_cmd, false);
    sim_cmd->add_option("--k", k_text, "threshold (rational, e.g. 3/2)");
    sim_cmd->add_option("--trials", trials, "number of traces");
    sim_cmd->add_option("--steps", max_steps, "max steps per trace");
    sim_cmd->add_option("--seed", seed, "random seed");

    std::vector<const char*> argv;
    argv.push_back("elrf");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        const DetectOptions opts = options_from_env();
        std::optional<Rational> k;
        if (!k_text.empty()) k = Rational::parse(k_text);
        const LoopFile file = load_loop(path);
        if (detect_lrf_cmd->parsed())
            return cmd_detect(file, true, affine, json, opts, out, err);
        if (detect_elrf_cmd->parsed())
            return cmd_detect(file, false, affine, json, opts, out, err);
        if (inc_cmd->parsed()) return cmd_inc(file, json, opts, out);
        if (verify_cmd->parsed()) return cmd_verify(file, k, json, out);
        if (sim_cmd->parsed()) return cmd_simulate(file, k, trials, max_steps, seed, json, out);
        err << "no command\n";
        return 2;
    } catch (const ResourceLimitError& e) {
        err << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const StructuralError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace elrf
