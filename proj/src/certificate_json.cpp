#include "elrf/certificate_json.hpp"

#include <json.hpp>

#include "elrf/errors.hpp"

namespace elrf {

namespace {

using ordered_json = nlohmann::ordered_json;

const char* status_name(CertKind kind) {
    switch (kind) {
        case CertKind::Lrf: return "LRF_FOUND";
        case CertKind::Elrf: return "ELRF_FOUND";
        case CertKind::EventualAffine: return "EVENTUAL_AFFINE_FOUND";
        case CertKind::TriviallyTerminating: return "TRIVIAL_BODY_UNSAT";
        case CertKind::NotFound: return "NOT_FOUND";
    }
    return "NOT_FOUND";
}

const char* case_name(CaseTag tag) {
    switch (tag) {
        case CaseTag::Phi11: return "DEC1_POS1";
        case CaseTag::Phi12: return "DEC1_POS2";
        case CaseTag::Phi21: return "DEC2_POS1";
        case CaseTag::Phi22Relaxed: return "DEC2_POS2_RELAXED";
    }
    return "";
}

ordered_json coeffs_json(const CandidateFn& fn, const std::vector<VarId>& vars) {
    ordered_json o = ordered_json::object();
    for (const auto& v : vars) o[v] = fn.coeff(v).str();
    return o;
}

CandidateFn coeffs_from_json(const ordered_json& o, std::vector<VarId>* vars_out) {
    CandidateFn fn;
    for (const auto& [key, value] : o.items()) {
        if (vars_out) vars_out->push_back(key);
        const Rational q = Rational::parse(value.get<std::string>());
        if (!q.is_zero()) fn.coeffs.emplace(key, q);
    }
    return fn;
}

}  // namespace

std::string emit_json(const Certificate& cert) {
    ordered_json o;
    o["status"] = status_name(cert.kind);
    if (cert.rho) {
        o["rho"] = coeffs_json(*cert.rho, cert.loop_vars);
        o["constant"] = cert.rho->constant.str();
    }
    if (cert.k) o["k"] = cert.k->str();
    if (cert.f.size() == 1) {
        o["f"] = coeffs_json(cert.f[0], cert.loop_vars);
    } else if (cert.f.size() == 2) {
        o["f"] = ordered_json::array(
            {coeffs_json(cert.f[0], cert.loop_vars), coeffs_json(cert.f[1], cert.loop_vars)});
    }
    if (cert.case_tag) o["case"] = case_name(*cert.case_tag);
    if (!cert.diagnostics.empty()) o["diagnostics"] = cert.diagnostics;
    return o.dump();
}

Certificate parse_certificate_json(const std::string& text) {
    ordered_json o;
    try {
        o = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(1, 1, std::string("bad certificate JSON: ") + e.what());
    }
    Certificate cert;
    const std::string status = o.at("status").get<std::string>();
    if (status == "LRF_FOUND")
        cert.kind = CertKind::Lrf;
    else if (status == "ELRF_FOUND")
        cert.kind = CertKind::Elrf;
    else if (status == "EVENTUAL_AFFINE_FOUND")
        cert.kind = CertKind::EventualAffine;
    else if (status == "TRIVIAL_BODY_UNSAT")
        cert.kind = CertKind::TriviallyTerminating;
    else if (status == "NOT_FOUND")
        cert.kind = CertKind::NotFound;
    else
        throw ParseError(1, 1, "unknown certificate status: " + status);

    if (o.contains("rho")) {
        cert.rho = coeffs_from_json(o["rho"], &cert.loop_vars);
        if (o.contains("constant"))
            cert.rho->constant = Rational::parse(o["constant"].get<std::string>());
    }
    if (o.contains("k")) cert.k = Rational::parse(o["k"].get<std::string>());
    if (o.contains("f")) {
        if (o["f"].is_array())
            for (const auto& item : o["f"]) cert.f.push_back(coeffs_from_json(item, nullptr));
        else
            cert.f.push_back(coeffs_from_json(o["f"], nullptr));
    }
    if (o.contains("case")) {
        const std::string c = o["case"].get<std::string>();
        if (c == "DEC1_POS1")
            cert.case_tag = CaseTag::Phi11;
        else if (c == "DEC1_POS2")
            cert.case_tag = CaseTag::Phi12;
        else if (c == "DEC2_POS1")
            cert.case_tag = CaseTag::Phi21;
        else if (c == "DEC2_POS2_RELAXED")
            cert.case_tag = CaseTag::Phi22Relaxed;
        else
            throw ParseError(1, 1, "unknown case tag: " + c);
    }
    if (o.contains("diagnostics"))
        for (const auto& d : o["diagnostics"]) cert.diagnostics.push_back(d.get<std::string>());
    return cert;
}

bool same_certificate(const Certificate& a, const Certificate& b) {
    const auto rho_of = [](const Certificate& c) {
        return c.rho ? *c.rho : CandidateFn{};
    };
    return a.kind == b.kind && rho_of(a) == rho_of(b) && a.k == b.k && a.f == b.f &&
           a.case_tag == b.case_tag && a.diagnostics == b.diagnostics &&
           a.loop_vars == b.loop_vars;
}

}  // namespace elrf
