#pragma once

#include <string>

#include "elrf/detect.hpp"

namespace elrf {

/// Stable-order JSON: {status, rho, constant, k, f, case, diagnostics} with
/// absent fields omitted and every rational as a "p/q" or "n" string.
std::string emit_json(const Certificate& cert);

/// Inverse of emit_json over the serialized fields (raw solution and witness
/// bookkeeping are not part of the schema).
Certificate parse_certificate_json(const std::string& text);

/// Equality over the serialized fields only.
bool same_certificate(const Certificate& a, const Certificate& b);

}  // namespace elrf
