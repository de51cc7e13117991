#pragma once

/**
 * @file json_io.hpp
 * @brief JSON files for every spec type.
 *
 * Layout:
 *   {"type": "DDE"|"NDS"|"DDF"|"ODEPDE"|"PIE", "dims": {...}, "delays": [...],
 *    "matrices": {"A0": [[...]], "Ai": [[[...]], ...], ...},
 *    "kernels": {"Adi": [{"degree": d, "coeffs": [[[...]], ...]}, ...], ...}}
 * Matrices are row-major nested arrays; absent or empty entries mean zero of the conforming
 * shape.  Per-delay lists carry an `i` suffix and kernels a `di` suffix.  PIE files hold an
 * "operators" object instead of matrices and kernels.  Output is canonical: sorted keys and
 * doubles printed with 17 significant digits, so write(read(write(s))) is byte-identical.
 */

#include "delayrep/convert/pie.hpp"
#include "delayrep/convert/sof.hpp"
#include "delayrep/core/specs.hpp"

#include <optional>
#include <string>
#include <variant>

namespace delayrep::io {

/// The static-feedback construction a DDF came from, kept so its recursion can be checked.
struct SofSection {
    SofPlant plant;
    Matrix F;
};

struct SpecFile {
    std::variant<DDESpec, NDSSpec, DDFSpec, ODEPDESpec, PIESpec> spec;
    std::optional<SofSection> sof;

    /// "DDE", "NDS", "DDF", "ODEPDE" or "PIE".
    std::string type() const;
};

/// Throws ValidationError on malformed JSON, unknown types or shape mismatches.
SpecFile parse_spec(const std::string& text);
std::string dump_spec(const SpecFile& file);

SpecFile read_spec(const std::string& path);
void write_spec(const std::string& path, const SpecFile& file);

}  // namespace delayrep::io
