#pragma once

/**
 * @file validate.hpp
 * @brief Structural checks for every spec type and the input-smoothness preconditions.
 */

#include "delayrep/core/poly_kernel.hpp"
#include "delayrep/core/signal.hpp"
#include "delayrep/core/specs.hpp"

#include <string>
#include <vector>

namespace delayrep {

struct Violation {
    std::string item;     ///< offending matrix, kernel or field
    std::string message;  ///< human-readable invariant that failed
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    void add(std::string item, std::string message) { violations.push_back({std::move(item), std::move(message)}); }
    void merge(const ValidationReport& other);
    /// One line per violation, "item: message".
    std::string summary() const;
    /// First violation as a single line, for diagnostics.
    std::string first() const;
};

struct ValidationOptions {
    double cond_bound = 1e12;
    int max_degree = kDefaultMaxDegree;
};

ValidationReport validate(const DDESpec& spec, const ValidationOptions& opts = {});
ValidationReport validate(const NDSSpec& spec, const ValidationOptions& opts = {});
ValidationReport validate(const DDFSpec& spec, const ValidationOptions& opts = {});
ValidationReport validate(const ODEPDESpec& spec, const ValidationOptions& opts = {});

/// Which inputs a representation needs in W^{1,2} with a zero value at t = 0.
struct InputRequirements {
    bool w_smooth = false;
    bool u_smooth = false;
};

InputRequirements input_requirements(const DDESpec& spec);
InputRequirements input_requirements(const NDSSpec& spec);
InputRequirements input_requirements(const DDFSpec& spec);

/// Dimension and smoothness checks of (w, u) against the requirements.
ValidationReport validate_inputs(const InputRequirements& req, Index m, Index p, const SignalDescriptor& w,
                                 const SignalDescriptor& u);

/// Throws ValidationError carrying the first violation when the report is not empty.
void throw_if_invalid(const ValidationReport& report, const std::string& what);

}  // namespace delayrep
