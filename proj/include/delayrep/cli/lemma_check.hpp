#pragma once

/**
 * @file lemma_check.hpp
 * @brief End-to-end differential checks of the representation equivalences, run on a spec file.
 *
 * Each check converts the input file, simulates both sides with the same inputs and initial data,
 * and reports the largest deviation per compared quantity.
 *
 *   1  DDE against its DDF
 *   2  NDS against its DDF
 *   3  ODE-PDE transport states against shifted DDF channels
 *   4  PIE against the DDF, including the state reconstruction
 *   5  feedback-network DDF against the closed-loop recursion of its plant
 */

#include "delayrep/io/json_io.hpp"
#include "delayrep/simulate/trajectory.hpp"

#include <optional>
#include <string>
#include <vector>

namespace delayrep::cli {

struct LemmaOptions {
    /// Unset fields fall back to per-lemma defaults (3 tau_K horizon, dt = 1e-3).
    std::optional<double> t_final;
    std::optional<double> dt;
    std::size_t order = 16;
    /// Input descriptors; default sin:1:3:0 and sin:0.5:2:0, or poly:0,0,1 and poly:0,0,0.5
    /// for lemma 4.
    std::optional<std::string> w;
    std::optional<std::string> u;
    /// Initial state descriptor; DDE histories use it on [-tau_K, 0], other forms only at 0.
    std::optional<std::string> x0;
    std::optional<double> tolerance;
};

struct LemmaReport {
    int lemma = 0;
    std::vector<SignalDeviation> deviations;
    double tolerance = 0.0;

    double max_deviation() const;
    bool passed() const { return max_deviation() <= tolerance; }
};

/// Default pass threshold of each lemma check.
double default_lemma_tolerance(int lemma);

/// Throws ValidationError when the file type does not fit the lemma (e.g. lemma 5 without a
/// feedback-network section) and NumericalError when a simulation fails.
LemmaReport check_lemma(const io::SpecFile& file, int lemma, const LemmaOptions& opts = {});

}  // namespace delayrep::cli
