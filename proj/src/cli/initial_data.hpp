#pragma once

/**
 * @file initial_data.hpp
 * @brief Initial data for command-line simulations, built from signal descriptors.
 */

#include "delayrep/core/history.hpp"
#include "delayrep/core/signal.hpp"
#include "delayrep/core/specs.hpp"

#include <string>
#include <vector>

namespace delayrep::cli {

/// The descriptor read backwards in time: x0(s) = raw(s) on [-tau_K, 0].
inline HistoryFunction dde_history(const DDESpec& dde, const std::string& desc) {
    const SignalDescriptor s = SignalDescriptor::parse(desc, dde.dims.n);
    const double lower = dde.delays.empty() ? -1.0 : -dde.delays.back();
    return HistoryFunction::sample([&](double t) { return s.raw(t); }, dde.dims.n, lower, 129);
}

inline Vector state_vector(Index n, const std::string& desc) {
    return SignalDescriptor::parse(desc, n).raw(0.0);
}

/// Zero channel histories, one per delay, on [-tau_i, 0].
inline std::vector<HistoryFunction> zero_histories(const DDFSpec& ddf) {
    std::vector<HistoryFunction> out;
    for (std::size_t i = 0; i < ddf.delays.size(); ++i) {
        out.push_back(HistoryFunction::zero(ddf.dims.p_i[i], -ddf.delays[i], static_cast<int>(i)));
    }
    return out;
}

}  // namespace delayrep::cli
