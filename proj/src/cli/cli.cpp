#include "delayrep/cli/cli.hpp"

#include "delayrep/cli/lemma_check.hpp"
#include "delayrep/convert/dde_ddf.hpp"
#include "delayrep/convert/minimal.hpp"
#include "delayrep/convert/pie.hpp"
#include "delayrep/core/validate.hpp"
#include "delayrep/io/csv.hpp"
#include "delayrep/io/json_io.hpp"
#include "delayrep/models/shower.hpp"
#include "delayrep/models/uav.hpp"
#include "delayrep/simulate/simulate.hpp"

#include "initial_data.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <iostream>

namespace delayrep::cli {

namespace {

void diagnostic(const char* kind, int code, std::string msg) {
    for (auto& c : msg) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    std::cerr << "delayrep: error kind=" << kind << " code=" << code << " msg=" << msg << '\n';
}

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

void emit_spec(const io::SpecFile& file, const std::string& out) {
    if (out.empty()) std::cout << io::dump_spec(file);
    else io::write_spec(out, file);
}

ValidationReport validate_file(const io::SpecFile& file) {
    return std::visit([](const auto& s) { return validate(s); }, file.spec);
}

// ---------------------------------------------------------------------------------------------

struct ConvertArgs {
    std::string spec, to, out;
    bool minimal = false;
    double rank_tol = kDefaultRankTol;
};

/// DDF stage of the conversion matrix, used for every target except a direct DDE-to-PIE.
DDFSpec to_ddf(const io::SpecFile& file, const ConvertArgs& a) {
    if (a.minimal && !std::holds_alternative<DDESpec>(file.spec)) {
        throw ValidationError("--minimal applies to DDE specs only");
    }
    if (const auto* dde = std::get_if<DDESpec>(&file.spec)) {
        return a.minimal ? minimal_ddf_from_dde(*dde, a.rank_tol) : dde_to_ddf(*dde);
    }
    if (const auto* nds = std::get_if<NDSSpec>(&file.spec)) return nds_to_ddf(*nds);
    if (const auto* ddf = std::get_if<DDFSpec>(&file.spec)) return *ddf;
    if (const auto* o = std::get_if<ODEPDESpec>(&file.spec)) return odepde_to_ddf(*o);
    throw ValidationError("a PIE spec cannot be converted to another representation");
}

int cmd_validate(const std::string& path) {
    const io::SpecFile file = io::read_spec(path);
    const ValidationReport rep = validate_file(file);
    if (!rep.ok()) {
        std::cout << rep.summary();
        diagnostic("validation", kValidationFailure, rep.first());
        return kValidationFailure;
    }
    std::cout << "ok " << file.type() << '\n';
    return kOk;
}

int cmd_convert(const ConvertArgs& a) {
    const io::SpecFile file = io::read_spec(a.spec);
    throw_if_invalid(validate_file(file), "source spec");
    io::SpecFile out;
    if (a.to == "pie") {
        const auto* dde = std::get_if<DDESpec>(&file.spec);
        out.spec = dde && !a.minimal ? dde_to_pie(*dde) : ddf_to_pie(to_ddf(file, a));
    } else {
        DDFSpec ddf = to_ddf(file, a);
        if (a.to == "odepde") out.spec = ddf_to_odepde(ddf);
        else out.spec = std::move(ddf);
        if (a.to == "ddf" && std::holds_alternative<DDFSpec>(file.spec)) out.sof = file.sof;
    }
    emit_spec(out, a.out);
    return kOk;
}

// ---------------------------------------------------------------------------------------------

struct SimulateArgs {
    std::string spec, out, w = "zero", u = "zero", x0 = "zero", integrator = "auto";
    double tf = 1.0, dt = 1e-3;
    std::size_t order = 16;
    bool fd_derivatives = false;
};

Trajectory simulate_file(const io::SpecFile& file, const SimulateArgs& a) {
    SimConfig cfg;
    cfg.t_final = a.tf;
    cfg.dt = a.dt;
    cfg.order = a.order;
    cfg.integrator = a.integrator == "rk4"         ? Integrator::RK4Characteristics
                     : a.integrator == "trapezoid" ? Integrator::ImplicitTrapezoid
                                                   : Integrator::Auto;
    cfg.input_derivative = a.fd_derivatives ? InputDerivative::FiniteDifference : InputDerivative::Analytic;

    return std::visit(
        [&](const auto& s) -> Trajectory {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, DDESpec>) {
                const auto w = SignalDescriptor::parse(a.w, s.dims.m);
                const auto u = SignalDescriptor::parse(a.u, s.dims.p);
                return simulate_dde(s, dde_history(s, a.x0), w, u, cfg);
            } else if constexpr (std::is_same_v<S, NDSSpec>) {
                if (!SignalDescriptor::parse(a.x0, s.dims().n).is_zero()) {
                    throw ValidationError("NDS simulations start from zero initial data; use --x0 zero");
                }
                return simulate_nds(s, SignalDescriptor::parse(a.w, s.dims().m),
                                    SignalDescriptor::parse(a.u, s.dims().p), cfg);
            } else if constexpr (std::is_same_v<S, DDFSpec>) {
                return simulate_ddf(s, state_vector(s.dims.n, a.x0), zero_histories(s),
                                    SignalDescriptor::parse(a.w, s.dims.m), SignalDescriptor::parse(a.u, s.dims.p), cfg);
            } else if constexpr (std::is_same_v<S, ODEPDESpec>) {
                std::vector<HistoryFunction> phi0;
                for (Index pi : s.body.dims.p_i) phi0.push_back(HistoryFunction::zero(pi, -1.0));
                return simulate_odepde(s, state_vector(s.body.dims.n, a.x0), phi0,
                                       SignalDescriptor::parse(a.w, s.body.dims.m),
                                       SignalDescriptor::parse(a.u, s.body.dims.p), cfg);
            } else {
                // Zero channel histories; only the finite part of the PIE state is settable here.
                std::vector<HistoryFunction> r0;
                for (std::size_t i = 0; i < s.delays.size(); ++i) {
                    r0.push_back(HistoryFunction::zero(s.dims.p_i[i], -s.delays[i], static_cast<int>(i)));
                }
                const HybridVector X0 = pie_initial_state(s, state_vector(s.dims.n, a.x0), r0);
                return simulate_pie(s, X0, SignalDescriptor::parse(a.w, s.dims.m),
                                    SignalDescriptor::parse(a.u, s.dims.p), cfg);
            }
        },
        file.spec);
}

int cmd_simulate(const SimulateArgs& a) {
    const io::SpecFile file = io::read_spec(a.spec);
    const Trajectory tr = simulate_file(file, a);
    if (a.out.empty()) std::cout << io::trajectory_to_csv(tr);
    else io::write_trajectory(a.out, tr);
    return kOk;
}

// ---------------------------------------------------------------------------------------------

void print_deviations(const std::vector<SignalDeviation>& devs) {
    for (const auto& d : devs) {
        std::cout << d.signal << " max_abs=" << format_value(d.max_abs) << " max_rel=" << format_value(d.max_rel)
                  << " t=" << format_value(d.t_at_max) << '\n';
    }
}

int cmd_compare(const std::string& a_path, const std::string& b_path, double tol, const std::vector<std::string>& signals) {
    const Trajectory a = io::read_trajectory(a_path);
    const Trajectory b = io::read_trajectory(b_path);
    const ComparisonReport rep = compare(a, b, signals);
    print_deviations(rep.deviations);
    const double worst = rep.max_abs();
    std::cout << "max deviation " << format_value(worst) << " tol " << format_value(tol) << '\n';
    if (!(worst <= tol)) {
        diagnostic("comparison", kValidationFailure, "max deviation " + format_value(worst) + " exceeds " + format_value(tol));
        return kValidationFailure;
    }
    return kOk;
}

struct DemoArgs {
    std::string model, out, form = "dde";
    Index N = 2;
    std::uint32_t seed = 1;
    double gain = -0.5;
};

int cmd_demo(const DemoArgs& a) {
    io::SpecFile file;
    if (a.model == "shower") {
        const ShowerParams params = ShowerParams::defaults(a.N);
        if (a.form == "ddf") file.spec = build_shower_ddf(params);
        else file.spec = build_shower_dde(params);
    } else if (a.model == "uav") {
        const UAVParams params = UAVParams::example(a.N, 2, 3, 3, 1, a.seed);
        if (a.form == "ddf") file.spec = build_uav_ddf(params);
        else file.spec = build_uav_dde(params);
    } else {
        // Scalar agents sharing one actuator signal u = F y with F averaging the sensors.
        const UAVParams params = UAVParams::example(a.N, 1, 1, 1, 1, a.seed);
        io::SofSection sof{uav_sof_plant(params), Matrix::Constant(1, a.N, a.gain / static_cast<double>(a.N))};
        file.spec = sof_network_to_ddf(sof.plant, sof.F);
        file.sof = std::move(sof);
    }
    emit_spec(file, a.out);
    return kOk;
}

struct LemmaArgs {
    std::string spec;
    int lemma = 1;
    LemmaOptions opts;
};

int cmd_lemma(const LemmaArgs& a) {
    const io::SpecFile file = io::read_spec(a.spec);
    const LemmaReport rep = check_lemma(file, a.lemma, a.opts);
    print_deviations(rep.deviations);
    std::cout << "lemma " << rep.lemma << " max deviation " << format_value(rep.max_deviation()) << " tol "
              << format_value(rep.tolerance) << (rep.passed() ? " PASS" : " FAIL") << '\n';
    if (!rep.passed()) {
        diagnostic("lemma", kValidationFailure,
                   "lemma " + std::to_string(rep.lemma) + " deviation " + format_value(rep.max_deviation()) +
                       " exceeds " + format_value(rep.tolerance));
        return kValidationFailure;
    }
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Time-delay system representations: conversion and simulation"};
    app.require_subcommand(1);

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "Check a spec file against its class invariants");
    validate_cmd->add_option("spec", validate_path, "Spec JSON")->required();

    ConvertArgs conv;
    auto* convert_cmd = app.add_subcommand("convert", "Convert a spec to another representation");
    convert_cmd->add_option("spec", conv.spec, "Source spec JSON")->required();
    convert_cmd->add_option("--to", conv.to, "Target representation")
        ->required()
        ->transform(CLI::IsMember({"ddf", "odepde", "pie"}, CLI::ignore_case));
    convert_cmd->add_flag("--minimal", conv.minimal, "Low-rank channel reduction (DDE sources)");
    convert_cmd->add_option("--rank-tol", conv.rank_tol, "Relative singular-value cut for --minimal")
        ->check(CLI::PositiveNumber);
    convert_cmd->add_option("-o,--output", conv.out, "Output path (default: stdout)");

    SimulateArgs sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a spec and write the trajectory CSV");
    simulate_cmd->add_option("spec", sim.spec, "Spec JSON")->required();
    simulate_cmd->add_option("--tf", sim.tf, "Final time")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--dt", sim.dt, "Step size")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--order", sim.order, "PIE collocation order M")->check(CLI::Range(2, 256));
    simulate_cmd->add_option("--w", sim.w, "Disturbance descriptor");
    simulate_cmd->add_option("--u", sim.u, "Control descriptor");
    simulate_cmd->add_option("--x0", sim.x0, "Initial state descriptor");
    simulate_cmd->add_option("--integrator", sim.integrator, "auto, rk4 or trapezoid")
        ->transform(CLI::IsMember({"auto", "rk4", "trapezoid"}, CLI::ignore_case));
    simulate_cmd->add_flag("--fd-derivatives", sim.fd_derivatives, "Finite-difference input rates for PIEs");
    simulate_cmd->add_option("-o,--output", sim.out, "Trajectory CSV (default: stdout)");

    std::string cmp_a, cmp_b;
    double cmp_tol = 1e-6;
    std::vector<std::string> cmp_signals{"x", "y", "z"};
    auto* compare_cmd = app.add_subcommand("compare", "Compare two trajectory CSVs");
    compare_cmd->add_option("a", cmp_a, "Candidate trajectory")->required()->check(CLI::ExistingFile);
    compare_cmd->add_option("b", cmp_b, "Reference trajectory")->required()->check(CLI::ExistingFile);
    compare_cmd->add_option("--tol", cmp_tol, "Largest accepted absolute deviation")->check(CLI::NonNegativeNumber);
    compare_cmd->add_option("--signals", cmp_signals, "Signals to compare")->delimiter(',');

    DemoArgs demo;
    auto* demo_cmd = app.add_subcommand("demo", "Write a model spec");
    demo_cmd->add_option("model", demo.model, "shower, uav or sof")
        ->required()
        ->transform(CLI::IsMember({"shower", "uav", "sof"}, CLI::ignore_case));
    demo_cmd->add_option("--n", demo.N, "Number of agents")->check(CLI::Range(1, 1000));
    demo_cmd->add_option("--form", demo.form, "dde or ddf (shower, uav)")
        ->transform(CLI::IsMember({"dde", "ddf"}, CLI::ignore_case));
    demo_cmd->add_option("--seed", demo.seed, "Random seed (uav, sof)");
    demo_cmd->add_option("--gain", demo.gain, "Feedback gain (sof)");
    demo_cmd->add_option("-o,--output", demo.out, "Output path (default: stdout)");

    LemmaArgs lem;
    double lem_tf = 0.0, lem_dt = 0.0, lem_tol = 0.0;
    std::string lem_x0;
    auto* lemma_cmd = app.add_subcommand("lemma-check", "Differential test of an equivalence lemma");
    lemma_cmd->add_option("spec", lem.spec, "Spec JSON")->required();
    lemma_cmd->add_option("--lemma", lem.lemma, "1 to 5")->required()->check(CLI::Range(1, 5));
    auto* tf_opt = lemma_cmd->add_option("--tf", lem_tf, "Final time (default 3 tau_K)")->check(CLI::PositiveNumber);
    auto* dt_opt = lemma_cmd->add_option("--dt", lem_dt, "Step size (default 1e-3)")->check(CLI::PositiveNumber);
    lemma_cmd->add_option("--order", lem.opts.order, "PIE order")->check(CLI::Range(2, 256));
    lemma_cmd->add_option("--w", lem.opts.w, "Disturbance descriptor");
    lemma_cmd->add_option("--u", lem.opts.u, "Control descriptor");
    auto* x0_opt = lemma_cmd->add_option("--x0", lem_x0, "Initial state descriptor");
    auto* tol_opt = lemma_cmd->add_option("--tol", lem_tol, "Pass threshold")->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        diagnostic("usage", kUsageError, e.what());
        return kUsageError;
    }

    try {
        if (*validate_cmd) return cmd_validate(validate_path);
        if (*convert_cmd) return cmd_convert(conv);
        if (*simulate_cmd) return cmd_simulate(sim);
        if (*compare_cmd) return cmd_compare(cmp_a, cmp_b, cmp_tol, cmp_signals);
        if (*demo_cmd) return cmd_demo(demo);
        if (*tf_opt) lem.opts.t_final = lem_tf;
        if (*dt_opt) lem.opts.dt = lem_dt;
        if (*x0_opt) lem.opts.x0 = lem_x0;
        if (*tol_opt) lem.opts.tolerance = lem_tol;
        return cmd_lemma(lem);
    } catch (const NumericalError& e) {
        diagnostic("numerical", kNumericalFailure, e.what());
        return kNumericalFailure;
    } catch (const DegreeOverflow& e) {
        diagnostic("numerical", kNumericalFailure, e.what());
        return kNumericalFailure;
    } catch (const Error& e) {
        diagnostic("validation", kValidationFailure, e.what());
        return kValidationFailure;
    } catch (const std::exception& e) {
        diagnostic("internal", kNumericalFailure, e.what());
        return kNumericalFailure;
    }
}

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"delayrep"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace delayrep::cli
