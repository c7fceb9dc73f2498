// Command-line front end for the controlled Lorenz-type family.
//
// Exit codes: 0 success, 2 invalid arguments, 3 numerical failure,
// 4 I/O error.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include <lorenzctl/lorenzctl.hpp>

using namespace lorenzctl;

namespace {

enum ExitCode { Ok = 0, BadArguments = 2, NumericalFailure = 3, IoFailure = 4 };

void diagnostic(const std::string& msg)
{
    const bool color = std::getenv("NO_COLOR") == nullptr && isatty(fileno(stderr));
    if (color)
        std::cerr << "\033[31mlorenzctl: error:\033[0m " << msg << '\n';
    else
        std::cerr << "lorenzctl: error: " << msg << '\n';
}

int exit_code_for(ErrorCode code)
{
    switch (code) {
    case ErrorCode::DivergedTrajectory:
    case ErrorCode::EigenvalueCollision: return NumericalFailure;
    case ErrorCode::IoError: return IoFailure;
    default: return BadArguments;
    }
}

struct SystemOptions {
    std::string preset;
    std::optional<double> a, b, c, M, N, P;

    void attach(CLI::App* app)
    {
        app->add_option("--preset", preset, "Named system: lorenz, chen, lu, t");
        app->add_option("--a", a, "Parameter a");
        app->add_option("--b", b, "Parameter b");
        app->add_option("--c", c, "Parameter c");
        app->add_option("--M", M, "Control coefficient M (overrides the preset)");
        app->add_option("--N", N, "Control coefficient N (overrides the preset)");
        app->add_option("--P", P, "Control coefficient P (overrides the preset)");
    }

    std::optional<Preset> preset_value() const
    {
        if (preset.empty()) return std::nullopt;
        auto p = parse_preset(preset);
        if (!p) throw Error(ErrorCode::InvalidArgument, "unknown preset '" + preset + "'");
        return p;
    }

    SystemParams resolve() const
    {
        if (!a || !b || !c) throw Error(ErrorCode::InvalidArgument, "--a, --b and --c are required");
        SystemParams p{*a, *b, *c};
        if (auto pre = preset_value()) p = from_preset(*pre, *a, *b, *c);
        if (M) p.M = *M;
        if (N) p.N = *N;
        if (P) p.P = *P;
        if (!p.finite()) throw Error(ErrorCode::InvalidArgument, "parameters must be finite");
        return p;
    }
};

struct OutputOptions {
    std::string format = "json";
    std::string out;

    void attach(CLI::App* app)
    {
        app->add_option("--format", format, "Output format: json or csv")->capture_default_str();
        app->add_option("--out", out, "Output path (default: standard output)");
    }

    template <class T>
    void emit(const T& value) const
    {
        auto f = parse_format(format);
        if (!f) throw Error(ErrorCode::UnsupportedFormat, "unknown format '" + format + "'");
        std::optional<std::filesystem::path> dest;
        if (!out.empty()) dest = out;
        lorenzctl::emit(value, *f, dest);
    }
};

struct IntegratorOptions {
    std::string mode = "adaptive";
    IntegratorSettings settings;

    void attach(CLI::App* app)
    {
        app->add_option("--mode", mode, "Stepper: adaptive or rk4")->capture_default_str();
        app->add_option("--dt", settings.dt_init, "Initial (adaptive) or fixed (rk4) step")->capture_default_str();
        app->add_option("--rel-tol", settings.rel_tol, "Relative tolerance")->capture_default_str();
        app->add_option("--abs-tol", settings.abs_tol, "Absolute tolerance")->capture_default_str();
        app->add_option("--t-max", settings.t_max, "Integration horizon")->capture_default_str();
        app->add_option("--max-steps", settings.max_steps, "Step attempt limit")->capture_default_str();
        app->add_option("--dt-max", settings.dt_max, "Largest adaptive step")->capture_default_str();
        app->add_option("--blowup", settings.blowup_norm, "Divergence threshold on |state|")->capture_default_str();
    }

    IntegratorSettings resolve() const
    {
        IntegratorSettings s = settings;
        if (mode == "rk4")
            s.mode = StepperMode::FixedRK4;
        else if (mode == "adaptive")
            s.mode = StepperMode::Adaptive;
        else
            throw Error(ErrorCode::InvalidArgument, "unknown mode '" + mode + "'");
        s.validate();
        return s;
    }
};

State to_state(const std::vector<double>& v) { return {v.at(0), v.at(1), v.at(2)}; }

SweepAxis parse_axis(const std::string& text)
{
    // name:start:stop:count
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 4) throw Error(ErrorCode::InvalidArgument, "axis must be name:start:stop:count");
    try {
        return {parts[0], std::stod(parts[1]), std::stod(parts[2]), std::stoi(parts[3])};
    } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidArgument, "malformed axis '" + text + "'");
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Equilibria, Lyapunov certificates, heteroclinic orbits and chaos detection for the controlled "
                 "Lorenz-type family"};
    app.require_subcommand(1);

    int status = Ok;

    // equilibria
    SystemOptions eq_sys;
    OutputOptions eq_out;
    double residual_tol = default_residual_tol;
    auto* eq_cmd = app.add_subcommand("equilibria", "Equilibrium points with eigenvalues");
    eq_sys.attach(eq_cmd);
    eq_out.attach(eq_cmd);
    eq_cmd->add_option("--residual-tol", residual_tol, "Allowed |f| at returned points")->capture_default_str();
    eq_cmd->callback([&] { eq_out.emit(find_equilibria(eq_sys.resolve(), residual_tol)); });

    // classify
    SystemOptions cl_sys;
    OutputOptions cl_out;
    double sign_tol = default_sign_tol;
    auto* cl_cmd = app.add_subcommand("classify", "Classify the origin");
    cl_sys.attach(cl_cmd);
    cl_out.attach(cl_cmd);
    cl_cmd->add_option("--tol", sign_tol, "Relative sign-test band")->capture_default_str();
    cl_cmd->callback([&] {
        const auto p = cl_sys.resolve();
        json j{{"params", p},
               {"origin_class", to_string(classify_origin(p, sign_tol))},
               {"eigenvalues", eigenvalues_json(origin_eigenvalues(p))}};
        cl_out.emit(j);
    });

    // certificate
    SystemOptions ce_sys;
    OutputOptions ce_out;
    auto* ce_cmd = app.add_subcommand("certificate", "Lyapunov-function certificates");
    ce_sys.attach(ce_cmd);
    ce_out.attach(ce_cmd);
    ce_cmd->callback([&] {
        const auto p = ce_sys.resolve();
        json j{{"params", p}, {"certificate", certificate(p)}, {"corollary", nullptr}};
        if (auto pre = ce_sys.preset_value(); pre && *pre != Preset::Lu)
            j["corollary"] = corollary_check(*pre, p.a, p.b, p.c);
        ce_out.emit(j);
    });

    // simulate
    SystemOptions si_sys;
    OutputOptions si_out;
    IntegratorOptions si_int;
    std::vector<double> si_u0{1.0, 1.0, 1.0};
    bool si_backward = false;
    auto* si_cmd = app.add_subcommand("simulate", "Integrate a trajectory");
    si_sys.attach(si_cmd);
    si_out.attach(si_cmd);
    si_int.attach(si_cmd);
    si_cmd->add_option("--u0", si_u0, "Initial state x y z")->expected(3)->capture_default_str();
    si_cmd->add_flag("--backward", si_backward, "Integrate backward in time");
    si_cmd->callback([&] {
        auto settings = si_int.resolve();
        settings.backward = si_backward;
        const auto tr = integrate(si_sys.resolve(), to_state(si_u0), settings);
        si_out.emit(tr);
        if (tr.status == TrajectoryStatus::Diverged || tr.status == TrajectoryStatus::StepLimit) {
            diagnostic(std::string("trajectory ended as ") + std::string(to_string(tr.status)));
            status = NumericalFailure;
        }
    });

    // heteroclinic
    SystemOptions he_sys;
    OutputOptions he_out;
    IntegratorOptions he_int;
    std::string he_branch = "plus";
    std::optional<double> he_eps;
    double he_capture = default_capture_radius;
    auto* he_cmd = app.add_subcommand("heteroclinic", "Trace a branch of the origin's unstable manifold");
    he_sys.attach(he_cmd);
    he_out.attach(he_cmd);
    he_int.attach(he_cmd);
    he_cmd->add_option("--branch", he_branch, "plus or minus")->capture_default_str();
    he_cmd->add_option("--epsilon", he_eps, "Initial offset along the eigendirection");
    he_cmd->add_option("--capture-radius", he_capture, "Capture radius")->capture_default_str();
    he_cmd->callback([&] {
        const auto p = he_sys.resolve();
        Branch branch;
        if (he_branch == "plus")
            branch = Branch::PlusX;
        else if (he_branch == "minus")
            branch = Branch::MinusX;
        else
            throw Error(ErrorCode::InvalidArgument, "branch must be plus or minus");
        const auto r = trace_heteroclinic(p, branch, he_eps.value_or(default_shooting_epsilon(p)), he_int.resolve(),
                                          he_capture);
        if (he_out.format == "csv")
            he_out.emit(r.trajectory);
        else
            he_out.emit(r);
        const auto st = r.trajectory.status;
        if (st == TrajectoryStatus::Diverged || st == TrajectoryStatus::StepLimit) {
            diagnostic(std::string("branch ended as ") + std::string(to_string(st)));
            status = NumericalFailure;
        }
    });

    // lle
    SystemOptions ly_sys;
    OutputOptions ly_out;
    IntegratorOptions ly_int;
    LLEOptions ly_opts;
    std::vector<double> ly_u0{1.0, 1.0, 1.0};
    auto* ly_cmd = app.add_subcommand("lle", "Largest Lyapunov exponent");
    ly_sys.attach(ly_cmd);
    ly_out.attach(ly_cmd);
    ly_int.attach(ly_cmd);
    ly_cmd->add_option("--u0", ly_u0, "Initial state x y z")->expected(3)->capture_default_str();
    ly_cmd->add_option("--renorm", ly_opts.renorm_interval, "Renormalisation interval")->capture_default_str();
    ly_cmd->add_option("--horizon", ly_opts.horizon, "Total time")->capture_default_str();
    ly_cmd->add_option("--transient", ly_opts.transient, "Discarded initial time")->capture_default_str();
    std::optional<std::uint64_t> ly_seed;
    ly_cmd->add_option("--seed", ly_seed, "Seed for a random initial tangent (default (1,1,1))");
    ly_cmd->callback([&] {
        if (ly_seed) {
            std::mt19937_64 rng(*ly_seed);
            std::normal_distribution<double> gauss;
            ly_opts.initial_tangent = State{gauss(rng), gauss(rng), gauss(rng)};
        }
        ly_out.emit(largest_lyapunov_exponent(ly_sys.resolve(), to_state(ly_u0), ly_int.resolve(), ly_opts));
    });

    // regime
    SystemOptions re_sys;
    OutputOptions re_out;
    auto* re_cmd = app.add_subcommand("regime", "Regular / chaos-candidate classification");
    re_sys.attach(re_cmd);
    re_out.attach(re_cmd);
    re_cmd->callback([&] {
        const auto p = re_sys.resolve();
        re_out.emit(json{{"params", p}, {"regime", to_string(regime_classify(p))}});
    });

    // suggest-anticontrol
    double ac_a = 10.0, ac_b = 8.0 / 3.0, ac_c = 0.5, ac_margin = 28.0;
    bool ac_verify = false;
    OutputOptions ac_out;
    IntegratorOptions ac_int;
    LLEOptions ac_opts;
    std::vector<double> ac_u0{1.0, 1.0, 1.0};
    auto* ac_cmd = app.add_subcommand("suggest-anticontrol", "Controller that pushes a stable Lorenz system past the pitchfork");
    ac_cmd->add_option("--a", ac_a, "Parameter a")->required();
    ac_cmd->add_option("--b", ac_b, "Parameter b")->required();
    ac_cmd->add_option("--c", ac_c, "Parameter c, in (0, 1)")->required();
    ac_cmd->add_option("--margin", ac_margin, "Distance M+N+c-1 past the pitchfork")->required();
    ac_cmd->add_flag("--verify", ac_verify, "Estimate the LLE of the controlled system");
    ac_cmd->add_option("--u0", ac_u0, "LLE start state x y z")->expected(3)->capture_default_str();
    ac_cmd->add_option("--horizon", ac_opts.horizon, "LLE total time")->capture_default_str();
    ac_cmd->add_option("--transient", ac_opts.transient, "LLE discarded time")->capture_default_str();
    ac_out.attach(ac_cmd);
    ac_int.attach(ac_cmd);
    ac_cmd->callback([&] {
        auto s = suggest_anticontrol(ac_a, ac_b, ac_c, ac_margin);
        if (ac_verify) verify_anticontrol(s, to_state(ac_u0), ac_int.resolve(), ac_opts);
        ac_out.emit(s);
    });

    // sweep
    SystemOptions sw_sys;
    OutputOptions sw_out;
    IntegratorOptions sw_int;
    std::vector<std::string> sw_axes;
    std::vector<std::string> sw_tasks{"origin_class"};
    std::uint64_t sw_seed = 0;
    unsigned sw_workers = 0;
    SweepSpec sw_spec;
    auto* sw_cmd = app.add_subcommand("sweep", "Parameter sweep over a 1-D or 2-D grid");
    sw_sys.attach(sw_cmd);
    sw_out.attach(sw_cmd);
    sw_int.attach(sw_cmd);
    sw_cmd->add_option("--axis", sw_axes, "name:start:stop:count (one or two)")->required();
    sw_cmd->add_option("--tasks", sw_tasks, "equilibria, origin_class, certificate, regime, lle")
        ->delimiter(',')
        ->capture_default_str();
    sw_cmd->add_option("--seed", sw_seed, "Seed for per-cell randomness")->capture_default_str();
    sw_cmd->add_option("--workers", sw_workers, "Worker threads (0 = hardware concurrency)")->capture_default_str();
    sw_cmd->add_option("--lle-horizon", sw_spec.lle.horizon, "LLE total time")->capture_default_str();
    sw_cmd->add_option("--lle-transient", sw_spec.lle.transient, "LLE discarded time")->capture_default_str();
    sw_cmd->callback([&] {
        // The swept parameters need not be given on the command line.
        SystemOptions base = sw_sys;
        for (const auto& text : sw_axes) {
            const auto ax = parse_axis(text);
            if (ax.parameter == "a" && !base.a) base.a = ax.start;
            if (ax.parameter == "b" && !base.b) base.b = ax.start;
            if (ax.parameter == "c" && !base.c) base.c = ax.start;
            sw_spec.axes.push_back(ax);
        }
        sw_spec.base = base.resolve();
        for (const auto& name : sw_tasks) {
            auto t = parse_sweep_task(name);
            if (!t) throw Error(ErrorCode::InvalidArgument, "unknown task '" + name + "'");
            sw_spec.tasks.push_back(*t);
        }
        sw_spec.seed = sw_seed;
        sw_spec.settings = sw_int.resolve();
        sw_out.emit(run_sweep(sw_spec, sw_workers));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        diagnostic(e.what());
        return BadArguments;
    } catch (const Error& e) {
        diagnostic(e.what());
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        diagnostic(e.what());
        return BadArguments;
    }
    return status;
}
