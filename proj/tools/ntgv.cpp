#include "ntgv/ntgv.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

struct DenoiseArgs
{
    std::string input;
    std::string output;
    std::string reference;
    std::string metrics;
    std::string log;
    std::string generate;
    std::string save_clean;
    std::string save_noisy;
    int rows = 1;
    int cols = 1;
    std::vector<double> radii;
    std::vector<double> resolutions;
    double noise_sigma = 0.0;
    std::uint64_t seed = 1;
    bool timing = true;
    bool quiet = false;
    ntgv::SolverConfig cfg;
};

json record_to_json(const ntgv::IterationRecord& r)
{
    return {
        {"iteration", r.iteration},
        {"lagrangian_before_newton", r.lagrangian_before_newton},
        {"lagrangian_after_newton", r.lagrangian_after_newton},
        {"fidelity", r.fidelity},
        {"tgv_alpha1_term", r.tgv.alpha1_term},
        {"tgv_jacobian_term", r.tgv.jacobian_term},
        {"tgv_jump_term", r.tgv.jump_term},
        {"tgv_total", r.tgv.total},
        {"residual_d0", r.residuals.r0},
        {"residual_D1", r.residuals.r1},
        {"residual_d2", r.residuals.r2},
        {"newton_steps_accepted", r.newton_steps_accepted},
        {"line_search_failed", r.line_search_failed},
        {"cg_iterations", r.cg_iterations},
        {"cg_relative_residual", r.cg_relative_residual},
        {"wall_seconds", r.wall_seconds},
    };
}

json config_echo(const DenoiseArgs& a)
{
    const ntgv::SolverConfig& c = a.cfg;
    return {
        {"input", a.input},
        {"reference", a.reference},
        {"generate", a.generate},
        {"rows", a.rows},
        {"cols", a.cols},
        {"radii", a.radii},
        {"resolutions", a.resolutions},
        {"noise_sigma", a.noise_sigma},
        {"seed", a.seed},
        {"alpha0", c.alpha0},
        {"alpha1", c.alpha1},
        {"tv", c.tv_mode},
        {"beta", c.beta},
        {"tau", c.tau},
        {"rho0", c.rho0},
        {"rho1", c.rho1},
        {"rho2", c.rho2},
        {"iters", c.max_outer_iters},
        {"newton_steps", c.newton_steps},
        {"cg_tol", c.cg_tol},
    };
}

int run_denoise(const DenoiseArgs& a)
{
    using namespace ntgv;
    if (a.input.empty() == a.generate.empty())
        throw Error(ErrorCode::InvalidArgument, "give exactly one of --input or --generate");

    std::optional<TriMesh> reference;
    TriMesh input;
    if (!a.generate.empty()) {
        input = a.generate == "spheres" ? io::generate_hemisphere_grid(a.rows, a.cols, a.radii, a.resolutions)
                                        : io::generate_halfcylinder_grid(a.rows, a.cols, a.radii, a.resolutions);
        reference = input;
    } else {
        input = io::load_mesh(a.input);
    }
    if (!a.reference.empty()) {
        reference = io::load_mesh(a.reference);
        io::check_same_connectivity(input, *reference);
    }
    if (!a.metrics.empty() && !reference)
        throw Error(ErrorCode::InvalidArgument, "--metrics needs a clean mesh from --reference or --generate");

    const TriMesh noisy = io::add_noise(input, a.noise_sigma, a.seed);
    if (!a.save_clean.empty() && reference) io::save_mesh(*reference, a.save_clean);
    if (!a.save_noisy.empty()) io::save_mesh(noisy, a.save_noisy);

    std::ofstream log;
    if (!a.log.empty()) {
        log.open(a.log);
        if (!log) throw Error(ErrorCode::InvalidArgument, "cannot write log '" + a.log + "'");
    }
    RunOptions opts;
    opts.timing = a.timing;
    opts.on_iteration = [&](const IterationRecord& r, const AdmmState&) {
        if (log) log << record_to_json(r).dump() << '\n';
        if (!a.quiet)
            std::cerr << "iter " << r.iteration << "  L=" << r.lagrangian_after_newton
                      << "  residual=" << r.residuals.max() << '\n';
    };

    const auto start = std::chrono::steady_clock::now();
    const RunResult result = run(noisy, a.cfg, opts);
    const double seconds =
        a.timing ? std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() : 0.0;

    if (!a.output.empty()) io::save_mesh(result.mesh, a.output);
    if (!a.metrics.empty()) {
        const RegularizerWeights weights{a.cfg.alpha0, a.cfg.first_order_weight(), a.cfg.beta};
        io::MetricsReport m = io::compute_metrics(result.mesh, *reference, &result.state.w, weights);
        m.runtime_seconds = seconds;
        m.iterations = result.iterations;
        json j = {
            {"mean_angular_normal_error_deg", m.mean_angular_normal_error_deg},
            {"rms_vertex_distance", m.rms_vertex_distance},
            {"max_vertex_distance", m.max_vertex_distance},
            {"tv_normal", m.tv_normal},
            {"tgv_alpha1_term", m.tgv.alpha1_term},
            {"tgv_jacobian_term", m.tgv.jacobian_term},
            {"tgv_jump_term", m.tgv.jump_term},
            {"tgv_total", m.tgv.total},
            {"runtime_seconds", m.runtime_seconds},
            {"iterations", m.iterations},
            {"converged", result.converged},
            {"input_mean_angular_normal_error_deg", io::mean_angular_error_deg(noisy, *reference)},
        };
        j.update(config_echo(a));
        std::ofstream out(a.metrics);
        if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write metrics '" + a.metrics + "'");
        out << j.dump(2) << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Mesh denoising with total generalized variation of the normal field"};
    app.require_subcommand(1);

    DenoiseArgs a;
    CLI::App* den = app.add_subcommand("denoise", "Denoise a closed triangle mesh");
    den->add_option("--input", a.input, "Input mesh (.obj or .off)");
    den->add_option("--generate", a.generate, "Synthesize the input instead of loading it")
        ->check(CLI::IsMember({"spheres", "cylinders"}));
    den->add_option("--rows", a.rows, "Grid rows for --generate")->check(CLI::PositiveNumber);
    den->add_option("--cols", a.cols, "Grid columns for --generate")->check(CLI::PositiveNumber);
    den->add_option("--radius", a.radii, "Radius per row (one value broadcasts)");
    den->add_option("--resolution", a.resolutions, "Target edge length per column (one value broadcasts)");
    den->add_option("--output", a.output, "Write the denoised mesh");
    den->add_option("--reference", a.reference, "Clean mesh for error metrics");
    den->add_option("--metrics", a.metrics, "Write a JSON metrics report");
    den->add_option("--log", a.log, "Write the convergence log as JSON lines");
    den->add_option("--save-clean", a.save_clean, "Write the clean mesh");
    den->add_option("--save-noisy", a.save_noisy, "Write the mesh after noise injection");
    den->add_option("--alpha0", a.cfg.alpha0, "Second-order weight")->capture_default_str();
    den->add_option("--alpha1", a.cfg.alpha1, "First-order weight")->capture_default_str();
    den->add_flag("--tv", a.cfg.tv_mode, "Total variation of the normal instead of TGV");
    den->add_option("--beta", a.cfg.beta, "TV weight used with --tv")->capture_default_str();
    den->add_option("--tau", a.cfg.tau, "Barrier weight")->capture_default_str();
    den->add_option("--rho0", a.cfg.rho0, "Penalty for the first-order constraint")->capture_default_str();
    den->add_option("--rho1", a.cfg.rho1, "Penalty for the Jacobian constraint")->capture_default_str();
    den->add_option("--rho2", a.cfg.rho2, "Penalty for the jump constraint")->capture_default_str();
    den->add_option("--iters", a.cfg.max_outer_iters, "Maximum outer iterations")->capture_default_str();
    den->add_option("--newton-steps", a.cfg.newton_steps, "Newton steps per outer iteration")->capture_default_str();
    den->add_option("--cg-tol", a.cfg.cg_tol, "Relative tolerance of the W solve")->capture_default_str();
    den->add_option("--noise-sigma", a.noise_sigma, "Gaussian noise, as a factor of the mean edge length")
        ->check(CLI::NonNegativeNumber);
    den->add_option("--seed", a.seed, "Noise seed")->capture_default_str();
    bool no_timing = false;
    den->add_flag("--no-timing", no_timing, "Omit wall-clock times (reproducible outputs)");
    den->add_flag("--quiet", a.quiet, "No per-iteration progress on stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    a.timing = !no_timing;
    if (a.input.empty() && a.generate.empty()) {
        std::cerr << "error: --input PATH (or --generate) is required\n\n" << den->help();
        return 2;
    }
    try {
        return run_denoise(a);
    } catch (const ntgv::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
