// feigen: certify the period-doubling fixed point and its constants.
//
//   feigen approx  -N 20 -P 30 -o out/        midpoint G0, V0, W0 checkpoints
//   feigen certify -N 20 -P 30 --rho 1e-8     certificates as JSON
//   feigen digits  --lo X --hi Y              guaranteed digits of [X, Y]
//   feigen plot    --figure fig2a -s 1000     CSV covering of a figure
//   feigen report  -o out/                    full run: report.json, digits.txt
//
// FEIGEN_WORKERS sets the worker count, FEIGEN_SCRATCH the default output
// directory.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "feigen/feigen.hpp"

namespace
{

using namespace feigen;

std::string scratch_dir()
{
    const char *s = std::getenv("FEIGEN_SCRATCH");
    return s ? s : ".";
}

void add_run_options(CLI::App *cmd, RunConfig &cfg, std::vector<std::string> &targets)
{
    cmd->add_option("-N,--degree", cfg.degree, "truncation degree")->capture_default_str();
    cmd->add_option("-P,--digits", cfg.digits, "working precision in decimal digits")->capture_default_str();
    cmd->add_option("--rho", cfg.rho, "fixed-point ball radius (decimal)")->capture_default_str();
    cmd->add_option("--rho-delta", cfg.rho_delta, "delta eigenfunction ball radius (default 100 rho)");
    cmd->add_option("--rho-gamma", cfg.rho_gamma, "gamma eigenfunction ball radius (default 100 rho)");
    cmd->add_option("-M,--boundary", cfg.boundary_rectangles, "boundary rectangles for domain extension")
        ->capture_default_str();
    cmd->add_option("-w,--workers", cfg.workers, "worker threads (default FEIGEN_WORKERS or all cores)");
    cmd->add_option("-t,--targets", targets, "subset of fixed_point, delta, gamma")->delimiter(',');
    cmd->add_option("-o,--output-dir", cfg.output_dir, "output directory (default FEIGEN_SCRATCH or .)");
    cmd->add_option("--load-fixed-point", cfg.load_fixed_point, "G0 checkpoint to use instead of the bootstrap");
}

void apply_targets(RunConfig &cfg, const std::vector<std::string> &targets)
{
    if (targets.empty()) {
        return;
    }
    cfg.targets.clear();
    for (const auto &t : targets) {
        if (t == "fixed_point") {
            cfg.targets.insert(ProblemKind::fixed_point);
        } else if (t == "delta") {
            cfg.targets.insert(ProblemKind::delta_eigen);
        } else if (t == "gamma") {
            cfg.targets.insert(ProblemKind::gamma_eigen);
        } else {
            throw ConfigError("unknown target '" + t + "'");
        }
    }
}

std::filesystem::path output_dir(const RunConfig &cfg)
{
    std::filesystem::path p = cfg.output_dir.empty() ? scratch_dir() : cfg.output_dir;
    std::filesystem::create_directories(p);
    return p;
}

void print_summary(const PipelineResult &r)
{
    if (r.domain_extension) {
        std::cout << "domain extension: pass (" << r.domain_extension->boundary.size() << " rectangles)\n";
    }
    for (const auto &c : r.certificates) {
        std::cout << to_string(c.kind) << ": " << (c.pass ? "pass" : "FAIL") << "  rho=" << c.rho.to_decimal(3)
                  << "  eps<=" << c.epsilon.to_decimal(3, MPFR_RNDU) << "  kappa<=" << c.kappa.to_decimal(3, MPFR_RNDU)
                  << "  (" << c.wall_time_seconds << " s)\n";
    }
    for (const auto &[name, d] : r.digits) {
        std::cout << name << " = " << to_string(d) << '\n';
    }
    if (r.failure) {
        std::cerr << "stage " << r.failure->stage << " failed: " << r.failure->message << '\n';
    }
}

int finish(const PipelineResult &r, const std::filesystem::path &dir, bool digits_file)
{
    write_file((dir / "report.json").string(), to_json(r).dump(2) + "\n");
    if (digits_file) {
        write_file((dir / "digits.txt").string(), digits_text(r));
    }
    print_summary(r);
    std::cout << "wrote " << (dir / "report.json").string() << '\n';
    return r.failure ? 2 : 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Validated enclosures of the period-doubling fixed point and its constants"};
    app.require_subcommand(1);

    RunConfig cfg;
    cfg.workers = default_workers();
    std::vector<std::string> targets;

    auto *approx_cmd = app.add_subcommand("approx", "compute midpoint approximations and write checkpoints");
    add_run_options(approx_cmd, cfg, targets);

    auto *certify_cmd = app.add_subcommand("certify", "run the certification pipeline");
    add_run_options(certify_cmd, cfg, targets);

    auto *report_cmd = app.add_subcommand("report", "full run with report.json and digits.txt");
    add_run_options(report_cmd, cfg, targets);

    std::string figure = "fig2a";
    std::size_t subdivisions = 1000;
    std::string plot_out;
    auto *plot_cmd = app.add_subcommand("plot", "rectangle covering data for a figure (CSV)");
    add_run_options(plot_cmd, cfg, targets);
    plot_cmd->add_option("-f,--figure", figure, "fig1, fig2a..fig2d, fig3a..fig3d, fig4a, fig4b")->capture_default_str();
    plot_cmd->add_option("-s,--subdivisions", subdivisions, "subintervals (boundary rectangles for fig1)")
        ->capture_default_str();
    plot_cmd->add_option("--csv", plot_out, "CSV path (default stdout)");

    std::string lo, hi;
    unsigned bits = 0;
    auto *digits_cmd = app.add_subcommand("digits", "guaranteed decimal digits of an interval");
    digits_cmd->add_option("--lo", lo, "lower endpoint")->required();
    digits_cmd->add_option("--hi", hi, "upper endpoint")->required();
    digits_cmd->add_option("--bits", bits, "precision in bits (default: enough for the input)");

    CLI11_PARSE(app, argc, argv);

    try {
        apply_targets(cfg, targets);
        if (*digits_cmd) {
            const unsigned p = bits ? bits : static_cast<unsigned>(4 * std::max(lo.size(), hi.size()) + 16);
            const RoundingContext ctx(p);
            const Interval x = Interval::from_strings(ctx, lo, hi);
            const CertifiedDigits d = certified_digits(x);
            std::cout << to_string(d) << '\n' << grouped_digits(d);
            return 0;
        }
        if (*approx_cmd) {
            validate(cfg);
            const auto dir = output_dir(cfg);
            const RoundingContext ctx = RoundingContext::from_digits(cfg.digits);
            const Disc disc = Disc::standard(ctx);
            NewtonReport rep;
            const DenseVector g = approx_fixed_point(cfg.degree, cfg.digits, classical_seed_monomials(), &rep);
            write_file((dir / "G0.ball").string(), to_text(FunctionBall::from_reals(ctx, disc, g)));
            std::cout << "G0: newton iterations " << rep.iterations << ", residual "
                      << rep.residual.to_decimal(3, MPFR_RNDU) << '\n';
            for (auto z : eigenvalues_double(dt_matrix(g))) {
                if (std::abs(z) > 1.0) {
                    std::cout << "  DT(G0) eigenvalue " << z.real() << (z.imag() == 0 ? "" : " + i*")
                              << (z.imag() == 0 ? "" : std::to_string(z.imag())) << '\n';
                }
            }
            for (ProblemKind kind : {ProblemKind::delta_eigen, ProblemKind::gamma_eigen}) {
                if (!cfg.targets.count(kind)) {
                    continue;
                }
                const Eigenpair ep = approx_eigenpair(kind, g, cfg.digits);
                const char *file = kind == ProblemKind::delta_eigen ? "V0.ball" : "W0.ball";
                write_file((dir / file).string(), to_text(FunctionBall::from_reals(ctx, disc, ep.vector)));
                std::cout << file << ": phi = " << ep.value.to_decimal(12) << ", newton iterations "
                          << ep.newton.iterations << '\n';
            }
            return 0;
        }
        if (*plot_cmd) {
            const Figure fig = parse_figure(figure);
            if (fig == Figure::fig1) {
                cfg.targets = {ProblemKind::fixed_point};
            } else if (fig >= Figure::fig3a && fig <= Figure::fig3d) {
                cfg.targets = {ProblemKind::fixed_point, ProblemKind::delta_eigen};
            } else if (fig >= Figure::fig4a) {
                cfg.targets = {ProblemKind::fixed_point, ProblemKind::gamma_eigen};
            } else {
                cfg.targets = {ProblemKind::fixed_point};
            }
            const PipelineResult r = run_pipeline(cfg);
            if (r.failure) {
                print_summary(r);
                return 2;
            }
            if (plot_out.empty()) {
                emit_plot_covering(std::cout, fig, subdivisions, r.functions);
            } else {
                std::ofstream f(plot_out);
                if (!f) {
                    throw Error("cannot write " + plot_out);
                }
                emit_plot_covering(f, fig, subdivisions, r.functions);
            }
            return 0;
        }
        const PipelineResult r = run_pipeline(cfg);
        return finish(r, output_dir(cfg), static_cast<bool>(*report_cmd));
    } catch (const std::exception &e) {
        std::cerr << e.what() << '\n';
        return 1;
    }
}
