#include "specrkhs/cli.hpp"

#include <algorithm>
#include <map>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli/commands.hpp"
#include "specrkhs/parallel.hpp"
#include "specrkhs/text_io.hpp"

namespace specrkhs::cli {

namespace {

enum class ErrorKind { Usage, Numerical };

int report_error(std::ostream& err, bool as_json, ErrorKind kind, const std::string& message) {
    const int code = kind == ErrorKind::Usage ? 2 : 1;
    if (as_json) {
        nlohmann::json j;
        j["error"] = {{"kind", kind == ErrorKind::Usage ? "usage" : "numerical"}, {"message", message}};
        j["exit_code"] = code;
        err << j.dump() << '\n';
    } else {
        err << "specrkhs: " << (kind == ErrorKind::Usage ? "usage error: " : "error: ") << message << '\n';
    }
    return code;
}

void write_manifest(const Context& ctx, const std::vector<std::string>& args, int exit_code,
                    const std::string& error) {
    nlohmann::json m;
    m["tool"] = "specrkhs";
    m["version"] = kVersion;
    m["argv"] = args;
    m["config"] = to_json(ctx.cfg);
    m["seed"] = ctx.cfg.seed;
    m["threads"] = thread_count();
    m["libraries"] = {{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                    std::to_string(EIGEN_MINOR_VERSION)},
                      {"lapack", "reference LAPACK via LAPACKE"}};
    m["status"] = exit_code == 0 ? "ok" : "error";
    m["exit_code"] = exit_code;
    if (!error.empty()) m["error"] = error;
    m["outputs"] = ctx.outputs;
    m["results"] = ctx.results;
    nlohmann::json t = nlohmann::json::object();
    for (const auto& [stage, secs] : ctx.timings) t[stage] = t.contains(stage) ? t[stage].get<double>() + secs : secs;
    m["timings_s"] = t;
    atomic_write_file((ctx.out_dir / "manifest.json").string(), m.dump(2) + "\n");
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Residual-verified spectral computations for Koopman and Perron-Frobenius operators on "
                 "reproducing kernel Hilbert spaces.",
                 "specrkhs"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config", "", "Read `key = value` lines; keys are long flag names, flags override them");
    app.get_config_formatter_base()->arrayDelimiter('\x1f');
    app.require_subcommand(1, 1);
    app.footer(
        "Specs:\n"
        "  kernel    matern:d=2,n=3,sigma=1 | wendland:d=3,k=1,sigma=1 | gaussian-rbf:d=2,sigma=1 | h1:a=-1,b=0 |\n"
        "            hyperbolic-gaussian:sigma=5 | polynomial:d=1,c=1,degree=2 | discrete-delta | weighted-sequence:r=1\n"
        "  system    gauss | duffing | lorenz | mobius:preset=2 | random-walk:window=1000 |\n"
        "            random-walk-perturbed:seed=7 | identity:d=2\n"
        "  sampling  box:lo=-2,hi=2 | chebyshev:a=-1,b=0,intervals=200,nested=0 | disk:alpha=0.25 | lattice:lo=-50,hi=50 |\n"
        "            trajectory:x0=-8/8/27\n"
        "  grid      re_min:re_max:step[,im_min:im_max:step] | lattice:N\n"
        "  points    lo:hi:count\n"
        "  observable state:k | states:1=0.5,-1=-0.5 | index:0=1 | random\n"
        "Exit codes: 0 success, 1 numerical failure, 2 usage error. SPECRKHS_THREADS mirrors --threads.");

    auto* data = app.add_option_group("Data");
    data->add_option("--system", cfg.system, "Built-in system spec");
    data->add_option("--data", cfg.data, "Snapshot CSV (x..., y... columns)")->check(CLI::ExistingFile);
    data->add_option("--gram", cfg.gram_in, "Serialized Gram triple from `specrkhs gram`")->check(CLI::ExistingFile);
    data->add_option("--kernel", cfg.kernel, "Kernel spec (default depends on the system)");
    data->add_option("--sampling", cfg.sampling, "Sampling spec for --system (default depends on the system)");
    data->add_option("--n", cfg.n, "Number of snapshot states (0 = system default)")->check(CLI::Range(0, 1000000));
    data->add_option("--samples", cfg.samples, "Successor samples per state (stochastic systems)")
        ->check(CLI::Range(1, 1000000));
    data->add_flag("--exact", cfg.exact, "Exact transition rows for Markov chains");
    data->add_option("--seed", cfg.seed, "Seed for sampling and stochastic dynamics");

    auto* num = app.add_option_group("Numerics");
    num->add_option("--eps", cfg.eps,
                    "Residual threshold (eig, pseudospec, forecast) or smoothing parameter (measure, demo)")
        ->check(CLI::PositiveNumber);
    num->add_option("--grid", cfg.grid, "Pseudospectrum grid spec");
    num->add_option("--rank", cfg.rank, "Compression rank r")->check(CLI::Range(1LL, 1000000LL));
    num->add_option("--threshold", cfg.threshold, "Relative truncation threshold for G")->check(CLI::Range(0.0, 1.0));
    num->add_option("--n1", cfg.n1, "Koopman pseudospectrum: snapshots used")->check(CLI::Range(1LL, 1000000LL));
    num->add_option("--n2", cfg.n2, "Koopman pseudospectrum: truncation size")->check(CLI::Range(1LL, 1000000LL));
    num->add_option("--type", cfg.measure_type, "Measure type: selfadjoint or unitary")
        ->check(CLI::IsMember({"selfadjoint", "unitary"}));
    num->add_option("--order", cfg.order, "Order m of the rational smoothing kernel")->check(CLI::Range(1, 20));
    num->add_option("--points", cfg.points, "Measure evaluation points");
    num->add_option("--observable", cfg.observable, "Observable for measures");
    num->add_option("--x0", cfg.x0, "Forecast initial state, comma-separated coordinates");
    num->add_option("--steps", cfg.steps, "Forecast steps")->check(CLI::Range(0, 100000));
    num->add_option("--norm-kstar", cfg.norm_kstar, "Bound on the Perron-Frobenius operator norm (default 1)")
        ->check(CLI::NonNegativeNumber);

    auto* io = app.add_option_group("Output");
    io->add_option("--out", cfg.out, "Output directory");
    io->add_flag("--svg", cfg.svg, "Also write an SVG heat map of pseudospectra");
    io->add_flag("--witnesses", cfg.witnesses, "Write witness coefficient vectors of flagged points");
    io->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)")
        ->envname("SPECRKHS_THREADS")
        ->check(CLI::Range(0u, 4096u));
    io->add_flag("--error-json", cfg.error_json, "Report errors as JSON on stderr");

    const std::map<std::string, std::string> commands{
        {"gram", "Assemble and serialize the Gram triple"},
        {"eig", "Residual-verified eigenpairs (CSV of lambda, residual, verified)"},
        {"pseudospec", "Approximate point pseudospectrum of the Perron-Frobenius operator"},
        {"pseudospec-koop", "Koopman pseudospectrum via rectangular truncations"},
        {"forecast", "State forecast with certified error bounds"},
        {"measure", "Smoothed spectral measure (--type selfadjoint|unitary)"},
        {"check-normality", "Self-adjointness and unitarity defects"},
        {"demo", "Run a named experiment end to end: gauss, duffing, lorenz, mobius, randomwalk"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->fallthrough();
        sub->callback([&cfg, n = name] { cfg.command = n; });
        if (name == "demo")
            sub->add_option("name", cfg.demo, "Experiment name")
                ->required()
                ->check(CLI::IsMember({"gauss", "duffing", "lorenz", "mobius", "randomwalk"}));
    }

    const bool json_errors = std::find(args.begin(), args.end(), "--error-json") != args.end();
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        return report_error(err, json_errors, ErrorKind::Usage, e.what());
    }
    cfg.seed_given = app.count("--seed") > 0;
    if (cfg.command == "measure" && cfg.measure_type.empty())
        return report_error(err, cfg.error_json, ErrorKind::Usage, "measure needs --type selfadjoint|unitary");

    set_thread_count(cfg.threads);
    Context ctx(cfg, out);
    int code = 0;
    std::string message;
    try {
        ctx.timed("total", [&] {
            if (cfg.command == "gram") cmd_gram(ctx);
            else if (cfg.command == "eig") cmd_eig(ctx);
            else if (cfg.command == "pseudospec") cmd_pseudospec(ctx);
            else if (cfg.command == "pseudospec-koop") cmd_pseudospec_koop(ctx);
            else if (cfg.command == "forecast") cmd_forecast(ctx);
            else if (cfg.command == "measure") cmd_measure(ctx);
            else if (cfg.command == "check-normality") cmd_check_normality(ctx);
            else if (cfg.command == "demo") cmd_demo(ctx);
        });
    } catch (const InvalidInput& e) {
        message = e.what();
        code = report_error(err, cfg.error_json, ErrorKind::Usage, message);
    } catch (const std::exception& e) {
        message = e.what();
        code = report_error(err, cfg.error_json, ErrorKind::Numerical, message);
    }
    try {
        write_manifest(ctx, args, code, message);
    } catch (const std::exception& e) {
        if (code == 0) code = report_error(err, cfg.error_json, ErrorKind::Numerical, std::string("manifest: ") + e.what());
    }
    return code;
}

} // namespace specrkhs::cli
