#include "cli/commands.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "cli/svg.hpp"
#include "specrkhs/forecast.hpp"
#include "specrkhs/measures.hpp"
#include "specrkhs/text_io.hpp"

namespace specrkhs::cli {

namespace fs = std::filesystem;

Context::Context(RunConfig c, std::ostream& o) : cfg(std::move(c)), out_dir(cfg.out), out(o) {}

void Context::write(const std::string& name, const std::string& content) {
    const fs::path p = out_dir / name;
    atomic_write_file(p.string(), content);
    outputs.push_back(name);
}

double Context::seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

namespace {

std::string fmt_residual(double r) { return std::isfinite(r) ? format_double(r) : std::string("inf"); }

double eps_or(const Context& ctx, double fallback) {
    const double e = ctx.cfg.eps.value_or(fallback);
    if (!(e > 0.0)) throw InvalidInput("--eps must be positive");
    return e;
}

Eigen::Index rank_or_full(const Context& ctx, const GramTriple& g) {
    const long long r = ctx.cfg.rank.value_or(static_cast<long long>(g.size()));
    if (r < 1 || r > g.size())
        throw InvalidInput("--rank must be in [1, " + std::to_string(g.size()) + "]");
    return static_cast<Eigen::Index>(r);
}

std::string witnesses_csv(const PseudospectrumResult& res) {
    std::ostringstream os;
    os << "point,re,im,index,coef\n";
    for (std::size_t i : res.flagged) {
        if (i >= res.witnesses.size() || !res.witnesses[i]) continue;
        const Vec& w = *res.witnesses[i];
        for (Eigen::Index k = 0; k < w.size(); ++k)
            os << i << ',' << format_double(res.grid[i].real()) << ',' << format_double(res.grid[i].imag()) << ',' << k
               << ',' << format_complex(w(k)) << '\n';
    }
    return os.str();
}

void report_pseudospectrum(Context& ctx, const PseudospectrumResult& res, const std::string& stem,
                           const std::string& title) {
    ctx.write(stem + ".csv", pseudospectrum_csv(res));
    if (ctx.cfg.svg) ctx.write(stem + ".svg", pseudospectrum_svg(res, title));
    if (ctx.cfg.witnesses) ctx.write(stem + "_witnesses.csv", witnesses_csv(res));
    std::size_t failed = 0;
    for (const auto& e : res.errors) failed += e.empty() ? 0 : 1;
    ctx.results["grid_points"] = res.grid.size();
    ctx.results["flagged"] = res.flagged.size();
    ctx.results["failed_points"] = failed;
    ctx.out << title << ": " << res.flagged.size() << " of " << res.grid.size() << " grid points flagged at eps = "
            << show(res.epsilon);
    if (failed) ctx.out << " (" << failed << " points failed, see CSV)";
    ctx.out << '\n';
}

} // namespace

Problem load_problem(Context& ctx, bool need_snapshots) {
    const RunConfig& c = ctx.cfg;
    Problem p;
    if (!c.system.empty() && !c.data.empty()) throw InvalidInput("--system and --data are mutually exclusive");
    if (!c.system.empty()) {
        p.system = parse_system_spec(c.system);
        if (c.seed_given && p.system->stochastic()) p.system->seed = c.seed;
    }
    if (!c.kernel.empty()) p.kernel = parse_kernel_spec(c.kernel);
    else if (p.system) p.kernel = parse_kernel_spec(default_kernel_for(*p.system));

    if (!c.data.empty()) {
        if (!p.kernel) throw InvalidInput("--data needs --kernel");
        p.snapshots = ctx.timed("load_snapshots", [&] { return load_snapshots_csv(c.data); });
    } else if (p.system) {
        const Sampling sampling = parse_sampling(c.sampling, *p.system, c.n, c.seed);
        if (c.exact) {
            if (!p.system->stochastic()) throw InvalidInput("--exact applies to Markov-chain systems only");
            const auto* lat = std::get_if<LatticeSampling>(&sampling);
            if (!lat) throw InvalidInput("--exact needs lattice sampling");
            if (lat->hi < lat->lo) throw InvalidInput("lattice sampling: hi below lo");
            for (long long s = lat->lo; s <= lat->hi; ++s) p.chain_states.push_back(s);
        } else {
            if (c.samples < 1) throw InvalidInput("--samples must be at least 1");
            p.snapshots = ctx.timed("snapshots", [&] { return generate_snapshots(*p.system, sampling, c.samples); });
        }
    }

    if (!c.gram_in.empty()) {
        p.gram = ctx.timed("load_gram", [&] { return load_gram(c.gram_in); });
        if (p.snapshots && p.snapshots->count() != p.gram.size())
            throw InvalidInput("--gram has size " + std::to_string(p.gram.size()) + " but the snapshots have " +
                               std::to_string(p.snapshots->count()) + " states");
    } else if (!p.chain_states.empty()) {
        p.gram = ctx.timed("gram", [&] { return build_gram_exact_chain(*p.system, p.chain_states, *p.kernel); });
    } else if (p.snapshots) {
        p.gram = ctx.timed("gram", [&] { return build_gram(*p.snapshots, *p.kernel); });
    } else {
        throw InvalidInput("one of --system, --data or --gram is required");
    }
    if (need_snapshots && (!p.snapshots || !p.kernel))
        throw InvalidInput(ctx.cfg.command + " needs snapshot states and a kernel (--system or --data)");
    return p;
}

Vec observable_coefficients(const std::string& spec, const Problem& p, std::uint64_t seed) {
    const Eigen::Index n = p.gram.size();
    const std::string t = trim(spec);
    const auto colon = t.find(':');
    const std::string kind = to_lower(t.substr(0, colon));
    const std::string body = colon == std::string::npos ? "" : t.substr(colon + 1);
    const std::string what = "observable '" + spec + "'";
    if (kind == "random") {
        if (!body.empty()) throw InvalidInput(what + ": takes no arguments");
        Rng rng(seed);
        Vec c(n);
        for (Eigen::Index i = 0; i < n; ++i) c(i) = rng.uniform();
        const double norm2 = c.dot(p.gram.G * c).real();
        if (!(norm2 > 0.0)) throw NumericalError(what + ": zero RKHS norm");
        return c / std::sqrt(norm2);
    }
    if (kind == "state") {
        if (!p.snapshots) throw InvalidInput(what + ": needs snapshot states");
        const long long k = parse_int(body, what);
        if (k < 0 || k >= p.snapshots->dim()) throw InvalidInput(what + ": coordinate out of range");
        return project_state_observables(p.gram, *p.snapshots).col(static_cast<Eigen::Index>(k));
    }
    if (kind == "index" || kind == "states") {
        Vec c = Vec::Zero(n);
        for (const auto& [key, value] : parse_key_values(body, what)) {
            Eigen::Index row = -1;
            if (kind == "index") {
                row = static_cast<Eigen::Index>(parse_int(key, what));
            } else {
                const cplx s = parse_complex(key);
                if (!p.chain_states.empty()) {
                    for (std::size_t i = 0; i < p.chain_states.size(); ++i)
                        if (cplx(static_cast<double>(p.chain_states[i]), 0.0) == s) row = static_cast<Eigen::Index>(i);
                } else if (p.snapshots && p.snapshots->dim() == 1) {
                    for (Eigen::Index i = 0; i < p.snapshots->count(); ++i)
                        if (p.snapshots->X(i, 0) == s) row = i;
                } else {
                    throw InvalidInput(what + ": state keys need one-dimensional states");
                }
            }
            if (row < 0 || row >= n) throw InvalidInput(what + ": no snapshot for key '" + key + "'");
            c(row) = parse_complex(value);
        }
        return c;
    }
    throw InvalidInput(what + ": expected state:k, states:..., index:... or random");
}

std::string show(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

std::string eigenpairs_csv(const std::vector<VerifiedEigenpair>& pairs) {
    std::ostringstream os;
    os << "re,im,residual,verified\n";
    for (const auto& e : pairs)
        os << format_double(e.lambda.real()) << ',' << format_double(e.lambda.imag()) << ',' << fmt_residual(e.residual)
           << ',' << (e.verified ? 1 : 0) << '\n';
    return os.str();
}

void cmd_gram(Context& ctx) {
    Problem p = load_problem(ctx);
    ctx.write("gram.bin", serialize_gram(p.gram));
    ctx.results["N"] = p.gram.size();
    ctx.results["provenance"] = nlohmann::json::parse(p.gram.provenance);
    ctx.out << "Gram triple with N = " << p.gram.size() << " written to " << (ctx.out_dir / "gram.bin").string() << '\n';
}

void cmd_eig(Context& ctx) {
    Problem p = load_problem(ctx);
    const double eps = eps_or(ctx, 0.1);
    auto pairs = ctx.timed("eig", [&] {
        return verify_eigenpairs(p.gram, eps, ctx.cfg.threshold, static_cast<Eigen::Index>(ctx.cfg.rank.value_or(0)));
    });
    ctx.write("eigenpairs.csv", eigenpairs_csv(pairs));
    std::size_t verified = 0;
    for (const auto& e : pairs) verified += e.verified ? 1 : 0;
    ctx.results["eigenpairs"] = pairs.size();
    ctx.results["verified"] = verified;
    ctx.out << verified << " of " << pairs.size() << " eigenpairs verified at eps = " << show(eps) << '\n';
}

void cmd_pseudospec(Context& ctx) {
    Problem p = load_problem(ctx);
    const double eps = eps_or(ctx, 0.1);
    const auto grid = parse_grid_spec(ctx.cfg.grid.empty() ? "-1.5:1.5:0.1,-1.5:1.5:0.1" : ctx.cfg.grid);
    PseudospectrumOptions opts;
    opts.threshold = ctx.cfg.threshold;
    opts.store_witnesses = ctx.cfg.witnesses;
    auto res = ctx.timed("pseudospectrum", [&] { return pseudospectrum_pf(p.gram, grid, eps, opts); });
    report_pseudospectrum(ctx, res, "pseudospectrum", "Perron-Frobenius pseudospectrum");
}

void cmd_pseudospec_koop(Context& ctx) {
    Problem p = load_problem(ctx);
    const double eps = eps_or(ctx, 0.1);
    const auto grid = parse_grid_spec(ctx.cfg.grid.empty() ? "-1.5:1.5:0.1,-1.5:1.5:0.1" : ctx.cfg.grid);
    const Eigen::Index N = p.gram.size();
    const long long n1 = ctx.cfg.n1.value_or(N);
    const long long n2 = ctx.cfg.n2.value_or(std::min<long long>(N, 50));
    if (n2 < 1 || n1 < n2 || n1 > N) throw InvalidInput("need 1 <= n2 <= n1 <= N for pseudospec-koop");
    PseudospectrumOptions opts;
    opts.threshold = ctx.cfg.threshold;
    opts.store_witnesses = ctx.cfg.witnesses;
    auto res = ctx.timed("pseudospectrum", [&] { return pseudospectrum_koop(p.gram, n1, n2, grid, eps, opts); });
    ctx.results["n1"] = n1;
    ctx.results["n2"] = n2;
    report_pseudospectrum(ctx, res, "pseudospectrum_koop", "Koopman pseudospectrum");
}

void cmd_forecast(Context& ctx) {
    Problem p = load_problem(ctx, true);
    if (ctx.cfg.x0.empty()) throw InvalidInput("forecast needs --x0");
    if (ctx.cfg.steps < 0) throw InvalidInput("--steps must be non-negative");
    const Point x0 = parse_point(ctx.cfg.x0);
    if (x0.size() != p.snapshots->dim()) throw InvalidInput("--x0 has the wrong dimension");
    const double eps = ctx.cfg.eps.value_or(std::numeric_limits<double>::infinity());
    auto all = ctx.timed("eig", [&] { return verify_eigenpairs(p.gram, eps, ctx.cfg.threshold); });
    std::vector<VerifiedEigenpair> verified;
    for (const auto& e : all)
        if (e.verified) verified.push_back(e);
    if (verified.empty()) throw NumericalError("no eigenpair has residual <= eps; raise --eps");
    auto model = ctx.timed("fit", [&] {
        return fit_model(verified, p.gram, *p.kernel, *p.snapshots, x0, ctx.cfg.norm_kstar);
    });
    const Mat C = project_state_observables(p.gram, *p.snapshots, ctx.cfg.threshold);
    const Mat vals = observable_values(p.gram, C);
    auto meta = nlohmann::json::parse(forecast_metadata_json(model));
    meta["x0"] = ctx.cfg.x0;
    meta["observables"] = nlohmann::json::array();
    for (Eigen::Index c = 0; c < C.cols(); ++c) {
        const double norm_g = std::sqrt(std::max(0.0, C.col(c).dot(p.gram.G * C.col(c)).real()));
        std::vector<cplx> pred;
        std::vector<double> bound;
        for (int n = 0; n <= ctx.cfg.steps; ++n) {
            pred.push_back(predict(model, vals.col(c), n));
            bound.push_back(error_bound(model, norm_g, n));
        }
        const std::string name = "forecast_state" + std::to_string(c) + ".csv";
        ctx.write(name, forecast_csv(pred, bound));
        meta["observables"].push_back({{"file", name}, {"coordinate", c}, {"norm_g", norm_g}});
    }
    ctx.write("forecast.json", meta.dump(2) + "\n");
    ctx.results["modes"] = verified.size();
    ctx.results["delta"] = model.delta;
    ctx.results["eps_ver"] = model.eps_ver;
    ctx.out << "forecast from x0 = " << ctx.cfg.x0 << " with " << verified.size() << " modes: delta = "
            << show(model.delta) << ", eps_ver = " << show(model.eps_ver) << '\n';
    if (model.norm_defaulted) ctx.out << "warning: norm_Kstar defaulted to 1 (valid for radial kernels)\n";
}

void cmd_measure(Context& ctx) {
    const std::string type = to_lower(ctx.cfg.measure_type);
    if (type != "selfadjoint" && type != "unitary") throw InvalidInput("--type must be selfadjoint or unitary");
    Problem p = load_problem(ctx);
    const double eps = eps_or(ctx, 0.05);
    if (ctx.cfg.order < 1 || ctx.cfg.order > 20) throw InvalidInput("--order must be in [1, 20]");
    const auto kernel = rational_kernel(default_poles(ctx.cfg.order));
    const auto basis = ctx.timed("compress", [&] { return compress(p.gram, rank_or_full(ctx, p.gram), ctx.cfg.threshold); });
    const Vec c = observable_coefficients(ctx.cfg.observable.empty() ? "random" : ctx.cfg.observable, p, ctx.cfg.seed);
    const Vec g = to_u_basis(c, basis, p.gram);
    std::vector<double> points;
    if (!ctx.cfg.points.empty()) {
        points = parse_points_spec(ctx.cfg.points);
    } else if (type == "selfadjoint") {
        points = parse_points_spec("-1.5:1.5:301");
    } else {
        for (int k = 0; k < 360; ++k) points.push_back(-M_PI + 2.0 * M_PI * k / 360.0);
    }
    auto s = ctx.timed("measure", [&] {
        return type == "selfadjoint" ? spectral_measure_selfadjoint(basis.khat_t, g, points, eps, kernel)
                                     : spectral_measure_unitary(basis.khat_t, g, points, eps, kernel);
    });
    ctx.write("measure.csv", measure_csv(s));
    ctx.write("measure.json", measure_metadata_json(s, kernel, type));
    ctx.results["points"] = points.size();
    ctx.results["hermitian_path"] = s.hermitian_path;
    ctx.out << type << " spectral measure at " << points.size() << " points, eps = " << show(eps)
            << ", order " << ctx.cfg.order << (s.hermitian_path ? " (Hermitian eigensolver)" : " (general eigensolver)")
            << '\n';
}

void cmd_check_normality(Context& ctx) {
    Problem p = load_problem(ctx);
    const auto basis = ctx.timed("compress", [&] { return compress(p.gram, rank_or_full(ctx, p.gram), ctx.cfg.threshold); });
    const auto r = check_normality(p.gram, basis);
    nlohmann::json j;
    j["selfadjoint_defect"] = r.selfadjoint_defect;
    j["unitary_defect"] = r.unitary_defect;
    j["kernel_selfadjoint_defect"] = r.kernel_selfadjoint_defect;
    j["kernel_unitary_defect"] = r.kernel_unitary_defect;
    j["rank"] = basis.r;
    ctx.write("normality.json", j.dump(2) + "\n");
    ctx.results["normality"] = j;
    ctx.out << "self-adjoint defect " << show(r.selfadjoint_defect) << ", unitary defect "
            << show(r.unitary_defect) << ", max|A-A*| " << show(r.kernel_selfadjoint_defect)
            << ", max|R-G| " << show(r.kernel_unitary_defect) << '\n';
}

} // namespace specrkhs::cli
