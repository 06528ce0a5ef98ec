#include <cmath>
#include <limits>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/svg.hpp"
#include "specrkhs/forecast.hpp"
#include "specrkhs/measures.hpp"
#include "specrkhs/text_io.hpp"

namespace specrkhs::cli {

namespace {

double residual_eps(const Context& ctx, double fallback) { return ctx.cfg.eps.value_or(fallback); }

int count_or(const Context& ctx, int fallback) { return ctx.cfg.n > 0 ? ctx.cfg.n : fallback; }

std::vector<cplx> grid_or(const Context& ctx, const std::string& fallback) {
    return parse_grid_spec(ctx.cfg.grid.empty() ? fallback : ctx.cfg.grid);
}

void write_eig_and_pseudospectrum(Context& ctx, const GramTriple& gram, double eps, const std::vector<cplx>& grid,
                                  const std::string& title) {
    auto pairs = ctx.timed("eig", [&] { return verify_eigenpairs(gram, eps); });
    ctx.write("eigenpairs.csv", eigenpairs_csv(pairs));
    std::size_t verified = 0;
    double best_outer = INFINITY, best_inner = INFINITY;
    for (const auto& e : pairs) {
        verified += e.verified ? 1 : 0;
        if (std::abs(e.lambda) > 0.9) best_outer = std::min(best_outer, e.residual);
        if (std::abs(e.lambda) < 0.1) best_inner = std::min(best_inner, e.residual);
    }
    ctx.results["eigenpairs"] = pairs.size();
    ctx.results["verified"] = verified;
    ctx.results["min_residual_abs_gt_0.9"] = std::isfinite(best_outer) ? nlohmann::json(best_outer) : nlohmann::json();
    ctx.results["min_residual_abs_lt_0.1"] = std::isfinite(best_inner) ? nlohmann::json(best_inner) : nlohmann::json();
    ctx.out << verified << " of " << pairs.size() << " eigenpairs verified at eps = " << show(eps) << '\n';

    PseudospectrumOptions opts;
    opts.store_witnesses = false;
    auto res = ctx.timed("pseudospectrum", [&] { return pseudospectrum_pf(gram, grid, eps, opts); });
    ctx.write("pseudospectrum.csv", pseudospectrum_csv(res));
    ctx.write("pseudospectrum.svg", pseudospectrum_svg(res, title));
    ctx.results["grid_points"] = grid.size();
    ctx.results["flagged"] = res.flagged.size();
    ctx.out << res.flagged.size() << " of " << grid.size() << " grid points in the " << show(eps)
            << "-pseudospectrum\n";
}

// Gauss map on 201 Chebyshev nodes with the H1 kernel: kEDMD eigenvalues with residuals and
// the pseudospectrum.
void demo_gauss(Context& ctx) {
    const auto sys = SystemSpec::gauss_map();
    const int n = count_or(ctx, 201);
    auto snaps = ctx.timed("snapshots", [&] {
        return generate_snapshots(sys, ChebyshevSampling{-1.0, 0.0, std::max(200, n - 1), n});
    });
    auto gram = ctx.timed("gram", [&] { return build_gram(snaps, KernelSpec::sobolev_h1(-1.0, 0.0)); });
    write_eig_and_pseudospectrum(ctx, gram, residual_eps(ctx, 0.1), grid_or(ctx, "-1.2:1.2:0.1,-1.2:1.2:0.1"),
                                 "Gauss map");
}

// Duffing oscillator with a Matern kernel: certified state forecasts from held-out initial states.
void demo_duffing(Context& ctx) {
    const auto sys = SystemSpec::duffing();
    const auto kernel = KernelSpec::matern(2, 3, 1.0);
    const int n = count_or(ctx, 400);
    auto snaps = ctx.timed("snapshots",
                           [&] { return generate_snapshots(sys, RandomBoxSampling{{-2, -2}, {2, 2}, n, ctx.cfg.seed}); });
    auto gram = ctx.timed("gram", [&] { return build_gram(snaps, kernel); });
    const double eps = ctx.cfg.eps.value_or(std::numeric_limits<double>::infinity());
    auto all = ctx.timed("eig", [&] { return verify_eigenpairs(gram, eps); });
    std::vector<VerifiedEigenpair> modes;
    for (const auto& e : all)
        if (e.verified) modes.push_back(e);
    if (modes.empty()) throw NumericalError("no eigenpair has residual <= eps");
    const Mat C = project_state_observables(gram, snaps);
    const Mat vals = observable_values(gram, C);
    std::vector<double> norm_g;
    for (Eigen::Index c = 0; c < 2; ++c) norm_g.push_back(std::sqrt(C.col(c).dot(gram.G * C.col(c)).real()));

    std::ostringstream csv;
    csv << "ic,n,coordinate,true_state,predicted,observable_true,abs_error,bound\n";
    Rng rng(ctx.cfg.seed + 1);
    double rel_sum = 0.0;
    int rel_count = 0, violations = 0;
    const int steps = ctx.cfg.steps;
    ctx.timed("forecast", [&] {
        for (int ic = 0; ic < 10; ++ic) {
            Point x0(2);
            x0(0) = rng.uniform(-1.5, 1.5);
            x0(1) = rng.uniform(-1.5, 1.5);
            const auto model = fit_model(modes, gram, kernel, snaps, x0, ctx.cfg.norm_kstar.value_or(1.0));
            const auto tr = trajectory(sys, x0, steps);
            for (int s = 1; s <= steps; ++s) {
                double err2 = 0.0, norm2 = 0.0;
                for (Eigen::Index c = 0; c < 2; ++c) {
                    const cplx pred = predict(model, vals.col(c), s);
                    cplx obs = 0.0;  // the projected observable sum_i C_i K_{x_i} at F^s(x0)
                    for (Eigen::Index i = 0; i < snaps.count(); ++i) obs += C(i, c) * kernel(tr[s], snaps.x(i));
                    const double bound = error_bound(model, norm_g[c], s);
                    const double abs_err = std::abs(pred - obs);
                    if (!(abs_err <= bound)) ++violations;
                    err2 += std::norm(pred - tr[s](c));
                    norm2 += std::norm(tr[s](c));
                    csv << ic << ',' << s << ',' << c << ',' << format_double(tr[s](c).real()) << ','
                        << format_complex(pred) << ',' << format_complex(obs) << ',' << format_double(abs_err) << ','
                        << format_double(bound) << '\n';
                }
                rel_sum += std::sqrt(err2 / norm2);
                ++rel_count;
            }
        }
    });
    ctx.write("duffing_forecast.csv", csv.str());
    const double mean_rel = rel_count ? rel_sum / rel_count : 0.0;
    ctx.results["modes"] = modes.size();
    ctx.results["mean_relative_state_error"] = mean_rel;
    ctx.results["bound_violations"] = violations;
    ctx.out << "Duffing forecasts (10 initial states, " << steps << " steps, " << modes.size()
            << " modes): mean relative state error " << show(mean_rel) << ", bound violations "
            << violations << '\n';
}

// Lorenz system at desk scale: a trajectory on the attractor, kEDMD eigenvalues and pseudospectrum.
void demo_lorenz(Context& ctx) {
    const auto sys = SystemSpec::lorenz();
    const int n = count_or(ctx, 400);
    Point x0(3);
    x0 << -8.0, 8.0, 27.0;
    auto snaps = ctx.timed("snapshots", [&] { return generate_snapshots(sys, TrajectorySampling{x0, n}); });
    auto gram = ctx.timed("gram", [&] { return build_gram(snaps, KernelSpec::gaussian(3, 0.1)); });
    write_eig_and_pseudospectrum(ctx, gram, residual_eps(ctx, 0.1), grid_or(ctx, "-1.2:1.2:0.1,-1.2:1.2:0.1"),
                                 "Lorenz system");
}

// Mobius map on the Poincare disk with the hyperbolic Gaussian kernel: unitarity check and the
// smoothed spectral measure on the circle.
void demo_mobius(Context& ctx) {
    const auto sys = SystemSpec::mobius_preset(2);
    const int n = count_or(ctx, 400);
    auto snaps = ctx.timed("snapshots",
                           [&] { return generate_snapshots(sys, DiskSampling{0.25, n, ctx.cfg.seed}); });
    auto gram = ctx.timed("gram", [&] { return build_gram(snaps, KernelSpec::hyperbolic_gaussian(5.0)); });
    const auto basis = ctx.timed("compress", [&] { return compress(gram, gram.size()); });
    const auto report = check_normality(gram, basis);
    nlohmann::json nj = {{"selfadjoint_defect", report.selfadjoint_defect},
                         {"unitary_defect", report.unitary_defect},
                         {"kernel_selfadjoint_defect", report.kernel_selfadjoint_defect},
                         {"kernel_unitary_defect", report.kernel_unitary_defect}};
    ctx.write("normality.json", nj.dump(2) + "\n");

    Problem p;
    p.gram = gram;
    const Vec c = observable_coefficients("random", p, ctx.cfg.seed);
    const auto kernel = rational_kernel(default_poles(ctx.cfg.order));
    const double eps = ctx.cfg.eps.value_or(0.01);
    std::vector<double> thetas;
    for (int k = 0; k < 360; ++k) thetas.push_back(-M_PI + 2.0 * M_PI * k / 360.0);
    auto s = ctx.timed("measure", [&] {
        return spectral_measure_unitary(basis.khat_t, to_u_basis(c, basis, gram), thetas, eps, kernel);
    });
    ctx.write("measure.csv", measure_csv(s));
    ctx.write("measure.json", measure_metadata_json(s, kernel, "unitary"));
    ctx.results["kernel_unitary_defect"] = report.kernel_unitary_defect;
    ctx.out << "Mobius map: max|R-G| = " << show(report.kernel_unitary_defect)
            << "; unitary measure at 360 angles, eps = " << show(eps) << ", order " << ctx.cfg.order << '\n';
}

double random_walk_density(double x) {
    const double q = 6.0 * x + 3.0 - 9.0 * x * x;
    return (x > -1.0 / 3.0 && x < 1.0 && q > 0.0) ? 3.0 / (4.0 * M_PI) * std::sqrt(q) : 0.0;
}

// Symmetric random walk with exact transition rows: the smoothed measure of (d_1 - d_{-1})/2
// against its closed-form density.
void demo_randomwalk(Context& ctx) {
    const long long window = ctx.cfg.n > 0 ? ctx.cfg.n : 1000;
    const auto sys = SystemSpec::random_walk(window);
    std::vector<long long> states;
    for (long long s = -window; s <= window; ++s) states.push_back(s);
    auto gram = ctx.timed("gram", [&] { return build_gram_exact_chain(sys, states, KernelSpec::discrete_delta()); });
    const auto basis = ctx.timed("compress", [&] { return compress(gram, gram.size()); });
    Problem p;
    p.gram = gram;
    p.chain_states = states;
    const Vec c = observable_coefficients("states:1=0.5,-1=-0.5", p, ctx.cfg.seed);
    const auto kernel = rational_kernel(default_poles(ctx.cfg.order));
    const double eps = ctx.cfg.eps.value_or(0.05);
    const auto points = parse_points_spec(ctx.cfg.points.empty() ? "-0.6:1.2:361" : ctx.cfg.points);
    auto s = ctx.timed("measure", [&] {
        return spectral_measure_selfadjoint(basis.khat_t, to_u_basis(c, basis, gram), points, eps, kernel);
    });
    ctx.write("measure.csv", measure_csv(s));
    ctx.write("measure.json", measure_metadata_json(s, kernel, "selfadjoint"));
    std::ostringstream csv;
    csv << "point,value,target\n";
    double worst = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double target = random_walk_density(points[i]);
        csv << format_double(points[i]) << ',' << format_double(s.values[i]) << ',' << format_double(target) << '\n';
        if (points[i] >= -0.25 && points[i] <= 0.9) worst = std::max(worst, std::fabs(s.values[i] - target));
    }
    ctx.write("density.csv", csv.str());
    ctx.results["max_abs_deviation_on_[-0.25,0.9]"] = worst;
    ctx.out << "random walk (window " << window << "): max |measure - density| on [-0.25, 0.9] = "
            << show(worst) << " at eps = " << show(eps) << ", order " << ctx.cfg.order << '\n';
}

} // namespace

void cmd_demo(Context& ctx) {
    const std::string& name = ctx.cfg.demo;
    if (name == "gauss") demo_gauss(ctx);
    else if (name == "duffing") demo_duffing(ctx);
    else if (name == "lorenz") demo_lorenz(ctx);
    else if (name == "mobius") demo_mobius(ctx);
    else if (name == "randomwalk") demo_randomwalk(ctx);
    else throw InvalidInput("unknown demo '" + name + "'");
}

} // namespace specrkhs::cli
