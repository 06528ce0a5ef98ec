#include "specrkhs/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>

#include "specrkhs/text_io.hpp"

namespace specrkhs {

namespace {

constexpr int kRk4Substeps = 20;

template <class F>
Eigen::VectorXd rk4(const F& rhs, Eigen::VectorXd s, double dt) {
    const double h = dt / kRk4Substeps;
    for (int i = 0; i < kRk4Substeps; ++i) {
        Eigen::VectorXd k1 = rhs(s);
        Eigen::VectorXd k2 = rhs(s + 0.5 * h * k1);
        Eigen::VectorXd k3 = rhs(s + 0.5 * h * k2);
        Eigen::VectorXd k4 = rhs(s + h * k3);
        s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return s;
}

Eigen::VectorXd real_state(const Point& x) {
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (x(i).imag() != 0.0) throw InvalidInput("state must be real for this system");
    return x.real();
}

long long integer_state(const Point& x) {
    if (x.size() != 1 || x(0).imag() != 0.0 || std::floor(x(0).real()) != x(0).real())
        throw InvalidInput("Markov chain states must be integers");
    return static_cast<long long>(x(0).real());
}

double gauss_eval(const SystemSpec& s, double x) {
    // Grouped so the default parameters reproduce the fixed point F(-1) = -1 exactly.
    const double shift = std::exp(-s.gauss_alpha);
    return (std::exp(-s.gauss_alpha * x * x) - shift) + (s.gauss_beta + shift);
}

} // namespace

// ---------------------------------------------------------------- construction

SystemSpec SystemSpec::gauss_map(double alpha, double beta) {
    SystemSpec s;
    s.kind = SystemKind::GaussMap;
    s.gauss_alpha = alpha;
    s.gauss_beta = beta;
    s.validate();
    return s;
}

SystemSpec SystemSpec::duffing(double alpha, double beta, double delta, double dt) {
    SystemSpec s;
    s.kind = SystemKind::Duffing;
    s.dim = 2;
    s.duffing_alpha = alpha;
    s.duffing_beta = beta;
    s.duffing_delta = delta;
    s.timestep = dt;
    s.validate();
    return s;
}

SystemSpec SystemSpec::lorenz(double sigma, double rho, double beta, double dt) {
    SystemSpec s;
    s.kind = SystemKind::Lorenz;
    s.dim = 3;
    s.lorenz_sigma = sigma;
    s.lorenz_rho = rho;
    s.lorenz_beta = beta;
    s.timestep = dt;
    s.validate();
    return s;
}

SystemSpec SystemSpec::mobius(cplx a, cplx b) {
    SystemSpec s;
    s.kind = SystemKind::Mobius;
    s.mobius_a = a;
    s.mobius_b = b;
    s.validate();
    return s;
}

SystemSpec SystemSpec::mobius_preset(int which) {
    using std::numbers::pi;
    if (which == 1) return mobius(std::polar(1.0, pi / 6.0), 0.0);
    if (which == 2) return mobius(std::polar(std::sqrt(2.0), pi * std::sqrt(3.0)), std::polar(1.0, pi * 9.0 / 7.0));
    throw InvalidInput("mobius preset must be 1 or 2");
}

SystemSpec SystemSpec::random_walk(long long window, std::uint64_t seed) {
    SystemSpec s;
    s.kind = SystemKind::RandomWalk;
    s.window = window;
    s.seed = seed;
    s.validate();
    return s;
}

SystemSpec SystemSpec::random_walk_perturbed(std::uint64_t seed, long long window) {
    SystemSpec s;
    s.kind = SystemKind::RandomWalkPerturbed;
    s.window = window;
    s.seed = seed;
    Rng rng(seed);
    for (int i = -s.perturbation_radius; i <= s.perturbation_radius; ++i) {
        double a1 = rng.uniform(-0.125, 0.125);
        double a2 = rng.uniform(-0.125, 0.125);
        s.perturbation.push_back({a1, a2});
    }
    s.validate();
    return s;
}

SystemSpec SystemSpec::identity(int dim) {
    SystemSpec s;
    s.kind = SystemKind::Identity;
    s.dim = dim;
    s.validate();
    return s;
}

SystemSpec SystemSpec::custom_map(int dim, std::function<Point(const Point&)> f, std::string name) {
    SystemSpec s;
    s.kind = SystemKind::CustomMap;
    s.dim = dim;
    s.custom = std::move(f);
    s.custom_name = std::move(name);
    s.validate();
    return s;
}

bool SystemSpec::stochastic() const {
    return kind == SystemKind::RandomWalk || kind == SystemKind::RandomWalkPerturbed;
}

std::string SystemSpec::name() const {
    switch (kind) {
    case SystemKind::GaussMap: return "gauss-map";
    case SystemKind::Duffing: return "duffing";
    case SystemKind::Lorenz: return "lorenz";
    case SystemKind::Mobius: return "mobius";
    case SystemKind::RandomWalk: return "random-walk";
    case SystemKind::RandomWalkPerturbed: return "random-walk-perturbed";
    case SystemKind::Identity: return "identity";
    case SystemKind::CustomMap: return custom_name;
    }
    return "unknown";
}

std::string SystemSpec::to_string() const {
    auto f = [](double v) { return format_double(v); };
    switch (kind) {
    case SystemKind::GaussMap: return "gauss-map:alpha=" + f(gauss_alpha) + ",beta=" + f(gauss_beta);
    case SystemKind::Duffing:
        return "duffing:alpha=" + f(duffing_alpha) + ",beta=" + f(duffing_beta) + ",delta=" + f(duffing_delta) +
               ",dt=" + f(timestep);
    case SystemKind::Lorenz:
        return "lorenz:sigma=" + f(lorenz_sigma) + ",rho=" + f(lorenz_rho) + ",beta=" + f(lorenz_beta) +
               ",dt=" + f(timestep);
    case SystemKind::Mobius:
        return "mobius:are=" + f(mobius_a.real()) + ",aim=" + f(mobius_a.imag()) + ",bre=" + f(mobius_b.real()) +
               ",bim=" + f(mobius_b.imag());
    case SystemKind::RandomWalk: return "random-walk:window=" + std::to_string(window) + ",seed=" + std::to_string(seed);
    case SystemKind::RandomWalkPerturbed:
        return "random-walk-perturbed:seed=" + std::to_string(seed) + ",window=" + std::to_string(window);
    case SystemKind::Identity: return "identity:d=" + std::to_string(dim);
    case SystemKind::CustomMap: return custom_name + ":d=" + std::to_string(dim);
    }
    return "unknown";
}

void SystemSpec::validate() const {
    switch (kind) {
    case SystemKind::GaussMap: {
        if (dim != 1) throw InvalidInput("gauss-map is one-dimensional");
        const double delta = 1e-3;
        for (int i = 0; i < 1000; ++i) {
            double x = (-1.0 + delta) + (1.0 - 2.0 * delta) * i / 999.0;
            double y = gauss_eval(*this, x);
            if (!(y > -1.0 && y < 0.0))
                throw InvalidInput("gauss-map parameters do not keep (-1,0) invariant");
        }
        break;
    }
    case SystemKind::Duffing:
        if (!(duffing_alpha > 0 && duffing_beta > 0 && duffing_delta > 0))
            throw InvalidInput("duffing requires alpha, beta, delta > 0");
        if (!(timestep > 0 && timestep < 1.0 / (4.0 * duffing_delta)))
            throw InvalidInput("duffing requires 0 < dt < 1/(4 delta)");
        break;
    case SystemKind::Lorenz:
        if (!(timestep > 0)) throw InvalidInput("lorenz requires dt > 0");
        break;
    case SystemKind::Mobius:
        if (std::fabs(std::norm(mobius_a) - std::norm(mobius_b) - 1.0) > 1e-12)
            throw InvalidInput("mobius requires |a|^2 - |b|^2 = 1");
        break;
    case SystemKind::RandomWalk:
    case SystemKind::RandomWalkPerturbed:
        if (window < 1) throw InvalidInput("Markov chain window must be >= 1");
        if (kind == SystemKind::RandomWalkPerturbed) {
            if (perturbation.size() != static_cast<std::size_t>(2 * perturbation_radius + 1))
                throw InvalidInput("perturbed chain needs one (a1,a2) pair per perturbed state");
            for (long long i = -perturbation_radius; i <= perturbation_radius; ++i) {
                double total = 0.0;
                for (auto [y, p] : transition_support(*this, i)) {
                    if (p < 0.0) throw InvalidInput("perturbed chain has a negative probability");
                    total += p;
                }
                if (std::fabs(total - 1.0) > 1e-12) throw InvalidInput("perturbed chain row does not sum to 1");
            }
        }
        break;
    case SystemKind::Identity:
        if (dim < 1) throw InvalidInput("identity requires d >= 1");
        break;
    case SystemKind::CustomMap:
        if (!custom) throw InvalidInput("custom map requires a function");
        if (dim < 1) throw InvalidInput("custom map requires d >= 1");
        break;
    }
}

SystemSpec parse_system_spec(const std::string& text) {
    const std::string what = "system spec '" + text + "'";
    auto colon = text.find(':');
    std::string kind = to_lower(trim(text.substr(0, colon)));
    auto kv = parse_key_values(colon == std::string::npos ? "" : text.substr(colon + 1), what);
    auto take = [&](const std::string& key, double fallback) {
        auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        double v = parse_double(it->second, what + " key '" + key + "'");
        kv.erase(it);
        return v;
    };
    auto take_int = [&](const std::string& key, long long fallback) {
        auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        long long v = parse_int(it->second, what + " key '" + key + "'");
        kv.erase(it);
        return v;
    };

    SystemSpec out;
    if (kind == "gauss-map" || kind == "gauss") {
        double alpha = take("alpha", 2.0);
        out = SystemSpec::gauss_map(alpha, take("beta", -1.0 - std::exp(-2.0)));
    } else if (kind == "duffing") {
        double a = take("alpha", 1.0), b = take("beta", 1.0), d = take("delta", 0.2);
        out = SystemSpec::duffing(a, b, d, take("dt", 0.01));
    } else if (kind == "lorenz") {
        double s = take("sigma", 10.0), r = take("rho", 28.0), b = take("beta", 8.0 / 3.0);
        out = SystemSpec::lorenz(s, r, b, take("dt", 0.01));
    } else if (kind == "mobius") {
        long long preset = take_int("preset", 0);
        if (preset != 0) {
            out = SystemSpec::mobius_preset(static_cast<int>(preset));
        } else {
            double are = take("are", 1.0), aim = take("aim", 0.0), bre = take("bre", 0.0), bim = take("bim", 0.0);
            out = SystemSpec::mobius({are, aim}, {bre, bim});
        }
    } else if (kind == "random-walk" || kind == "randomwalk") {
        long long w = take_int("window", 1000);
        out = SystemSpec::random_walk(w, static_cast<std::uint64_t>(take_int("seed", 0)));
    } else if (kind == "random-walk-perturbed") {
        long long seed = take_int("seed", 0);
        out = SystemSpec::random_walk_perturbed(static_cast<std::uint64_t>(seed), take_int("window", 1000));
    } else if (kind == "identity") {
        out = SystemSpec::identity(static_cast<int>(take_int("d", 1)));
    } else {
        throw InvalidInput(what + ": unknown system '" + kind + "'");
    }
    if (!kv.empty()) throw InvalidInput(what + ": unknown key '" + kv.begin()->first + "'");
    return out;
}

// ---------------------------------------------------------------- stepping

void check_state(const SystemSpec& spec, const Point& x) {
    const int expected = (spec.kind == SystemKind::Mobius || spec.stochastic()) ? 1 : spec.dim;
    if (x.size() != expected)
        throw InvalidInput(spec.name() + ": state has dimension " + std::to_string(x.size()) + ", expected " +
                           std::to_string(expected));
    switch (spec.kind) {
    case SystemKind::GaussMap: {
        double v = real_state(x)(0);
        if (!(v >= -1.0 && v <= 0.0)) throw InvalidInput("gauss-map: state outside [-1,0]");
        break;
    }
    case SystemKind::Duffing:
    case SystemKind::Lorenz: {
        Eigen::VectorXd v = real_state(x);
        if (!v.allFinite()) throw InvalidInput(spec.name() + ": non-finite state");
        break;
    }
    case SystemKind::Mobius:
        if (!(std::abs(x(0)) < 1.0)) throw InvalidInput("mobius: state outside the open unit disk");
        break;
    case SystemKind::RandomWalk:
    case SystemKind::RandomWalkPerturbed: integer_state(x); break;
    default: break;
    }
}

std::vector<std::pair<long long, double>> transition_support(const SystemSpec& chain, long long x) {
    if (!chain.stochastic()) throw InvalidInput(chain.name() + " is not a Markov chain");
    if (chain.kind == SystemKind::RandomWalkPerturbed && x >= -chain.perturbation_radius &&
        x <= chain.perturbation_radius) {
        const auto& a = chain.perturbation[static_cast<std::size_t>(x + chain.perturbation_radius)];
        return {{x - 1, 0.25 + a[0]}, {x, 0.5 - a[0] - a[1]}, {x + 1, 0.25 + a[1]}};
    }
    const double third = 1.0 / 3.0;
    return {{x - 1, third}, {x, third}, {x + 1, third}};
}

std::vector<double> transition_row_exact(const SystemSpec& chain, long long x, const std::vector<long long>& states) {
    auto support = transition_support(chain, x);
    std::vector<double> row(states.size(), 0.0);
    for (std::size_t i = 0; i < states.size(); ++i)
        for (auto [y, p] : support)
            if (y == states[i]) row[i] += p;
    return row;
}

Point step(const SystemSpec& spec, const Point& x, Rng* rng) {
    check_state(spec, x);
    switch (spec.kind) {
    case SystemKind::GaussMap: {
        double y = gauss_eval(spec, x(0).real());
        // F maps [-1,0] into itself; absorb last-ulp overshoot at the fixed endpoint.
        if (y < -1.0 && y > -1.0 - 1e-12) y = -1.0;
        Point out(1);
        out(0) = y;
        return out;
    }
    case SystemKind::Duffing: {
        const double a = spec.duffing_alpha, b = spec.duffing_beta, d = spec.duffing_delta;
        auto rhs = [=](const Eigen::VectorXd& s) {
            Eigen::VectorXd ds(2);
            ds(0) = s(1);
            ds(1) = -d * s(1) - a * s(0) - b * s(0) * s(0) * s(0);
            return ds;
        };
        return rk4(rhs, real_state(x), spec.timestep).cast<cplx>();
    }
    case SystemKind::Lorenz: {
        const double sg = spec.lorenz_sigma, r = spec.lorenz_rho, b = spec.lorenz_beta;
        auto rhs = [=](const Eigen::VectorXd& s) {
            Eigen::VectorXd ds(3);
            ds(0) = sg * (s(1) - s(0));
            ds(1) = s(0) * (r - s(2)) - s(1);
            ds(2) = s(0) * s(1) - b * s(2);
            return ds;
        };
        return rk4(rhs, real_state(x), spec.timestep).cast<cplx>();
    }
    case SystemKind::Mobius: {
        const cplx z = x(0);
        Point out(1);
        out(0) = (spec.mobius_a * z + spec.mobius_b) / (std::conj(spec.mobius_b) * z + std::conj(spec.mobius_a));
        return out;
    }
    case SystemKind::RandomWalk:
    case SystemKind::RandomWalkPerturbed: {
        if (!rng) throw InvalidInput(spec.name() + ": stochastic step requires an rng state");
        const double tau = rng->uniform();
        double cumulative = 0.0;
        auto support = transition_support(spec, integer_state(x));
        long long next = support.back().first;
        for (auto [y, p] : support) {
            cumulative += p;
            if (tau < cumulative) {
                next = y;
                break;
            }
        }
        Point out(1);
        out(0) = static_cast<double>(next);
        return out;
    }
    case SystemKind::Identity: return x;
    case SystemKind::CustomMap: {
        Point y = spec.custom(x);
        if (y.size() != spec.dim) throw InvalidInput("custom map returned a point of the wrong dimension");
        return y;
    }
    }
    return x;
}

double duffing_energy(const SystemSpec& spec, const Point& x) {
    Eigen::VectorXd s = real_state(x);
    const double u = s(0), v = s(1);
    return 0.5 * v * v + 0.5 * spec.duffing_alpha * u * u + 0.25 * spec.duffing_beta * u * u * u * u;
}

std::vector<Point> trajectory(const SystemSpec& spec, const Point& x0, int steps, Rng* rng) {
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(steps) + 1);
    out.push_back(x0);
    for (int i = 0; i < steps; ++i) out.push_back(step(spec, out.back(), rng));
    return out;
}

// ---------------------------------------------------------------- sampling

std::vector<double> chebyshev_lobatto_nested(double a, double b, int intervals) {
    if (intervals < 1) throw InvalidInput("chebyshev sampling needs at least one interval");
    if (!(a < b)) throw InvalidInput("chebyshev sampling needs a < b");
    int cap = 0;
    while ((intervals >> cap) % 2 == 0) ++cap;
    auto level = [cap](int j) {
        if (j == 0) return cap;
        int v = 0;
        while (v < cap && (j >> v) % 2 == 0) ++v;
        return v;
    };
    std::vector<int> order(static_cast<std::size_t>(intervals) + 1);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return level(i) > level(j); });
    std::vector<double> nodes;
    nodes.reserve(order.size());
    for (int j : order) {
        double t = 0.5 * (1.0 - std::cos(std::numbers::pi * j / intervals));
        double x = (j == 0) ? a : (j == intervals) ? b : a + (b - a) * t;
        nodes.push_back(x);
    }
    return nodes;
}

namespace {

std::vector<Point> sample_states(const SystemSpec& spec, const Sampling& sampling, Rng& chain_rng) {
    std::vector<Point> states;
    auto point_from = [](const std::vector<double>& v) {
        Point p(static_cast<Eigen::Index>(v.size()));
        for (std::size_t i = 0; i < v.size(); ++i) p(static_cast<Eigen::Index>(i)) = v[i];
        return p;
    };
    auto box_point = [&](Rng& rng, const std::vector<double>& lo, const std::vector<double>& hi) {
        if (lo.size() != hi.size() || lo.empty()) throw InvalidInput("sampling box bounds are malformed");
        std::vector<double> v(lo.size());
        for (std::size_t i = 0; i < lo.size(); ++i) {
            if (!(lo[i] <= hi[i])) throw InvalidInput("sampling box has lo > hi");
            v[i] = rng.uniform(lo[i], hi[i]);
        }
        return point_from(v);
    };

    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, TrajectorySampling>) {
                if (s.length < 1) throw InvalidInput("trajectory length must be >= 1");
                Rng* rng = spec.stochastic() ? &chain_rng : nullptr;
                auto traj = trajectory(spec, s.x0, s.length - 1, rng);
                states.assign(traj.begin(), traj.end());
            } else if constexpr (std::is_same_v<T, TrajectoryBatchSampling>) {
                if (s.length < 1 || s.trajectories < 1) throw InvalidInput("trajectory batch sizes must be >= 1");
                Rng rng(s.seed);
                for (int t = 0; t < s.trajectories; ++t) {
                    Point x0 = box_point(rng, s.lo, s.hi);
                    auto traj = trajectory(spec, x0, s.length - 1, spec.stochastic() ? &chain_rng : nullptr);
                    states.insert(states.end(), traj.begin(), traj.end());
                }
            } else if constexpr (std::is_same_v<T, RandomBoxSampling>) {
                if (s.count < 1) throw InvalidInput("random-box count must be >= 1");
                Rng rng(s.seed);
                for (int i = 0; i < s.count; ++i) states.push_back(box_point(rng, s.lo, s.hi));
            } else if constexpr (std::is_same_v<T, GridSampling>) {
                states = s.points;
            } else if constexpr (std::is_same_v<T, ChebyshevSampling>) {
                auto nodes = chebyshev_lobatto_nested(s.a, s.b, s.intervals);
                std::size_t n = s.count > 0 ? static_cast<std::size_t>(s.count) : nodes.size();
                if (n > nodes.size()) throw InvalidInput("chebyshev count exceeds intervals + 1");
                if (!s.nested) {
                    nodes.resize(n);
                    std::sort(nodes.begin(), nodes.end());
                }
                for (std::size_t i = 0; i < n; ++i) states.push_back(point_from({nodes[i]}));
            } else if constexpr (std::is_same_v<T, DiskSampling>) {
                if (s.count < 1 || !(s.alpha > 0)) throw InvalidInput("disk sampling needs count >= 1, alpha > 0");
                Rng rng(s.seed);
                for (int i = 0; i < s.count; ++i) {
                    double radius = std::pow(rng.uniform_open(), s.alpha);
                    double theta = rng.uniform_open();
                    Point p(1);
                    p(0) = std::polar(radius, 2.0 * std::numbers::pi * theta);
                    states.push_back(p);
                }
            } else if constexpr (std::is_same_v<T, LatticeSampling>) {
                if (s.lo > s.hi) throw InvalidInput("lattice sampling needs lo <= hi");
                for (long long n = s.lo; n <= s.hi; ++n) states.push_back(point_from({static_cast<double>(n)}));
            }
        },
        sampling);
    return states;
}

} // namespace

SnapshotSet generate_snapshots(const SystemSpec& spec, const Sampling& sampling, int samples_per_state) {
    if (samples_per_state < 1) throw InvalidInput("samples_per_state must be >= 1");
    if (!spec.stochastic() && samples_per_state != 1)
        throw InvalidInput(spec.name() + " is deterministic: samples_per_state must be 1");
    Rng chain_rng(spec.seed ^ 0x9e3779b97f4a7c15ull);
    auto states = sample_states(spec, sampling, chain_rng);
    if (states.empty()) throw InvalidInput("sampling produced no states");

    const Eigen::Index n = static_cast<Eigen::Index>(states.size());
    const Eigen::Index d = states.front().size();
    SnapshotSet out;
    out.X.resize(n, d);
    out.Y.assign(static_cast<std::size_t>(samples_per_state), Mat(n, d));
    for (Eigen::Index i = 0; i < n; ++i) {
        if (states[i].size() != d) throw InvalidInput("sampled states have inconsistent dimension");
        out.X.row(i) = states[i].transpose();
        for (int s = 0; s < samples_per_state; ++s)
            out.Y[s].row(i) = step(spec, states[i], spec.stochastic() ? &chain_rng : nullptr).transpose();
    }
    out.validate();
    return out;
}

// ---------------------------------------------------------------- SnapshotSet

SnapshotSet SnapshotSet::prefix(Eigen::Index n) const {
    if (n < 1 || n > count()) throw InvalidInput("snapshot prefix length out of range");
    SnapshotSet out;
    out.X = X.topRows(n);
    for (const auto& y : Y) out.Y.push_back(y.topRows(n));
    return out;
}

void SnapshotSet::validate() const {
    if (X.rows() < 1 || X.cols() < 1) throw InvalidInput("snapshot set is empty");
    if (Y.empty()) throw InvalidInput("snapshot set has no successors");
    for (const auto& y : Y)
        if (y.rows() != X.rows() || y.cols() != X.cols()) throw InvalidInput("successor block shape mismatch");

    const Eigen::Index n = X.rows();
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) { return X(a, 0).real() < X(b, 0).real(); });
    const double tol = 1e-14;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        for (std::size_t j = i + 1; j < idx.size(); ++j) {
            if (X(idx[j], 0).real() - X(idx[i], 0).real() > tol) break;
            if ((X.row(idx[i]) - X.row(idx[j])).cwiseAbs().maxCoeff() <= tol)
                throw InvalidInput("duplicate snapshot states at rows " + std::to_string(std::min(idx[i], idx[j])) +
                                   " and " + std::to_string(std::max(idx[i], idx[j])));
        }
    }
}

std::uint64_t SnapshotSet::hash() const {
    std::uint64_t h = fnv1a(X.data(), sizeof(cplx) * static_cast<std::size_t>(X.size()));
    for (const auto& y : Y) h = fnv1a(y.data(), sizeof(cplx) * static_cast<std::size_t>(y.size()), h);
    return h;
}

} // namespace specrkhs
