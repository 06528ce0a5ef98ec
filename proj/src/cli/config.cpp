#include "cli/config.hpp"

#include <cmath>

#include "specrkhs/spectra.hpp"
#include "specrkhs/text_io.hpp"

namespace specrkhs::cli {

namespace {

std::vector<double> parse_slash_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    for (const auto& part : split(text, '/')) out.push_back(parse_double(trim(part), what));
    return out;
}

// A single value broadcasts to every dimension.
std::vector<double> per_dimension(const std::string& text, int dim, const std::string& what) {
    auto v = parse_slash_list(text, what);
    if (v.size() == 1) v.assign(static_cast<std::size_t>(dim), v[0]);
    if (static_cast<int>(v.size()) != dim)
        throw InvalidInput(what + ": expected 1 or " + std::to_string(dim) + " values");
    return v;
}

int default_count(const SystemSpec& s) {
    switch (s.kind) {
    case SystemKind::GaussMap: return 201;
    case SystemKind::Duffing: return 400;
    case SystemKind::Lorenz: return 400;
    case SystemKind::Mobius: return 200;
    default: return 20;
    }
}

} // namespace

nlohmann::json to_json(const RunConfig& c) {
    nlohmann::json j;
    j["command"] = c.command;
    if (!c.demo.empty()) j["demo"] = c.demo;
    j["kernel"] = c.kernel;
    j["system"] = c.system;
    j["data"] = c.data;
    j["gram"] = c.gram_in;
    j["sampling"] = c.sampling;
    j["n"] = c.n;
    j["samples"] = c.samples;
    j["exact"] = c.exact;
    j["grid"] = c.grid;
    j["eps"] = c.eps ? nlohmann::json(*c.eps) : nlohmann::json(nullptr);
    j["rank"] = c.rank ? nlohmann::json(*c.rank) : nlohmann::json(nullptr);
    j["threshold"] = c.threshold;
    j["seed"] = c.seed;
    j["out"] = c.out;
    j["svg"] = c.svg;
    j["witnesses"] = c.witnesses;
    j["n1"] = c.n1 ? nlohmann::json(*c.n1) : nlohmann::json(nullptr);
    j["n2"] = c.n2 ? nlohmann::json(*c.n2) : nlohmann::json(nullptr);
    j["type"] = c.measure_type;
    j["order"] = c.order;
    j["points"] = c.points;
    j["observable"] = c.observable;
    j["x0"] = c.x0;
    j["steps"] = c.steps;
    j["norm_kstar"] = c.norm_kstar ? nlohmann::json(*c.norm_kstar) : nlohmann::json(nullptr);
    return j;
}

std::vector<cplx> parse_grid_spec(const std::string& text) {
    const std::string what = "grid spec '" + text + "'";
    const std::string t = trim(text);
    if (t.rfind("lattice:", 0) == 0) {
        const long long N = parse_int(t.substr(8), what);
        if (N < 1 || N > 64) throw InvalidInput(what + ": lattice N must be in [1, 64]");
        return default_grid(static_cast<int>(N));
    }
    auto axes = split(t, ',');
    if (axes.empty() || axes.size() > 2) throw InvalidInput(what + ": expected one or two axis ranges");
    auto axis = [&](const std::string& s) {
        auto p = split(s, ':');
        if (p.size() != 3) throw InvalidInput(what + ": axis range must be lo:hi:step");
        return std::array<double, 3>{parse_double(trim(p[0]), what), parse_double(trim(p[1]), what),
                                     parse_double(trim(p[2]), what)};
    };
    const auto re = axis(axes[0]);
    const auto im = axes.size() == 2 ? axis(axes[1]) : std::array<double, 3>{0.0, 0.0, 1.0};
    return rect_grid(re[0], re[1], re[2], im[0], im[1], im[2]);
}

std::vector<double> parse_points_spec(const std::string& text) {
    const std::string what = "points spec '" + text + "'";
    auto p = split(trim(text), ':');
    if (p.size() != 3) throw InvalidInput(what + ": expected lo:hi:count");
    const double lo = parse_double(trim(p[0]), what), hi = parse_double(trim(p[1]), what);
    const long long count = parse_int(trim(p[2]), what);
    if (count < 1 || count > 1000000) throw InvalidInput(what + ": count must be in [1, 1e6]");
    if (!(hi >= lo)) throw InvalidInput(what + ": hi must not be below lo");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (long long i = 0; i < count; ++i)
        out[static_cast<std::size_t>(i)] = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (count - 1);
    return out;
}

Sampling parse_sampling(const std::string& text, const SystemSpec& system, int n, std::uint64_t seed) {
    const int count = n > 0 ? n : default_count(system);
    std::string t = trim(text);
    if (t.empty()) {
        switch (system.kind) {
        case SystemKind::GaussMap: t = "chebyshev:a=-1,b=0"; break;
        case SystemKind::Duffing: t = "box:lo=-2,hi=2"; break;
        case SystemKind::Lorenz: t = "trajectory:x0=-8/8/27"; break;
        case SystemKind::Mobius: t = "disk:alpha=0.25"; break;
        case SystemKind::RandomWalk:
        case SystemKind::RandomWalkPerturbed: t = "lattice"; break;
        default: t = "box:lo=-3,hi=3"; break;
        }
    }
    const std::string what = "sampling spec '" + t + "'";
    const auto colon = t.find(':');
    const std::string kind = to_lower(trim(t.substr(0, colon)));
    auto kv = parse_key_values(colon == std::string::npos ? "" : t.substr(colon + 1), what);
    auto take = [&](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    const int dim = system.complex_state() || system.stochastic() ? 1 : system.dim;

    Sampling out;
    if (kind == "box") {
        RandomBoxSampling s;
        s.lo = per_dimension(take("lo").value_or("-1"), dim, what);
        s.hi = per_dimension(take("hi").value_or("1"), dim, what);
        s.count = count;
        s.seed = seed;
        out = s;
    } else if (kind == "chebyshev") {
        ChebyshevSampling s;
        s.a = parse_double(take("a").value_or("-1"), what);
        s.b = parse_double(take("b").value_or("1"), what);
        s.intervals = static_cast<int>(parse_int(take("intervals").value_or(std::to_string(std::max(200, count - 1))), what));
        s.count = count;
        s.nested = parse_int(take("nested").value_or("0"), what) != 0;
        out = s;
    } else if (kind == "disk") {
        DiskSampling s;
        s.alpha = parse_double(take("alpha").value_or("0.25"), what);
        s.count = count;
        s.seed = seed;
        out = s;
    } else if (kind == "lattice") {
        LatticeSampling s;
        const long long w = system.window;
        s.lo = parse_int(take("lo").value_or(std::to_string(-w)), what);
        s.hi = parse_int(take("hi").value_or(std::to_string(w)), what);
        out = s;
    } else if (kind == "trajectory") {
        TrajectorySampling s;
        auto x = take("x0");
        if (!x) throw InvalidInput(what + ": trajectory sampling needs x0=a/b/...");
        auto v = parse_slash_list(*x, what);
        s.x0 = Point(static_cast<Eigen::Index>(v.size()));
        for (std::size_t i = 0; i < v.size(); ++i) s.x0(static_cast<Eigen::Index>(i)) = v[i];
        s.length = count;
        out = s;
    } else {
        throw InvalidInput(what + ": unknown sampling '" + kind + "'");
    }
    if (!kv.empty()) throw InvalidInput(what + ": unknown key '" + kv.begin()->first + "'");
    return out;
}

std::string default_kernel_for(const SystemSpec& s) {
    switch (s.kind) {
    case SystemKind::GaussMap: return "h1:a=-1,b=0";
    case SystemKind::Duffing: return "matern:d=2,n=3,sigma=1";
    case SystemKind::Lorenz: return "gaussian-rbf:d=3,sigma=0.1";
    case SystemKind::Mobius: return "hyperbolic-gaussian:sigma=5";
    case SystemKind::RandomWalk:
    case SystemKind::RandomWalkPerturbed: return "discrete-delta";
    default: return "gaussian-rbf:d=" + std::to_string(s.dim) + ",sigma=1";
    }
}

Point parse_point(const std::string& text) {
    auto parts = split(trim(text), ',');
    if (parts.empty() || trim(text).empty()) throw InvalidInput("state '" + text + "': no coordinates");
    Point p(static_cast<Eigen::Index>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i) p(static_cast<Eigen::Index>(i)) = parse_complex(trim(parts[i]));
    return p;
}

} // namespace specrkhs::cli
