#include "specrkhs/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "specrkhs/bessel.hpp"
#include "specrkhs/text_io.hpp"

namespace specrkhs {

namespace {

double to_double(const Rational& q) {
    return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

std::int64_t binomial(int n, int k) {
    std::int64_t v = 1;
    for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
    return v;
}

double euclidean_distance(const Point& x, const Point& y) { return (x - y).norm(); }

} // namespace

std::string family_name(KernelFamily f) {
    switch (f) {
    case KernelFamily::Matern: return "matern";
    case KernelFamily::Wendland: return "wendland";
    case KernelFamily::GaussianRbf: return "gaussian-rbf";
    case KernelFamily::SobolevH1Interval: return "sobolev-h1-interval";
    case KernelFamily::HyperbolicGaussian: return "hyperbolic-gaussian";
    case KernelFamily::Polynomial: return "polynomial";
    case KernelFamily::DiscreteDelta: return "discrete-delta";
    case KernelFamily::WeightedSequence: return "weighted-sequence";
    }
    return "unknown";
}

// ---------------------------------------------------------------- Wendland

double WendlandPolynomial::operator()(double r) const {
    if (r >= 1.0) return 0.0;
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * r + to_double(*it);
    return acc;
}

double WendlandPolynomial::derivative(double r) const {
    if (r >= 1.0) return 0.0;
    double acc = 0.0;
    for (int l = degree(); l >= 1; --l) acc = acc * r + l * to_double(coeffs[l]);
    return acc;
}

Rational WendlandPolynomial::value_at(const Rational& r) const {
    Rational acc(0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * r + *it;
    return acc;
}

Rational WendlandPolynomial::derivative_at_one(int order) const {
    Rational acc(0);
    for (int l = order; l <= degree(); ++l) {
        std::int64_t falling = 1;
        for (int j = 0; j < order; ++j) falling *= (l - j);
        acc += coeffs[l] * falling;
    }
    return acc;
}

WendlandPolynomial wendland_polynomial(int d, int k) {
    if (d < 1 || k < 0 || (k == 0 && d < 3))
        throw InvalidInput("wendland_polynomial: need d >= 1, k >= 0 and (k >= 1 or d >= 3)");
    if (k > 6 || d > 40) throw InvalidInput("wendland_polynomial: (d,k) too large for exact coefficients");

    const int ell = d / 2 + k + 1;
    std::vector<Rational> c(ell + 1);
    for (int i = 0; i <= ell; ++i) c[i] = Rational((i % 2 ? -1 : 1) * binomial(ell, i));

    // (I phi)(r) = int_r^1 t phi(t) dt, applied k times.
    for (int step = 0; step < k; ++step) {
        std::vector<Rational> next(c.size() + 2, Rational(0));
        Rational at_one(0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            Rational term = c[i] / static_cast<std::int64_t>(i + 2);
            at_one += term;
            next[i + 2] = -term;
        }
        next[0] = at_one;
        c = std::move(next);
    }
    WendlandPolynomial p;
    p.d = d;
    p.k = k;
    p.coeffs = std::move(c);
    return p;
}

// ---------------------------------------------------------------- KernelSpec

KernelSpec KernelSpec::matern(int d, int n, double sigma) {
    KernelSpec s;
    s.family_ = KernelFamily::Matern;
    s.dim_ = d;
    s.smoothness_ = n;
    s.sigma_ = sigma;
    s.nu_ = n - 0.5 * d;
    s.validate();
    return s;
}

KernelSpec KernelSpec::wendland(int d, int k, double sigma) {
    KernelSpec s;
    s.family_ = KernelFamily::Wendland;
    s.dim_ = d;
    s.smoothness_ = k;
    s.sigma_ = sigma;
    s.validate();
    s.wendland_ = wendland_polynomial(d, k);
    return s;
}

KernelSpec KernelSpec::gaussian(int d, double sigma) {
    KernelSpec s;
    s.family_ = KernelFamily::GaussianRbf;
    s.dim_ = d;
    s.sigma_ = sigma;
    s.validate();
    return s;
}

KernelSpec KernelSpec::sobolev_h1(double a, double b) {
    KernelSpec s;
    s.family_ = KernelFamily::SobolevH1Interval;
    s.a_ = a;
    s.b_ = b;
    s.validate();
    return s;
}

KernelSpec KernelSpec::hyperbolic_gaussian(double sigma) {
    KernelSpec s;
    s.family_ = KernelFamily::HyperbolicGaussian;
    s.sigma_ = sigma;
    s.validate();
    return s;
}

KernelSpec KernelSpec::polynomial(int d, double c, int degree) {
    KernelSpec s;
    s.family_ = KernelFamily::Polynomial;
    s.dim_ = d;
    s.c_ = c;
    s.degree_ = degree;
    s.validate();
    return s;
}

KernelSpec KernelSpec::discrete_delta(int d) {
    KernelSpec s;
    s.family_ = KernelFamily::DiscreteDelta;
    s.dim_ = d;
    s.validate();
    return s;
}

KernelSpec KernelSpec::weighted_sequence(double r) {
    KernelSpec s;
    s.family_ = KernelFamily::WeightedSequence;
    s.r_ = r;
    s.validate();
    return s;
}

void KernelSpec::validate() const {
    if (dim_ < 1) throw InvalidInput("kernel: dimension d must be >= 1");
    switch (family_) {
    case KernelFamily::Matern:
        if (!(sigma_ > 0.0)) throw InvalidInput("kernel: sigma must be positive");
        if (!(nu_ > 0.0)) throw InvalidInput("kernel: Matern requires n > d/2");
        break;
    case KernelFamily::Wendland:
        if (!(sigma_ > 0.0)) throw InvalidInput("kernel: sigma must be positive");
        if (smoothness_ < 0 || (smoothness_ == 0 && dim_ < 3))
            throw InvalidInput("kernel: Wendland requires k >= 0 and (k >= 1 or d >= 3)");
        break;
    case KernelFamily::GaussianRbf:
    case KernelFamily::HyperbolicGaussian:
        if (!(sigma_ > 0.0)) throw InvalidInput("kernel: sigma must be positive");
        break;
    case KernelFamily::SobolevH1Interval:
        if (!(a_ < b_)) throw InvalidInput("kernel: interval kernel requires a < b");
        break;
    case KernelFamily::Polynomial:
        if (!(c_ >= 0.0)) throw InvalidInput("kernel: polynomial offset c must be >= 0");
        if (degree_ < 1) throw InvalidInput("kernel: polynomial degree must be >= 1");
        break;
    case KernelFamily::DiscreteDelta:
        break;
    case KernelFamily::WeightedSequence:
        if (!(r_ >= 0.0)) throw InvalidInput("kernel: sequence weight exponent r must be >= 0");
        break;
    }
}

bool KernelSpec::is_radial() const {
    return family_ == KernelFamily::Matern || family_ == KernelFamily::Wendland ||
           family_ == KernelFamily::GaussianRbf;
}

bool KernelSpec::is_diagonal() const {
    return family_ == KernelFamily::DiscreteDelta || family_ == KernelFamily::WeightedSequence;
}

double KernelSpec::diagonal_weight(const Point& x) const {
    if (family_ == KernelFamily::DiscreteDelta) return 1.0;
    if (family_ == KernelFamily::WeightedSequence) return std::pow(1.0 + std::fabs(x(0).real()), -2.0 * r_);
    throw InvalidInput("kernel: diagonal_weight is only defined for sequence kernels");
}

void KernelSpec::check_point(const Point& x) const {
    const int expected = (family_ == KernelFamily::SobolevH1Interval ||
                          family_ == KernelFamily::HyperbolicGaussian ||
                          family_ == KernelFamily::WeightedSequence)
                             ? 1
                             : dim_;
    if (x.size() != expected)
        throw InvalidInput("kernel " + family_name(family_) + ": point has dimension " +
                           std::to_string(x.size()) + ", expected " + std::to_string(expected));
    switch (family_) {
    case KernelFamily::SobolevH1Interval: {
        const cplx v = x(0);
        if (v.imag() != 0.0 || v.real() < a_ || v.real() > b_)
            throw InvalidInput("kernel sobolev-h1-interval: point outside [a,b]");
        break;
    }
    case KernelFamily::HyperbolicGaussian:
        if (!(std::abs(x(0)) < 1.0)) throw InvalidInput("kernel hyperbolic-gaussian: point not inside the unit disk");
        break;
    case KernelFamily::WeightedSequence: {
        const cplx v = x(0);
        if (v.imag() != 0.0 || std::floor(v.real()) != v.real())
            throw InvalidInput("kernel weighted-sequence: points must be integers");
        break;
    }
    default:
        break;
    }
}

double KernelSpec::radial(double r) const {
    switch (family_) {
    case KernelFamily::Matern: return matern_profile(nu_, sigma_ * r);
    case KernelFamily::Wendland: return (*wendland_)(sigma_ * r);
    case KernelFamily::GaussianRbf: {
        const double u = sigma_ * r;
        return std::exp(-u * u);
    }
    default: throw InvalidInput("kernel " + family_name(family_) + " is not radial");
    }
}

double poincare_distance(cplx x, cplx y) {
    const double nx = std::norm(x), ny = std::norm(y);
    if (!(nx < 1.0) || !(ny < 1.0)) throw InvalidInput("poincare_distance: point not inside the unit disk");
    // Equivalent to 2 atanh|(y-x)/(1-conj(x)y)| but free of cancellation for close points.
    const double delta = 2.0 * std::norm(x - y) / ((1.0 - nx) * (1.0 - ny));
    return std::log1p(delta + std::sqrt(delta * (2.0 + delta)));
}

cplx KernelSpec::operator()(const Point& x, const Point& y) const {
    check_point(x);
    check_point(y);
    return eval_unchecked(x, y);
}

cplx KernelSpec::eval_unchecked(const Point& x, const Point& y) const {
    switch (family_) {
    case KernelFamily::Matern:
    case KernelFamily::Wendland:
    case KernelFamily::GaussianRbf: return radial(euclidean_distance(x, y));
    case KernelFamily::SobolevH1Interval: {
        const double u = x(0).real(), v = y(0).real();
        const double lo = std::min(u, v), hi = std::max(u, v);
        return std::cosh(lo - a_) * std::cosh(b_ - hi) / std::sinh(b_ - a_);
    }
    case KernelFamily::HyperbolicGaussian: {
        const double dist = poincare_distance(x(0), y(0));
        return std::exp(-sigma_ * dist * dist);
    }
    case KernelFamily::Polynomial: {
        const cplx inner = y.dot(x);  // y^* x
        return std::pow(inner + c_, degree_);
    }
    case KernelFamily::DiscreteDelta: return (x == y) ? 1.0 : 0.0;
    case KernelFamily::WeightedSequence: return (x == y) ? diagonal_weight(x) : 0.0;
    }
    return 0.0;
}

std::string KernelSpec::to_string() const {
    auto num = [](double v) { return format_double(v); };
    switch (family_) {
    case KernelFamily::Matern:
        return "matern:d=" + std::to_string(dim_) + ",n=" + std::to_string(smoothness_) + ",sigma=" + num(sigma_);
    case KernelFamily::Wendland:
        return "wendland:d=" + std::to_string(dim_) + ",k=" + std::to_string(smoothness_) + ",sigma=" + num(sigma_);
    case KernelFamily::GaussianRbf: return "gaussian-rbf:d=" + std::to_string(dim_) + ",sigma=" + num(sigma_);
    case KernelFamily::SobolevH1Interval: return "sobolev-h1-interval:a=" + num(a_) + ",b=" + num(b_);
    case KernelFamily::HyperbolicGaussian: return "hyperbolic-gaussian:sigma=" + num(sigma_);
    case KernelFamily::Polynomial:
        return "polynomial:d=" + std::to_string(dim_) + ",c=" + num(c_) + ",degree=" + std::to_string(degree_);
    case KernelFamily::DiscreteDelta: return "discrete-delta:d=" + std::to_string(dim_);
    case KernelFamily::WeightedSequence: return "weighted-sequence:r=" + num(r_);
    }
    return "unknown";
}

cplx eval_kernel(const KernelSpec& spec, const Point& x, const Point& y) { return spec(x, y); }

// ---------------------------------------------------------------- parsing

namespace {

struct KeyReader {
    std::map<std::string, std::string> kv;
    std::string what;

    double real(const std::string& key, std::optional<double> fallback) {
        auto it = kv.find(key);
        if (it == kv.end()) {
            if (!fallback) throw InvalidInput(what + ": missing required key '" + key + "'");
            return *fallback;
        }
        double v = parse_double(it->second, what + " key '" + key + "'");
        kv.erase(it);
        return v;
    }
    int integer(const std::string& key, std::optional<int> fallback) {
        auto it = kv.find(key);
        if (it == kv.end()) {
            if (!fallback) throw InvalidInput(what + ": missing required key '" + key + "'");
            return *fallback;
        }
        long long v = parse_int(it->second, what + " key '" + key + "'");
        kv.erase(it);
        return static_cast<int>(v);
    }
    void finish() {
        if (!kv.empty()) throw InvalidInput(what + ": unknown key '" + kv.begin()->first + "'");
    }
};

} // namespace

KernelSpec parse_kernel_spec(const std::string& text) {
    const std::string what = "kernel spec '" + text + "'";
    auto colon = text.find(':');
    std::string family = to_lower(trim(text.substr(0, colon)));
    KeyReader keys{parse_key_values(colon == std::string::npos ? "" : text.substr(colon + 1), what), what};

    KernelSpec out = [&]() {
        if (family == "matern") {
            int d = keys.integer("d", std::nullopt);
            int n = keys.integer("n", std::nullopt);
            return KernelSpec::matern(d, n, keys.real("sigma", 1.0));
        }
        if (family == "wendland") {
            int d = keys.integer("d", std::nullopt);
            int k = keys.integer("k", std::nullopt);
            return KernelSpec::wendland(d, k, keys.real("sigma", 1.0));
        }
        if (family == "gaussian-rbf" || family == "gaussian" || family == "rbf") {
            int d = keys.integer("d", 1);
            return KernelSpec::gaussian(d, keys.real("sigma", 1.0));
        }
        if (family == "sobolev-h1-interval" || family == "h1") {
            double a = keys.real("a", 0.0);
            return KernelSpec::sobolev_h1(a, keys.real("b", 1.0));
        }
        if (family == "hyperbolic-gaussian" || family == "hyperbolic")
            return KernelSpec::hyperbolic_gaussian(keys.real("sigma", 1.0));
        if (family == "polynomial" || family == "poly") {
            int d = keys.integer("d", 1);
            double c = keys.real("c", 1.0);
            return KernelSpec::polynomial(d, c, keys.integer("degree", 2));
        }
        if (family == "discrete-delta" || family == "delta") return KernelSpec::discrete_delta(keys.integer("d", 1));
        if (family == "weighted-sequence" || family == "sequence")
            return KernelSpec::weighted_sequence(keys.real("r", 1.0));
        throw InvalidInput(what + ": unknown kernel family '" + family + "'");
    }();
    keys.finish();
    return out;
}

// ---------------------------------------------------------------- Lipschitz

std::optional<double> kernel_lipschitz_constant(const KernelSpec& spec) {
    switch (spec.family()) {
    case KernelFamily::Wendland: {
        const auto& p = *spec.wendland_piece();
        double c = 0.0;
        for (int l = 1; l <= p.degree(); ++l) c += std::fabs(l * to_double(p.coeffs[l]));
        return spec.sigma() * c;
    }
    case KernelFamily::GaussianRbf: return spec.sigma() * std::sqrt(2.0 / std::exp(1.0));
    case KernelFamily::Matern: {
        const double nu = spec.nu();
        if (nu == 0.5) return spec.sigma();
        if (nu < 1.0) return std::nullopt;
        // |f'(u)| vanishes at 0 and infinity and is unimodal: coarse scan, then golden section.
        auto g = [nu](double u) { return -matern_profile_derivative(nu, u); };
        double best_u = 0.0, best = 0.0;
        for (int i = 1; i <= 4000; ++i) {
            double u = 0.01 * i;
            double v = g(u);
            if (v > best) best = v, best_u = u;
        }
        double lo = std::max(0.0, best_u - 0.01), hi = best_u + 0.01;
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
            double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
            if (g(m1) < g(m2)) lo = m1;
            else hi = m2;
        }
        best = std::max(best, g(0.5 * (lo + hi)));
        // Relative slack covers the last few ulps of the maximiser search.
        return spec.sigma() * best * (1.0 + 1e-9);
    }
    default: return std::nullopt;
    }
}

} // namespace specrkhs
