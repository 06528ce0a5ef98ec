#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "specrkhs/rng.hpp"
#include "specrkhs/types.hpp"

namespace specrkhs {

enum class SystemKind {
    GaussMap,
    Duffing,
    Lorenz,
    Mobius,
    RandomWalk,
    RandomWalkPerturbed,
    Identity,
    CustomMap,
};

struct SystemSpec {
    SystemKind kind = SystemKind::Identity;
    int dim = 1;
    double timestep = 0.0;
    std::uint64_t seed = 0;

    double gauss_alpha = 2.0;
    double gauss_beta = -1.0 - 0.1353352832366127;  // -1 - e^{-2}

    double duffing_alpha = 1.0, duffing_beta = 1.0, duffing_delta = 0.2;

    double lorenz_sigma = 10.0, lorenz_rho = 28.0, lorenz_beta = 8.0 / 3.0;

    cplx mobius_a{1.0, 0.0}, mobius_b{0.0, 0.0};

    // Perturbed chain: rows for states -radius..radius hold (a_{i1}, a_{i2}).
    int perturbation_radius = 4;
    std::vector<std::array<double, 2>> perturbation;

    // Symmetric state window {-W,...,W} used when sampling Markov chains.
    long long window = 1000;

    std::function<Point(const Point&)> custom;
    std::string custom_name = "custom";

    static SystemSpec gauss_map(double alpha = 2.0, double beta = -1.0 - 0.1353352832366127);
    static SystemSpec duffing(double alpha = 1.0, double beta = 1.0, double delta = 0.2, double dt = 0.01);
    static SystemSpec lorenz(double sigma = 10.0, double rho = 28.0, double beta = 8.0 / 3.0, double dt = 0.01);
    static SystemSpec mobius(cplx a, cplx b);
    // 1: rotation by pi/3; 2: a = sqrt(2) e^{i pi sqrt(3)}, b = e^{i 9 pi / 7}.
    static SystemSpec mobius_preset(int which);
    static SystemSpec random_walk(long long window = 1000, std::uint64_t seed = 0);
    static SystemSpec random_walk_perturbed(std::uint64_t seed, long long window = 1000);
    static SystemSpec identity(int dim);
    static SystemSpec custom_map(int dim, std::function<Point(const Point&)> f, std::string name = "custom");

    bool stochastic() const;
    bool complex_state() const { return kind == SystemKind::Mobius; }
    std::string name() const;
    std::string to_string() const;
    void validate() const;
};

// `kind:key=value,...`, e.g. `duffing:delta=0.2,dt=0.01`, `mobius:preset=2`,
// `random-walk-perturbed:seed=7,window=200`, `identity:d=2`.
SystemSpec parse_system_spec(const std::string& text);

void check_state(const SystemSpec& spec, const Point& x);

// One application of F (deterministic) or one draw of F_tau (stochastic; rng required).
Point step(const SystemSpec& spec, const Point& x, Rng* rng = nullptr);

// Exact transition probabilities p(x, s) for each s in states (Markov kinds only).
std::vector<double> transition_row_exact(const SystemSpec& chain, long long x, const std::vector<long long>& states);

// Nonzero transitions (neighbour, probability) of state x, ordered by neighbour.
std::vector<std::pair<long long, double>> transition_support(const SystemSpec& chain, long long x);

double duffing_energy(const SystemSpec& spec, const Point& x);

struct SnapshotSet {
    Mat X;               // N x d pre-states
    std::vector<Mat> Y;  // S blocks of N x d successors

    Eigen::Index count() const { return X.rows(); }
    int dim() const { return static_cast<int>(X.cols()); }
    int samples() const { return static_cast<int>(Y.size()); }
    Point x(Eigen::Index i) const { return X.row(i).transpose(); }
    Point y(Eigen::Index i, int s = 0) const { return Y[s].row(i).transpose(); }
    SnapshotSet prefix(Eigen::Index n) const;
    // Rejects empty sets, shape mismatches and rows of X closer than 1e-14.
    void validate() const;
    std::uint64_t hash() const;
};

struct TrajectorySampling {
    Point x0;
    int length = 1;
};

// `trajectories` independent runs of `length` snapshots from uniform initial states in a box.
struct TrajectoryBatchSampling {
    std::vector<double> lo, hi;
    int trajectories = 1;
    int length = 1;
    std::uint64_t seed = 0;
};

struct RandomBoxSampling {
    std::vector<double> lo, hi;
    int count = 1;
    std::uint64_t seed = 0;
};

struct GridSampling {
    std::vector<Point> points;
};

// Chebyshev-Lobatto nodes of [a,b] with `intervals` subintervals in increasing order; the
// first `count` nodes are used (0 = all). With `nested` the nodes are listed coarse-to-fine
// instead, so every prefix is a nested refinement.
struct ChebyshevSampling {
    double a = -1.0, b = 1.0;
    int intervals = 200;
    int count = 0;
    bool nested = false;
};

// Points R^alpha e^{2 pi i Theta} in the unit disk with R, Theta uniform on (0,1).
struct DiskSampling {
    double alpha = 0.25;
    int count = 1;
    std::uint64_t seed = 0;
};

// Integer states lo..hi (Markov chains).
struct LatticeSampling {
    long long lo = -1000, hi = 1000;
};

using Sampling = std::variant<TrajectorySampling, TrajectoryBatchSampling, RandomBoxSampling, GridSampling,
                              ChebyshevSampling, DiskSampling, LatticeSampling>;

std::vector<double> chebyshev_lobatto_nested(double a, double b, int intervals);

SnapshotSet generate_snapshots(const SystemSpec& spec, const Sampling& sampling, int samples_per_state = 1);

// Runs `steps` applications of F from x0 and returns the states x0, F(x0), ..., F^steps(x0).
std::vector<Point> trajectory(const SystemSpec& spec, const Point& x0, int steps, Rng* rng = nullptr);

std::string write_snapshots_csv(const SnapshotSet& s);
SnapshotSet read_snapshots_csv(const std::string& text);
SnapshotSet load_snapshots_csv(const std::string& path);

} // namespace specrkhs
