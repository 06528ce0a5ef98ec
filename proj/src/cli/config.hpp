#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "specrkhs/dynamics.hpp"
#include "specrkhs/types.hpp"

namespace specrkhs::cli {

struct RunConfig {
    std::string command;
    std::string demo;

    std::string kernel;
    std::string system;
    std::string data;      // snapshot CSV
    std::string gram_in;   // serialized Gram triple
    std::string sampling;
    int n = 0;             // snapshot count (0 = system default)
    int samples = 1;       // successor samples per state
    bool exact = false;    // exact transition rows for Markov chains

    std::string grid;
    std::optional<double> eps;
    std::optional<long long> rank;
    double threshold = kDefaultTruncation;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string out = ".";
    unsigned threads = 0;

    bool svg = false;
    bool witnesses = false;
    std::optional<long long> n1, n2;

    std::string measure_type;
    int order = 6;
    std::string points;
    std::string observable;

    std::string x0;
    int steps = 30;
    std::optional<double> norm_kstar;

    bool error_json = false;
};

nlohmann::json to_json(const RunConfig& cfg);

// `re_min:re_max:step[,im_min:im_max:step]` or `lattice:N`.
std::vector<cplx> parse_grid_spec(const std::string& text);

// `lo:hi:count`, endpoints included.
std::vector<double> parse_points_spec(const std::string& text);

// `box:lo=..,hi=..`, `chebyshev:a=..,b=..,intervals=..`, `disk:alpha=..`, `lattice:lo=..,hi=..`,
// `trajectory:x0=a/b/c`. Empty text selects the default for the system.
Sampling parse_sampling(const std::string& text, const SystemSpec& system, int n, std::uint64_t seed);

// Default kernel spec string for a system when none is given.
std::string default_kernel_for(const SystemSpec& system);

// Comma-separated state coordinates, each real or complex (`0.3+0.1i`).
Point parse_point(const std::string& text);

} // namespace specrkhs::cli
