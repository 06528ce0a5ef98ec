#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <ostream>
#include <type_traits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cli/config.hpp"
#include "specrkhs/gram.hpp"
#include "specrkhs/spectra.hpp"

namespace specrkhs::cli {

struct Context {
    RunConfig cfg;
    std::filesystem::path out_dir;
    std::ostream& out;
    std::vector<std::string> outputs;
    nlohmann::json results = nlohmann::json::object();
    std::vector<std::pair<std::string, double>> timings;

    Context(RunConfig c, std::ostream& o);

    // Atomic write into the output directory; records the file for the manifest.
    void write(const std::string& name, const std::string& content);

    template <class F>
    auto timed(const std::string& stage, F&& f) {
        const auto t0 = std::chrono::steady_clock::now();
        if constexpr (std::is_void_v<decltype(f())>) {
            f();
            timings.emplace_back(stage, seconds_since(t0));
        } else {
            auto r = f();
            timings.emplace_back(stage, seconds_since(t0));
            return r;
        }
    }

private:
    static double seconds_since(std::chrono::steady_clock::time_point t0);
};

struct Problem {
    std::optional<SystemSpec> system;
    std::optional<SnapshotSet> snapshots;
    std::optional<KernelSpec> kernel;
    std::vector<long long> chain_states;  // exact Markov-chain path
    GramTriple gram;
};

Problem load_problem(Context& ctx, bool need_snapshots = false);

// Kernel-section coefficients of the observable named by `spec`:
// `state:k`, `states:s=c,...`, `index:i=c,...`, or `random`.
Vec observable_coefficients(const std::string& spec, const Problem& p, std::uint64_t seed);

// Six significant digits for console messages.
std::string show(double v);

std::string eigenpairs_csv(const std::vector<VerifiedEigenpair>& pairs);

void cmd_gram(Context& ctx);
void cmd_eig(Context& ctx);
void cmd_pseudospec(Context& ctx);
void cmd_pseudospec_koop(Context& ctx);
void cmd_forecast(Context& ctx);
void cmd_measure(Context& ctx);
void cmd_check_normality(Context& ctx);
void cmd_demo(Context& ctx);

} // namespace specrkhs::cli
