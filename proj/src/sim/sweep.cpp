#include "wfl/sim/sweep.hpp"

#include <exception>

namespace wfl::sim {

std::vector<std::uint64_t> sweep_seeds(std::uint64_t first, std::size_t n) {
    std::vector<std::uint64_t> seeds(n);
    for (std::size_t i = 0; i < n; ++i) seeds[i] = first + i;
    return seeds;
}

std::vector<SimulationReport> run_sweep_serial(const ScenarioConfig& config, std::span<const std::uint64_t> seeds) {
    std::vector<SimulationReport> out;
    out.reserve(seeds.size());
    for (auto seed : seeds) {
        ScenarioConfig c = config;
        c.seed = seed;
        out.push_back(run_scenario(c));
    }
    return out;
}

std::vector<SimulationReport> run_sweep(const ScenarioConfig& config, std::span<const std::uint64_t> seeds) {
    const auto n = static_cast<std::ptrdiff_t>(seeds.size());
    std::vector<SimulationReport> out(seeds.size());
    std::vector<std::exception_ptr> errors(seeds.size());

#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            ScenarioConfig c = config;
            c.seed = seeds[i];
            out[i] = run_scenario(c);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }

    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace wfl::sim
