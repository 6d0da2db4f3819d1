#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wfl/sim/simulator.hpp"

namespace wfl::sim {

/// seed, seed+1, ..., seed+n-1
std::vector<std::uint64_t> sweep_seeds(std::uint64_t first, std::size_t n);

// Runs `config` once per seed. Results are in seed order and identical
// between the two; the serial version is the reference for testing.
std::vector<SimulationReport> run_sweep_serial(const ScenarioConfig& config, std::span<const std::uint64_t> seeds);
std::vector<SimulationReport> run_sweep(const ScenarioConfig& config, std::span<const std::uint64_t> seeds);

}  // namespace wfl::sim
