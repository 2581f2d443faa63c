#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "arena/algorithms.hpp"
#include "arena/sim.hpp"

// Schedule generators: fixed corpus patterns, the adaptive-adversary
// contract, and the constructive lower-bound schedule (sigma', rho_i, rho^s).

namespace arena {

// Pinned PRNG so golden schedules are stable across toolchains.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

Schedule round_robin(int n, long length);
Schedule seeded_random(int n, long length, std::uint64_t seed);
// Runs of `burst` consecutive slots by one uniformly drawn process.
Schedule bursty(int n, long length, long burst, std::uint64_t seed);

// Adaptive adversaries may inspect the entire simulated state before
// choosing each slot.
class ScheduleGenerator {
public:
    virtual ~ScheduleGenerator() = default;
    virtual int next(const Simulation& state) = 0;
};

ExecutionTrace run_adaptive(int n, const EngineFactory& make_engine,
                            std::unique_ptr<RequestStream> requests,
                            ScheduleGenerator& generator, long steps);

// ---------------------------------------------------------------------------
// Lower-bound construction. Each phase probes the candidate with an
// S-round-robin to find a process p whose register is never read, emits
// sigma' = segments of [S, p x (m+n+1), S], then extends with solo runs
// (rho_0 for p, then one per member of S) until each sits between collects.

struct LowerBoundPhase {
    int p = -1;
    long begin = 0;
    long sigma_end = 0;  // exclusive
    long end = 0;        // exclusive, after extensions
    std::vector<long> extension_lengths;  // rho_0 .. rho_m added steps
};

struct LowerBoundPlan {
    int n = 0;
    int m = 0;
    long segments = 0;
    long segment_length = 0;  // 3m + n + 1
    std::vector<int> set_s;
    std::vector<LowerBoundPhase> phases;

    // Replayable text manifest.
    std::string manifest() const;
};

struct LowerBoundBuild {
    Schedule schedule;  // rho^s
    LowerBoundPlan plan;
    ExecutionTrace candidate_trace;
};

LowerBoundBuild build_lower_bound_schedule(
    const CoreFactory& candidate, int n, int m, int phases,
    StreamRule requests = StreamRule::Collects);

// Champion roles tracking the plan's per-phase helper.
std::shared_ptr<const ChampionConfig> champion_config_from_plan(
    const LowerBoundPlan& plan);

}  // namespace arena
