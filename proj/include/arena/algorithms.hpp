#pragma once

#include <memory>
#include <string>
#include <vector>

#include "arena/sim.hpp"

// Pluggable collect/write-collect algorithms, all deterministic step
// functions. The first step of every task is a write; a write-collect's
// value rides on that initial write.

namespace arena {

// ---------------------------------------------------------------------------
// Trivial: one write, then the other n-1 registers read directly in cyclic
// order from self+1. Private latency is exactly n.
std::unique_ptr<CollectCore> make_trivial_core(int n, int pid);

// ---------------------------------------------------------------------------
// Cooperative collect with epoch certificates. Register cells publish the
// writer's epoch, its epoch knowledge, and a per-register view of certified
// entries; a reader adopts an entry for register r iff the certificate
// proves the original direct read of r happened after the reader's current
// collect began (cert.observed[self] >= own epoch).

struct CoopCert {
    std::vector<std::int64_t> observed;  // reader's epoch knowledge at read
};

struct CoopEntry {
    ValuePtr value;  // null = bottom
    CoopCert cert;
};

struct CoopNote {
    std::int64_t epoch = 0;
    std::vector<std::int64_t> knowledge;
    std::vector<std::optional<CoopEntry>> view;
};

std::unique_ptr<CollectCore> make_coop_core(int n, int pid);

// ---------------------------------------------------------------------------
// Lower-bound champion. A designated helper gathers the clients' timestamps,
// reads every register, and publishes the stamped vector in one write;
// clients finish a collect from that single register once their own stamp is
// covered. Roles may be keyed on global step ranges — the champion is
// schedule-tailored by construction; every role path is a correct collect on
// any schedule.

struct ChampNote {
    std::int64_t epoch = 0;
    bool has_vector = false;
    std::vector<std::int64_t> stamps;  // client epochs gathered before sweep
    std::vector<ValuePtr> snapshot;    // all n values, read after the stamps
};

struct ChampionConfig {
    struct PhaseRole {
        long begin_step = 0;
        long end_step = 0;  // exclusive; roles of the last phase extend on
        int helper = 0;
        std::vector<int> clients;
    };
    int helper = 0;             // static role when `phases` is empty
    std::vector<int> clients;
    std::vector<PhaseRole> phases;

    // Role lookup for the phase containing `step` (or the static roles).
    void roles_at(long step, int* helper_out,
                  const std::vector<int>** clients_out) const;
};

std::unique_ptr<CollectCore> make_champion_core(
    int n, int pid, std::shared_ptr<const ChampionConfig> config);

// Default standalone configuration: helper 0, everyone else a client.
std::shared_ptr<const ChampionConfig> default_champion_config(int n);

// ---------------------------------------------------------------------------
// Registry ("trivial", "coop", "champion-ts").
CoreFactory find_algorithm(const std::string& name);
std::vector<std::string> algorithm_names();

}  // namespace arena
