#include "arena/adversary.hpp"

#include <numeric>
#include <sstream>

namespace arena {

Schedule round_robin(int n, long length) {
    if (n <= 0) throw ConfigError("round_robin: n must be positive");
    Schedule s;
    s.n = n;
    s.slots.reserve(static_cast<std::size_t>(length));
    for (long t = 0; t < length; ++t)
        s.slots.push_back(static_cast<int>(t % n));
    return s;
}

Schedule seeded_random(int n, long length, std::uint64_t seed) {
    if (n <= 0) throw ConfigError("seeded_random: n must be positive");
    Schedule s;
    s.n = n;
    s.slots.reserve(static_cast<std::size_t>(length));
    SplitMix64 rng(seed);
    for (long t = 0; t < length; ++t)
        s.slots.push_back(static_cast<int>(rng.next() % static_cast<std::uint64_t>(n)));
    return s;
}

Schedule bursty(int n, long length, long burst, std::uint64_t seed) {
    if (n <= 0) throw ConfigError("bursty: n must be positive");
    if (burst < 1) throw ConfigError("bursty: burst must be >= 1");
    Schedule s;
    s.n = n;
    s.slots.reserve(static_cast<std::size_t>(length));
    SplitMix64 rng(seed);
    while (static_cast<long>(s.slots.size()) < length) {
        int pid = static_cast<int>(rng.next() % static_cast<std::uint64_t>(n));
        for (long k = 0; k < burst && static_cast<long>(s.slots.size()) < length;
             ++k)
            s.slots.push_back(pid);
    }
    return s;
}

ExecutionTrace run_adaptive(int n, const EngineFactory& make_engine,
                            std::unique_ptr<RequestStream> requests,
                            ScheduleGenerator& generator, long steps) {
    Simulation sim(n, make_engine, std::move(requests));
    for (long t = 0; t < steps; ++t) sim.step(generator.next(sim));
    return sim.take_trace();
}

std::string LowerBoundPlan::manifest() const {
    std::ostringstream os;
    os << "n=" << n << " m=" << m << " segments=" << segments
       << " segment-length=" << segment_length << '\n';
    os << "S=";
    for (std::size_t i = 0; i < set_s.size(); ++i)
        os << (i ? "," : "") << set_s[i];
    os << '\n';
    for (std::size_t k = 0; k < phases.size(); ++k) {
        const auto& ph = phases[k];
        os << "phase " << k << ": p=" << ph.p << " begin=" << ph.begin
           << " sigma-end=" << ph.sigma_end << " end=" << ph.end << " ext=";
        for (std::size_t i = 0; i < ph.extension_lengths.size(); ++i)
            os << (i ? "," : "") << ph.extension_lengths[i];
        os << '\n';
    }
    return os.str();
}

LowerBoundBuild build_lower_bound_schedule(const CoreFactory& candidate,
                                           int n, int m, int phases,
                                           StreamRule requests) {
    if (n < 3) throw ConfigError("lower bound construction needs n >= 3");
    if (m < 1 || m >= n - 1)
        throw ConstructionError("m=" + std::to_string(m) +
                                " infeasible: need 1 <= m < n-1 so a process "
                                "outside S can stay unread");

    const long probe_len = static_cast<long>(n) - m - 1;
    const long segment_length = 3L * m + n + 1;
    const long segments = probe_len / (2L * m);

    LowerBoundBuild out;
    out.plan.n = n;
    out.plan.m = m;
    out.plan.segments = segments;
    out.plan.segment_length = segment_length;
    out.plan.set_s.resize(static_cast<std::size_t>(m));
    std::iota(out.plan.set_s.begin(), out.plan.set_s.end(), 0);
    const auto& set_s = out.plan.set_s;

    EngineFactory engines = collect_engine_factory(candidate);
    Simulation master(n, engines, make_stream(requests));

    for (int ph = 0; ph < phases; ++ph) {
        LowerBoundPhase phase;
        phase.begin = master.now();

        // probe on a throwaway replay: prefix + S round-robin
        std::vector<char> read_in_probe(static_cast<std::size_t>(n), 0);
        {
            Simulation probe(n, engines, make_stream(requests));
            for (int pid : master.trace().schedule) probe.step(pid);
            for (long k = 0; k < probe_len; ++k) {
                probe.step(set_s[static_cast<std::size_t>(k % m)]);
                const ExecutedOp& op = probe.trace().ops.back();
                if (op.kind == OpKind::Read)
                    read_in_probe[static_cast<std::size_t>(op.reg)] = 1;
            }
        }
        int p = -1;
        for (int cand = m; cand < n; ++cand) {
            if (!read_in_probe[static_cast<std::size_t>(cand)]) {
                p = cand;
                break;
            }
        }
        if (p < 0) {
            std::ostringstream os;
            os << "phase " << ph
               << ": every register outside S was read during the probe:";
            for (int r = m; r < n; ++r)
                if (read_in_probe[static_cast<std::size_t>(r)]) os << ' ' << r;
            throw ConstructionError(os.str());
        }
        phase.p = p;

        for (long seg = 0; seg < segments; ++seg) {
            for (int pid : set_s) master.step(pid);
            for (long k = 0; k < static_cast<long>(m) + n + 1; ++k)
                master.step(p);
            for (int pid : set_s) master.step(pid);
        }
        phase.sigma_end = master.now();

        auto extend_until_idle = [&](int pid) {
            long added = 0;
            while (!master.idle(pid)) {
                if (added >= 4L * n)
                    throw ConstructionError(
                        "process " + std::to_string(pid) +
                        " did not finish a solo collect within 4n steps");
                master.step(pid);
                ++added;
            }
            phase.extension_lengths.push_back(added);
        };
        extend_until_idle(p);
        for (int pid : set_s) extend_until_idle(pid);

        phase.end = master.now();
        out.plan.phases.push_back(std::move(phase));
    }

    out.schedule.n = n;
    out.schedule.slots = master.trace().schedule;
    out.candidate_trace = master.take_trace();
    return out;
}

std::shared_ptr<const ChampionConfig> champion_config_from_plan(
    const LowerBoundPlan& plan) {
    auto cfg = std::make_shared<ChampionConfig>();
    cfg->helper = plan.phases.empty() ? plan.n - 1 : plan.phases.front().p;
    cfg->clients = plan.set_s;
    for (const auto& ph : plan.phases) {
        ChampionConfig::PhaseRole role;
        role.begin_step = ph.begin;
        role.end_step = ph.end;
        role.helper = ph.p;
        role.clients = plan.set_s;
        cfg->phases.push_back(std::move(role));
    }
    return cfg;
}

}  // namespace arena
