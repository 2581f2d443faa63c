#include <doctest.h>

#include <algorithm>

#include "arena/adversary.hpp"
#include "arena/algorithms.hpp"
#include "arena/checks.hpp"
#include "arena/compose.hpp"
#include "arena/metrics.hpp"

using namespace arena;

namespace {

ExecutionTrace run_snapshot(const std::string& lower, const Schedule& s) {
    return run_simulation(snapshot_over_write_collect(find_algorithm(lower)),
                          s, make_stream(StreamRule::ScanUpdates));
}

ExecutionTrace run_rounds(const std::string& lower, const Schedule& s) {
    return run_simulation(
        round_numbers_over_write_collect(find_algorithm(lower)), s,
        make_stream(StreamRule::AdvanceCollects));
}

}  // namespace

TEST_CASE("snapshot: solo scan-update uses three write-collects") {
    Schedule s{1, std::vector<int>(9, 0)};
    ExecutionTrace trace = run_snapshot("trivial", s);
    CHECK(count_done(trace, TaskKind::ScanUpdate).total == 3);
    for (long used : subtasks_per_scan(trace)) CHECK(used == 3);
    CHECK(check_snapshot_atomicity(trace).empty());
}

TEST_CASE("snapshot: budget and atomicity on adversarial interleavings") {
    long worst = 0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Schedule s = seeded_random(4, 600, 2000 + seed);
        ExecutionTrace trace = run_snapshot("trivial", s);
        CHECK(check_snapshot_atomicity(trace).empty());
        CHECK(check_collect_freshness(trace).empty());
        CHECK(check_write_collect_serialization(trace).empty());
        for (long used : subtasks_per_scan(trace)) {
            worst = std::max(worst, used);
            CHECK(used <= 6);  // n + 2
        }
        CHECK(layer_isolated(trace));
    }
    CHECK(worst >= 3);
}

TEST_CASE("snapshot: two alternating processes pass the witness check") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Schedule s = bursty(2, 400, 5, 3000 + seed);
        ExecutionTrace trace = run_snapshot("coop", s);
        CHECK(check_snapshot_atomicity(trace).empty());
    }
}

TEST_CASE("rounds: one write-collect per advance-collect") {
    Schedule s = seeded_random(4, 500, 77);
    ExecutionTrace trace = run_rounds("coop", s);
    long done_t = count_done(trace, TaskKind::AdvanceCollect).total;
    long done_u = count_done(trace, TaskKind::WriteCollect).total;
    CHECK(done_t == done_u);
    CHECK(check_advance_collect(trace).empty());
    CHECK(check_collect_freshness(trace).empty());
    CHECK(layer_isolated(trace));
}

TEST_CASE("relative measurement and checks") {
    Schedule s = seeded_random(4, 800, 99);
    ExecutionTrace trace = run_rounds("coop", s);
    RelativeReport report = measure_relative(trace, 0, 1);
    CHECK(report.done_u == report.done_t);
    CHECK(report.done_u >= report.done_t);
    CHECK(report.opt_t_ub == report.opt_u_ub);
    CHECK(report.k_rel.defined());
    // k for the round layer stays near 1
    CHECK(report.k_rel.value() <= 2.0);

    LayerCheck rel = check_relative_competitiveness(report, report.k_rel);
    CHECK(rel.status == CheckStatus::Pass);
    CHECK(check_feasibility(report.opt_t_ub, report.opt_u_ub).status ==
          CheckStatus::Pass);
    LayerCheck comp =
        check_composition_bound(report, report.k_rel, report.l_hat);
    CHECK(comp.status == CheckStatus::Pass);
}

TEST_CASE("relative checks go vacuous on an empty schedule") {
    Schedule s{3, {}};
    ExecutionTrace trace = run_rounds("trivial", s);
    RelativeReport report = measure_relative(trace, 0, 1);
    CHECK(check_relative_competitiveness(report, Ratio{1, 1}).status ==
          CheckStatus::Vacuous);
    CHECK(check_composition_bound(report, report.k_rel, report.l_hat).status ==
          CheckStatus::Vacuous);
}

TEST_CASE("composition bound holds with corpus-wide constants") {
    struct Pairing {
        const char* name;
        bool snapshot;
        const char* lower;
    };
    for (const Pairing& pairing :
         {Pairing{"rounds/coop", false, "coop"},
          Pairing{"snapshot/trivial", true, "trivial"}}) {
        std::vector<RelativeReport> reports;
        Ratio k_max{0, 1}, l_max{0, 1};
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            Schedule s = seeded_random(4, 700, 4000 + seed);
            ExecutionTrace trace = pairing.snapshot
                                       ? run_snapshot(pairing.lower, s)
                                       : run_rounds(pairing.lower, s);
            long budget = pairing.snapshot ? 6 : 1;
            RelativeReport report = measure_relative(trace, 0, budget);
            if (report.k_rel.defined() && k_max < report.k_rel)
                k_max = report.k_rel;
            if (report.l_hat.defined() && l_max < report.l_hat)
                l_max = report.l_hat;
            reports.push_back(report);
        }
        for (const auto& report : reports) {
            INFO(pairing.name);
            CHECK(check_relative_competitiveness(report, k_max).status ==
                  CheckStatus::Pass);
            CHECK(check_composition_bound(report, k_max, l_max).status ==
                  CheckStatus::Pass);
        }
    }
}

TEST_CASE("snapshot relative ratio stays within the layer budget") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        Schedule s = seeded_random(4, 900, 5000 + seed);
        ExecutionTrace trace = run_snapshot("coop", s);
        RelativeReport report = measure_relative(trace, 0, 6);
        if (!report.k_rel.defined()) continue;
        CHECK(report.k_rel.value() <= 4.0 + 3.0);  // n + 3
    }
}

TEST_CASE("composed layers over the degenerate single process") {
    Schedule s{1, std::vector<int>(6, 0)};
    ExecutionTrace trace = run_rounds("trivial", s);
    CHECK(count_done(trace, TaskKind::AdvanceCollect).total == 6);
    RelativeReport report = measure_relative(trace, 0, 1);
    CHECK(check_composition_bound(report, report.k_rel, report.l_hat).status ==
          CheckStatus::Pass);
}
