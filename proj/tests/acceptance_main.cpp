// Acceptance suite: prints one pass/fail line per criterion and exits
// nonzero if any fails. Every tolerance is pinned here, in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "arena/adversary.hpp"
#include "arena/algorithms.hpp"
#include "arena/checks.hpp"
#include "arena/compose.hpp"
#include "arena/metrics.hpp"
#include "arena/report.hpp"
#include "reference_tagger.hpp"

using namespace arena;

namespace {

struct Gate {
    bool pass = true;
    std::string note;

    void fail(const std::string& why) {
        if (pass) note = why;
        pass = false;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

ExecutionTrace run_algo(const std::string& name, const Schedule& s,
                        StreamRule rule) {
    return run_simulation(collect_engine_factory(find_algorithm(name)), s,
                          make_stream(rule));
}

}  // namespace

int main() {
    std::vector<std::pair<std::string, Gate>> results;

    // ----------------------------------------------------------------- 1-5,7
    // One pass over the randomized corpus feeds criteria 1 (freshness +
    // serialization, timed), 2 (Lemma 1), 3 (Lemma 2), 4 (Lemma 3 + window
    // bound), 5 (throughput bracket) and 7 (private latency properties).
    Gate c1, c2, c3, c4, c5, c7;
    double correctness_seconds = 0;
    {
        const int corpus_n[] = {2, 3, 4, 8, 16};
        for (int i = 0; i < 1000; ++i) {
            int n = corpus_n[i % 5];
            SplitMix64 rng(static_cast<std::uint64_t>(7000 + i));
            long len = 1000 + static_cast<long>(rng.next() % 4001);
            Schedule schedule =
                seeded_random(n, len, static_cast<std::uint64_t>(13000 + i));

            for (const char* algo : {"trivial", "coop"}) {
                auto t0 = std::chrono::steady_clock::now();
                ExecutionTrace trace =
                    run_algo(algo, schedule, StreamRule::WriteCollects);
                auto fresh = check_collect_freshness(trace);
                auto serial = check_write_collect_serialization(trace);
                correctness_seconds += seconds_since(t0);
                if (!fresh.empty())
                    c1.fail(std::string(algo) + " freshness violation, i=" +
                            std::to_string(i) + ": " + fresh.front().detail);
                if (!serial.empty())
                    c1.fail(std::string(algo) + " serialization violation, i=" +
                            std::to_string(i) + ": " + serial.front().detail);

                LatencyProfile profile = measure_latency(trace);
                StepClassification tags = classify_steps(trace);
                ProgressSeries series = compute_progress(trace, profile, tags);

                CheckResult lemma1 = validate_lemma_progress(trace, series);
                if (!lemma1.pass)
                    c2.fail(std::string(algo) + " i=" + std::to_string(i) +
                            ": " + lemma1.witness);
                CheckResult lemma2 = validate_lemma_rises(trace, series);
                if (!lemma2.pass)
                    c3.fail(std::string(algo) + " i=" + std::to_string(i) +
                            ": " + lemma2.witness);
                CheckResult lemma3 = validate_lemma_champion(trace);
                if (!lemma3.pass)
                    c4.fail(std::string(algo) + " i=" + std::to_string(i) +
                            ": " + lemma3.witness);
                long opt = opt_upper_bound(n, trace.schedule);
                if (opt < count_done(trace).total)
                    c4.fail(std::string(algo) + " i=" + std::to_string(i) +
                            ": window bound below done");
                BracketCheck bracket =
                    throughput_bound_check(trace, series, opt);
                if (bracket.status != BracketCheck::Status::Pass)
                    c5.fail(std::string(algo) + " i=" + std::to_string(i) +
                            ": " + bracket.witness);

                if (std::string(algo) == "trivial") {
                    if (profile.private_latency != n)
                        c7.fail("PL(trivial) != n at i=" + std::to_string(i));
                    for (long steps : collect_step_counts(trace))
                        if (steps != n)
                            c7.fail("trivial collect of " +
                                    std::to_string(steps) + " steps, i=" +
                                    std::to_string(i));
                } else {
                    if (profile.private_latency > 2L * n)
                        c7.fail("PL(coop) > 2n at i=" + std::to_string(i));
                    for (long steps : collect_step_counts(trace))
                        if (steps > 2L * n)
                            c7.fail("coop collect of " +
                                    std::to_string(steps) + " steps, i=" +
                                    std::to_string(i));
                }
            }
        }
        if (correctness_seconds >= 120.0)
            c1.fail("corpus took " + std::to_string(correctness_seconds) +
                    "s (budget 120s)");
        c1.note = c1.pass ? "1000 schedules x {trivial,coop}, " +
                                std::to_string(correctness_seconds).substr(0, 5) +
                                "s"
                          : c1.note;
    }
    results.push_back({"criterion 1: correctness corpus, zero violations, "
                       "< 2 min",
                       c1});
    results.push_back(
        {"criterion 2: Lemma 1 progress bound at every completion", c2});
    results.push_back({"criterion 3: Lemma 2 window rise >= C(m,2)", c3});
    results.push_back(
        {"criterion 4: Lemma 3 window bound dominates every run", c4});
    results.push_back(
        {"criterion 5: Theorem 2 bracket inequality per trace", c5});

    // -------------------------------------------------------------------- 6
    Gate c6;
    {
        auto t0 = std::chrono::steady_clock::now();
        struct Point {
            int n;
            double ratio;
        };
        std::vector<Point> points;
        for (int n : {16, 64, 256}) {
            int m = static_cast<int>(std::ceil(std::sqrt(double(n))));
            LowerBoundBuild build = build_lower_bound_schedule(
                find_algorithm("trivial"), n, m, 10);
            auto cfg = champion_config_from_plan(build.plan);
            ExecutionTrace champion = run_simulation(
                collect_engine_factory([cfg](int nn, int pid) {
                    return make_champion_core(nn, pid, cfg);
                }),
                build.schedule, make_stream(StreamRule::Collects));

            const long champ_floor =
                (m + 1) * ((static_cast<long>(n) - m - 1) / (2L * m));
            const double cand_cap = 2.0 * (std::sqrt(double(n)) +
                                           double(n) / double(m));
            double ratio_sum = 0;
            for (const auto& phase : build.plan.phases) {
                long cand =
                    done_in_range(build.candidate_trace, phase.begin, phase.end);
                long champ = done_in_range(champion, phase.begin, phase.end);
                if (champ < champ_floor)
                    c6.fail("n=" + std::to_string(n) + ": champion " +
                            std::to_string(champ) + " < floor " +
                            std::to_string(champ_floor));
                if (static_cast<double>(cand) > cand_cap)
                    c6.fail("n=" + std::to_string(n) + ": candidate " +
                            std::to_string(cand) + " > cap " +
                            std::to_string(cand_cap));
                if (cand <= 0) {
                    c6.fail("n=" + std::to_string(n) + ": candidate idle");
                    continue;
                }
                ratio_sum += static_cast<double>(champ) /
                             static_cast<double>(cand);
            }
            points.push_back(
                {n, ratio_sum / static_cast<double>(build.plan.phases.size())});
        }
        // least-squares fit through the origin: ratio = a * sqrt(n)
        double num = 0, den = 0;
        for (const auto& pt : points) {
            num += pt.ratio * std::sqrt(double(pt.n));
            den += double(pt.n);
        }
        double a = den > 0 ? num / den : 0;
        std::string trend;
        for (const auto& pt : points) {
            double fit = a * std::sqrt(double(pt.n));
            trend += " n=" + std::to_string(pt.n) + ":" +
                     format_fixed(pt.ratio);
            if (pt.ratio < fit / 2.0 || pt.ratio > fit * 2.0)
                c6.fail("n=" + std::to_string(pt.n) + " ratio " +
                        format_fixed(pt.ratio) + " outside factor 2 of fit " +
                        format_fixed(fit));
        }
        double elapsed = seconds_since(t0);
        if (elapsed >= 300.0)
            c6.fail("sweep took " + std::to_string(elapsed) + "s (budget 300s)");
        if (c6.pass) c6.note = "a=" + format_fixed(a) + trend;
    }
    results.push_back(
        {"criterion 6: lower-bound ratio grows as sqrt(n), phase floors hold",
         c6});
    results.push_back(
        {"criterion 7: PL(trivial) = n exactly, PL(coop) <= 2n", c7});

    // ------------------------------------------------------------------ 8, 9
    Gate c8, c9;
    {
        struct Pairing {
            const char* upper;
            const char* lower;
        };
        const Pairing pairings[] = {{"rounds", "coop"},
                                    {"rounds", "trivial"},
                                    {"snapshot", "coop"},
                                    {"snapshot", "trivial"}};
        const int corpus_n[] = {2, 3, 4, 8};
        for (const auto& pairing : pairings) {
            bool snapshot = std::string(pairing.upper) == "snapshot";
            std::vector<RelativeReport> reports;
            Ratio k_max{0, 1}, l_max{0, 1};
            for (int i = 0; i < 100; ++i) {
                int n = corpus_n[i % 4];
                Schedule schedule = seeded_random(
                    n, 1200, static_cast<std::uint64_t>(9000 + i));
                EngineFactory factory =
                    snapshot ? snapshot_over_write_collect(
                                   find_algorithm(pairing.lower))
                             : round_numbers_over_write_collect(
                                   find_algorithm(pairing.lower));
                ExecutionTrace trace = run_simulation(
                    factory, schedule,
                    make_stream(snapshot ? StreamRule::ScanUpdates
                                         : StreamRule::AdvanceCollects));

                if (snapshot) {
                    if (!check_snapshot_atomicity(trace).empty())
                        c9.fail(std::string(pairing.lower) +
                                " atomicity violation, i=" + std::to_string(i));
                    for (long used : subtasks_per_scan(trace))
                        if (used > n + 2)
                            c9.fail(std::string(pairing.lower) +
                                    " scan used " + std::to_string(used) +
                                    " write-collects (n=" + std::to_string(n) +
                                    ")");
                }
                RelativeReport report =
                    measure_relative(trace, 0, snapshot ? n + 2 : 1);
                if (report.k_rel.defined() && k_max < report.k_rel)
                    k_max = report.k_rel;
                if (report.l_hat.defined() && l_max < report.l_hat)
                    l_max = report.l_hat;
                reports.push_back(report);
            }
            for (std::size_t i = 0; i < reports.size(); ++i) {
                LayerCheck comp =
                    check_composition_bound(reports[i], k_max, l_max);
                if (comp.status != CheckStatus::Pass)
                    c8.fail(std::string(pairing.upper) + "/" + pairing.lower +
                            " i=" + std::to_string(i) + ": " + comp.detail);
            }
        }
    }
    results.push_back(
        {"criterion 8: composition inequality on the 100-schedule corpus x 4 "
         "pairings",
         c8});
    results.push_back(
        {"criterion 9: scan-updates within n+2 write-collects, atomic", c9});

    // ------------------------------------------------------------------- 10
    Gate c10;
    {
        const int suite_n[] = {2, 3, 4};
        for (int i = 0; i < 50; ++i) {
            int n = suite_n[i % 3];
            long len = 80 + (static_cast<long>(i) * 7) % 121;
            Schedule schedule =
                seeded_random(n, len, static_cast<std::uint64_t>(11000 + i));
            const char* algo = (i % 2) ? "coop" : "trivial";
            ExecutionTrace trace =
                run_algo(algo, schedule, StreamRule::WriteCollects);
            StepClassification fast = classify_steps(trace);
            StepClassification slow = arena::testing::reference_classify(trace);
            if (fast.tags != slow.tags)
                c10.fail("trace " + std::to_string(i) +
                         " disagrees with the reference tagger");
        }
    }
    results.push_back(
        {"criterion 10: classifier matches the brute-force reference on the "
         "pinned suite",
         c10});

    // ------------------------------------------------------------------- 11
    Gate c11;
    {
        Schedule schedule = seeded_random(8, 5000, 7);
        std::string ops_a, ops_b, tasks_a, tasks_b, csv_a, csv_b;
        for (int round = 0; round < 2; ++round) {
            ExecutionTrace trace =
                run_algo("coop", schedule, StreamRule::WriteCollects);
            LatencyProfile profile = measure_latency(trace);
            RunReportRow row;
            row.algo = "coop";
            row.n = 8;
            row.sched = "random:5000:seed=7";
            row.seed = 7;
            row.done = count_done(trace).total;
            row.opt_ub = opt_upper_bound(8, trace.schedule);
            row.opt_lb = 0;
            row.cl = profile.collective;
            row.pl = profile.private_latency;
            row.k_hat =
                make_ratio_report(row.done, row.opt_ub, 0, 8).k_hat;
            std::string csv = metrics_csv_header() + metrics_csv_row(row);
            if (round == 0) {
                ops_a = export_ops(trace);
                tasks_a = export_tasks(trace);
                csv_a = csv;
            } else {
                ops_b = export_ops(trace);
                tasks_b = export_tasks(trace);
                csv_b = csv;
            }
        }
        if (ops_a != ops_b) c11.fail("trace exports differ across reruns");
        if (tasks_a != tasks_b) c11.fail("task tables differ across reruns");
        if (csv_a != csv_b) c11.fail("CSV reports differ across reruns");
        if (ops_a.empty()) c11.fail("empty export");
    }
    results.push_back(
        {"criterion 11: byte-identical exports and reports across reruns",
         c11});

    int failures = 0;
    for (const auto& [label, gate] : results) {
        if (gate.pass) {
            std::printf("PASS  %s%s%s\n", label.c_str(),
                        gate.note.empty() ? "" : " :: ", gate.note.c_str());
        } else {
            ++failures;
            std::printf("FAIL  %s :: %s\n", label.c_str(), gate.note.c_str());
        }
    }
    std::printf("%d/%zu criteria passed\n",
                static_cast<int>(results.size()) - failures, results.size());
    return failures == 0 ? 0 : 1;
}
