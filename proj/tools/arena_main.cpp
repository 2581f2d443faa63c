// arena: experiment runner for wait-free collect simulations.
//
// Subcommands:
//   run        simulate one algorithm on one schedule, run validators
//   lowerbound build the constructive adversary schedule, compare candidate
//              against the timestamp champion per phase
//   compose    run a layered algorithm over a schedule corpus and verify the
//              relative/composition bounds
//
// Exit codes: 0 success, 1 validator or predicate failure, 2 configuration
// error.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "arena/adversary.hpp"
#include "arena/checks.hpp"
#include "arena/compose.hpp"
#include "arena/report.hpp"

namespace {

using namespace arena;

struct SchedSpec {
    std::string kind;
    long length = 0;
    long burst = 1;
    std::optional<long> len;  // corpus schedules: per-schedule length
    std::optional<std::uint64_t> seed;
    std::string text;  // the original spec string
};

std::uint64_t env_seed_or_throw(const std::string& what) {
    if (const char* env = std::getenv("ARENA_SEED"))
        return std::strtoull(env, nullptr, 10);
    throw ConfigError(what + " needs a seed (\":seed=N\" or ARENA_SEED)");
}

SchedSpec parse_sched(const std::string& text) {
    SchedSpec spec;
    spec.text = text;
    std::string rest = text;
    auto take = [&rest]() -> std::string {
        auto pos = rest.find(':');
        std::string head = rest.substr(0, pos);
        rest = (pos == std::string::npos) ? "" : rest.substr(pos + 1);
        return head;
    };
    spec.kind = take();
    std::string len = take();
    if (len.empty()) throw ConfigError("schedule spec needs a length: " + text);
    spec.length = std::strtol(len.c_str(), nullptr, 10);
    while (!rest.empty()) {
        std::string kv = take();
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ConfigError("bad schedule parameter: " + kv);
        std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
        if (key == "seed")
            spec.seed = std::strtoull(value.c_str(), nullptr, 10);
        else if (key == "burst")
            spec.burst = std::strtol(value.c_str(), nullptr, 10);
        else if (key == "len")
            spec.len = std::strtol(value.c_str(), nullptr, 10);
        else
            throw ConfigError("unknown schedule parameter: " + key);
    }
    return spec;
}

Schedule build_schedule(const SchedSpec& spec, int n,
                        std::uint64_t* seed_out) {
    *seed_out = 0;
    if (spec.kind == "round-robin") return round_robin(n, spec.length);
    if (spec.kind == "random") {
        std::uint64_t seed =
            spec.seed ? *spec.seed : env_seed_or_throw("random schedule");
        *seed_out = seed;
        return seeded_random(n, spec.length, seed);
    }
    if (spec.kind == "bursty") {
        std::uint64_t seed =
            spec.seed ? *spec.seed : env_seed_or_throw("bursty schedule");
        *seed_out = seed;
        return bursty(n, spec.length, spec.burst, seed);
    }
    throw ConfigError("unknown schedule kind: " + spec.kind);
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

long champion_done_on(const Schedule& schedule, StreamRule rule) {
    auto factory = collect_engine_factory([](int n, int pid) {
        return make_champion_core(n, pid, default_champion_config(n));
    });
    ExecutionTrace trace =
        run_simulation(factory, schedule, make_stream(rule));
    return count_done(trace).total;
}

bool validator_selected(const std::string& list, const std::string& name) {
    if (list == "all") return true;
    std::size_t pos = 0;
    while (pos < list.size()) {
        auto comma = list.find(',', pos);
        std::string item = list.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (item == name) return true;
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return false;
}

int cmd_run(const std::string& algo_name, int n, const std::string& sched_text,
            const std::string& requests, const std::string& validators,
            const std::string& out_dir) {
    CoreFactory algo = find_algorithm(algo_name);
    SchedSpec spec = parse_sched(sched_text);
    std::uint64_t seed = 0;
    Schedule schedule = build_schedule(spec, n, &seed);
    StreamRule rule = parse_stream_rule(requests);

    ExecutionTrace trace = run_simulation(collect_engine_factory(algo),
                                          schedule, make_stream(rule));

    bool failed = false;
    std::vector<Violation> violations;
    auto run_predicate = [&](const std::string& name, auto&& fn) {
        if (!validator_selected(validators, name)) return;
        auto found = fn(trace);
        std::cout << name << ": " << found.size() << " violations\n";
        for (const auto& v : found)
            std::cout << "  owner=" << v.owner << " [" << v.start << ","
                      << v.finish << "] " << v.detail << "\n";
        if (!found.empty()) failed = true;
        violations.insert(violations.end(), found.begin(), found.end());
    };
    run_predicate("freshness", check_collect_freshness);
    run_predicate("serialization", check_write_collect_serialization);
    run_predicate("snapshot", check_snapshot_atomicity);
    run_predicate("advance", check_advance_collect);

    long done = count_done(trace).total;
    long opt_ub = opt_upper_bound(schedule);
    long opt_lb = champion_done_on(schedule, rule);

    RunReportRow row;
    row.algo = algo_name;
    row.n = n;
    row.sched = spec.text;
    row.seed = seed;
    row.done = done;
    row.opt_ub = opt_ub;
    row.opt_lb = opt_lb;

    bool have_profile = true;
    LatencyProfile profile;
    try {
        profile = measure_latency(trace);
    } catch (const UndefinedProfile&) {
        have_profile = false;
    }

    if (have_profile) {
        row.cl = profile.collective;
        row.pl = profile.private_latency;
        StepClassification tags = classify_steps(trace);
        ProgressSeries series = compute_progress(trace, profile, tags);

        auto run_lemma = [&](const std::string& name, CheckResult result) {
            if (!validator_selected(validators, name)) return;
            std::cout << name << ": " << (result.pass ? "ok" : "FAIL") << "\n";
            if (!result.pass) {
                std::cout << "  " << result.witness << "\n";
                failed = true;
            }
        };
        run_lemma("lemma1", validate_lemma_progress(trace, series));
        run_lemma("lemma2", validate_lemma_rises(trace, series));
        run_lemma("lemma3", validate_lemma_champion(trace));
        if (validator_selected(validators, "theorem2")) {
            BracketCheck bracket = throughput_bound_check(trace, series, opt_ub);
            if (bracket.status == BracketCheck::Status::Inconclusive) {
                std::cout << "theorem2: inconclusive (" << bracket.witness
                          << ")\n";
            } else {
                bool ok = bracket.status == BracketCheck::Status::Pass;
                std::cout << "theorem2: " << (ok ? "ok" : "FAIL") << "\n";
                if (!ok) {
                    std::cout << "  " << bracket.witness << "\n";
                    failed = true;
                }
            }
        }
        if (validator_selected(validators, "pl")) {
            bool ok = true;
            for (long steps : collect_step_counts(trace)) {
                if (algo_name == "trivial" && steps != n) ok = false;
                if (algo_name == "coop" && steps > 2L * n) ok = false;
            }
            std::cout << "pl: " << (ok ? "ok" : "FAIL") << "\n";
            if (!ok) failed = true;
        }
    } else {
        std::cout << "latency profile undefined (no finished collect); "
                     "lemma validators skipped\n";
    }
    row.k_hat = make_ratio_report(done, opt_ub, opt_lb, n).k_hat;

    std::cout << "done=" << done << " opt_ub=" << opt_ub << " opt_lb=" << opt_lb
              << " k_hat=" << format_fixed(row.k_hat) << "\n";

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::filesystem::path dir(out_dir);
        write_file_atomic(dir / "trace.txt", export_ops(trace));
        write_file_atomic(dir / "tasks.txt", export_tasks(trace));
        write_file_atomic(dir / "violations.txt", export_violations(violations));
        write_file_atomic(dir / "metrics.csv",
                          metrics_csv_header() + metrics_csv_row(row));
        write_file_atomic(dir / "metrics.json", metrics_json({row}));
    }
    return failed ? 1 : 0;
}

int cmd_lowerbound(const std::string& algo_name, int n, int m, int phases,
                   const std::string& out_dir) {
    CoreFactory algo = find_algorithm(algo_name);
    if (m <= 0) m = static_cast<int>(std::ceil(std::sqrt(double(n))));

    std::string csv = lowerbound_csv_header();
    std::string manifest;
    if (phases > 0) {
        LowerBoundBuild build =
            build_lower_bound_schedule(algo, n, m, phases);
        auto champ_cfg = champion_config_from_plan(build.plan);
        auto champ_factory =
            collect_engine_factory([champ_cfg](int nn, int pid) {
                return make_champion_core(nn, pid, champ_cfg);
            });
        ExecutionTrace champion_trace = run_simulation(
            champ_factory, build.schedule, make_stream(StreamRule::Collects));

        manifest = build.plan.manifest();
        std::cout << manifest;
        for (std::size_t k = 0; k < build.plan.phases.size(); ++k) {
            const auto& ph = build.plan.phases[k];
            LowerBoundReportRow row;
            row.phase = static_cast<int>(k);
            row.p = ph.p;
            row.begin = ph.begin;
            row.end = ph.end;
            row.candidate_done =
                done_in_range(build.candidate_trace, ph.begin, ph.end);
            row.champion_done =
                done_in_range(champion_trace, ph.begin, ph.end);
            row.ratio = row.candidate_done
                            ? static_cast<double>(row.champion_done) /
                                  static_cast<double>(row.candidate_done)
                            : 0.0;
            csv += lowerbound_csv_row(row);
            std::cout << "phase " << k << ": candidate=" << row.candidate_done
                      << " champion=" << row.champion_done
                      << " ratio=" << format_fixed(row.ratio) << "\n";
        }
    }
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::filesystem::path dir(out_dir);
        write_file_atomic(dir / "lowerbound.csv", csv);
        write_file_atomic(dir / "plan.txt", manifest);
    }
    return 0;
}

int cmd_compose(const std::string& upper, const std::string& lower, int n,
                const std::string& corpus, const std::string& out_dir) {
    CoreFactory lower_algo = find_algorithm(lower);
    EngineFactory factory;
    StreamRule rule;
    long budget;
    if (upper == "snapshot") {
        factory = snapshot_over_write_collect(lower_algo);
        rule = StreamRule::ScanUpdates;
        budget = n + 2;
    } else if (upper == "rounds") {
        factory = round_numbers_over_write_collect(lower_algo);
        rule = StreamRule::AdvanceCollects;
        budget = 1;
    } else {
        throw ConfigError("unknown upper layer: " + upper +
                          " (use snapshot or rounds)");
    }

    SchedSpec spec = parse_sched(corpus);
    if (spec.kind != "random")
        throw ConfigError("corpus spec must be random:<count>[:len=..][:seed=..]");
    long count = spec.length;
    long len = spec.len.value_or(2000);
    std::uint64_t seed0 = spec.seed ? *spec.seed : 1;

    // pass 1: run the corpus, measure per-schedule ratios
    struct Entry {
        std::uint64_t seed;
        ExecutionTrace trace;
        RelativeReport report;
        bool violated = false;
    };
    std::vector<Entry> entries;
    Ratio k_max{0, 1}, l_max{0, 1};
    for (long i = 0; i < count; ++i) {
        Entry e;
        e.seed = seed0 + static_cast<std::uint64_t>(i);
        Schedule schedule = seeded_random(n, len, e.seed);
        e.trace = run_simulation(factory, schedule, make_stream(rule));

        if (!check_collect_freshness(e.trace).empty()) e.violated = true;
        if (!check_write_collect_serialization(e.trace).empty())
            e.violated = true;
        if (upper == "snapshot") {
            if (!check_snapshot_atomicity(e.trace).empty()) e.violated = true;
            for (long used : subtasks_per_scan(e.trace))
                if (used > budget) e.violated = true;
        } else {
            if (!check_advance_collect(e.trace).empty()) e.violated = true;
        }

        long opt_u_lb = champion_done_on(schedule, StreamRule::WriteCollects);
        e.report = measure_relative(e.trace, opt_u_lb, budget);
        if (e.report.k_rel.defined() && k_max < e.report.k_rel)
            k_max = e.report.k_rel;
        if (e.report.l_hat.defined() && l_max < e.report.l_hat)
            l_max = e.report.l_hat;
        entries.push_back(std::move(e));
    }

    // pass 2: verify with the corpus-wide constants
    bool failed = false;
    std::string csv = compose_csv_header();
    std::vector<ComposeReportRow> rows;
    for (const auto& e : entries) {
        LayerCheck rel = check_relative_competitiveness(e.report, k_max);
        LayerCheck feas =
            check_feasibility(e.report.opt_t_ub, e.report.opt_u_ub, 1);
        LayerCheck comp = check_composition_bound(e.report, k_max, l_max);

        ComposeReportRow row;
        row.upper = upper;
        row.lower = lower;
        row.n = n;
        row.seed = e.seed;
        row.done_t = e.report.done_t;
        row.done_u = e.report.done_u;
        row.budget = e.report.budget;
        row.k_rel = e.report.k_rel.value();
        row.l_hat = e.report.l_hat.value();
        bool bad = e.violated || rel.status == CheckStatus::Fail ||
                   feas.status == CheckStatus::Fail ||
                   comp.status == CheckStatus::Fail;
        row.kl_bound_holds = comp.status == CheckStatus::Vacuous ? "vacuous"
                             : comp.status == CheckStatus::Pass ? "yes"
                                                                : "no";
        if (bad) failed = true;
        csv += compose_csv_row(row);
        rows.push_back(std::move(row));
    }
    std::cout << csv;
    std::cout << "k=" << format_fixed(k_max.value())
              << " l=" << format_fixed(l_max.value())
              << " schedules=" << entries.size()
              << (failed ? " FAIL" : " ok") << "\n";

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::filesystem::path dir(out_dir);
        write_file_atomic(dir / "compose.csv", csv);
        write_file_atomic(dir / "compose.json", compose_json(rows));
    }
    return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic simulator and measurement harness for "
                 "wait-free collect algorithms"};
    app.require_subcommand(1);
    app.set_config("--config");

    std::string algo = "trivial", sched = "round-robin:100";
    std::string requests = "all-write-collects", validators = "all";
    std::string out_dir;
    int n = 4, m = 0, phases = 10;
    std::string upper = "rounds", lower = "coop", corpus = "random:10";

    CLI::App* run = app.add_subcommand("run", "simulate and validate one run");
    run->add_option("--algo", algo, "algorithm name");
    run->add_option("--n", n, "process count");
    run->add_option("--sched", sched, "schedule spec kind:len[:seed=..]");
    run->add_option("--requests", requests, "request stream rule");
    run->add_option("--validators", validators, "all or comma list");
    run->add_option("--out", out_dir, "report directory");

    CLI::App* lb = app.add_subcommand("lowerbound",
                                      "constructive adversary experiment");
    lb->add_option("--algo", algo, "candidate algorithm");
    lb->add_option("--n", n, "process count");
    lb->add_option("--m", m, "round-robin set size (default ceil(sqrt(n)))");
    lb->add_option("--phases", phases, "phase count");
    lb->add_option("--out", out_dir, "report directory");

    CLI::App* comp = app.add_subcommand("compose", "layered algorithm corpus");
    comp->add_option("--upper", upper, "snapshot or rounds");
    comp->add_option("--lower", lower, "write-collect implementation");
    comp->add_option("--n", n, "process count");
    comp->add_option("--corpus", corpus,
                     "random:<count>[:len=..][:seed=..]");
    comp->add_option("--out", out_dir, "report directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run->parsed())
            return cmd_run(algo, n, sched, requests, validators, out_dir);
        if (lb->parsed()) return cmd_lowerbound(algo, n, m, phases, out_dir);
        if (comp->parsed()) return cmd_compose(upper, lower, n, corpus, out_dir);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const ConstructionError& e) {
        std::cerr << "construction error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
