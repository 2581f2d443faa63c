#include <doctest.h>

#include <algorithm>

#include "arena/adversary.hpp"
#include "arena/algorithms.hpp"
#include "arena/sim.hpp"

using namespace arena;

namespace {

EngineFactory trivial_engines() {
    return collect_engine_factory(find_algorithm("trivial"));
}

ExecutionTrace run_trivial(const Schedule& s,
                           StreamRule rule = StreamRule::Collects) {
    return run_simulation(trivial_engines(), s, make_stream(rule));
}

}  // namespace

TEST_CASE("two processes, schedule [0,1,0]") {
    Schedule s{2, {0, 1, 0}};
    ExecutionTrace trace = run_trivial(s);

    REQUIRE(trace.ops.size() == 3);
    CHECK(trace.ops[0].kind == OpKind::Write);
    CHECK(trace.ops[0].reg == 0);
    CHECK(trace.ops[1].kind == OpKind::Write);
    CHECK(trace.ops[1].reg == 1);
    CHECK(trace.ops[2].kind == OpKind::Read);
    CHECK(trace.ops[2].reg == 1);

    // p0's first collect finishes at step 2
    REQUIRE(!trace.tasks.empty());
    const TaskRecord& first = trace.tasks[0];
    CHECK(first.owner == 0);
    CHECK(first.start == 0);
    CHECK(first.finish == 2);
}

TEST_CASE("single process completes a collect in one step") {
    Schedule s{1, {0}};
    ExecutionTrace trace = run_trivial(s);
    CHECK(count_done(trace).total == 1);
    CHECK(trace.tasks[0].finish == 0);
}

TEST_CASE("empty schedule") {
    Schedule s{3, {}};
    ExecutionTrace trace = run_trivial(s);
    CHECK(trace.ops.empty());
    CHECK(count_done(trace).total == 0);
}

TEST_CASE("schedule naming an out-of-range process") {
    Schedule s{2, {0, 2}};
    CHECK_THROWS_AS(run_trivial(s), ConfigError);
}

TEST_CASE("foreign write aborts with the offending step") {
    struct BadCore final : CollectCore {
        int n_, self_;
        BadCore(int n, int self) : n_(n), self_(self) {}
        void begin(TaskKind, std::int64_t, std::any) override {}
        OpIntent next_op(long) override {
            return OpIntent::write((self_ + 1) % n_, {});
        }
        std::optional<CollectOutcome> absorb(const ExecutedOp&) override {
            return std::nullopt;
        }
    };
    auto factory = collect_engine_factory(
        [](int n, int pid) -> std::unique_ptr<CollectCore> {
            return std::make_unique<BadCore>(n, pid);
        });
    Schedule s{2, {0}};
    CHECK_THROWS_AS(
        run_simulation(factory, s, make_stream(StreamRule::Collects)),
        ModelViolation);
}

TEST_CASE("register_contents_at follows latest-write-wins") {
    // p1's slots are 3,5,7: its write-collects write reg1 at steps 3 and 7
    Schedule s{2, {0, 0, 0, 1, 0, 1, 0, 1}};
    ExecutionTrace trace =
        run_trivial(s, StreamRule::WriteCollects);
    ValuePtr at5 = register_contents_at(trace, 1, 5);
    REQUIRE(at5);
    CHECK(at5->step == 3);
    ValuePtr at7 = register_contents_at(trace, 1, 7);
    REQUIRE(at7);
    CHECK(at7->step == 7);  // a write is visible at its own step
    CHECK(register_contents_at(trace, 1, 2) == nullptr);
    CHECK(register_contents_at(trace, 1, 0) == nullptr);
}

TEST_CASE("count_done in-progress tasks are excluded") {
    // n=3 round-robin of length 9: each process finishes exactly one collect
    ExecutionTrace trace = run_trivial(round_robin(3, 9));
    DoneCount done = count_done(trace);
    CHECK(done.total == 3);
    CHECK(done.per_process == std::vector<long>{1, 1, 1});

    // one extra slot starts a new collect without finishing it
    ExecutionTrace more = run_trivial(round_robin(3, 10));
    CHECK(count_done(more).total == 3);
    CHECK(more.tasks.size() == 4);
    CHECK(!more.tasks.back().finished());
}

TEST_CASE("export format stays pinned") {
    Schedule s{2, {0, 1, 0}};
    ExecutionTrace trace = run_trivial(s);
    CHECK(export_ops(trace) == "0,0,w,0,_\n1,1,w,1,_\n2,0,r,1,_\n");
    CHECK(export_tasks(trace) == "0,collect,0,2\n1,collect,1,-\n");

    ExecutionTrace wc =
        run_trivial(Schedule{2, {0, 0}}, StreamRule::WriteCollects);
    CHECK(export_ops(wc) == "0,0,w,0,0:1000001@0\n1,0,r,1,_\n");
}

TEST_CASE("single-process collects finish in one step for every algorithm") {
    for (const char* name : {"trivial", "coop", "champion-ts"}) {
        auto factory = collect_engine_factory(find_algorithm(name));
        ExecutionTrace trace = run_simulation(factory, Schedule{1, {0, 0}},
                                              make_stream(StreamRule::Collects));
        CHECK(count_done(trace).total == 2);
    }
}

TEST_CASE("determinism: identical runs produce identical traces") {
    Schedule s = seeded_random(4, 400, 11);
    ExecutionTrace a = run_trivial(s, StreamRule::WriteCollects);
    ExecutionTrace b = run_trivial(s, StreamRule::WriteCollects);
    CHECK(export_ops(a) == export_ops(b));
    CHECK(export_tasks(a) == export_tasks(b));
}

TEST_CASE("simulation invariants on random runs") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        Schedule s = seeded_random(5, 600, seed);
        ExecutionTrace trace = run_trivial(s, StreamRule::WriteCollects);

        // one op per slot
        REQUIRE(trace.ops.size() == s.slots.size());
        for (std::size_t t = 0; t < trace.ops.size(); ++t) {
            const auto& op = trace.ops[t];
            CHECK(op.step == static_cast<long>(t));
            CHECK(op.pid == s.slots[t]);
            // single-writer
            if (op.kind == OpKind::Write) CHECK(op.reg == op.pid);
            // read coherence
            if (op.kind == OpKind::Read) {
                CellPtr expect = trace.cell_at(op.reg, op.step - 1);
                CHECK(op.cell == expect);
            }
        }

        // task contiguity: a process's next task starts at its first slot
        // after the previous finish
        std::vector<std::vector<long>> slots(5);
        for (const auto& op : trace.ops)
            slots[static_cast<std::size_t>(op.pid)].push_back(op.step);
        std::vector<const TaskRecord*> last(5, nullptr);
        for (const auto& task : trace.tasks) {
            auto oi = static_cast<std::size_t>(task.owner);
            if (last[oi]) {
                REQUIRE(last[oi]->finished());
                const auto& ps = slots[oi];
                auto it = std::upper_bound(ps.begin(), ps.end(),
                                           last[oi]->finish);
                REQUIRE(it != ps.end());
                CHECK(task.start == *it);
            }
            last[oi] = &task;
        }
    }
}
