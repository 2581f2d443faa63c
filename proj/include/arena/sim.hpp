#pragma once

#include <functional>
#include <memory>

#include "arena/core.hpp"

// Deterministic step-by-step execution. The schedule (or an adaptive
// generator) names the process for each slot; that process's engine emits
// exactly one register operation, the simulator executes it atomically and
// hands the result back. Task boundaries are reported by the engine: starts
// while choosing the op (a task's initial operation is the op returned),
// finishes while absorbing it (completion is recognizable at the final op).

namespace arena {

class EventSink {
public:
    virtual ~EventSink() = default;
    virtual void task_started(TaskKind kind) = 0;
    virtual void task_finished(TaskKind kind, TaskOutcome outcome) = 0;
};

class Engine {
public:
    virtual ~Engine() = default;
    // `step` is the global slot index about to execute. Candidate algorithms
    // must not key behavior on it; the lower-bound champion does (it is
    // schedule-tailored by construction).
    virtual OpIntent next_op(long step, EventSink& events) = 0;
    virtual void absorb(const ExecutedOp& op, EventSink& events) = 0;
};

using EngineFactory =
    std::function<std::unique_ptr<Engine>(int n, int pid, RequestStream&)>;

class Simulation {
public:
    Simulation(int n, const EngineFactory& make_engine,
               std::unique_ptr<RequestStream> requests);
    ~Simulation();
    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    int n() const { return n_; }
    long now() const { return trace_.length(); }

    // Execute one slot. Throws ConfigError for pid out of range and
    // ModelViolation if the engine writes a register it does not own.
    void step(int pid);

    // True when pid sits between tasks (no open task).
    bool idle(int pid) const;

    const ExecutionTrace& trace() const { return trace_; }
    ExecutionTrace take_trace() { return std::move(trace_); }

private:
    class Sink;

    int n_;
    ExecutionTrace trace_;
    std::vector<CellPtr> regs_;
    std::unique_ptr<RequestStream> stream_;
    std::vector<std::unique_ptr<Engine>> engines_;
    std::vector<std::vector<std::size_t>> open_;  // per-pid open task stack
};

// Run a fixed schedule start to finish.
ExecutionTrace run_simulation(const EngineFactory& make_engine,
                              const Schedule& schedule,
                              std::unique_ptr<RequestStream> requests);

// ---------------------------------------------------------------------------
// Per-process cores for collect-family algorithms. A core runs one task at a
// time; composition layers drive a core directly, base runs go through
// CollectTaskEngine which pulls tasks from the request stream.

struct CollectOutcome {
    std::vector<ValuePtr> values;  // per register; null = bottom
};

class CollectCore {
public:
    virtual ~CollectCore() = default;
    virtual void begin(TaskKind kind, std::int64_t payload,
                       std::any value_meta) = 0;
    virtual OpIntent next_op(long step) = 0;
    virtual std::optional<CollectOutcome> absorb(const ExecutedOp& op) = 0;
};

using CoreFactory =
    std::function<std::unique_ptr<CollectCore>(int n, int pid)>;

// Adapts a CollectCore to the Engine interface, pulling collect or
// write-collect requests from the stream.
class CollectTaskEngine final : public Engine {
public:
    CollectTaskEngine(int n, int pid, std::unique_ptr<CollectCore> core,
                      RequestStream& stream);

    OpIntent next_op(long step, EventSink& events) override;
    void absorb(const ExecutedOp& op, EventSink& events) override;

private:
    int pid_;
    std::unique_ptr<CollectCore> core_;
    RequestStream& stream_;
    bool active_ = false;
    TaskKind kind_ = TaskKind::Collect;
    ValuePtr written_;
};

EngineFactory collect_engine_factory(CoreFactory make_core);

}  // namespace arena
