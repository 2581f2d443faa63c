#include "arena/sim.hpp"

#include <utility>

namespace arena {

class Simulation::Sink final : public EventSink {
public:
    Sink(Simulation& sim, int pid, long step)
        : sim_(sim), pid_(pid), step_(step) {}

    void task_started(TaskKind kind) override {
        TaskRecord rec;
        rec.owner = pid_;
        rec.kind = kind;
        rec.start = step_;
        sim_.trace_.tasks.push_back(std::move(rec));
        sim_.open_[static_cast<std::size_t>(pid_)].push_back(
            sim_.trace_.tasks.size() - 1);
    }

    void task_finished(TaskKind kind, TaskOutcome outcome) override {
        auto& stack = sim_.open_[static_cast<std::size_t>(pid_)];
        if (stack.empty())
            throw std::logic_error("task_finished with no open task");
        TaskRecord& rec = sim_.trace_.tasks[stack.back()];
        if (rec.kind != kind)
            throw std::logic_error("task_finished kind mismatch");
        rec.finish = step_;
        rec.result = std::move(outcome);
        rec.has_result = true;
        stack.pop_back();
    }

private:
    Simulation& sim_;
    int pid_;
    long step_;
};

Simulation::Simulation(int n, const EngineFactory& make_engine,
                       std::unique_ptr<RequestStream> requests)
    : n_(n), stream_(std::move(requests)) {
    if (n <= 0) throw ConfigError("process count must be positive");
    trace_.n = n;
    trace_.histories.resize(static_cast<std::size_t>(n));
    regs_.resize(static_cast<std::size_t>(n));
    open_.resize(static_cast<std::size_t>(n));
    engines_.reserve(static_cast<std::size_t>(n));
    for (int pid = 0; pid < n; ++pid)
        engines_.push_back(make_engine(n, pid, *stream_));
}

Simulation::~Simulation() = default;

bool Simulation::idle(int pid) const {
    return open_[static_cast<std::size_t>(pid)].empty();
}

void Simulation::step(int pid) {
    if (pid < 0 || pid >= n_)
        throw ConfigError("schedule names process " + std::to_string(pid) +
                          " but n=" + std::to_string(n_));
    const long t = now();
    Sink sink(*this, pid, t);
    OpIntent intent = engines_[static_cast<std::size_t>(pid)]->next_op(t, sink);

    if (intent.reg < 0 || intent.reg >= n_)
        throw ModelViolation("step " + std::to_string(t) + ": process " +
                             std::to_string(pid) + " targets register " +
                             std::to_string(intent.reg));

    ExecutedOp done;
    done.step = t;
    done.pid = pid;
    done.kind = intent.kind;
    done.reg = intent.reg;
    if (intent.kind == OpKind::Write) {
        if (intent.reg != pid)
            throw ModelViolation(
                "step " + std::to_string(t) + ": process " +
                std::to_string(pid) + " writes register " +
                std::to_string(intent.reg) + " it does not own");
        auto idx = static_cast<std::size_t>(pid);
        ValuePtr value;
        if (intent.introduces_value) {
            auto v = std::make_shared<Value>();
            v->step = t;
            v->owner = pid;
            v->payload = intent.payload;
            v->meta = std::move(intent.value_meta);
            value = std::move(v);
        } else if (regs_[idx]) {
            value = regs_[idx]->value;
        }
        auto cell = std::make_shared<Cell>();
        cell->step = t;
        cell->writer = pid;
        cell->value = std::move(value);
        cell->note = std::move(intent.note);
        regs_[idx] = cell;
        trace_.histories[idx].push_back(HistEntry{t, cell});
        done.cell = std::move(cell);
    } else {
        done.cell = regs_[static_cast<std::size_t>(intent.reg)];
    }

    trace_.ops.push_back(done);
    trace_.schedule.push_back(pid);
    engines_[static_cast<std::size_t>(pid)]->absorb(done, sink);
}

ExecutionTrace run_simulation(const EngineFactory& make_engine,
                              const Schedule& schedule,
                              std::unique_ptr<RequestStream> requests) {
    Simulation sim(schedule.n, make_engine, std::move(requests));
    for (int pid : schedule.slots) sim.step(pid);
    return sim.take_trace();
}

CollectTaskEngine::CollectTaskEngine(int /*n*/, int pid,
                                     std::unique_ptr<CollectCore> core,
                                     RequestStream& stream)
    : pid_(pid), core_(std::move(core)), stream_(stream) {}

OpIntent CollectTaskEngine::next_op(long step, EventSink& events) {
    if (!active_) {
        TaskRequest rq = stream_.next(pid_);
        if (rq.kind != TaskKind::Collect && rq.kind != TaskKind::WriteCollect)
            throw ConfigError(
                std::string("collect algorithm handed a ") +
                to_string(rq.kind) + " request; use a composition layer");
        kind_ = rq.kind;
        core_->begin(rq.kind, rq.payload, {});
        events.task_started(kind_);
        active_ = true;
        written_.reset();
    }
    return core_->next_op(step);
}

void CollectTaskEngine::absorb(const ExecutedOp& op, EventSink& events) {
    if (op.kind == OpKind::Write && op.cell->value &&
        op.cell->value->step == op.step)
        written_ = op.cell->value;
    if (auto out = core_->absorb(op)) {
        TaskOutcome res;
        res.collect = std::move(out->values);
        res.written = written_;
        events.task_finished(kind_, std::move(res));
        active_ = false;
    }
}

EngineFactory collect_engine_factory(CoreFactory make_core) {
    return [make_core = std::move(make_core)](
               int n, int pid, RequestStream& stream) -> std::unique_ptr<Engine> {
        return std::make_unique<CollectTaskEngine>(n, pid, make_core(n, pid),
                                                   stream);
    };
}

}  // namespace arena
