#include "arena/core.hpp"

#include <algorithm>
#include <sstream>

namespace arena {

const char* to_string(TaskKind k) {
    switch (k) {
        case TaskKind::Collect: return "collect";
        case TaskKind::WriteCollect: return "write-collect";
        case TaskKind::ScanUpdate: return "scan-update";
        case TaskKind::AdvanceCollect: return "advance-collect";
    }
    return "?";
}

CellPtr ExecutionTrace::cell_at(int reg, long t) const {
    if (reg < 0 || reg >= n)
        throw ConfigError("cell_at: register " + std::to_string(reg) +
                          " out of range (n=" + std::to_string(n) + ")");
    const auto& h = histories[static_cast<std::size_t>(reg)];
    // last entry with step <= t
    auto it = std::upper_bound(
        h.begin(), h.end(), t,
        [](long value, const HistEntry& e) { return value < e.step; });
    if (it == h.begin()) return nullptr;
    return std::prev(it)->cell;
}

ValuePtr ExecutionTrace::value_at(int reg, long t) const {
    CellPtr c = cell_at(reg, t);
    return c ? c->value : nullptr;
}

ValuePtr register_contents_at(const ExecutionTrace& trace, int reg, long t) {
    return trace.value_at(reg, t);
}

DoneCount count_done(const ExecutionTrace& trace, std::optional<TaskKind> kind) {
    DoneCount out;
    out.per_process.assign(static_cast<std::size_t>(trace.n), 0);
    for (const auto& task : trace.tasks) {
        if (!task.finished()) continue;
        if (kind && task.kind != *kind) continue;
        ++out.per_process[static_cast<std::size_t>(task.owner)];
        ++out.total;
    }
    return out;
}

long done_in_range(const ExecutionTrace& trace, long lo, long hi,
                   std::optional<TaskKind> kind, std::optional<int> owner) {
    long total = 0;
    for (const auto& task : trace.tasks) {
        if (!task.finished()) continue;
        if (task.finish < lo || task.finish >= hi) continue;
        if (kind && task.kind != *kind) continue;
        if (owner && task.owner != *owner) continue;
        ++total;
    }
    return total;
}

namespace {

class UniformStream final : public RequestStream {
public:
    explicit UniformStream(TaskKind kind) : kind_(kind) {}

    TaskRequest next(int pid) override {
        auto idx = static_cast<std::size_t>(pid);
        if (idx >= counters_.size()) counters_.resize(idx + 1, 0);
        std::int64_t k = ++counters_[idx];
        return TaskRequest{kind_, (pid + 1) * 1000000 + k};
    }

private:
    TaskKind kind_;
    std::vector<std::int64_t> counters_;
};

}  // namespace

std::unique_ptr<RequestStream> make_stream(StreamRule rule) {
    switch (rule) {
        case StreamRule::Collects:
            return std::make_unique<UniformStream>(TaskKind::Collect);
        case StreamRule::WriteCollects:
            return std::make_unique<UniformStream>(TaskKind::WriteCollect);
        case StreamRule::ScanUpdates:
            return std::make_unique<UniformStream>(TaskKind::ScanUpdate);
        case StreamRule::AdvanceCollects:
            return std::make_unique<UniformStream>(TaskKind::AdvanceCollect);
    }
    throw ConfigError("unknown request stream rule");
}

StreamRule parse_stream_rule(const std::string& name) {
    if (name == "all-collects") return StreamRule::Collects;
    if (name == "all-write-collects") return StreamRule::WriteCollects;
    if (name == "all-scan-updates") return StreamRule::ScanUpdates;
    if (name == "all-advance-collects") return StreamRule::AdvanceCollects;
    throw ConfigError("unknown request stream rule: " + name);
}

const char* to_string(StreamRule rule) {
    switch (rule) {
        case StreamRule::Collects: return "all-collects";
        case StreamRule::WriteCollects: return "all-write-collects";
        case StreamRule::ScanUpdates: return "all-scan-updates";
        case StreamRule::AdvanceCollects: return "all-advance-collects";
    }
    return "?";
}

SnapEntry snapshot_contents_at(const ExecutionTrace& trace, int reg, long t) {
    ValuePtr v = trace.value_at(reg, t);
    if (!v) return SnapEntry{};
    const auto* meta = std::any_cast<SnapMeta>(&v->meta);
    if (!meta)
        throw MalformedTrace("register " + std::to_string(reg) +
                             " holds a non-snapshot value at step " +
                             std::to_string(t));
    return SnapEntry{meta->seq, meta->user};
}

std::int64_t round_contents_at(const ExecutionTrace& trace, int reg, long t) {
    ValuePtr v = trace.value_at(reg, t);
    if (!v) return 0;
    const auto* meta = std::any_cast<RoundMeta>(&v->meta);
    if (!meta)
        throw MalformedTrace("register " + std::to_string(reg) +
                             " holds a non-round value at step " +
                             std::to_string(t));
    return meta->round;
}

std::string render_value(const ValuePtr& v) {
    if (!v) return "_";
    std::ostringstream os;
    os << v->owner << ":" << v->payload << "@" << v->step;
    return os.str();
}

std::string export_ops(const ExecutionTrace& trace) {
    std::ostringstream os;
    for (const auto& op : trace.ops) {
        os << op.step << ',' << op.pid << ','
           << (op.kind == OpKind::Read ? 'r' : 'w') << ',' << op.reg << ','
           << render_value(op.cell ? op.cell->value : nullptr) << '\n';
    }
    return os.str();
}

std::string export_tasks(const ExecutionTrace& trace) {
    std::ostringstream os;
    for (const auto& task : trace.tasks) {
        os << task.owner << ',' << to_string(task.kind) << ',' << task.start
           << ',';
        if (task.finished())
            os << task.finish;
        else
            os << '-';
        os << '\n';
    }
    return os.str();
}

}  // namespace arena
