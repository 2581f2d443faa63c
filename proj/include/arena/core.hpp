#pragma once

#include <any>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Core model: n asynchronous processes over n single-writer multi-reader
// atomic registers, driven one register operation per schedule slot.
//
// Conventions used everywhere:
//  - global steps are 0-based slot indices; the op at slot t is executed by
//    schedule[t];
//  - a write at slot t is readable from slot t+1 on; register_contents_at(r,t)
//    reports the state after slot t executed, so a write is part of the state
//    at its own slot.

namespace arena {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ModelViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MalformedTrace : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UndefinedProfile : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A logical register value. Identity is the global step of the write that
// introduced it; bookkeeping rewrites carry the same Value forward.
struct Value {
    long step = -1;
    int owner = -1;
    std::int64_t payload = 0;
    std::any meta;  // upper-layer content (snapshot / round metadata)
};
using ValuePtr = std::shared_ptr<const Value>;

// One physical register cell (the result of one write): the logical value
// plus whatever gossip the algorithm publishes alongside it.
struct Cell {
    long step = -1;
    int writer = -1;
    ValuePtr value;  // null until the owner first introduces a value
    std::any note;
};
using CellPtr = std::shared_ptr<const Cell>;

enum class OpKind { Read, Write };

// What an algorithm asks the simulator to do on its turn.
struct OpIntent {
    OpKind kind = OpKind::Read;
    int reg = 0;
    // write fields; a non-introducing write republishes the current value
    bool introduces_value = false;
    std::int64_t payload = 0;
    std::any value_meta;
    std::any note;

    static OpIntent read(int reg) {
        OpIntent op;
        op.kind = OpKind::Read;
        op.reg = reg;
        return op;
    }
    static OpIntent write(int reg, std::any note) {
        OpIntent op;
        op.kind = OpKind::Write;
        op.reg = reg;
        op.note = std::move(note);
        return op;
    }
    static OpIntent write_value(int reg, std::int64_t payload, std::any meta,
                                std::any note) {
        OpIntent op;
        op.kind = OpKind::Write;
        op.reg = reg;
        op.introduces_value = true;
        op.payload = payload;
        op.value_meta = std::move(meta);
        op.note = std::move(note);
        return op;
    }
};

// An op as it landed in the trace. For reads, `cell` is what was read (null
// if the register was never written); for writes, the cell just written.
struct ExecutedOp {
    long step = -1;
    int pid = -1;
    OpKind kind = OpKind::Read;
    int reg = 0;
    CellPtr cell;
};

enum class TaskKind { Collect, WriteCollect, ScanUpdate, AdvanceCollect };

const char* to_string(TaskKind k);

// Whether tasks of this kind contain a full collect (all four do; kept as a
// named predicate so metrics code reads clearly).
inline bool is_collect_task(TaskKind k) {
    return k == TaskKind::Collect || k == TaskKind::WriteCollect;
}

struct TaskOutcome {
    // collect / write-collect: returned value per register (null = bottom)
    std::vector<ValuePtr> collect;
    // value introduced by this task, if it wrote one
    ValuePtr written;
    // scan-update: returned picture, per register (seq 0 = bottom)
    std::vector<std::int64_t> scan_seq;
    std::vector<std::int64_t> scan_val;
    // advance-collect: round published and rounds collected
    std::int64_t round = 0;
    std::vector<std::int64_t> rounds;
};

struct TaskRecord {
    int owner = -1;
    TaskKind kind = TaskKind::Collect;
    long start = -1;
    long finish = -1;  // -1 while in progress
    bool has_result = false;
    TaskOutcome result;

    bool finished() const { return finish >= 0; }
};

struct Schedule {
    int n = 0;
    std::vector<int> slots;

    long length() const { return static_cast<long>(slots.size()); }
};

struct HistEntry {
    long step;
    CellPtr cell;
};

struct ExecutionTrace {
    int n = 0;
    std::vector<int> schedule;
    std::vector<ExecutedOp> ops;
    std::vector<TaskRecord> tasks;                 // in start order, all layers
    std::vector<std::vector<HistEntry>> histories;  // per register, by step

    long length() const { return static_cast<long>(ops.size()); }

    // Latest cell written to reg at slot <= t; null if none.
    CellPtr cell_at(int reg, long t) const;
    // Logical contents of reg after slot t executed (null = bottom).
    ValuePtr value_at(int reg, long t) const;
};

// Ground-truth oracle: the value of the most recent write to reg at or
// before t, or bottom if none.
ValuePtr register_contents_at(const ExecutionTrace& trace, int reg, long t);

struct DoneCount {
    std::vector<long> per_process;
    long total = 0;
};

// Counts finished tasks, optionally restricted to one kind. In-progress
// tasks never count.
DoneCount count_done(const ExecutionTrace& trace,
                     std::optional<TaskKind> kind = std::nullopt);

// Finished tasks of `kind` whose final operation lies in [lo, hi).
long done_in_range(const ExecutionTrace& trace, long lo, long hi,
                   std::optional<TaskKind> kind = std::nullopt,
                   std::optional<int> owner = std::nullopt);

// ---------------------------------------------------------------------------
// Request streams: per-process, never exhausted.

struct TaskRequest {
    TaskKind kind = TaskKind::Collect;
    std::int64_t payload = 0;
};

class RequestStream {
public:
    virtual ~RequestStream() = default;
    virtual TaskRequest next(int pid) = 0;
};

enum class StreamRule { Collects, WriteCollects, ScanUpdates, AdvanceCollects };

std::unique_ptr<RequestStream> make_stream(StreamRule rule);
StreamRule parse_stream_rule(const std::string& name);
const char* to_string(StreamRule rule);

// ---------------------------------------------------------------------------
// Value metadata published by the composition layers. Checkers read these
// back out of the trace, so the schemas live here.

struct SnapEntry {
    std::int64_t seq = 0;  // 0 = bottom (no update ever)
    std::int64_t user = 0;

    bool operator==(const SnapEntry&) const = default;
};

struct SnapMeta {
    std::int64_t seq = 0;
    std::int64_t user = 0;
    std::vector<SnapEntry> emb;  // scan result of the owner's previous update
};

struct RoundMeta {
    std::int64_t round = 0;
};

// Snapshot-layer contents of reg after slot t: (seq, user) of the value
// present, or (0, 0) if none.
SnapEntry snapshot_contents_at(const ExecutionTrace& trace, int reg, long t);
// Round-layer contents of reg after slot t (0 if none).
std::int64_t round_contents_at(const ExecutionTrace& trace, int reg, long t);

// ---------------------------------------------------------------------------
// Exports (stable field order, diffable).

std::string render_value(const ValuePtr& v);  // "owner:payload@step" or "_"
std::string export_ops(const ExecutionTrace& trace);    // t,pid,kind,reg,value
std::string export_tasks(const ExecutionTrace& trace);  // owner,kind,start,finish

}  // namespace arena
