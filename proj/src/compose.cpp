#include "arena/compose.hpp"

#include <algorithm>
#include <sstream>

#include "arena/metrics.hpp"

namespace arena {

namespace {

using int128 = __int128;

SnapEntry entry_of(const ValuePtr& v) {
    if (!v) return SnapEntry{};
    const auto* meta = std::any_cast<SnapMeta>(&v->meta);
    if (!meta)
        throw MalformedTrace("write-collect under the snapshot layer carries "
                             "a non-snapshot value");
    return SnapEntry{meta->seq, meta->user};
}

class SnapshotEngine final : public Engine {
public:
    SnapshotEngine(int n, int pid, std::unique_ptr<CollectCore> lower,
                   RequestStream& stream)
        : n_(n), pid_(pid), lower_(std::move(lower)), stream_(stream) {
        last_scan_.assign(static_cast<std::size_t>(n_), SnapEntry{});
    }

    OpIntent next_op(long step, EventSink& events) override {
        if (!t_active_) {
            TaskRequest rq = stream_.next(pid_);
            if (rq.kind != TaskKind::ScanUpdate)
                throw ConfigError(
                    "snapshot layer expects scan-update requests");
            payload_ = rq.payload;
            ++seq_;
            t_active_ = true;
            t_written_.reset();
            u_count_ = 0;
            last_obs_.assign(static_cast<std::size_t>(n_), -1);
            distinct_.assign(static_cast<std::size_t>(n_), 0);
            prev_view_.clear();
            events.task_started(TaskKind::ScanUpdate);
            begin_subtask(events);
        } else if (!u_active_) {
            begin_subtask(events);
        }
        return lower_->next_op(step);
    }

    void absorb(const ExecutedOp& op, EventSink& events) override {
        if (op.kind == OpKind::Write && op.cell->value &&
            op.cell->value->step == op.step) {
            u_written_ = op.cell->value;
            if (!t_written_) t_written_ = op.cell->value;
        }
        auto out = lower_->absorb(op);
        if (!out) return;

        TaskOutcome ures;
        ures.collect = out->values;
        ures.written = u_written_;
        events.task_finished(TaskKind::WriteCollect, std::move(ures));
        u_active_ = false;
        ++u_count_;

        std::vector<SnapEntry> obs(static_cast<std::size_t>(n_));
        for (int r = 0; r < n_; ++r) {
            obs[static_cast<std::size_t>(r)] =
                entry_of(out->values[static_cast<std::size_t>(r)]);
        }
        for (int r = 0; r < n_; ++r) {
            auto ri = static_cast<std::size_t>(r);
            if (last_obs_[ri] != obs[ri].seq) {
                last_obs_[ri] = obs[ri].seq;
                ++distinct_[ri];
            }
        }

        std::vector<SnapEntry> result;
        // borrow: someone advanced twice since this scan began, so their
        // latest embedded scan ran entirely inside our interval
        for (int r = 0; r < n_ && result.empty(); ++r) {
            auto ri = static_cast<std::size_t>(r);
            if (r == pid_ || distinct_[ri] < 3) continue;
            const ValuePtr& v = out->values[ri];
            const auto* meta = v ? std::any_cast<SnapMeta>(&v->meta) : nullptr;
            if (!meta || meta->emb.size() != static_cast<std::size_t>(n_))
                throw MalformedTrace("borrowed scan has no embedded view");
            result = meta->emb;
        }
        // direct: two successive retry pictures agree
        if (result.empty() && u_count_ >= 3 && obs == prev_view_) result = obs;
        if (u_count_ >= 2) prev_view_ = obs;

        if (!result.empty()) {
            TaskOutcome tres;
            tres.written = t_written_;
            tres.scan_seq.reserve(static_cast<std::size_t>(n_));
            tres.scan_val.reserve(static_cast<std::size_t>(n_));
            for (const auto& e : result) {
                tres.scan_seq.push_back(e.seq);
                tres.scan_val.push_back(e.user);
            }
            last_scan_ = std::move(result);
            events.task_finished(TaskKind::ScanUpdate, std::move(tres));
            t_active_ = false;
        } else if (u_count_ >= n_ + 2) {
            throw std::logic_error(
                "scan-update exceeded its n+2 write-collect budget");
        }
    }

private:
    void begin_subtask(EventSink& events) {
        SnapMeta meta;
        meta.seq = seq_;
        meta.user = payload_;
        meta.emb = last_scan_;
        lower_->begin(TaskKind::WriteCollect, payload_, std::move(meta));
        events.task_started(TaskKind::WriteCollect);
        u_active_ = true;
        u_written_.reset();
    }

    int n_;
    int pid_;
    std::unique_ptr<CollectCore> lower_;
    RequestStream& stream_;

    std::int64_t seq_ = 0;
    std::vector<SnapEntry> last_scan_;

    bool t_active_ = false;
    bool u_active_ = false;
    std::int64_t payload_ = 0;
    int u_count_ = 0;
    ValuePtr t_written_;
    ValuePtr u_written_;
    std::vector<std::int64_t> last_obs_;
    std::vector<int> distinct_;
    std::vector<SnapEntry> prev_view_;
};

class RoundsEngine final : public Engine {
public:
    RoundsEngine(int n, int pid, std::unique_ptr<CollectCore> lower,
                 RequestStream& stream)
        : n_(n), pid_(pid), lower_(std::move(lower)), stream_(stream) {}

    OpIntent next_op(long step, EventSink& events) override {
        if (!t_active_) {
            TaskRequest rq = stream_.next(pid_);
            if (rq.kind != TaskKind::AdvanceCollect)
                throw ConfigError(
                    "round-number layer expects advance-collect requests");
            t_active_ = true;
            u_written_.reset();
            events.task_started(TaskKind::AdvanceCollect);
            RoundMeta meta{round_ + 1};
            lower_->begin(TaskKind::WriteCollect, round_ + 1, meta);
            events.task_started(TaskKind::WriteCollect);
        }
        return lower_->next_op(step);
    }

    void absorb(const ExecutedOp& op, EventSink& events) override {
        if (op.kind == OpKind::Write && op.cell->value &&
            op.cell->value->step == op.step)
            u_written_ = op.cell->value;
        auto out = lower_->absorb(op);
        if (!out) return;

        TaskOutcome ures;
        ures.collect = out->values;
        ures.written = u_written_;
        events.task_finished(TaskKind::WriteCollect, std::move(ures));

        ++round_;
        TaskOutcome tres;
        tres.written = u_written_;
        tres.round = round_;
        tres.rounds.reserve(static_cast<std::size_t>(n_));
        for (const auto& v : out->values) {
            if (!v) {
                tres.rounds.push_back(0);
                continue;
            }
            const auto* meta = std::any_cast<RoundMeta>(&v->meta);
            if (!meta)
                throw MalformedTrace(
                    "write-collect under the round layer carries a "
                    "non-round value");
            tres.rounds.push_back(meta->round);
        }
        events.task_finished(TaskKind::AdvanceCollect, std::move(tres));
        t_active_ = false;
    }

private:
    int n_;
    int pid_;
    std::unique_ptr<CollectCore> lower_;
    RequestStream& stream_;
    bool t_active_ = false;
    std::int64_t round_ = 0;
    ValuePtr u_written_;
};

}  // namespace

EngineFactory snapshot_over_write_collect(CoreFactory lower) {
    return [lower = std::move(lower)](int n, int pid, RequestStream& stream)
               -> std::unique_ptr<Engine> {
        return std::make_unique<SnapshotEngine>(n, pid, lower(n, pid), stream);
    };
}

EngineFactory round_numbers_over_write_collect(CoreFactory lower) {
    return [lower = std::move(lower)](int n, int pid, RequestStream& stream)
               -> std::unique_ptr<Engine> {
        return std::make_unique<RoundsEngine>(n, pid, lower(n, pid), stream);
    };
}

bool Ratio::operator<(const Ratio& other) const {
    return int128(num) * other.den < int128(other.num) * den;
}

RelativeReport measure_relative(const ExecutionTrace& composed_trace,
                                long opt_u_lb, long budget) {
    RelativeReport report;
    report.n = composed_trace.n;
    report.additive_c = composed_trace.n;
    report.budget = budget;
    report.done_u = count_done(composed_trace, TaskKind::WriteCollect).total;
    report.done_t = count_done(composed_trace, TaskKind::ScanUpdate).total +
                    count_done(composed_trace, TaskKind::AdvanceCollect).total;
    // both objects' tasks contain a collect, so both get the window bound
    long window_bound = opt_upper_bound(composed_trace.n, composed_trace.schedule);
    report.opt_t_ub = window_bound;
    report.opt_u_ub = window_bound;
    report.opt_u_lb = opt_u_lb;
    report.k_rel = Ratio{report.opt_t_ub * report.done_u,
                         report.opt_u_ub * (report.done_t + report.additive_c)};
    report.l_hat = Ratio{report.opt_u_ub, report.done_u + report.additive_c};
    return report;
}

std::vector<long> subtasks_per_scan(const ExecutionTrace& trace) {
    std::vector<std::vector<const TaskRecord*>> wc_by_owner(
        static_cast<std::size_t>(trace.n));
    for (const auto& task : trace.tasks)
        if (task.kind == TaskKind::WriteCollect)
            wc_by_owner[static_cast<std::size_t>(task.owner)].push_back(&task);

    std::vector<long> out;
    for (const auto& task : trace.tasks) {
        if (task.kind != TaskKind::ScanUpdate || !task.finished()) continue;
        long count = 0;
        for (const TaskRecord* wc :
             wc_by_owner[static_cast<std::size_t>(task.owner)]) {
            if (wc->start >= task.start && wc->finished() &&
                wc->finish <= task.finish)
                ++count;
        }
        out.push_back(count);
    }
    return out;
}

bool layer_isolated(const ExecutionTrace& trace) {
    std::vector<std::vector<std::pair<long, long>>> wc_spans(
        static_cast<std::size_t>(trace.n));
    const long last = trace.length() - 1;
    for (const auto& task : trace.tasks)
        if (task.kind == TaskKind::WriteCollect)
            wc_spans[static_cast<std::size_t>(task.owner)].emplace_back(
                task.start, task.finished() ? task.finish : last);
    for (const auto& op : trace.ops) {
        bool inside = false;
        for (const auto& [lo, hi] : wc_spans[static_cast<std::size_t>(op.pid)])
            if (op.step >= lo && op.step <= hi) {
                inside = true;
                break;
            }
        if (!inside) return false;
    }
    return true;
}

LayerCheck check_relative_competitiveness(const RelativeReport& report,
                                          Ratio claimed_k) {
    if (report.done_u == 0 || report.opt_u_ub == 0)
        return LayerCheck{CheckStatus::Vacuous,
                          "ratios undefined (no completed U-task)"};
    if (!claimed_k.defined())
        return LayerCheck{CheckStatus::Vacuous, "claimed k undefined"};

    // (done_t + c)/done_u >= (1/k) opt_t/opt_u
    int128 lhs = int128(report.done_t + report.additive_c) * report.opt_u_ub *
                 claimed_k.num;
    int128 rhs = int128(report.done_u) * report.opt_t_ub * claimed_k.den;
    if (lhs < rhs) {
        std::ostringstream os;
        os << "(done_t+c)/done_u = " << report.done_t + report.additive_c
           << "/" << report.done_u << " < (1/k) opt_t/opt_u";
        return LayerCheck{CheckStatus::Fail, os.str()};
    }
    // budget accounting incl. in-progress slack
    long cap = (report.budget + 1) * (report.done_t + report.n);
    if (report.done_u > cap) {
        std::ostringstream os;
        os << "done_u=" << report.done_u << " exceeds budget cap " << cap;
        return LayerCheck{CheckStatus::Fail, os.str()};
    }
    return LayerCheck{CheckStatus::Pass, {}};
}

LayerCheck check_feasibility(long opt_t_bound, long opt_u_bound, long c) {
    if (opt_t_bound <= c * opt_u_bound) return LayerCheck{CheckStatus::Pass, {}};
    std::ostringstream os;
    os << "opt_t=" << opt_t_bound << " > " << c << " * opt_u=" << opt_u_bound;
    return LayerCheck{CheckStatus::Fail, os.str()};
}

LayerCheck check_composition_bound(const RelativeReport& report, Ratio k,
                                   Ratio l) {
    if (!k.defined() || !l.defined())
        return LayerCheck{CheckStatus::Vacuous, "k or l undefined"};
    if (report.opt_t_ub == 0)
        return LayerCheck{CheckStatus::Vacuous, "opt_T zero"};

    // done_t + c_A + c_B c_T / k >= opt_T / (k l), multiplied out:
    // k l (done_t + c_A) + c_B c_T l >= opt_T
    const long c_a = report.additive_c;
    const long c_b = report.additive_c;
    const long c_t = 1;
    int128 lhs = int128(k.num) * l.num * (report.done_t + c_a) +
                 int128(c_b) * c_t * l.num * k.den;
    int128 rhs = int128(report.opt_t_ub) * k.den * l.den;
    if (lhs >= rhs) return LayerCheck{CheckStatus::Pass, {}};
    std::ostringstream os;
    os << "composition bound fails: done_t=" << report.done_t
       << " opt_t=" << report.opt_t_ub << " k=" << k.value()
       << " l=" << l.value();
    return LayerCheck{CheckStatus::Fail, os.str()};
}

}  // namespace arena
