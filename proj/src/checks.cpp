#include "arena/checks.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace arena {

namespace {

// Contiguous spans of constant logical value per register. A value's
// identity is the step of its introducing write; -1 is bottom. Values never
// recur once replaced, so each identity owns exactly one span.
struct ValueSpan {
    long from;        // first step at which this value is the contents
    long value_step;  // -1 = bottom
};

std::vector<std::vector<ValueSpan>> value_spans(const ExecutionTrace& trace) {
    std::vector<std::vector<ValueSpan>> spans(
        static_cast<std::size_t>(trace.n));
    for (int r = 0; r < trace.n; ++r) {
        auto& out = spans[static_cast<std::size_t>(r)];
        out.push_back(ValueSpan{0, -1});
        for (const auto& entry : trace.histories[static_cast<std::size_t>(r)]) {
            long id = entry.cell->value ? entry.cell->value->step : -1;
            if (id != out.back().value_step)
                out.push_back(ValueSpan{entry.step, id});
        }
    }
    return spans;
}

// True iff value `id` is the contents of the spanned register at some step
// in [lo, hi]. Each identity owns exactly one span: bottom is spans[0], a
// value introduced at step w becomes the contents at step w.
bool present_in(const std::vector<ValueSpan>& spans, long id, long lo,
                long hi, long trace_end) {
    std::size_t k;
    if (id < 0) {
        k = 0;
    } else {
        auto it = std::lower_bound(
            spans.begin(), spans.end(), id,
            [](const ValueSpan& s, long v) { return s.from < v; });
        while (it != spans.end() && it->from == id && it->value_step != id)
            ++it;
        if (it == spans.end() || it->value_step != id) return false;
        k = static_cast<std::size_t>(it - spans.begin());
    }
    long from = spans[k].from;
    long to = (k + 1 < spans.size()) ? spans[k + 1].from - 1 : trace_end;
    return from <= hi && to >= lo;
}

// Contents identity just before step `t` (i.e. after step t-1).
long id_before(const std::vector<ValueSpan>& spans, long t) {
    auto it = std::lower_bound(
        spans.begin(), spans.end(), t,
        [](const ValueSpan& s, long v) { return s.from < v; });
    if (it == spans.begin()) return -1;
    return std::prev(it)->value_step;
}

std::string describe_task(const TaskRecord& t) {
    std::ostringstream os;
    os << to_string(t.kind) << " by p" << t.owner << " [" << t.start << ","
       << t.finish << "]";
    return os.str();
}

void require_collect_result(const TaskRecord& task, int n) {
    if (!task.has_result ||
        task.result.collect.size() != static_cast<std::size_t>(n))
        throw MalformedTrace("finished " + describe_task(task) +
                             " has no collect result");
}

}  // namespace

std::string export_violations(const std::vector<Violation>& violations) {
    std::ostringstream os;
    for (const auto& v : violations)
        os << v.predicate << ',' << v.owner << ',' << v.start << ','
           << v.finish << ',' << v.detail << '\n';
    return os.str();
}

std::vector<Violation> check_collect_freshness(const ExecutionTrace& trace) {
    std::vector<Violation> out;
    const auto spans = value_spans(trace);
    const long end = trace.length();
    for (const auto& task : trace.tasks) {
        if (!is_collect_task(task.kind) || !task.finished()) continue;
        require_collect_result(task, trace.n);
        for (int r = 0; r < trace.n; ++r) {
            const ValuePtr& v = task.result.collect[static_cast<std::size_t>(r)];
            long id = v ? v->step : -1;
            if (v && v->owner != r) {
                out.push_back(Violation{
                    "freshness", task.owner, task.start, task.finish,
                    "reg " + std::to_string(r) + " returned a value of reg " +
                        std::to_string(v->owner)});
                continue;
            }
            if (!present_in(spans[static_cast<std::size_t>(r)], id, task.start,
                            task.finish, end)) {
                out.push_back(Violation{
                    "freshness", task.owner, task.start, task.finish,
                    "reg " + std::to_string(r) + " returned " +
                        render_value(v) +
                        " which was never present during the interval"});
            }
        }
    }
    return out;
}

namespace {

// A value introduction on some register, matched to the write-collect task
// whose collect part it rides on.
struct Intro {
    long write_step;
    long task_start;
    long task_finish;  // -1 while unfinished
};

}  // namespace

std::vector<Violation> check_write_collect_serialization(
    const ExecutionTrace& trace) {
    std::vector<Violation> out;
    const auto spans = value_spans(trace);

    // per-owner write-collect tasks in start order
    std::vector<std::vector<const TaskRecord*>> by_owner(
        static_cast<std::size_t>(trace.n));
    for (const auto& task : trace.tasks)
        if (task.kind == TaskKind::WriteCollect)
            by_owner[static_cast<std::size_t>(task.owner)].push_back(&task);

    // introductions per register, each matched to its write-collect
    std::vector<std::vector<Intro>> intros(static_cast<std::size_t>(trace.n));
    for (int r = 0; r < trace.n; ++r) {
        for (const auto& span : spans[static_cast<std::size_t>(r)]) {
            if (span.value_step < 0) continue;
            long w = span.value_step;
            const TaskRecord* owner_task = nullptr;
            for (const TaskRecord* t : by_owner[static_cast<std::size_t>(r)]) {
                if (t->start <= w && (!t->finished() || t->finish >= w)) {
                    owner_task = t;
                    break;
                }
            }
            if (!owner_task)
                throw MalformedTrace(
                    "value introduced at step " + std::to_string(w) +
                    " on reg " + std::to_string(r) +
                    " belongs to no write-collect");
            intros[static_cast<std::size_t>(r)].push_back(
                Intro{w, owner_task->start, owner_task->finish});
        }
    }

    // intros are sorted by write step, and per register task starts rise
    // with write steps, so all three bullets reduce to binary searches
    for (const auto& task : trace.tasks) {
        if (task.kind != TaskKind::WriteCollect || !task.finished()) continue;
        require_collect_result(task, trace.n);
        for (int r = 0; r < trace.n; ++r) {
            const auto& reg_intros = intros[static_cast<std::size_t>(r)];
            const ValuePtr& v = task.result.collect[static_cast<std::size_t>(r)];
            long got = v ? v->step : -1;

            // bullet 1 (relaxed): at least as new as the latest write-collect
            // that started before this one
            auto before = std::lower_bound(
                reg_intros.begin(), reg_intros.end(), task.start,
                [](const Intro& a, long s) { return a.task_start < s; });
            if (before != reg_intros.begin() &&
                got < std::prev(before)->write_step)
                out.push_back(Violation{
                    "serialization", task.owner, task.start, task.finish,
                    "reg " + std::to_string(r) + " returned " +
                        render_value(v) +
                        " older than the value of the write-collect started "
                        "at " +
                        std::to_string(std::prev(before)->task_start)});

            // bullet 2: never a value from a write-collect that started
            // after this one finished
            if (got >= 0) {
                auto same = std::lower_bound(
                    reg_intros.begin(), reg_intros.end(), got,
                    [](const Intro& a, long w) { return a.write_step < w; });
                if (same != reg_intros.end() && same->write_step == got &&
                    same->task_start > task.finish)
                    out.push_back(Violation{
                        "serialization", task.owner, task.start, task.finish,
                        "reg " + std::to_string(r) +
                            " returned the value of a write-collect started "
                            "at " +
                            std::to_string(same->task_start) +
                            " after this one finished"});
            }

            // bullet 3: the earliest overlapping write-collect bounds the
            // result below by the value it replaced
            if (before != reg_intros.end() &&
                before->task_start <= task.finish) {
                long pred = id_before(spans[static_cast<std::size_t>(r)],
                                      before->write_step);
                if (got < pred)
                    out.push_back(Violation{
                        "serialization", task.owner, task.start, task.finish,
                        "reg " + std::to_string(r) + " returned " +
                            render_value(v) +
                            " older than the value replaced by the "
                            "overlapping write-collect started at " +
                            std::to_string(before->task_start)});
            }
        }
    }
    return out;
}

std::vector<Violation> check_snapshot_atomicity(const ExecutionTrace& trace) {
    std::vector<Violation> out;
    for (const auto& task : trace.tasks) {
        if (task.kind != TaskKind::ScanUpdate || !task.finished()) continue;
        if (!task.has_result ||
            task.result.scan_seq.size() != static_cast<std::size_t>(trace.n))
            throw MalformedTrace("finished " + describe_task(task) +
                                 " has no scan result");

        // walk the interval once, tracking how many registers disagree
        std::vector<std::size_t> cursor(static_cast<std::size_t>(trace.n), 0);
        int bad = 0;
        std::vector<char> matches(static_cast<std::size_t>(trace.n), 0);
        for (int r = 0; r < trace.n; ++r) {
            auto ri = static_cast<std::size_t>(r);
            const auto& hist = trace.histories[ri];
            std::size_t k = 0;
            while (k < hist.size() && hist[k].step <= task.start) ++k;
            cursor[ri] = k;  // next change strictly after task.start
            SnapEntry cur = snapshot_contents_at(trace, r, task.start);
            matches[ri] = (cur.seq == task.result.scan_seq[ri] &&
                           cur.user == task.result.scan_val[ri]);
            if (!matches[ri]) ++bad;
        }
        bool witnessed = (bad == 0);
        for (long t = task.start + 1; t <= task.finish && !witnessed; ++t) {
            // at most one register changes per step: the one written at t
            int pid = trace.schedule[static_cast<std::size_t>(t)];
            auto ri = static_cast<std::size_t>(pid);
            const auto& hist = trace.histories[ri];
            if (cursor[ri] < hist.size() && hist[cursor[ri]].step == t) {
                ++cursor[ri];
                SnapEntry cur = snapshot_contents_at(trace, pid, t);
                bool m = (cur.seq == task.result.scan_seq[ri] &&
                          cur.user == task.result.scan_val[ri]);
                if (m != static_cast<bool>(matches[ri])) {
                    matches[ri] = m;
                    bad += m ? -1 : 1;
                }
            }
            witnessed = (bad == 0);
        }
        if (!witnessed)
            out.push_back(Violation{
                "snapshot", task.owner, task.start, task.finish,
                "no instant in the interval shows the returned picture"});
    }
    return out;
}

std::vector<Violation> check_advance_collect(const ExecutionTrace& trace) {
    std::vector<Violation> out;
    std::vector<std::int64_t> last_round(static_cast<std::size_t>(trace.n), 0);
    for (const auto& task : trace.tasks) {
        if (task.kind != TaskKind::AdvanceCollect || !task.finished()) continue;
        if (!task.has_result ||
            task.result.rounds.size() != static_cast<std::size_t>(trace.n))
            throw MalformedTrace("finished " + describe_task(task) +
                                 " has no round result");
        auto oi = static_cast<std::size_t>(task.owner);
        if (task.result.round != last_round[oi] + 1)
            out.push_back(Violation{
                "advance", task.owner, task.start, task.finish,
                "published round " + std::to_string(task.result.round) +
                    " after " + std::to_string(last_round[oi])});
        last_round[oi] = task.result.round;

        for (int r = 0; r < trace.n; ++r) {
            std::int64_t want = task.result.rounds[static_cast<std::size_t>(r)];
            bool found = false;
            std::int64_t cur = round_contents_at(trace, r, task.start);
            if (cur == want) found = true;
            const auto& hist = trace.histories[static_cast<std::size_t>(r)];
            for (std::size_t k = 0; k < hist.size() && !found; ++k) {
                if (hist[k].step <= task.start || hist[k].step > task.finish)
                    continue;
                std::int64_t rv =
                    hist[k].cell->value
                        ? std::any_cast<RoundMeta>(&hist[k].cell->value->meta)
                              ->round
                        : 0;
                if (rv == want) found = true;
            }
            if (!found)
                out.push_back(Violation{
                    "advance", task.owner, task.start, task.finish,
                    "reg " + std::to_string(r) + " reported round " +
                        std::to_string(want) +
                        " never present during the interval"});
        }
    }
    return out;
}

}  // namespace arena
