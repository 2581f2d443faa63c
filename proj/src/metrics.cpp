#include "arena/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace arena {

namespace {

using int128 = __int128;

struct TaskSpan {
    long start;
    long end;  // finish, or length-1 while unfinished
    bool finished;
    long own_steps;
};

// Collect-family task spans per process, with owner step counts.
std::vector<std::vector<TaskSpan>> collect_spans(const ExecutionTrace& trace) {
    std::vector<std::vector<long>> proc_slots(
        static_cast<std::size_t>(trace.n));
    for (const auto& op : trace.ops)
        proc_slots[static_cast<std::size_t>(op.pid)].push_back(op.step);

    std::vector<std::vector<TaskSpan>> spans(static_cast<std::size_t>(trace.n));
    const long last = trace.length() - 1;
    for (const auto& task : trace.tasks) {
        if (!is_collect_task(task.kind)) continue;
        const auto& slots = proc_slots[static_cast<std::size_t>(task.owner)];
        long end = task.finished() ? task.finish : last;
        auto lo = std::lower_bound(slots.begin(), slots.end(), task.start);
        auto hi = std::upper_bound(slots.begin(), slots.end(), end);
        spans[static_cast<std::size_t>(task.owner)].push_back(
            TaskSpan{task.start, end, task.finished(),
                     static_cast<long>(hi - lo)});
    }
    return spans;
}

struct Window {
    long lo, hi;  // slots [lo, hi)
};

std::vector<Window> latency_windows(int n, long length) {
    std::vector<Window> out;
    long w = static_cast<long>(n) - 1;
    for (long lo = 0; lo < length; lo += w)
        out.push_back(Window{lo, std::min(lo + w, length)});
    return out;
}

int distinct_actors(const std::vector<int>& schedule, long lo, long hi,
                    std::vector<char>& scratch) {
    int m = 0;
    for (long t = lo; t < hi; ++t) {
        auto pid = static_cast<std::size_t>(schedule[static_cast<std::size_t>(t)]);
        if (!scratch[pid]) {
            scratch[pid] = 1;
            ++m;
        }
    }
    for (long t = lo; t < hi; ++t)
        scratch[static_cast<std::size_t>(schedule[static_cast<std::size_t>(t)])] = 0;
    return m;
}

}  // namespace

LatencyProfile measure_latency(const ExecutionTrace& trace) {
    const auto spans = collect_spans(trace);

    LatencyProfile out;
    bool any_finished = false;
    for (const auto& per_proc : spans)
        for (const auto& span : per_proc)
            if (span.finished) {
                any_finished = true;
                out.private_latency =
                    std::max(out.private_latency, span.own_steps);
            }
    if (!any_finished)
        throw UndefinedProfile(
            "no finished collect in the trace; latency profile undefined");

    // Remaining-step mass of collects in progress, swept once over the
    // trace: a task adds its whole step count when it starts, and each of
    // its ops retires one unit after executing.
    std::vector<long> add_at(static_cast<std::size_t>(trace.length()) + 1, 0);
    for (const auto& per_proc : spans)
        for (const auto& span : per_proc)
            add_at[static_cast<std::size_t>(span.start)] += span.own_steps;

    // whether the op at each slot belongs to a collect task
    std::vector<char> counted(static_cast<std::size_t>(trace.length()), 0);
    for (const auto& op : trace.ops) {
        const auto& ps = spans[static_cast<std::size_t>(op.pid)];
        auto it = std::upper_bound(
            ps.begin(), ps.end(), op.step,
            [](long step, const TaskSpan& s) { return step < s.start; });
        if (it != ps.begin() && std::prev(it)->end >= op.step)
            counted[static_cast<std::size_t>(op.step)] = 1;
    }

    long mass = 0;
    for (long t = 0; t < trace.length(); ++t) {
        mass += add_at[static_cast<std::size_t>(t)];
        out.collective = std::max(out.collective, mass);
        if (counted[static_cast<std::size_t>(t)]) --mass;
    }
    return out;
}

std::vector<long> collect_step_counts(const ExecutionTrace& trace) {
    std::vector<long> out;
    for (const auto& per_proc : collect_spans(trace))
        for (const auto& span : per_proc)
            if (span.finished) out.push_back(span.own_steps);
    return out;
}

StepClassification classify_steps(const ExecutionTrace& trace) {
    const long length = trace.length();
    StepClassification out;
    out.n = trace.n;
    out.length = length;
    out.tags.assign(static_cast<std::size_t>(trace.n),
                    std::vector<StepTag>(static_cast<std::size_t>(length),
                                         StepTag::None));

    const auto spans = collect_spans(trace);

    // task index of each process at each slot (-1 = between collects)
    std::vector<std::vector<int>> at(
        static_cast<std::size_t>(trace.n),
        std::vector<int>(static_cast<std::size_t>(length), -1));
    for (int p = 0; p < trace.n; ++p) {
        auto pi = static_cast<std::size_t>(p);
        for (std::size_t k = 0; k < spans[pi].size(); ++k) {
            const auto& span = spans[pi][k];
            for (long t = span.start; t <= span.end && t < length; ++t)
                at[pi][static_cast<std::size_t>(t)] = static_cast<int>(k);
        }
    }

    // useful steps
    for (long t = 0; t < length; ++t) {
        auto ti = static_cast<std::size_t>(t);
        int q = trace.schedule[ti];
        auto qi = static_cast<std::size_t>(q);
        int qk = at[qi][ti];
        if (qk < 0) continue;  // op outside any collect task
        long q_start = spans[qi][static_cast<std::size_t>(qk)].start;
        for (int p = 0; p < trace.n; ++p) {
            if (p == q) continue;
            auto pi = static_cast<std::size_t>(p);
            int pk = at[pi][ti];
            if (pk < 0) continue;
            if (q_start < spans[pi][static_cast<std::size_t>(pk)].start)
                out.tags[pi][ti] = StepTag::Useful;
        }
    }

    // extraneous steps: first and last op of q in each maximal interval
    // where p is outside any collect (including before its first one; the
    // progress accounting starts every process's prefix at t_0 = 0)
    std::vector<std::vector<long>> proc_slots(
        static_cast<std::size_t>(trace.n));
    for (const auto& op : trace.ops)
        proc_slots[static_cast<std::size_t>(op.pid)].push_back(op.step);

    for (int p = 0; p < trace.n; ++p) {
        auto pi = static_cast<std::size_t>(p);
        const auto& ps = spans[pi];
        std::vector<std::pair<long, long>> gaps;  // [lo, hi)
        long lo = 0;
        for (const auto& span : ps) {
            if (lo < span.start) gaps.emplace_back(lo, span.start);
            lo = span.end + 1;
        }
        if (lo < length) gaps.emplace_back(lo, length);
        for (const auto& [gap_lo, gap_hi] : gaps) {
            for (int q = 0; q < trace.n; ++q) {
                if (q == p) continue;
                const auto& qs = proc_slots[static_cast<std::size_t>(q)];
                auto first = std::lower_bound(qs.begin(), qs.end(), gap_lo);
                if (first == qs.end() || *first >= gap_hi) continue;
                auto last = std::lower_bound(qs.begin(), qs.end(), gap_hi);
                --last;
                out.tags[pi][static_cast<std::size_t>(*first)] =
                    StepTag::Extraneous;
                out.tags[pi][static_cast<std::size_t>(*last)] =
                    StepTag::Extraneous;
            }
        }
    }
    return out;
}

double ProgressSeries::f(int pid, long t) const {
    auto pi = static_cast<std::size_t>(pid);
    auto ti = static_cast<std::size_t>(t);
    return 0.5 * (static_cast<double>(m[pi][ti]) / static_cast<double>(a_prime()) +
                  static_cast<double>(steps[pi][ti]) / static_cast<double>(pl));
}

double ProgressSeries::f_total(long t) const {
    double total = 0;
    for (int p = 0; p < n; ++p) total += f(p, t);
    return total;
}

ProgressSeries compute_progress(const ExecutionTrace& trace,
                                const LatencyProfile& profile,
                                const StepClassification& tags) {
    if (profile.private_latency <= 0 || profile.collective <= 0)
        throw UndefinedProfile("latency profile has no finished collect");
    ProgressSeries series;
    series.n = trace.n;
    series.length = trace.length();
    series.cl = profile.collective;
    series.pl = profile.private_latency;
    series.m.assign(static_cast<std::size_t>(trace.n),
                    std::vector<long>(static_cast<std::size_t>(series.length) + 1, 0));
    series.steps = series.m;
    for (long t = 0; t < series.length; ++t) {
        auto ti = static_cast<std::size_t>(t);
        int actor = trace.schedule[ti];
        for (int p = 0; p < trace.n; ++p) {
            auto pi = static_cast<std::size_t>(p);
            series.m[pi][ti + 1] =
                series.m[pi][ti] + (tags.tags[pi][ti] != StepTag::None ? 1 : 0);
            series.steps[pi][ti + 1] =
                series.steps[pi][ti] + (actor == p ? 1 : 0);
        }
    }
    return series;
}

long opt_upper_bound(int n, const std::vector<int>& slots) {
    const long length = static_cast<long>(slots.size());
    if (n == 1) return length;  // one collect per step at best
    long bound = 0;
    std::vector<char> scratch(static_cast<std::size_t>(n), 0);
    for (const auto& w : latency_windows(n, length))
        bound += distinct_actors(slots, w.lo, w.hi, scratch);
    return bound;
}

long opt_upper_bound(const Schedule& schedule) {
    return opt_upper_bound(schedule.n, schedule.slots);
}

CheckResult validate_lemma_progress(const ExecutionTrace& trace,
                                    const ProgressSeries& series) {
    const int128 ap = series.a_prime();
    const int128 pl = series.pl;
    std::vector<long> done(static_cast<std::size_t>(trace.n), 0);

    // completion events in time order
    std::vector<std::pair<long, int>> completions;
    for (const auto& task : trace.tasks)
        if (is_collect_task(task.kind) && task.finished())
            completions.emplace_back(task.finish, task.owner);
    std::sort(completions.begin(), completions.end());

    for (const auto& [slot, p] : completions) {
        auto pi = static_cast<std::size_t>(p);
        ++done[pi];
        const long t = slot + 1;
        // done >= F_p(t) - 1  <=>  2 (done+1) PL a' >= M PL + N a'
        int128 lhs = int128(2) * (done[pi] + 1) * pl * ap;
        int128 rhs = int128(series.m[pi][static_cast<std::size_t>(t)]) * pl +
                     int128(series.steps[pi][static_cast<std::size_t>(t)]) * ap;
        if (lhs < rhs) {
            std::ostringstream os;
            os << "p" << p << " at t=" << t << ": done=" << done[pi]
               << " < F_p(t)-1 with F_p=" << series.f(p, t);
            return CheckResult{false, os.str()};
        }
    }
    return CheckResult{true, {}};
}

CheckResult validate_lemma_rises(const ExecutionTrace& trace,
                                 const ProgressSeries& series) {
    if (trace.n < 2) return CheckResult{true, {}};
    std::vector<char> scratch(static_cast<std::size_t>(trace.n), 0);
    for (const auto& w : latency_windows(trace.n, trace.length())) {
        long m = distinct_actors(trace.schedule, w.lo, w.hi, scratch);
        long delta = 0;
        for (int p = 0; p < trace.n; ++p) {
            auto pi = static_cast<std::size_t>(p);
            delta += series.m[pi][static_cast<std::size_t>(w.hi)] -
                     series.m[pi][static_cast<std::size_t>(w.lo)];
        }
        if (2 * delta < m * (m - 1)) {
            std::ostringstream os;
            os << "window (" << w.lo << "," << w.hi << "]: sum dM=" << delta
               << " < C(" << m << ",2)=" << m * (m - 1) / 2;
            return CheckResult{false, os.str()};
        }
    }
    return CheckResult{true, {}};
}

CheckResult validate_lemma_champion(const ExecutionTrace& trace) {
    if (trace.n < 2) return CheckResult{true, {}};
    std::vector<long> finishes;
    for (const auto& task : trace.tasks)
        if (is_collect_task(task.kind) && task.finished())
            finishes.push_back(task.finish);
    std::sort(finishes.begin(), finishes.end());

    std::vector<char> scratch(static_cast<std::size_t>(trace.n), 0);
    for (const auto& w : latency_windows(trace.n, trace.length())) {
        long m = distinct_actors(trace.schedule, w.lo, w.hi, scratch);
        auto lo = std::lower_bound(finishes.begin(), finishes.end(), w.lo);
        auto hi = std::lower_bound(finishes.begin(), finishes.end(), w.hi);
        long completed = hi - lo;
        if (completed > m) {
            std::ostringstream os;
            os << "window (" << w.lo << "," << w.hi << "]: " << completed
               << " collects completed by " << m << " active processes";
            return CheckResult{false, os.str()};
        }
    }
    return CheckResult{true, {}};
}

BracketCheck throughput_bound_check(const ExecutionTrace& trace,
                                    const ProgressSeries& series,
                                    long opt_upper) {
    BracketCheck out;
    const long n = trace.n;
    const long ap = series.a_prime();
    const long pl = series.pl;
    const long big_a = 2 * pl * ap;

    out.bracket = std::sqrt(static_cast<double>(n - 1) /
                            static_cast<double>(big_a)) -
                  1.0 / (4.0 * static_cast<double>(ap));
    out.lhs = series.f_total(series.length);
    out.rhs = static_cast<double>(opt_upper) * out.bracket;

    // bracket <= 0  <=>  8 (n-1) a' <= PL
    if (8 * (n - 1) * ap <= pl) {
        out.status = BracketCheck::Status::Inconclusive;
        out.witness = "bracket non-positive; pathological CL/PL";
        return out;
    }

    long sum_m = 0, sum_n = 0;
    for (int p = 0; p < trace.n; ++p) {
        auto pi = static_cast<std::size_t>(p);
        sum_m += series.m[pi][static_cast<std::size_t>(series.length)];
        sum_n += series.steps[pi][static_cast<std::size_t>(series.length)];
    }
    // sum_p F_p(T) >= opt (sqrt((n-1)/A) - 1/(4a'))
    //   <=> (2L + opt PL)^2 >= 4 opt^2 (n-1) A,  L = PL sum_M + a' sum_N
    int128 l = int128(pl) * sum_m + int128(ap) * sum_n;
    int128 lhs = 2 * l + int128(opt_upper) * pl;
    int128 rhs = int128(4) * opt_upper * opt_upper * (n - 1) * big_a;
    if (lhs * lhs >= rhs) {
        out.status = BracketCheck::Status::Pass;
    } else {
        out.status = BracketCheck::Status::Fail;
        std::ostringstream os;
        os << "sum F_p(T)=" << out.lhs << " < opt*bracket=" << out.rhs;
        out.witness = os.str();
    }
    return out;
}

double interval_optimal_m(int n, long cl, long pl) {
    return std::sqrt(2.0 * static_cast<double>(n - 1) *
                     static_cast<double>(cl + 2 * (static_cast<long>(n) - 1)) /
                     static_cast<double>(pl));
}

RatioReport make_ratio_report(long done, long opt_upper, long opt_lower,
                              int n) {
    RatioReport out;
    out.done = done;
    out.opt_upper = opt_upper;
    out.opt_lower = opt_lower;
    out.additive_c = n;
    out.k_hat = static_cast<double>(opt_upper) /
                static_cast<double>(done + out.additive_c);
    return out;
}

}  // namespace arena
