#pragma once

#include <string>
#include <vector>

#include "arena/core.hpp"

// Quantitative machinery: useful/extraneous step classification, the
// M_p/N_p/F_p progress series, measured collective and private latency, the
// champion window bound, and executable validators for the progress lemmas
// and the throughput bound. All lemma inequalities are checked in exact
// integer arithmetic.
//
// Time convention: time t = number of slots executed, t in [0, T]; the op at
// slot k happens "at time k+1"; a window (t1, t2] covers slots t1..t2-1.

namespace arena {

struct LatencyProfile {
    long collective = 0;       // CL: max remaining-step mass over C(t)
    long private_latency = 0;  // PL: max steps within one finished collect
};

// Measured from the trace's collect-family tasks. Throws UndefinedProfile
// when no collect finished (nothing to calibrate).
LatencyProfile measure_latency(const ExecutionTrace& trace);

// Steps the owner spent inside each finished collect, in task order.
std::vector<long> collect_step_counts(const ExecutionTrace& trace);

enum class StepTag : unsigned char { None = 0, Useful = 1, Extraneous = 2 };

struct StepClassification {
    int n = 0;
    long length = 0;
    std::vector<std::vector<StepTag>> tags;  // [pid][slot]
};

// A step by q at slot t is useful-for-p iff p has a collect in progress at t
// and q's collect containing t started before p's; extraneous-for-p iff t
// lies in a gap where p has finished a collect but taken no step of a new
// one, and it is q's first or last op in that gap.
StepClassification classify_steps(const ExecutionTrace& trace);

struct ProgressSeries {
    int n = 0;
    long length = 0;
    long cl = 0, pl = 0;
    std::vector<std::vector<long>> m;      // M_p(t), t in [0, length]
    std::vector<std::vector<long>> steps;  // N_p(t)

    long a_prime() const { return cl + 2 * (static_cast<long>(n) - 1); }
    double f(int pid, long t) const;
    double f_total(long t) const;
};

ProgressSeries compute_progress(const ExecutionTrace& trace,
                                const LatencyProfile& profile,
                                const StepClassification& tags);

// Champion upper bound: consecutive windows of n-1 slots (trailing partial
// window counted), each contributing its number of distinct active
// processes. For n = 1, the schedule length.
long opt_upper_bound(int n, const std::vector<int>& slots);
long opt_upper_bound(const Schedule& schedule);

struct CheckResult {
    bool pass = true;
    std::string witness;  // empty on pass
};

// Lemma: at every collect completion time t of p, collects completed by p
// is at least F_p(t) - 1.
CheckResult validate_lemma_progress(const ExecutionTrace& trace,
                                    const ProgressSeries& series);

// Lemma: over any (n-1)-window with m active processes, sum_p M_p rises by
// at least C(m,2).
CheckResult validate_lemma_rises(const ExecutionTrace& trace,
                                 const ProgressSeries& series);

// Lemma: any correct algorithm completes at most m collects per
// (n-1)-window with m active processes.
CheckResult validate_lemma_champion(const ExecutionTrace& trace);

struct BracketCheck {
    enum class Status { Pass, Fail, Inconclusive };
    Status status = Status::Pass;
    double lhs = 0;      // sum_p F_p(T)
    double rhs = 0;      // opt_upper * bracket
    double bracket = 0;  // sqrt((n-1)/(2 PL (CL+2(n-1)))) - 1/(4(CL+2(n-1)))
    std::string witness;
};

// Throughput bound: sum_p F_p(T) >= opt_upper * bracket, checked exactly.
BracketCheck throughput_bound_check(const ExecutionTrace& trace,
                                    const ProgressSeries& series,
                                    long opt_upper);

// The window-ratio minimizer m* = sqrt(2(n-1)(CL+2(n-1))/PL).
double interval_optimal_m(int n, long cl, long pl);

struct RatioReport {
    long done = 0;
    long opt_upper = 0;
    long opt_lower = 0;  // best champion run on the same schedule
    long additive_c = 0;
    double k_hat = 0;  // opt_upper / (done + c)
};

RatioReport make_ratio_report(long done, long opt_upper, long opt_lower,
                              int n);

}  // namespace arena
