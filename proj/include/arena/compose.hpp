#pragma once

#include <string>

#include "arena/sim.hpp"

// Layered algorithms A over a write-collect implementation B. Layer A never
// touches a register directly: every one of its tasks is a sequence of
// write-collect subrequests driven through B's core, so the subrequest
// stream R_A appears in the trace as the write-collect task records.

namespace arena {

// scan-update over write-collect: the update rides the first write-collect
// (value, seqno, embedded last scan); retries re-publish the same entry
// until two successive collected pictures agree or some process is seen to
// advance twice, whose embedded scan is then borrowed. At most n+2
// write-collects per scan-update.
EngineFactory snapshot_over_write_collect(CoreFactory lower);

// advance-collect over write-collect: exactly one write-collect publishing
// round+1 and returning everyone's round.
EngineFactory round_numbers_over_write_collect(CoreFactory lower);

// Positive rational, compared exactly by cross-multiplication.
struct Ratio {
    long long num = 0;
    long long den = 0;

    bool defined() const { return den > 0 && num > 0; }
    double value() const {
        return den ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
    }
    bool operator<(const Ratio& other) const;
};

struct RelativeReport {
    int n = 0;
    long done_t = 0;  // completed T-tasks (scan-update / advance-collect)
    long done_u = 0;  // completed write-collects under R_A
    long opt_t_ub = 0;  // window bound for T (surrogate for opt_T)
    long opt_u_ub = 0;  // window bound for U (surrogate for opt_U)
    long opt_u_lb = 0;  // champion run on the same schedule (reported only)
    long additive_c = 0;  // c = n
    long budget = 0;      // write-collects per T-task: n+2 or 1
    Ratio k_rel;  // (opt_t_ub/opt_u_ub) / ((done_t+c)/done_u)
    Ratio l_hat;  // opt_u_ub / (done_u + c)
};

RelativeReport measure_relative(const ExecutionTrace& composed_trace,
                                long opt_u_lb, long budget);

enum class CheckStatus { Pass, Fail, Vacuous };

struct LayerCheck {
    CheckStatus status = CheckStatus::Pass;
    std::string detail;
};

// Definition-2 inequality with the window-bound surrogates on both opt
// sides, plus the U-budget accounting
// done_u <= (budget+1) * done_t + (budget+1) * n.
LayerCheck check_relative_competitiveness(const RelativeReport& report,
                                          Ratio claimed_k);

// opt_T(sigma) <= c * opt_U(sigma), c = 1 for both layers here.
LayerCheck check_feasibility(long opt_t_bound, long opt_u_bound, long c = 1);

// eq-composition-final with measured constants:
// done_t + c_A + c_B c_T / k >= opt_T / (k l), exact in rationals.
LayerCheck check_composition_bound(const RelativeReport& report, Ratio k,
                                   Ratio l);

// write-collects inside each finished scan-update, in task order
std::vector<long> subtasks_per_scan(const ExecutionTrace& trace);

// every op belongs to a write-collect task of its process
bool layer_isolated(const ExecutionTrace& trace);

}  // namespace arena
