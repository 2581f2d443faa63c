#pragma once

#include <string>
#include <vector>

#include "arena/core.hpp"

// Ground-truth correctness predicates over finished traces. Violations are
// collected exhaustively (never fail-fast) and every violation carries a
// replayable witness: step indices into the trace.

namespace arena {

struct Violation {
    std::string predicate;  // freshness | serialization | snapshot | advance
    int owner = -1;
    long start = -1;
    long finish = -1;
    std::string detail;
};

// One line per violation: predicate,owner,start,finish,detail
std::string export_violations(const std::vector<Violation>& violations);

// Every collect / write-collect must return, for each register, a value that
// was present in that register at some instant of the task's interval.
std::vector<Violation> check_collect_freshness(const ExecutionTrace& trace);

// The write-collect serialization bullets, pairwise over write-collects. The
// first bullet is relaxed to "a's value or a later value of that register";
// the overlapping bullet constrains the result to be no older than the value
// the earliest overlapping write-collect replaced.
std::vector<Violation> check_write_collect_serialization(
    const ExecutionTrace& trace);

// Witness-point linearizability of scans: some single instant inside the
// scan-update's interval shows exactly the returned picture.
std::vector<Violation> check_snapshot_atomicity(const ExecutionTrace& trace);

// Round numbers advance by exactly one per advance-collect, and the
// collected round vector is fresh per register.
std::vector<Violation> check_advance_collect(const ExecutionTrace& trace);

}  // namespace arena
