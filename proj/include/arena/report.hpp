#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arena/compose.hpp"
#include "arena/metrics.hpp"

// Deterministic CSV rows and their JSON mirror. Doubles are printed at six
// fixed decimals so reports are byte-stable.

namespace arena {

std::string format_fixed(double value);

struct RunReportRow {
    std::string algo;
    int n = 0;
    std::string sched;
    std::uint64_t seed = 0;
    long done = 0;
    long opt_ub = 0;
    long opt_lb = 0;
    long cl = 0;
    long pl = 0;
    double k_hat = 0;
};

std::string metrics_csv_header();
std::string metrics_csv_row(const RunReportRow& row);
std::string metrics_json(const std::vector<RunReportRow>& rows);

struct ComposeReportRow {
    std::string upper;
    std::string lower;
    int n = 0;
    std::uint64_t seed = 0;
    long done_t = 0;
    long done_u = 0;
    long budget = 0;
    double k_rel = 0;
    double l_hat = 0;
    std::string kl_bound_holds;  // "yes" | "no" | "vacuous"
};

std::string compose_csv_header();
std::string compose_csv_row(const ComposeReportRow& row);
std::string compose_json(const std::vector<ComposeReportRow>& rows);

struct LowerBoundReportRow {
    int phase = 0;
    int p = -1;
    long begin = 0;
    long end = 0;
    long candidate_done = 0;
    long champion_done = 0;
    double ratio = 0;
};

std::string lowerbound_csv_header();
std::string lowerbound_csv_row(const LowerBoundReportRow& row);

}  // namespace arena
