#include "arena/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace arena {

std::string format_fixed(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

std::string metrics_csv_header() {
    return "algo,n,schedule,seed,done,opt_ub,opt_lb,CL,PL,k_hat\n";
}

std::string metrics_csv_row(const RunReportRow& row) {
    std::ostringstream os;
    os << row.algo << ',' << row.n << ',' << row.sched << ',' << row.seed
       << ',' << row.done << ',' << row.opt_ub << ',' << row.opt_lb << ','
       << row.cl << ',' << row.pl << ',' << format_fixed(row.k_hat) << '\n';
    return os.str();
}

std::string metrics_json(const std::vector<RunReportRow>& rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& row : rows) {
        out.push_back({{"algo", row.algo},
                       {"n", row.n},
                       {"schedule", row.sched},
                       {"seed", row.seed},
                       {"done", row.done},
                       {"opt_ub", row.opt_ub},
                       {"opt_lb", row.opt_lb},
                       {"CL", row.cl},
                       {"PL", row.pl},
                       {"k_hat", format_fixed(row.k_hat)}});
    }
    return out.dump(2) + "\n";
}

std::string compose_csv_header() {
    return "upper,lower,n,seed,doneT,doneU,budget,k_rel,l_hat,kl_bound_holds\n";
}

std::string compose_csv_row(const ComposeReportRow& row) {
    std::ostringstream os;
    os << row.upper << ',' << row.lower << ',' << row.n << ',' << row.seed
       << ',' << row.done_t << ',' << row.done_u << ',' << row.budget << ','
       << format_fixed(row.k_rel) << ',' << format_fixed(row.l_hat) << ','
       << row.kl_bound_holds << '\n';
    return os.str();
}

std::string compose_json(const std::vector<ComposeReportRow>& rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& row : rows) {
        out.push_back({{"upper", row.upper},
                       {"lower", row.lower},
                       {"n", row.n},
                       {"seed", row.seed},
                       {"doneT", row.done_t},
                       {"doneU", row.done_u},
                       {"budget", row.budget},
                       {"k_rel", format_fixed(row.k_rel)},
                       {"l_hat", format_fixed(row.l_hat)},
                       {"kl_bound_holds", row.kl_bound_holds}});
    }
    return out.dump(2) + "\n";
}

std::string lowerbound_csv_header() {
    return "phase,p,begin,end,candidate_done,champion_done,ratio\n";
}

std::string lowerbound_csv_row(const LowerBoundReportRow& row) {
    std::ostringstream os;
    os << row.phase << ',' << row.p << ',' << row.begin << ',' << row.end
       << ',' << row.candidate_done << ',' << row.champion_done << ','
       << format_fixed(row.ratio) << '\n';
    return os.str();
}

}  // namespace arena
