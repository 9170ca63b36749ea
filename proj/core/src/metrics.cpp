#include "kcgg/metrics.hpp"

#include <cstdio>
#include <sstream>

#include "kcgg/errors.hpp"

namespace kcgg {

namespace {

const char* kHeader =
    "method,block_rate,ci_lo,ci_hi,mean_cost,episodes,feasible,blocked,T,B,eta,ms_per_step,"
    "budget_ms";

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

} // namespace

std::string metrics_to_csv(const std::vector<MetricsReport>& reports) {
    std::ostringstream os;
    os << kHeader << "\n";
    for (const MetricsReport& r : reports) {
        os << r.method << ',' << fmt_double(r.block_rate) << ',' << fmt_double(r.ci_lo) << ','
           << fmt_double(r.ci_hi) << ',' << fmt_double(r.mean_cost) << ',' << r.episodes << ','
           << r.feasible << ',' << r.blocked << ',' << r.T << ',' << r.B << ','
           << fmt_double(r.eta) << ',' << fmt_double(r.ms_per_step) << ','
           << fmt_double(r.budget_ms) << "\n";
    }
    return os.str();
}

std::vector<MetricsReport> metrics_from_csv(const std::string& csv) {
    std::istringstream is(csv);
    std::string line;
    if (!std::getline(is, line) || line != kHeader) {
        throw IoError("metrics_from_csv: missing or unexpected header row");
    }
    std::vector<MetricsReport> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto f = split_line(line);
        if (f.size() != 13) {
            throw IoError("metrics_from_csv: expected 13 fields, got " +
                          std::to_string(f.size()));
        }
        MetricsReport r;
        r.method = f[0];
        r.block_rate = std::stod(f[1]);
        r.ci_lo = std::stod(f[2]);
        r.ci_hi = std::stod(f[3]);
        r.mean_cost = std::stod(f[4]);
        r.episodes = std::stoul(f[5]);
        r.feasible = std::stoul(f[6]);
        r.blocked = std::stoul(f[7]);
        r.T = std::stoul(f[8]);
        r.B = std::stoul(f[9]);
        r.eta = std::stod(f[10]);
        r.ms_per_step = std::stod(f[11]);
        r.budget_ms = std::stod(f[12]);
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace kcgg
