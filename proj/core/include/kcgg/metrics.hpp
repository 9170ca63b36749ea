#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace kcgg {

/// One evaluation row: a method's defend performance under one sampler
/// configuration. Mirrors what gets written per line to the metrics CSV.
struct MetricsReport {
    std::string method;
    double block_rate = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double mean_cost = 0.0;
    std::size_t episodes = 0;
    std::size_t feasible = 0;
    std::size_t blocked = 0;
    std::size_t T = 0;
    std::size_t B = 0;
    double eta = 0.0;
    double ms_per_step = 0.0;
    double budget_ms = 0.0;

    bool operator==(const MetricsReport&) const = default;
};

/// CSV with one header row, UTF-8, LF line endings. Doubles are printed with
/// 17 significant digits so parsing the file back reproduces the reports
/// bitwise.
std::string metrics_to_csv(const std::vector<MetricsReport>& reports);
std::vector<MetricsReport> metrics_from_csv(const std::string& csv);

} // namespace kcgg
