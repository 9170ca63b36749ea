#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace kcgg::testsupport {

/// Central finite-difference gradient oracle. Stays independent of the
/// autodiff implementation: it only calls the plain forward function.
struct FdResult {
    bool ok = true;
    double max_abs_err = 0.0;
    double max_rel_err = 0.0;
    std::size_t worst_index = 0;
    double worst_analytic = 0.0;
    double worst_numeric = 0.0;

    std::string describe() const {
        return "worst index " + std::to_string(worst_index) + ": analytic " +
               std::to_string(worst_analytic) + " vs numeric " + std::to_string(worst_numeric) +
               " (abs " + std::to_string(max_abs_err) + ", rel " + std::to_string(max_rel_err) +
               ")";
    }
};

/// Checks analytic against (f(x+h e_i) - f(x-h e_i)) / 2h entrywise. Passes
/// when |diff| <= max(abs_tol, rel_tol * |numeric|) everywhere.
inline FdResult check_gradient(const std::function<double(const std::vector<double>&)>& f,
                               std::vector<double> x, const std::vector<double>& analytic,
                               double h = 1e-5, double abs_tol = 1e-6, double rel_tol = 1e-4) {
    FdResult res;
    double worst = -1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double orig = x[i];
        x[i] = orig + h;
        double up = f(x);
        x[i] = orig - h;
        double down = f(x);
        x[i] = orig;
        double numeric = (up - down) / (2.0 * h);
        double abs_err = std::abs(analytic[i] - numeric);
        double tol = std::max(abs_tol, rel_tol * std::abs(numeric));
        double badness = abs_err / tol;
        if (badness > worst) {
            worst = badness;
            res.worst_index = i;
            res.worst_analytic = analytic[i];
            res.worst_numeric = numeric;
            res.max_abs_err = abs_err;
            res.max_rel_err = std::abs(numeric) > 0 ? abs_err / std::abs(numeric) : abs_err;
        }
        if (abs_err > tol) res.ok = false;
    }
    return res;
}

} // namespace kcgg::testsupport
