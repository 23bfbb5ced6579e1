#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace hancnn::nn {

struct GradCheckReport {
    double max_rel_error = 0.0;
    std::size_t worst_index = 0;
    std::size_t checked = 0;
    bool pass = false;
};

// Central-difference check of an analytic gradient. f must be deterministic;
// x is perturbed in place and restored. Error for coordinate i is
// |analytic - numeric| / max(1, |analytic|, |numeric|), so near-zero
// gradients are judged on an absolute scale instead of blowing up.
// `skip` exempts coordinates (e.g. untrainable entries) from the check.
inline GradCheckReport grad_check(const std::function<double(std::span<const double>)>& f,
                                  std::span<double> x,
                                  std::span<const double> analytic_grad, double tolerance,
                                  double step = 1e-3,
                                  const std::function<bool(std::size_t)>& skip = nullptr) {
    GradCheckReport report;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (skip && skip(i)) continue;
        const double saved = x[i];
        x[i] = saved + step;
        const double f_plus = f(x);
        x[i] = saved - step;
        const double f_minus = f(x);
        x[i] = saved;
        const double numeric = (f_plus - f_minus) / (2.0 * step);
        const double analytic = analytic_grad[i];
        const double denom = std::max({1.0, std::fabs(analytic), std::fabs(numeric)});
        const double rel = std::fabs(analytic - numeric) / denom;
        if (rel > report.max_rel_error) {
            report.max_rel_error = rel;
            report.worst_index = i;
        }
        ++report.checked;
    }
    report.pass = report.max_rel_error < tolerance;
    return report;
}

}  // namespace hancnn::nn
