#pragma once

#include <functional>
#include <span>
#include <vector>

namespace fakemix::nn {

/// Compare an analytic gradient against central differences at `point`.
/// Returns the maximum per-coordinate relative error,
/// |num - ana| / max(|num|, |ana|, 1e-8).
double finite_diff_check(const std::function<double(std::span<const double>)>& fn,
                         const std::function<std::vector<double>(std::span<const double>)>& grad,
                         std::span<const double> point, double step = 1e-5);

}  // namespace fakemix::nn
