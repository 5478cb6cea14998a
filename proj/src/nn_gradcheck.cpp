#include "fakemix/nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fakemix::nn {

double finite_diff_check(const std::function<double(std::span<const double>)>& fn,
                         const std::function<std::vector<double>(std::span<const double>)>& grad,
                         std::span<const double> point, double step) {
    std::vector<double> ana = grad(point);
    if (ana.size() != point.size())
        throw std::invalid_argument("finite_diff_check: gradient length != point length");

    std::vector<double> x(point.begin(), point.end());
    double worst = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double keep = x[i];
        x[i] = keep + step;
        const double hi = fn(x);
        x[i] = keep - step;
        const double lo = fn(x);
        x[i] = keep;
        const double num = (hi - lo) / (2.0 * step);
        const double denom = std::max({std::fabs(num), std::fabs(ana[i]), 1e-8});
        worst = std::max(worst, std::fabs(num - ana[i]) / denom);
    }
    return worst;
}

}  // namespace fakemix::nn
