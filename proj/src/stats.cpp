#include "ctv/stats.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ctv {

double mean(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("mean of empty sample");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
    if (x.size() < 2) throw std::invalid_argument("variance needs at least 2 values");
    double m = mean(x);
    double ss = 0;
    for (double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size() - 1);
}

TTestResult welch_t(std::span<const double> x, std::span<const double> y) {
    if (x.size() < 2 || y.size() < 2) throw std::invalid_argument("welch_t needs at least 2 values per sample");
    const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
    const double mx = mean(x), my = mean(y);
    const double vx = sample_variance(x) / nx, vy = sample_variance(y) / ny;
    const double se2 = vx + vy;

    TTestResult r;
    if (se2 == 0) {
        r.dof = nx + ny - 2;
        if (mx == my) return r;
        r.t = mx > my ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
        r.p = 0;
        return r;
    }
    r.t = (mx - my) / std::sqrt(se2);
    r.dof = se2 * se2 / (vx * vx / (nx - 1) + vy * vy / (ny - 1));
    boost::math::students_t dist(r.dof);
    r.p = std::min(1.0, 2 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t))));
    return r;
}

}  // namespace ctv
