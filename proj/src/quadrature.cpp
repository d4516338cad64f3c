#include "tfem/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "tfem/error.hpp"

namespace tfem {

namespace {

GaussRule compute_gauss_legendre(int n)
{
    GaussRule rule;
    rule.points.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Newton on P_n starting from the Chebyshev-like guess.
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16)
                break;
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.points[static_cast<std::size_t>(i)] = -z;
        rule.points[static_cast<std::size_t>(n - 1 - i)] = z;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1)
        rule.points[static_cast<std::size_t>(n / 2)] = 0.0;
    return rule;
}

} // namespace

const GaussRule& gauss_legendre(int n)
{
    if (n < 1 || n > 64)
        throw InvalidArgument("gauss_legendre: order must be in [1, 64]");
    static std::mutex mutex;
    static std::map<int, GaussRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, compute_gauss_legendre(n)).first;
    return it->second;
}

const std::vector<TrianglePoint>& triangle_rule_degree1()
{
    static const std::vector<TrianglePoint> rule{{{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 1.0}};
    return rule;
}

const std::vector<TrianglePoint>& triangle_rule_degree2()
{
    static const std::vector<TrianglePoint> rule{
        {{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0}, 1.0 / 3.0},
        {{1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}, 1.0 / 3.0},
        {{1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}, 1.0 / 3.0},
    };
    return rule;
}

} // namespace tfem
