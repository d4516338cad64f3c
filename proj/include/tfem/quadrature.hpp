#pragma once

#include <array>
#include <vector>

namespace tfem {

/// Nodes and weights on the reference interval [-1, 1].
struct GaussRule {
    std::vector<double> points;
    std::vector<double> weights;
};

/// Gauss-Legendre rule with `n` points (exact for degree 2n - 1).
/// Rules are computed once per order and cached.
const GaussRule& gauss_legendre(int n);

/// Integrates f over [lo, hi] with an n-point Gauss-Legendre rule.
template <class F>
double integrate(F&& f, double lo, double hi, int n)
{
    const GaussRule& rule = gauss_legendre(n);
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double s = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q)
        s += rule.weights[q] * f(mid + half * rule.points[q]);
    return half * s;
}

/// Barycentric quadrature point on a triangle; weights sum to 1.
struct TrianglePoint {
    std::array<double, 3> bary;
    double weight;
};

/// Centroid rule, degree 1.
const std::vector<TrianglePoint>& triangle_rule_degree1();
/// Three interior points, degree 2.
const std::vector<TrianglePoint>& triangle_rule_degree2();

} // namespace tfem
