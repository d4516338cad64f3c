#include "tfem/mesh1d.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tfem/error.hpp"

namespace tfem {

Mesh1D::Mesh1D(std::vector<double> nodes, double eps_min) : nodes_(std::move(nodes))
{
    if (nodes_.size() < 2)
        throw InvalidArgument("Mesh1D: at least two nodes are required");
    for (double z : nodes_)
        if (!std::isfinite(z))
            throw InvalidArgument("Mesh1D: non-finite node coordinate");
    if (!(nodes_.back() > nodes_.front()))
        throw InvalidArgument("Mesh1D: requires b > a");
    eps_min_ = eps_min > 0.0 ? eps_min : kDefaultRelativeMinSpacing * (nodes_.back() - nodes_.front());
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
        if (!(nodes_[i + 1] - nodes_[i] >= eps_min_)) {
            std::ostringstream msg;
            msg << "Mesh1D: spacing " << nodes_[i + 1] - nodes_[i] << " between nodes " << i
                << " and " << i + 1 << " is below eps_min = " << eps_min_;
            throw DegenerateMesh(msg.str());
        }
    }
}

double Mesh1D::min_spacing() const
{
    double h = spacing(0);
    for (std::size_t e = 1; e < num_elements(); ++e)
        h = std::min(h, spacing(e));
    return h;
}

double Mesh1D::max_spacing() const
{
    double h = spacing(0);
    for (std::size_t e = 1; e < num_elements(); ++e)
        h = std::max(h, spacing(e));
    return h;
}

std::size_t Mesh1D::locate(double z) const
{
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), z);
    if (it == nodes_.begin())
        return 0;
    const auto idx = static_cast<std::size_t>(std::distance(nodes_.begin(), it)) - 1;
    return std::min(idx, num_elements() - 1);
}

Mesh1D uniform_mesh(double a, double b, std::size_t num_nodes)
{
    if (num_nodes < 2)
        throw InvalidArgument("uniform_mesh: num_nodes must be >= 2");
    if (!(b > a))
        throw InvalidArgument("uniform_mesh: requires b > a");
    std::vector<double> nodes(num_nodes);
    const double h = (b - a) / static_cast<double>(num_nodes - 1);
    for (std::size_t i = 0; i < num_nodes; ++i)
        nodes[i] = a + h * static_cast<double>(i);
    nodes.back() = b;
    return Mesh1D(std::move(nodes));
}

Mesh1D log_concentrated_mesh(double a, double b, std::size_t num_nodes, Side side, double ratio)
{
    if (num_nodes < 2)
        throw InvalidArgument("log_concentrated_mesh: num_nodes must be >= 2");
    if (!(b > a))
        throw InvalidArgument("log_concentrated_mesh: requires b > a");
    if (!(ratio > 1.0))
        throw InvalidArgument("log_concentrated_mesh: ratio must be > 1");

    // Spacings grow geometrically from left to right: smallest element at a.
    const std::size_t m = num_nodes - 1;
    std::vector<double> widths(m, 1.0);
    if (m > 1) {
        const double q = std::pow(ratio, 1.0 / static_cast<double>(m - 1));
        for (std::size_t e = 1; e < m; ++e)
            widths[e] = widths[e - 1] * q;
    }
    double total = 0.0;
    for (double w : widths)
        total += w;

    std::vector<double> left(num_nodes);
    left[0] = 0.0;
    double acc = 0.0;
    for (std::size_t e = 0; e < m; ++e) {
        acc += widths[e];
        left[e + 1] = acc / total;
    }
    left.back() = 1.0;

    std::vector<double> nodes(num_nodes);
    const double len = b - a;
    for (std::size_t i = 0; i < num_nodes; ++i) {
        nodes[i] = side == Side::Left ? a + len * left[i]
                                      : b - len * left[num_nodes - 1 - i];
    }
    nodes.front() = a;
    nodes.back() = b;
    return Mesh1D(std::move(nodes));
}

Mesh1D mirrored(const Mesh1D& mesh)
{
    const std::size_t n = mesh.num_nodes();
    std::vector<double> nodes(n);
    for (std::size_t i = 0; i < n; ++i)
        nodes[i] = mesh.a() + mesh.b() - mesh.node(n - 1 - i);
    nodes.front() = mesh.a();
    nodes.back() = mesh.b();
    return Mesh1D(std::move(nodes), mesh.eps_min());
}

MeshMotion::MeshMotion(MotionKind kind, Mesh1D initial, Mesh1D target, double speed,
                       double horizon, double blend, double arrival)
    : kind_(kind), initial_(std::move(initial)), target_(std::move(target)), speed_(speed),
      horizon_(horizon), blend_(blend), arrival_(arrival)
{
}

MeshMotion static_motion(const Mesh1D& mesh, double horizon)
{
    if (!(horizon > 0.0))
        throw InvalidArgument("static_motion: horizon must be > 0");
    return MeshMotion(MotionKind::Static, mesh, mesh, 0.0, horizon, 0.0, 0.0);
}

MeshMotion traveling_motion(const Mesh1D& initial, double speed, double horizon)
{
    if (!(speed > 0.0))
        throw InvalidArgument("traveling_motion: speed must be > 0");
    if (!(horizon > 0.0))
        throw InvalidArgument("traveling_motion: horizon must be > 0");
    Mesh1D target = mirrored(initial);
    const double blend = kTravelBlend * initial.length();
    double arrival = 0.0;
    for (std::size_t i = 0; i < initial.num_nodes(); ++i) {
        const double d = std::abs(target.node(i) - initial.node(i));
        arrival = std::max(arrival, (d + std::min(blend, d)) / speed);
    }
    if (arrival > horizon) {
        std::ostringstream msg;
        msg << "traveling_motion: the nodes need " << arrival << " s at speed " << speed
            << ", longer than the horizon " << horizon;
        throw InvalidArgument(msg.str());
    }
    return MeshMotion(MotionKind::Traveling, initial, std::move(target), speed, horizon, blend,
                      arrival);
}

void MeshMotion::check_time(double t) const
{
    if (!(t >= 0.0 && t <= horizon_)) {
        std::ostringstream msg;
        msg << "MeshMotion: t = " << t << " outside [0, " << horizon_ << "]";
        throw OutOfRange(msg.str());
    }
}

namespace {

double smooth_ramp(double x)
{
    if (x <= -1.0)
        return 0.0;
    if (x >= 1.0)
        return x;
    return (x + 1.0) * (x + 1.0) * (x + 1.0) * (3.0 - x) / 16.0;
}

double smooth_ramp_slope(double x)
{
    if (x <= -1.0)
        return 0.0;
    if (x >= 1.0)
        return 1.0;
    return (x + 1.0) * (x + 1.0) * (2.0 - x) / 4.0;
}

} // namespace

double MeshMotion::travelled(std::size_t i, double t) const
{
    const double d = std::abs(target_.node(i) - initial_.node(i));
    if (d == 0.0)
        return 0.0;
    const double l = std::min(blend_, d);
    return d - l * smooth_ramp((d - speed_ * t) / l);
}

double MeshMotion::travel_rate(std::size_t i, double t) const
{
    const double d = std::abs(target_.node(i) - initial_.node(i));
    if (d == 0.0)
        return 0.0;
    const double l = std::min(blend_, d);
    return speed_ * smooth_ramp_slope((d - speed_ * t) / l);
}

std::vector<double> MeshMotion::nodes_at(double t) const
{
    check_time(t);
    const std::size_t n = num_nodes();
    std::vector<double> nodes(initial_.nodes().begin(), initial_.nodes().end());
    if (kind_ == MotionKind::Static)
        return nodes;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double dir = target_.node(i) >= initial_.node(i) ? 1.0 : -1.0;
        nodes[i] = initial_.node(i) + dir * travelled(i, t);
    }
    return nodes;
}

std::vector<double> MeshMotion::node_velocities_at(double t) const
{
    check_time(t);
    const std::size_t n = num_nodes();
    std::vector<double> v(n, 0.0);
    if (kind_ == MotionKind::Static)
        return v;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double dir = target_.node(i) >= initial_.node(i) ? 1.0 : -1.0;
        v[i] = dir * travel_rate(i, t);
    }
    return v;
}

Mesh1D MeshMotion::mesh_at(double t) const
{
    return Mesh1D(nodes_at(t), initial_.eps_min());
}

} // namespace tfem
