#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tfem {

/// Default minimum spacing, relative to the domain length.
inline constexpr double kDefaultRelativeMinSpacing = 1e-6;

/// Ordered nodes on [a, b] with pinned endpoints and spacing >= eps_min.
/// Immutable once constructed.
class Mesh1D {
public:
    /// Validates and adopts `nodes`. `eps_min <= 0` selects the default
    /// 1e-6 * (b - a).
    explicit Mesh1D(std::vector<double> nodes, double eps_min = 0.0);

    double a() const noexcept { return nodes_.front(); }
    double b() const noexcept { return nodes_.back(); }
    double length() const noexcept { return b() - a(); }
    double eps_min() const noexcept { return eps_min_; }

    std::size_t num_nodes() const noexcept { return nodes_.size(); }
    std::size_t num_elements() const noexcept { return nodes_.size() - 1; }
    std::span<const double> nodes() const noexcept { return nodes_; }
    double node(std::size_t i) const { return nodes_.at(i); }
    double spacing(std::size_t e) const { return nodes_.at(e + 1) - nodes_.at(e); }
    double min_spacing() const;
    double max_spacing() const;

    /// Index of the element containing z (clamped to the domain).
    std::size_t locate(double z) const;

private:
    std::vector<double> nodes_;
    double eps_min_;
};

enum class Side { Left, Right };

Mesh1D uniform_mesh(double a, double b, std::size_t num_nodes);

/// Geometric spacings with max/min = ratio, smallest element at `side`.
Mesh1D log_concentrated_mesh(double a, double b, std::size_t num_nodes, Side side, double ratio);

/// Image under z -> a + b - z.
Mesh1D mirrored(const Mesh1D& mesh);

enum class MotionKind { Static, Traveling };

/// Stopping blend length of the traveling schedule relative to b - a.
inline constexpr double kTravelBlend = 0.2;

/// Prescribed node trajectories z_i(t) on [0, horizon] with pinned endpoints.
///
/// The traveling schedule drifts every interior node toward its position in
/// the mirrored mesh at `speed`, and the node stops once it arrives. With
/// d_i = |target_i - initial_i| the distance covered by node i is
///   p_i(t) = d_i - l_i m((d_i - speed t) / l_i),  l_i = min(blend, d_i),
/// where m is the C2 smooth ramp (x + 1)^3 (3 - x) / 16 on [-1, 1] (0 below,
/// x above) and blend = kTravelBlend * (b - a). Every node reaches its target
/// by arrival_time() = max_i (d_i + l_i) / speed.
class MeshMotion {
public:
    MotionKind kind() const noexcept { return kind_; }
    const Mesh1D& initial() const noexcept { return initial_; }
    const Mesh1D& target() const noexcept { return target_; }
    double speed() const noexcept { return speed_; }
    double horizon() const noexcept { return horizon_; }
    double arrival_time() const noexcept { return arrival_; }
    std::size_t num_nodes() const noexcept { return initial_.num_nodes(); }

    std::vector<double> nodes_at(double t) const;
    std::vector<double> node_velocities_at(double t) const;
    Mesh1D mesh_at(double t) const;

    friend MeshMotion static_motion(const Mesh1D& mesh, double horizon);
    friend MeshMotion traveling_motion(const Mesh1D& initial, double speed, double horizon);

private:
    MeshMotion(MotionKind kind, Mesh1D initial, Mesh1D target, double speed, double horizon,
               double blend, double arrival);

    void check_time(double t) const;
    double travelled(std::size_t i, double t) const;
    double travel_rate(std::size_t i, double t) const;

    MotionKind kind_;
    Mesh1D initial_;
    Mesh1D target_;
    double speed_;
    double horizon_;
    double blend_;
    double arrival_;
};

MeshMotion static_motion(const Mesh1D& mesh, double horizon);
MeshMotion traveling_motion(const Mesh1D& initial, double speed, double horizon);

} // namespace tfem
