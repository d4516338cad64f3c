#include <gtest/gtest.h>

#include <cmath>

#include "tfem/error.hpp"
#include "tfem/mesh1d.hpp"

using namespace tfem;

TEST(Mesh1D, UniformSpacing)
{
    const Mesh1D m = uniform_mesh(-1.0, 3.0, 5);
    ASSERT_EQ(m.num_nodes(), 5u);
    EXPECT_EQ(m.num_elements(), 4u);
    for (std::size_t e = 0; e < 4; ++e)
        EXPECT_DOUBLE_EQ(m.spacing(e), 1.0);
    EXPECT_DOUBLE_EQ(m.a(), -1.0);
    EXPECT_DOUBLE_EQ(m.b(), 3.0);
}

TEST(Mesh1D, RejectsBadNodes)
{
    EXPECT_THROW(Mesh1D({0.0}), InvalidArgument);
    EXPECT_THROW(Mesh1D({1.0, 0.0}), InvalidArgument);
    EXPECT_THROW(Mesh1D({0.0, 0.5, 0.4, 1.0}), DegenerateMesh);
    EXPECT_THROW(Mesh1D({0.0, 0.5, 0.5 + 1e-9, 1.0}), DegenerateMesh);
    EXPECT_THROW(Mesh1D({0.0, 0.5, 0.6, 1.0}, 0.2), DegenerateMesh);
    EXPECT_THROW(Mesh1D({0.0, std::nan(""), 1.0}), InvalidArgument);
    EXPECT_NO_THROW(Mesh1D({0.0, 1e-5, 1.0}));
}

TEST(Mesh1D, LocateClampsToDomain)
{
    const Mesh1D m = uniform_mesh(0.0, 1.0, 5);
    EXPECT_EQ(m.locate(-1.0), 0u);
    EXPECT_EQ(m.locate(0.3), 1u);
    EXPECT_EQ(m.locate(1.0), 3u);
    EXPECT_EQ(m.locate(7.0), 3u);
}

TEST(LogConcentratedMesh, ThreeNodeExample)
{
    const Mesh1D m = log_concentrated_mesh(0.0, 1.0, 3, Side::Right, 2.0);
    EXPECT_NEAR(m.node(1), 2.0 / 3.0, 1e-15);
    const Mesh1D l = log_concentrated_mesh(0.0, 1.0, 3, Side::Left, 2.0);
    EXPECT_NEAR(l.node(1), 1.0 / 3.0, 1e-15);
}

TEST(LogConcentratedMesh, RatioAndGeometricWidths)
{
    const Mesh1D m = log_concentrated_mesh(0.0, 1.0, 21, Side::Right, 40.0);
    EXPECT_NEAR(m.max_spacing() / m.min_spacing(), 40.0, 1e-9);
    EXPECT_NEAR(m.spacing(19), m.min_spacing(), 1e-15);
    const double q = m.spacing(0) / m.spacing(1);
    for (std::size_t e = 1; e + 1 < 20; ++e)
        EXPECT_NEAR(m.spacing(e) / m.spacing(e + 1), q, 1e-12);
    EXPECT_DOUBLE_EQ(m.b(), 1.0);
    EXPECT_THROW(log_concentrated_mesh(0.0, 1.0, 5, Side::Left, 1.0), InvalidArgument);
}

TEST(Mesh1D, MirrorIsInvolution)
{
    const Mesh1D m = log_concentrated_mesh(2.0, 5.0, 9, Side::Left, 7.0);
    const Mesh1D r = mirrored(m);
    for (std::size_t i = 0; i < 9; ++i)
        EXPECT_NEAR(r.node(i), 7.0 - m.node(8 - i), 1e-14);
    const Mesh1D rr = mirrored(r);
    for (std::size_t i = 0; i < 9; ++i)
        EXPECT_NEAR(rr.node(i), m.node(i), 1e-14);
}

TEST(MeshMotion, StaticHasZeroVelocity)
{
    const MeshMotion s = static_motion(uniform_mesh(0.0, 1.0, 6), 2.0);
    for (double t : {0.0, 0.7, 2.0}) {
        for (double v : s.node_velocities_at(t))
            EXPECT_EQ(v, 0.0);
        const auto nodes = s.nodes_at(t);
        EXPECT_DOUBLE_EQ(nodes[3], 0.6);
    }
    EXPECT_THROW(s.nodes_at(2.5), OutOfRange);
    EXPECT_THROW(s.nodes_at(-0.1), OutOfRange);
}

class TravelingMotion : public ::testing::Test {
protected:
    Mesh1D initial = log_concentrated_mesh(0.0, 1.0, 21, Side::Right, 40.0);
    MeshMotion motion = traveling_motion(initial, 1.0, 2.0);
};

TEST_F(TravelingMotion, StartsAtInitialAndEndsMirrored)
{
    const auto n0 = motion.nodes_at(0.0);
    const auto n1 = motion.nodes_at(2.0);
    const Mesh1D target = mirrored(initial);
    for (std::size_t i = 0; i < 21; ++i) {
        EXPECT_DOUBLE_EQ(n0[i], initial.node(i));
        EXPECT_NEAR(n1[i], target.node(i), 1e-15);
    }
    EXPECT_LE(motion.arrival_time(), 2.0);
    for (double v : motion.node_velocities_at(motion.arrival_time()))
        EXPECT_NEAR(v, 0.0, 1e-15);
}

TEST_F(TravelingMotion, EndpointsPinnedAndOrderingKept)
{
    for (int k = 0; k <= 400; ++k) {
        const double t = 2.0 * k / 400.0;
        const auto nodes = motion.nodes_at(t);
        const auto v = motion.node_velocities_at(t);
        EXPECT_EQ(nodes.front(), 0.0);
        EXPECT_EQ(nodes.back(), 1.0);
        EXPECT_EQ(v.front(), 0.0);
        EXPECT_EQ(v.back(), 0.0);
        EXPECT_NO_THROW(motion.mesh_at(t));
        for (double vi : v)
            EXPECT_LE(std::abs(vi), 1.0 + 1e-15);
    }
}

TEST_F(TravelingMotion, NodesDriftAtSpeedBeforeStopping)
{
    // Interior nodes far from their target move at exactly the prescribed speed.
    const auto v = motion.node_velocities_at(0.1);
    int at_speed = 0;
    for (double vi : v)
        at_speed += std::abs(vi + 1.0) < 1e-15;
    EXPECT_GE(at_speed, 10);
}

TEST_F(TravelingMotion, VelocityMatchesFiniteDifference)
{
    const double delta = 1e-5;
    for (double t : {0.05, 0.3, 1.0, 0.5 * motion.horizon()}) {
        const auto v = motion.node_velocities_at(t);
        const auto p = motion.nodes_at(t + delta);
        const auto m = motion.nodes_at(t - delta);
        for (std::size_t i = 0; i < v.size(); ++i)
            EXPECT_NEAR(v[i], (p[i] - m[i]) / (2.0 * delta), 10.0 * delta * delta)
                << "t=" << t << " node " << i;
    }
}

TEST_F(TravelingMotion, MirroredInitialGivesMirroredTrajectory)
{
    const MeshMotion mirror = traveling_motion(mirrored(initial), 1.0, 2.0);
    for (double t : {0.0, 0.25, 0.8, 1.5}) {
        const auto a = motion.nodes_at(t);
        const auto b = mirror.nodes_at(t);
        for (std::size_t i = 0; i < a.size(); ++i)
            EXPECT_NEAR(b[i], 1.0 - a[a.size() - 1 - i], 1e-14);
    }
}

TEST(MeshMotionErrors, HorizonTooShortOrBadSpeed)
{
    const Mesh1D m = log_concentrated_mesh(0.0, 1.0, 11, Side::Right, 10.0);
    EXPECT_THROW(traveling_motion(m, 1.0, 0.01), InvalidArgument);
    EXPECT_THROW(traveling_motion(m, 0.0, 2.0), InvalidArgument);
    EXPECT_THROW(static_motion(m, 0.0), InvalidArgument);
}

TEST(MeshMotionErrors, SymmetricMeshDoesNotMove)
{
    const MeshMotion m = traveling_motion(uniform_mesh(0.0, 1.0, 6), 1.0, 1.0);
    EXPECT_LT(m.arrival_time(), 1e-12);
    for (double v : m.node_velocities_at(0.5))
        EXPECT_EQ(v, 0.0);
}
