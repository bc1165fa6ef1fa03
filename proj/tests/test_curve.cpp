#include <cmath>
#include <random>

#include "axiscat/curve.hpp"
#include "doctest.h"

using namespace axiscat;

namespace {
BandLimitedRadialCurve star8() {
    std::vector<double> pc(8, 0.0), ps(8, 0.0);
    pc[7] = 0.3;  // mode j = 8
    return BandLimitedRadialCurve(1.5, pc, ps);
}
}  // namespace

TEST_CASE("eval_radial") {
    BandLimitedRadialCurve unit(1.0, {}, {});
    CHECK(eval_radial(unit, 0.3) == doctest::Approx(1.0).epsilon(1e-15));

    // star profile of the 8-lobed example: p(0.5) = 1.5 + 0.3
    CHECK(eval_radial(star8(), 0.5) == doctest::Approx(1.8).epsilon(1e-14));

    BandLimitedRadialCurve s(0.0, {0.0}, {1.0});
    CHECK(eval_radial(s, 0.75) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("curve frame") {
    BandLimitedRadialCurve unit(1.0, {}, {});
    auto mid = eval_curve_frame(unit, 0.5);
    CHECK(mid.r == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(mid.z) < 1e-15);
    CHECK(mid.nr == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(mid.nz) < 1e-14);

    auto south = eval_curve_frame(unit, 0.0);
    CHECK(south.r == 0.0);  // exactly on the axis
    CHECK(south.z == doctest::Approx(-1.0));
    auto north = eval_curve_frame(unit, 1.0);
    CHECK(north.r == 0.0);
    CHECK(north.z == doctest::Approx(1.0));

    CHECK(eval_curve_frame(star8(), 0.5).r == doctest::Approx(1.8));
}

TEST_CASE("frame position matches radial profile times direction") {
    auto c = star8();
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> ut(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        double t = ut(rng);
        auto q = eval_curve_frame(c, t);
        double p = eval_radial(c, t);
        CHECK(std::abs(q.r - p * std::sin(kPi * std::min(t, 1 - t))) < 1e-14);
        CHECK(std::abs(q.z - p * std::sin(kPi * (t - 0.5))) < 1e-14);
        CHECK(std::hypot(q.nr, q.nz) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(q.jacobian ==
              doctest::Approx(std::hypot(q.dr_dt, q.dz_dt)).epsilon(1e-14));
    }
}

TEST_CASE("analytic derivatives match finite differences") {
    auto c = star8();
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ut(0.01, 0.99);
    const double h = 1e-6;
    for (int i = 0; i < 100; ++i) {
        double t = ut(rng);
        auto q = eval_curve_frame(c, t);
        auto qp = eval_curve_frame(c, t + h);
        auto qm = eval_curve_frame(c, t - h);
        double fd_r = (qp.r - qm.r) / (2 * h);
        double fd_z = (qp.z - qm.z) / (2 * h);
        CHECK(std::abs(q.dr_dt - fd_r) <= 1e-8 * std::max(1.0, std::abs(q.dr_dt)));
        CHECK(std::abs(q.dz_dt - fd_z) <= 1e-8 * std::max(1.0, std::abs(q.dz_dt)));
    }
}

TEST_CASE("positivity validation") {
    std::vector<double> pc = {-1.2}, ps = {0.0};
    BandLimitedRadialCurve bad(1.0, pc, ps);
    CHECK_THROWS_AS(bad.validate(), SolverError);
    CHECK_NOTHROW(star8().validate());
}

TEST_CASE("build_panels") {
    BandLimitedRadialCurve unit(1.0, {}, {});
    SUBCASE("arclength bound and total length") {
        auto d = build_panels(unit, 1.0, 12.0);
        const double bound = 2.0 * kPi * 16.0 / 12.0;
        for (const auto& p : d.panels) CHECK(p.arclength <= bound);
        CHECK(d.total_arclength() == doctest::Approx(kPi).epsilon(1e-10));
        // quadrature of 1 over the curve reproduces the arclength to 1e-12
        double s = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) s += d.wt[i] * d.jac[i];
        CHECK(s == doctest::Approx(kPi).epsilon(1e-12));
    }
    SUBCASE("refinement is monotone in k") {
        auto d1 = build_panels(unit, 4.0, 12.0);
        auto d2 = build_panels(unit, 8.0, 12.0);
        CHECK(d2.panels.size() >= d1.panels.size());
    }
    SUBCASE("12 ppw invariant for the star profile") {
        auto d = build_panels(star8(), 6.5, 12.0);
        const double bound = (2.0 * kPi / 6.5) * (16.0 / 12.0);
        for (const auto& p : d.panels) CHECK(p.arclength <= bound * (1 + 1e-12));
        // tiling of (0,1) without overlap; open nodes
        for (std::size_t i = 0; i + 1 < d.panels.size(); ++i)
            CHECK(d.panels[i].t1 == doctest::Approx(d.panels[i + 1].t0));
        for (double t : d.t) {
            CHECK(t > 0.0);
            CHECK(t < 1.0);
        }
    }
    SUBCASE("panel cap") {
        DiscretizationOptions opt;
        opt.max_panels = 2;
        CHECK_THROWS_AS(build_panels(star8(), 40.0, 12.0, opt), SolverError);
    }
}

TEST_CASE("axis frame transforms") {
    SUBCASE("identity frame") {
        AxisFrame f;
        Vec3 p{1, 2, 3};
        auto q = world_to_axis_frame(p, f);
        CHECK(q[0] == doctest::Approx(1.0));
        CHECK(q[1] == doctest::Approx(2.0));
        CHECK(q[2] == doctest::Approx(3.0));
    }
    SUBCASE("axis maps to +z") {
        AxisFrame f;
        f.polar = kPi / 2;
        f.azimuth = 0.0;  // axis along +x
        auto q = world_to_axis_frame({1, 0, 0}, f);
        CHECK(std::abs(q[0]) < 1e-15);
        CHECK(std::abs(q[1]) < 1e-15);
        CHECK(q[2] == doctest::Approx(1.0));
    }
    SUBCASE("round trip") {
        AxisFrame f;
        f.polar = kPi / 3;
        f.azimuth = kPi / 4;
        f.center_x = 2.0;
        f.center_y = 2.0;
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-3, 3);
        for (int i = 0; i < 50; ++i) {
            Vec3 p{u(rng), u(rng), u(rng)};
            auto q = axis_frame_to_world(world_to_axis_frame(p, f), f);
            for (int c = 0; c < 3; ++c) CHECK(std::abs(q[c] - p[c]) < 1e-14);
        }
    }
    SUBCASE("oblique ellipsoid surface maps onto the aligned one") {
        // axes 1 and 2: generating curve r = cos, z = 2 sin of the polar angle
        AxisFrame f;
        f.polar = kPi / 3;
        f.azimuth = kPi / 4;
        f.center_x = 2.0;
        f.center_y = 2.0;
        for (int i = 0; i <= 20; ++i) {
            double a = kPi * (i / 20.0 - 0.5);
            Vec3 aligned{std::cos(a), 0.0, 2.0 * std::sin(a)};
            // rotate the aligned surface point into the world and back
            auto world = axis_frame_to_world(aligned, f);
            auto back = world_to_axis_frame(world, f);
            CHECK(std::hypot(back[0] - aligned[0], back[2] - aligned[2]) < 1e-13);
            // surface equation in body coordinates: r^2 + (z/2)^2 = 1
            double rr = std::hypot(back[0], back[1]);
            CHECK(rr * rr + back[2] * back[2] / 4.0 ==
                  doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}
