#include <doctest.h>

#include <cmath>

#include "foleylab/trajectory.hpp"
#include "rng.hpp"

using namespace foleylab;

namespace {

VisualCue cue_at(std::size_t frame, double x, double depth, double w = 1920.0) {
    VisualCue c;
    c.frame_index = frame;
    c.box_center_x = x;
    c.frame_width = w;
    c.frame_height = 1080.0;
    c.depth_m = depth;
    return c;
}

} // namespace

TEST_CASE("azimuth_from_cue: center, right edge, mirror") {
    CHECK(azimuth_from_cue(cue_at(0, 960.0, 3.7), 480.0) == doctest::Approx(90.0));
    // Offset (1920-960)/480 = 2 m at 2 m depth: atan(1) = 45 deg right of center.
    CHECK(azimuth_from_cue(cue_at(0, 1920.0, 2.0), 480.0) == doctest::Approx(135.0));
    CHECK(azimuth_from_cue(cue_at(0, 0.0, 2.0), 480.0) == doctest::Approx(45.0));
}

TEST_CASE("azimuth_from_cue: antisymmetry and monotonicity") {
    for (double x : {0.0, 137.0, 481.5, 960.0, 1200.0, 1919.0}) {
        for (double d : {0.5, 1.0, 2.5, 8.0}) {
            const double a = azimuth_from_cue(cue_at(0, x, d), 480.0);
            const double b = azimuth_from_cue(cue_at(0, 1920.0 - x, d), 480.0);
            CHECK(a + b == doctest::Approx(180.0).epsilon(1e-12));
        }
    }
    double prev = -1.0;
    for (double x = 0.0; x <= 1920.0; x += 64.0) {
        const double a = azimuth_from_cue(cue_at(0, x, 2.0), 480.0);
        CHECK(a > prev);
        prev = a;
    }
    // Deeper source at fixed offset pulls toward center.
    double prev_dev = 1e9;
    for (double d : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        const double dev = std::abs(azimuth_from_cue(cue_at(0, 1400.0, d), 480.0) - 90.0);
        CHECK(dev < prev_dev);
        prev_dev = dev;
    }
}

TEST_CASE("azimuth_from_cue: rejects bad inputs") {
    CHECK_THROWS_AS(azimuth_from_cue(cue_at(0, 960.0, 0.0), 480.0), Error);
    CHECK_THROWS_AS(azimuth_from_cue(cue_at(0, 960.0, -1.0), 480.0), Error);
    CHECK_THROWS_AS(azimuth_from_cue(cue_at(0, 960.0, 1.0), 0.0), Error);
}

TEST_CASE("interpolate_trajectory: constant, midpoint, keyframe exactness") {
    const auto constant = interpolate_trajectory({cue_at(3, 1400.0, 2.0)}, 25.0, 10, 480.0);
    REQUIRE(constant.length() == 10);
    for (const auto& p : constant.points) {
        CHECK(p.azimuth_deg == doctest::Approx(constant.points[0].azimuth_deg));
        CHECK(p.depth_m == doctest::Approx(2.0));
        CHECK(p.active == 1);
    }

    // Azimuth interpolates linearly between the keyframe azimuths.
    std::vector<VisualCue> cues{cue_at(0, 700.0, 1.0), cue_at(10, 1300.0, 3.0)};
    const auto traj = interpolate_trajectory(cues, 25.0, 12, 480.0);
    const double a0 = azimuth_from_cue(cues[0], 480.0);
    const double a1 = azimuth_from_cue(cues[1], 480.0);
    CHECK(traj.points[0].azimuth_deg == doctest::Approx(a0));
    CHECK(traj.points[10].azimuth_deg == doctest::Approx(a1));
    CHECK(traj.points[5].azimuth_deg == doctest::Approx(0.5 * (a0 + a1)));
    CHECK(traj.points[5].depth_m == doctest::Approx(2.0));
    CHECK(traj.points[11].azimuth_deg == doctest::Approx(a1)); // constant extrapolation

    // Depth midpoint example: 1 m at frame 0, 3 m at frame 4 -> 2 m at frame 2.
    const auto depth_traj =
        interpolate_trajectory({cue_at(0, 960.0, 1.0), cue_at(4, 960.0, 3.0)}, 25.0, 5, 480.0);
    CHECK(depth_traj.points[2].depth_m == doctest::Approx(2.0));
}

TEST_CASE("interpolate_trajectory: rejects bad keyframes") {
    CHECK_THROWS_AS(interpolate_trajectory({}, 25.0, 10, 480.0), Error);
    CHECK_THROWS_AS(
        interpolate_trajectory({cue_at(2, 1.0, 1.0), cue_at(2, 2.0, 1.0)}, 25.0, 10, 480.0),
        Error);
    CHECK_THROWS_AS(interpolate_trajectory({cue_at(10, 1.0, 1.0)}, 25.0, 10, 480.0), Error);
}

TEST_CASE("apply_activation: masking semantics") {
    const auto traj = interpolate_trajectory({cue_at(0, 1200.0, 2.0)}, 25.0, 5, 480.0);

    const auto all_on = apply_activation(traj, {1, 1, 1, 1, 1});
    for (std::size_t t = 0; t < 5; ++t) {
        CHECK(all_on.points[t].active == 1);
        CHECK(all_on.points[t].azimuth_deg == traj.points[t].azimuth_deg);
    }

    const auto masked = apply_activation(traj, {1, 1, 0, 0, 1});
    CHECK(masked.points[2].active == 0);
    CHECK(masked.points[3].active == 0);
    CHECK(masked.points[0].active == 1);
    CHECK(masked.points[4].active == 1);
    // Positional values survive masking; zeroing happens in feature space.
    CHECK(masked.points[2].azimuth_deg == traj.points[2].azimuth_deg);

    CHECK_THROWS_AS(apply_activation(traj, {1, 1}), Error);
}

// ---------------------------------------------------------------------------

TEST_CASE("fourier_features: origin, bounds, determinism") {
    FourierConfig cfg;
    cfg.bands = 16;
    cfg.sigma = 1.5;
    cfg.seed = 42;

    const auto at_origin = fourier_features(0.0, 0.0, cfg);
    REQUIRE(at_origin.size() == 32);
    for (std::size_t i = 0; i < 16; ++i) CHECK(at_origin[i] == doctest::Approx(1.0));
    for (std::size_t i = 16; i < 32; ++i) CHECK(at_origin[i] == doctest::Approx(0.0));

    const auto f1 = fourier_features(0.37, 0.81, cfg);
    const auto f2 = fourier_features(0.37, 0.81, cfg);
    CHECK(f1 == f2);
    for (double v : f1) {
        CHECK(v <= 1.0);
        CHECK(v >= -1.0);
    }
}

TEST_CASE("fourier_features: lipschitz bound from the projection") {
    FourierConfig cfg;
    cfg.bands = 8;
    cfg.sigma = 2.0;
    cfg.seed = 9;
    const auto proj = fourier_projection(cfg);
    double max_b = 0.0;
    for (double v : proj) max_b = std::max(max_b, std::abs(v));
    const double lipschitz = 2.0 * 3.14159265358979323846 * max_b;

    detail::Rng rng(123);
    for (int trial = 0; trial < 200; ++trial) {
        const double d0 = rng.next_double(), a0 = rng.next_double();
        const double d1 = rng.next_double(), a1 = rng.next_double();
        const auto f0 = fourier_features(d0, a0, proj, cfg.bands);
        const auto f1 = fourier_features(d1, a1, proj, cfg.bands);
        const double l1 = std::abs(d0 - d1) + std::abs(a0 - a1);
        for (std::size_t i = 0; i < f0.size(); ++i)
            CHECK(std::abs(f0[i] - f1[i]) <= lipschitz * l1 + 1e-12);
    }
}

TEST_CASE("modulate_mask: active and inactive scaling") {
    const std::vector<double> gamma{0.3, -0.7, 1.0, 0.0, -0.1234};

    const auto active = modulate_mask(gamma, 1, 0.1);
    const auto inactive = modulate_mask(gamma, 0, 0.1);
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        CHECK(active[i] == 1.1 * gamma[i]);   // bit-exact: (1 + 0.1) == 1.1
        CHECK(inactive[i] == 0.1 * gamma[i]);
        // The activation contributes exactly one unit of gamma.
        CHECK(active[i] - inactive[i] == doctest::Approx(gamma[i]).epsilon(1e-14));
    }

    const auto zero = modulate_mask(gamma, 0, 0.0);
    for (double v : zero) CHECK(v == 0.0);
    CHECK_THROWS_AS(modulate_mask(gamma, 1, -0.5), Error);
}

// ---------------------------------------------------------------------------

namespace {

Trajectory ramp_trajectory(std::size_t frames) {
    Trajectory traj;
    traj.fps = 25.0;
    traj.points.resize(frames);
    for (std::size_t t = 0; t < frames; ++t) {
        traj.points[t].depth_m = 1.0 + 0.01 * static_cast<double>(t % 50);
        traj.points[t].azimuth_deg = 45.0 + static_cast<double>(t % 90);
        traj.points[t].active = 1;
    }
    return traj;
}

} // namespace

TEST_CASE("encode_positions: row counts match ceil(T/r)") {
    FourierConfig cfg;
    cfg.bands = 8;
    cfg.seed = 3;
    for (std::size_t T : {1u, 2u, 3u, 15u, 16u, 17u, 100u, 160u, 511u, 512u}) {
        for (std::size_t r : {1u, 2u, 4u, 8u, 16u}) {
            const auto emb = encode_positions(ramp_trajectory(T), cfg, r, 32, 7);
            CHECK(emb.frames == (T + r - 1) / r);
            CHECK(emb.dim == 32);
            CHECK(emb.values.size() == emb.frames * emb.dim);
            for (double v : emb.values) CHECK(std::isfinite(v));
        }
    }
    const auto emb = encode_positions(ramp_trajectory(160), cfg, 16, 32, 7);
    CHECK(emb.frames == 10);
}

TEST_CASE("encode_positions: deterministic and mask sensitive") {
    FourierConfig cfg;
    cfg.bands = 8;
    cfg.seed = 21;
    const Trajectory traj = ramp_trajectory(64);

    const auto a = encode_positions(traj, cfg, 4, 48, 99);
    const auto b = encode_positions(traj, cfg, 4, 48, 99);
    CHECK(a.values == b.values); // byte-exact across runs

    Trajectory masked = traj;
    masked.points[10].active = 0;
    const auto c = encode_positions(masked, cfg, 4, 48, 99);
    double max_diff = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        max_diff = std::max(max_diff, std::abs(a.values[i] - c.values[i]));
    CHECK(max_diff > 1e-9);

    CHECK_THROWS_AS(encode_positions(traj, cfg, 3, 48, 99), Error); // not a power of two
}
