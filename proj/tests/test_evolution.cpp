#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "arctrack/evolution.hpp"
#include "arctrack/rng.hpp"
#include "test_util.hpp"

using namespace arctrack;
using testutil::circle_window;

TEST_CASE("window push, eviction, monotone time", "[evolution]") {
    ObservationWindow w(5);
    w.push(0.0, {1.0, 2.0});
    CHECK(w.size() == 1);

    for (int k = 1; k <= 5; ++k) w.push(k * 1.0, {double(k), 0.0});
    CHECK(w.size() == 5);
    CHECK(w.front().pos.e == 1.0);  // oldest sample dropped

    CHECK_THROWS_AS(w.push(5.0, {0.0, 0.0}), NonMonotoneTime);
    CHECK_THROWS_AS(w.push(4.5, {0.0, 0.0}), NonMonotoneTime);
    CHECK_THROWS_AS(ObservationWindow(2), std::invalid_argument);
}

TEST_CASE("increments are consecutive differences", "[evolution]") {
    ObservationWindow w(4);
    w.push(0.0, {0.0, 0.0});
    w.push(1.0, {1.0, 0.0});
    w.push(2.0, {1.0, 1.0});
    const auto inc = build_increments(w);
    REQUIRE(inc.size() == 2);
    CHECK(inc[0].e == 1.0);
    CHECK(inc[0].n == 0.0);
    CHECK(inc[1].e == 0.0);
    CHECK(inc[1].n == 1.0);

    ObservationWindow one(3);
    one.push(0.0, {0.0, 0.0});
    CHECK_THROWS_AS(build_increments(one), InsufficientData);
}

TEST_CASE("circle increments all have the chord length", "[evolution]") {
    const double r = 10.0, delta = 0.05;
    const auto w = circle_window({0.0, 0.0}, r, delta, 0.1, 20);
    const double chord = 2.0 * r * std::sin(delta / 2.0);
    for (const Vec2& d : build_increments(w)) {
        CHECK(d.norm() == Catch::Approx(chord).epsilon(1e-12));
    }
}

TEST_CASE("evolution matrix recovered exactly on circles", "[evolution]") {
    const double delta = 0.05;
    const auto w = circle_window({0.0, 0.0}, 10.0, delta, 0.1, 20);
    const EvolutionMatrix ev = solve_evolution(build_increments(w));
    CHECK(std::abs(ev.c - std::cos(delta)) < 1e-12);
    CHECK(std::abs(ev.s - std::sin(delta)) < 1e-12);
    CHECK(std::abs(ev.delta - delta) < 1e-9);
    CHECK(std::abs(ev.c * ev.c + ev.s * ev.s - 1.0) < 1e-12);
}

TEST_CASE("straight-line and clockwise increment sequences", "[evolution]") {
    const std::vector<Vec2> straight{{1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}};
    const EvolutionMatrix ev = solve_evolution(straight);
    CHECK(ev.c == Catch::Approx(1.0));
    CHECK(ev.s == Catch::Approx(0.0).margin(1e-15));
    CHECK(ev.delta == Catch::Approx(0.0).margin(1e-15));

    const auto cw = circle_window({0.0, 0.0}, 10.0, -0.1, 0.1, 20);
    CHECK(std::abs(solve_evolution(build_increments(cw)).delta + 0.1) < 1e-9);
}

TEST_CASE("degenerate increment sets are rejected", "[evolution]") {
    CHECK_THROWS_AS(solve_evolution(std::vector<Vec2>{{1.0, 0.0}}), InsufficientData);
    const std::vector<Vec2> still{{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
    CHECK_THROWS_AS(solve_evolution(still), DegenerateIncrements);
    const std::vector<Vec2> tiny{{1e-12, 0.0}, {0.0, 1e-12}};
    CHECK_THROWS_AS(solve_evolution(tiny), DegenerateIncrements);
    // only the last increment is usable: nothing maps onto it
    const std::vector<Vec2> late{{0.0, 0.0}, {1.0, 0.0}};
    CHECK_THROWS_AS(solve_evolution(late), DegenerateIncrements);
}

TEST_CASE("unit norm holds for noisy increment sets", "[evolution]") {
    const CounterRng rng(41);
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
        std::vector<Vec2> inc;
        for (std::uint64_t j = 0; j < 12; ++j) {
            const auto [a, b] = rng.gaussian_pair(100 * trial + 2 * j);
            inc.push_back({1.0 + 0.3 * a, 0.3 * b});
        }
        const EvolutionMatrix ev = solve_evolution(inc);
        CHECK(std::abs(ev.c * ev.c + ev.s * ev.s - 1.0) < 1e-12);
        CHECK(ev.delta == std::atan2(ev.s, ev.c));
    }
}

TEST_CASE("curvature center, midpoint-corrected, exact on circles", "[evolution]") {
    const Vec2 center{3.0, 4.0};
    const auto w = circle_window(center, 10.0, 0.05, 0.1, 20);
    const EvolutionMatrix ev = solve_evolution(build_increments(w));
    const CurvatureEstimate est = curvature_center(w, ev, CenterMode::midpoint_corrected);
    REQUIRE(!est.straight_line);
    REQUIRE(est.center.has_value());
    CHECK((*est.center - center).norm() < 1e-9);
    CHECK(std::abs(*est.radius - 10.0) < 1e-9);
}

TEST_CASE("curvature center, raw mode, carries the forward-difference bias", "[evolution]") {
    const Vec2 center{3.0, 4.0};
    const double r = 10.0, delta = 0.05;
    const auto w = circle_window(center, r, delta, 0.1, 20);
    const EvolutionMatrix ev = solve_evolution(build_increments(w));
    const CurvatureEstimate est = curvature_center(w, ev, CenterMode::raw);
    REQUIRE(est.center.has_value());
    const double err = (*est.center - center).norm();
    CHECK(err < 0.5);
    // the bias is r*delta/2 to first order
    CHECK(err == Catch::Approx(r * delta / 2.0).margin(1e-3));
}

TEST_CASE("straight-line flag below the angle threshold", "[evolution]") {
    ObservationWindow w(8);
    for (int k = 0; k < 6; ++k) w.push(k * 0.1, {0.3 * k, 0.0});
    const EvolutionMatrix ev = solve_evolution(build_increments(w));
    const CurvatureEstimate est = curvature_center(w, ev, CenterMode::midpoint_corrected);
    CHECK(est.straight_line);
    CHECK(!est.center.has_value());
    CHECK(!est.radius.has_value());
    CHECK(est.speed == Catch::Approx(3.0));
    CHECK(est.direction.e == Catch::Approx(1.0));
}

TEST_CASE("speed estimate", "[evolution]") {
    ObservationWindow w(4);
    w.push(0.0, {0.0, 0.0});
    w.push(1.0, {1.0, 0.0});
    CHECK(estimate_speed(w) == Catch::Approx(1.0));

    ObservationWindow still(4);
    still.push(0.0, {2.0, 2.0});
    still.push(1.0, {2.0, 2.0});
    CHECK(estimate_speed(still) == 0.0);

    ObservationWindow one(3);
    one.push(0.0, {0.0, 0.0});
    CHECK_THROWS_AS(estimate_speed(one), InsufficientData);

    // chord speed on a circle underestimates arc speed by sinc(delta/2)
    const double speed = 5.0, dt = 0.1, delta = 0.05;
    const auto cw = circle_window({0.0, 0.0}, speed * dt / delta, delta, dt, 20);
    const double sinc = std::sin(delta / 2.0) / (delta / 2.0);
    CHECK(estimate_speed(cw) == Catch::Approx(speed * sinc).epsilon(1e-12));
}

TEST_CASE("exact recovery across radii, angles, phases", "[evolution]") {
    for (const double r : {1.0, 10.0, 1000.0}) {
        for (const double delta : {2e-4, 1e-3, 0.01, 0.1, 0.5}) {
            for (const double phase : {0.0, 1.1, 4.0}) {
                const Vec2 center{-7.0, 2.5};
                const auto w = circle_window(center, r, delta, 0.05, 20, phase);
                const EvolutionMatrix ev = solve_evolution(build_increments(w));
                CHECK(std::abs(ev.delta - delta) < 1e-9);
                const auto est = curvature_center(w, ev, CenterMode::midpoint_corrected);
                REQUIRE(est.center.has_value());
                CHECK((*est.center - center).norm() < 1e-9 * r);
            }
        }
    }
}

TEST_CASE("recovered angle is rotation invariant", "[evolution]") {
    const auto w = circle_window({2.0, -1.0}, 15.0, 0.08, 0.1, 16);
    const EvolutionMatrix base = solve_evolution(build_increments(w));

    const Vec2 pivot{100.0, -40.0};
    for (const double angle : {0.3, 2.0, -1.2}) {
        ObservationWindow rotated(16);
        for (const auto& s : w) {
            rotated.push(s.t, pivot + rotate(s.pos - pivot, angle));
        }
        const EvolutionMatrix ev = solve_evolution(build_increments(rotated));
        CHECK(std::abs(ev.delta - base.delta) < 1e-12);
    }
}

TEST_CASE("scaling positions scales the recovered geometry", "[evolution]") {
    const Vec2 center{3.0, 4.0};
    const auto w = circle_window(center, 10.0, 0.05, 0.1, 20);
    const auto base_ev = solve_evolution(build_increments(w));
    const auto base = curvature_center(w, base_ev, CenterMode::midpoint_corrected);

    for (const double scale : {0.25, 7.0}) {
        ObservationWindow scaled(20);
        for (const auto& s : w) scaled.push(s.t, s.pos * scale);
        const auto ev = solve_evolution(build_increments(scaled));
        CHECK(std::abs(ev.delta - base_ev.delta) < 1e-9);
        const auto est = curvature_center(scaled, ev, CenterMode::midpoint_corrected);
        REQUIRE(est.center.has_value());
        CHECK(std::abs(*est.radius - *base.radius * scale) < 1e-9 * *base.radius * scale);
        CHECK((*est.center - *base.center * scale).norm() < 1e-9 * scale * 10.0);
    }
}

TEST_CASE("full least-squares fit beats any single increment pair", "[evolution]") {
    // independent stacked-system solve, kept inside the test
    const auto fit = [](const std::vector<Vec2>& inc, std::size_t lo, std::size_t hi) {
        double num_c = 0.0, num_s = 0.0, den = 0.0;
        for (std::size_t j = lo; j < hi; ++j) {
            den += inc[j - 1].squared_norm();
            num_c += dot(inc[j - 1], inc[j]);
            num_s += cross(inc[j - 1], inc[j]);
        }
        return std::pair{num_c / den, num_s / den};
    };
    const auto residual = [](const std::vector<Vec2>& inc, double c, double s) {
        double sum = 0.0;
        for (std::size_t j = 1; j < inc.size(); ++j) {
            const Vec2 model = inc[j - 1] * c + inc[j - 1].perp() * s;
            sum += (inc[j] - model).squared_norm();
        }
        return sum;
    };

    const CounterRng rng(97);
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
        std::vector<Vec2> inc;
        Vec2 d{0.5, 0.0};
        for (std::uint64_t j = 0; j < 10; ++j) {
            d = rotate(d, 0.05);
            const auto [a, b] = rng.gaussian_pair(64 * trial + 2 * j);
            inc.push_back(d + Vec2{0.05 * a, 0.05 * b});
        }

        const auto [c_full, s_full] = fit(inc, 1, inc.size());
        const double full_res = residual(inc, c_full, s_full);
        for (std::size_t j = 1; j < inc.size(); ++j) {
            const auto [c1, s1] = fit(inc, j, j + 1);
            CHECK(full_res <= residual(inc, c1, s1) + 1e-12);
        }

        // the library solve agrees with the stacked system's direction
        const EvolutionMatrix ev = solve_evolution(inc);
        CHECK(std::abs(ev.delta - std::atan2(s_full, c_full)) < 1e-12);
    }
}
