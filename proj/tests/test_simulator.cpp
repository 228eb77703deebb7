#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "arctrack/rng.hpp"
#include "arctrack/simulator.hpp"

using namespace arctrack;

TEST_CASE("counter rng reproduces the splitmix64 reference stream", "[simulator]") {
    const CounterRng rng(0);
    CHECK(rng.at(0) == 0xe220a8397b1dcdafULL);
    CHECK(rng.at(1) == 0x6e789e6aa1b965f4ULL);
    CHECK(rng.at(2) == 0x06c45d188009454fULL);
    // stateless: order of evaluation is irrelevant
    CHECK(rng.at(1) == 0x6e789e6aa1b965f4ULL);

    const CounterRng other(42);
    CHECK(other.at(0) == 0xbdd732262feb6e95ULL);
    CHECK(rng.uniform01(0) == Catch::Approx(0.8833108082136426).epsilon(1e-15));
}

TEST_CASE("gaussian draws are standard normal shaped", "[simulator]") {
    const CounterRng rng(7);
    const int n = 20000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n / 2; ++i) {
        const auto [a, b] = rng.gaussian_pair(2 * i);
        sum += a + b;
        sum2 += a * a + b * b;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean) < 5.0 / std::sqrt(double(n)));
    CHECK(var == Catch::Approx(1.0).margin(0.05));
}

TEST_CASE("circle truth, first sample and step angle", "[simulator]") {
    ScenarioConfig cfg;
    cfg.kind = ScenarioKind::circle;
    cfg.radius = 10.0;
    cfg.speed = 5.0;
    cfg.dt = 0.1;
    cfg.steps = 10;
    const auto track = gen_circle(cfg);
    REQUIRE(track.size() == 10);
    CHECK(track[0].t == 0.0);
    CHECK((*track[0].truth - Vec2{10.0, 0.0}).norm() < 1e-15);

    // per-step rotation is speed*dt/radius = 0.05 rad
    for (std::size_t k = 0; k + 1 < track.size(); ++k) {
        const Vec2 a = *track[k].truth, b = *track[k + 1].truth;
        const double angle = std::atan2(cross(a, b), dot(a, b));
        CHECK(angle == Catch::Approx(0.05).epsilon(1e-12));
    }
}

TEST_CASE("circle speed follows the chord formula", "[simulator]") {
    ScenarioConfig cfg;
    cfg.radius = 7.0;
    cfg.speed = 4.0;
    cfg.dt = 0.25;
    cfg.steps = 50;
    cfg.phase0 = 0.8;
    const auto track = gen_circle(cfg);
    const double delta = cfg.speed * cfg.dt / cfg.radius;
    const double chord_speed = cfg.speed * std::sin(delta / 2.0) / (delta / 2.0);
    for (std::size_t k = 0; k + 1 < track.size(); ++k) {
        const double v = (*track[k + 1].truth - *track[k].truth).norm() / cfg.dt;
        CHECK(v == Catch::Approx(chord_speed).epsilon(1e-12));
    }
}

TEST_CASE("commensurate circle returns to its start", "[simulator]") {
    ScenarioConfig cfg;
    cfg.radius = 10.0;
    cfg.dt = 0.1;
    const std::size_t revolution = 126;
    cfg.speed = 2.0 * std::numbers::pi * cfg.radius / (double(revolution) * cfg.dt);
    cfg.steps = revolution + 1;
    const auto track = gen_circle(cfg);
    CHECK((*track.back().truth - *track.front().truth).norm() < 1e-9);
}

TEST_CASE("lemniscate endpoints and crossing", "[simulator]") {
    ScenarioConfig cfg;
    cfg.kind = ScenarioKind::lemniscate;
    cfg.center = {2.0, -3.0};
    cfg.radius = 10.0;  // halfwidth
    cfg.speed = 0.25;   // parameter rate
    cfg.steps = 1;

    const auto at_zero = gen_lemniscate(cfg);
    CHECK((*at_zero[0].truth - (cfg.center + Vec2{10.0, 0.0})).norm() < 1e-12);

    cfg.phase0 = std::numbers::pi / 2.0;
    const auto at_crossing = gen_lemniscate(cfg);
    CHECK((*at_crossing[0].truth - cfg.center).norm() < 1e-12);
}

TEST_CASE("lemniscate is symmetric under parameter reflection", "[simulator]") {
    for (const double u : {0.3, 1.0, 2.4}) {
        ScenarioConfig plus;
        plus.kind = ScenarioKind::lemniscate;
        plus.radius = 6.0;
        plus.speed = 0.25;
        plus.steps = 1;
        plus.phase0 = u;
        ScenarioConfig minus = plus;
        minus.phase0 = -u;

        const Vec2 p = *gen_lemniscate(plus)[0].truth;
        const Vec2 m = *gen_lemniscate(minus)[0].truth;
        CHECK(p.e == Catch::Approx(m.e).margin(1e-12));
        CHECK(p.n == Catch::Approx(-m.n).margin(1e-12));
    }
}

TEST_CASE("config validation", "[simulator]") {
    ScenarioConfig cfg;
    cfg.dt = 0.0;
    CHECK_THROWS_AS(gen_circle(cfg), ConfigError);
    cfg = {};
    cfg.steps = 0;
    CHECK_THROWS_AS(gen_circle(cfg), ConfigError);
    cfg = {};
    cfg.radius = -1.0;
    CHECK_THROWS_AS(gen_circle(cfg), ConfigError);
    cfg = {};
    cfg.dropout_prob = 1.5;
    CHECK_THROWS_AS(corrupt({}, cfg), ConfigError);
    cfg = {};
    cfg.noise_sigma = -0.1;
    CHECK_THROWS_AS(corrupt({}, cfg), ConfigError);
    cfg = {};
    cfg.kind = ScenarioKind::lemniscate;
    CHECK_THROWS_AS(gen_circle(cfg), ConfigError);
}

TEST_CASE("zero noise and zero dropouts copy the truth exactly", "[simulator]") {
    ScenarioConfig cfg;
    cfg.steps = 25;
    cfg.noise_sigma = 0.0;
    cfg.dropout_prob = 0.0;
    const auto track = corrupt(gen_circle(cfg), cfg);
    for (const TrackSample& s : track) {
        REQUIRE(s.meas.has_value());
        CHECK(s.meas->e == s.truth->e);
        CHECK(s.meas->n == s.truth->n);
    }
}

TEST_CASE("dropout probability one drops everything", "[simulator]") {
    ScenarioConfig cfg;
    cfg.steps = 25;
    cfg.dropout_prob = 1.0;
    const auto track = corrupt(gen_circle(cfg), cfg);
    for (const TrackSample& s : track) CHECK(!s.meas.has_value());
}

TEST_CASE("identical seeds reproduce bit-identical tracks", "[simulator]") {
    ScenarioConfig cfg;
    cfg.steps = 200;
    cfg.noise_sigma = 0.5;
    cfg.dropout_prob = 0.3;
    cfg.seed = 12345;
    const auto a = corrupt(gen_circle(cfg), cfg);
    const auto b = corrupt(gen_circle(cfg), cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].meas.has_value() == b[k].meas.has_value());
        if (a[k].meas) {
            CHECK(a[k].meas->e == b[k].meas->e);
            CHECK(a[k].meas->n == b[k].meas->n);
        }
    }

    cfg.seed = 54321;
    const auto c = corrupt(gen_circle(cfg), cfg);
    bool any_different = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k].meas && c[k].meas && a[k].meas->e != c[k].meas->e) any_different = true;
    }
    CHECK(any_different);
}

TEST_CASE("noise statistics over ten thousand samples", "[simulator]") {
    ScenarioConfig cfg;
    cfg.steps = 10000;
    cfg.noise_sigma = 0.5;
    cfg.seed = 3;
    const auto track = corrupt(gen_circle(cfg), cfg);

    double se = 0.0, sn = 0.0, se2 = 0.0, sn2 = 0.0;
    std::size_t n = 0;
    for (const TrackSample& s : track) {
        const Vec2 err = *s.meas - *s.truth;
        se += err.e;
        sn += err.n;
        se2 += err.e * err.e;
        sn2 += err.n * err.n;
        ++n;
    }
    const double mean_bound = 5.0 * cfg.noise_sigma / std::sqrt(double(n));
    CHECK(std::abs(se / n) < mean_bound);
    CHECK(std::abs(sn / n) < mean_bound);
    const double sd_e = std::sqrt(se2 / n - (se / n) * (se / n));
    const double sd_n = std::sqrt(sn2 / n - (sn / n) * (sn / n));
    CHECK(sd_e > 0.47);
    CHECK(sd_e < 0.53);
    CHECK(sd_n > 0.47);
    CHECK(sd_n < 0.53);
}

TEST_CASE("dropout frequency tracks the configured probability", "[simulator]") {
    ScenarioConfig cfg;
    cfg.steps = 10000;
    cfg.dropout_prob = 0.2;
    cfg.seed = 11;
    const auto track = corrupt(gen_circle(cfg), cfg);
    std::size_t dropped = 0;
    for (const TrackSample& s : track) dropped += !s.meas.has_value();
    const double rate = double(dropped) / double(cfg.steps);
    const double band = 5.0 * std::sqrt(0.2 * 0.8 / double(cfg.steps));
    CHECK(std::abs(rate - 0.2) < band);
}
