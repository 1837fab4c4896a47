#include <doctest.h>

#include "qwalk/oracle.hpp"
#include "qwalk/walk.hpp"

#include <cmath>
#include <cstdlib>

using namespace qwalk;

TEST_CASE("green solve conserves probability on the truncated box") {
    auto w = WalkParams::simple_cross();
    auto r = dp_solve(w, 200);
    double hsum = 0, htsum = 0;
    for (double v : r.h) hsum += v;
    for (double v : r.ht) htsum += v;
    CHECK(r.absorbed == doctest::Approx(hsum + htsum + r.h00).epsilon(1e-12));
    CHECK(r.absorbed + r.escaped == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.at(w.n0(), w.m0()) >= 1.0);
    CHECK(r.h00 == doctest::Approx(w.p(-1, -1) * r.at(1, 1)).epsilon(1e-14));
    // one-step lower bounds from the start (1,1)
    CHECK(r.h[1] >= w.p(0, -1));
    CHECK(r.ht[1] >= w.p(-1, 0));
}

TEST_CASE("symmetric walk gives a symmetric green function") {
    auto w = WalkParams::simple_cross(); // invariant under swapping the axes
    auto r = dp_solve(w, 120);
    for (int i = 1; i <= 10; ++i)
        for (int j = 1; j <= 10; ++j)
            CHECK(r.at(i, j) == doctest::Approx(r.at(j, i)).epsilon(1e-10));
    for (int k = 1; k <= 20; ++k) CHECK(r.h[k] == doctest::Approx(r.ht[k]).epsilon(1e-10));
}

TEST_CASE("box truncation error decays fast") {
    auto w = WalkParams::order6_drifted();
    auto a = dp_solve(w, 120);
    auto b = dp_solve(w, 180);
    for (int k = 1; k <= 20; ++k) CHECK(std::abs(a.h[k] - b.h[k]) < 1e-12);
    for (int i = 1; i <= 6; ++i)
        for (int j = 1; j <= 6; ++j) CHECK(std::abs(a.at(i, j) - b.at(i, j)) < 1e-12);
}

TEST_CASE("absorption total lies inside the harmonic bounds") {
    // starting from (5,5) on the cross walk the crude two-sided bound is
    // A = 2 (2/3)^5 with the true value in [A/2, A]
    std::array<std::array<double, 3>, 3> p{};
    p[2][1] = 0.3; p[1][2] = 0.3; p[0][1] = 0.2; p[1][0] = 0.2;
    auto r = dp_solve(WalkParams(p, 5, 5), 200);
    double A = 2.0 * std::pow(2.0 / 3.0, 5);
    CHECK(r.absorbed <= A);
    CHECK(r.absorbed >= A / 2);
}

TEST_CASE("monte carlo is deterministic and thread count invariant") {
    auto w = WalkParams::order8();
    setenv("QWALK_THREADS", "1", 1);
    auto a = mc_absorb(w, 20000, 42);
    auto b = mc_absorb(w, 20000, 42);
    setenv("QWALK_THREADS", "3", 1);
    auto c = mc_absorb(w, 20000, 42);
    unsetenv("QWALK_THREADS");
    CHECK(a.absorbed_x == b.absorbed_x);
    CHECK(a.absorbed_y == c.absorbed_y);
    CHECK(a.corner == c.corner);
    CHECK(a.escaped == c.escaped);
    for (size_t k = 0; k < a.hx_counts.size(); ++k) CHECK(a.hx_counts[k] == c.hx_counts[k]);
    CHECK(a.absorbed_x + a.absorbed_y + a.corner + a.escaped == a.paths);
}

TEST_CASE("monte carlo agrees with the lattice solve") {
    auto w = WalkParams::simple_cross();
    auto dp = dp_solve(w, 200);
    auto mc = mc_absorb(w, 400000, 7);
    double sigma = mc.sigma_absorbed();
    CHECK(std::abs(mc.p_absorbed() - dp.absorbed) < 3.5 * sigma);
    // per-site absorption for the first few sites
    for (int k = 1; k <= 5; ++k) {
        double est = static_cast<double>(mc.hx_counts[static_cast<size_t>(k)]) /
                     static_cast<double>(mc.paths);
        double s = std::sqrt(dp.h[k] * (1 - dp.h[k]) / static_cast<double>(mc.paths));
        CHECK(std::abs(est - dp.h[k]) < 4.0 * s + 1e-12);
    }
}
