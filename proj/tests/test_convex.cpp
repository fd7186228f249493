#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "conebary/convex.hpp"
#include "conebary/errors.hpp"
#include "oracles.hpp"

using namespace conebary;

namespace {

PosDefMatrix scalar(double v) {
    Mat m(1, 1);
    m(0, 0) = v;
    return PosDefMatrix(m);
}

PointTuple random_tuple(std::mt19937_64& rng, int n, int dim, double spread = 1.5) {
    std::vector<PosDefMatrix> pts;
    pts.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) pts.emplace_back(oracles::random_spd(rng, dim, spread));
    return PointTuple(std::move(pts));
}

}  // namespace

TEST_SUITE("convex") {

TEST_CASE("assignment solver equals factorial brute force") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    std::uniform_int_distribution<int> size(1, 6);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = size(rng);
        Eigen::MatrixXd cost(n, n);
        std::vector<std::vector<double>> rows(static_cast<size_t>(n),
                                              std::vector<double>(static_cast<size_t>(n)));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                cost(i, j) = u(rng);
                rows[static_cast<size_t>(i)][static_cast<size_t>(j)] = cost(i, j);
            }
        }
        CHECK(std::abs(assignment_min_cost(cost) - oracles::assignment_brute_force(rows)) <=
              1e-12);
    }
}

TEST_CASE("tuple_dist closed forms") {
    const PointTuple a({scalar(1.0), scalar(std::exp(2.0))});
    const PointTuple b({scalar(std::exp(1.0)), scalar(std::exp(1.0))});
    CHECK(tuple_dist(a, a) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(tuple_dist(a, b) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tuple_dist is a permutation-insensitive metric") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 40; ++trial) {
        const PointTuple a = random_tuple(rng, 4, 3);
        const PointTuple b = random_tuple(rng, 4, 3);
        const PointTuple c = random_tuple(rng, 4, 3);
        const double dab = tuple_dist(a, b);
        CHECK(std::abs(dab - tuple_dist(b, a)) <= 1e-10);
        CHECK(dab + tuple_dist(b, c) - tuple_dist(a, c) >= -1e-9);

        std::vector<PosDefMatrix> shuffled(a.begin(), a.end());
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(tuple_dist(a, PointTuple(shuffled)) <= 1e-10);
    }
}

TEST_CASE("tuple_diam") {
    CHECK(tuple_diam(PointTuple({scalar(3.0)})) == doctest::Approx(0.0));
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = std::exp(2.0);
    m(1, 1) = std::exp(-1.0);
    const PointTuple pair({PosDefMatrix(Mat::Identity(2, 2)), PosDefMatrix(m)});
    CHECK(tuple_diam(pair) == doctest::Approx(2.0).epsilon(1e-12));

    std::mt19937_64 rng(43);
    const PointTuple a = random_tuple(rng, 4, 3);
    const InvertibleMatrix g(oracles::random_invertible(rng, 3));
    std::vector<PosDefMatrix> moved;
    for (const auto& p : a) moved.push_back(congruence(g, p));
    CHECK(tuple_diam(PointTuple(moved)) == doctest::Approx(tuple_diam(a)).epsilon(1e-9));
}

TEST_CASE("convex-close predicate") {
    std::mt19937_64 rng(44);
    const PointTuple a = random_tuple(rng, 4, 3);
    for (const auto& p : a) CHECK(is_convex_close(p, a));
    CHECK(is_convex_close(geodesic(a[0], a[1], 0.5), PointTuple({a[0], a[1]})));

    // A point far from every member fails.
    const double diam = tuple_diam(a);
    const PosDefMatrix far(std::exp(4.0 * (diam + 1.0)) * a[0].entries());
    CHECK_FALSE(is_convex_close(far, a));
}

TEST_CASE("x_pi membership mirrors convex-close with margin") {
    const PosDefMatrix id(Mat::Identity(2, 2));
    const XPiReport r = x_pi_member(id, PointTuple({id}));
    CHECK(r.member);
    CHECK(r.margin == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.orbit_diam == doctest::Approx(0.0));
}

TEST_CASE("nearest points with deterministic ties") {
    const PosDefMatrix id(Mat::Identity(2, 2));
    const PosDefMatrix e2(std::exp(1.0) * Mat::Identity(2, 2));
    const NearestPair r = nearest_points(PointTuple({id}), PointTuple({e2}));
    CHECK(r.i == 0);
    CHECK(r.j == 0);
    CHECK(r.dist == doctest::Approx(1.0).epsilon(1e-12));

    // Equal candidates: the lexicographically first pair wins.
    const NearestPair tie = nearest_points(PointTuple({id, id}), PointTuple({id, id}));
    CHECK(tie.i == 0);
    CHECK(tie.j == 0);
    CHECK(tie.dist <= 1e-12);

    std::mt19937_64 rng(45);
    const PointTuple a = random_tuple(rng, 3, 2);
    const PointTuple b = random_tuple(rng, 4, 2);
    const NearestPair got = nearest_points(a, b);
    double best = 1e30;
    for (int i = 0; i < a.size(); ++i) {
        for (int j = 0; j < b.size(); ++j) best = std::min(best, thompson_dist(a[i], b[j]));
    }
    CHECK(got.dist == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("circumcenter closed forms") {
    const CircumReport single = circumcenter_estimate(PointTuple({scalar(5.0)}));
    CHECK(single.radius_estimate == doctest::Approx(0.0));
    CHECK(single.center_estimate.entries()(0, 0) == doctest::Approx(5.0));

    // Scalar interval {1, e^4}: center e^2, radius 2 in log coordinates.
    const CircumReport interval =
        circumcenter_estimate(PointTuple({scalar(1.0), scalar(std::exp(4.0))}));
    CHECK(interval.radius_estimate == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(std::log(interval.center_estimate.entries()(0, 0)) ==
          doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("two-point circumcenter is the midpoint") {
    std::mt19937_64 rng(46);
    for (int trial = 0; trial < 10; ++trial) {
        const PosDefMatrix x(oracles::random_spd(rng, 3));
        const PosDefMatrix y(oracles::random_spd(rng, 3));
        const PointTuple pair({x, y});
        const CircumReport r = circumcenter_estimate(pair);
        const double d = thompson_dist(x, y);
        CHECK(std::abs(r.radius_estimate - 0.5 * d) <= 1e-4 * std::max(1.0, d));
        CHECK(thompson_dist(r.center_estimate, geodesic(x, y, 0.5)) <= 1e-3);
    }
}

TEST_CASE("circumradius bracket and convex-closeness of the center") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 25; ++trial) {
        const PointTuple a = random_tuple(rng, 2 + trial % 4, 3);
        const CircumReport r = circumcenter_estimate(a);
        const double diam = tuple_diam(a);
        CHECK(r.radius_estimate >= 0.5 * diam - 1e-6);
        CHECK(r.radius_estimate <= diam + 1e-6);
        CHECK(is_convex_close(r.center_estimate, a, 1e-6));
    }
}

TEST_CASE("near-circumcenters stay good along connecting geodesics") {
    // d-convexity of the objective: points between two near-optimal centers
    // are near-optimal too.
    std::mt19937_64 rng(48);
    const PointTuple a = random_tuple(rng, 4, 3);
    const CircumReport r = circumcenter_estimate(a);
    auto f = [&](const PosDefMatrix& x) {
        double worst = 0.0;
        for (const auto& p : a) worst = std::max(worst, thompson_dist(x, p));
        return worst;
    };
    const double tol = 1e-2;
    const PosDefMatrix c1 = r.center_estimate;
    // Second near-center: nudge along a geodesic toward a tuple point, then
    // only keep it if still within tol of optimal.
    const PosDefMatrix c2 = geodesic(c1, a[0], 0.005);
    if (f(c2) <= r.radius_estimate + tol) {
        for (double t : {0.25, 0.5, 0.75}) {
            CHECK(f(geodesic(c1, c2, t)) <= r.radius_estimate + 2.0 * tol);
        }
    }
}

TEST_CASE("size and dimension validation") {
    std::mt19937_64 rng(49);
    const PointTuple a = random_tuple(rng, 3, 2);
    const PointTuple b = random_tuple(rng, 4, 2);
    CHECK_THROWS_AS(tuple_dist(a, b), SizeMismatch);
    CHECK_THROWS_AS((void)PointTuple(std::vector<PosDefMatrix>{}), SizeMismatch);
}

}  // TEST_SUITE
