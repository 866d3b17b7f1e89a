#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gac/geodesy.hpp"

#include <cmath>
#include <random>

using namespace gac;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Independent oracle for meridian distances: the classic series
// expansion of the meridian arc from the equator to latitude phi,
// truncated at e^8 (error well below 0.1 mm on WGS-84). Kept separate
// from the Vincenty code on purpose.
double meridian_arc_m(double lat_deg) {
    const double a = kWgs84.semi_major_m;
    const double f = kWgs84.flattening;
    const double e2 = f * (2.0 - f);
    const double e4 = e2 * e2, e6 = e4 * e2, e8 = e4 * e4;

    const double c0 = 1.0 - e2 / 4.0 - 3.0 * e4 / 64.0 - 5.0 * e6 / 256.0 - 175.0 * e8 / 16384.0;
    const double c2 = 3.0 * e2 / 8.0 + 3.0 * e4 / 32.0 + 45.0 * e6 / 1024.0 + 105.0 * e8 / 4096.0;
    const double c4 = 15.0 * e4 / 256.0 + 45.0 * e6 / 1024.0 + 525.0 * e8 / 16384.0;
    const double c6 = 35.0 * e6 / 3072.0 + 175.0 * e8 / 12288.0;
    const double c8 = 315.0 * e8 / 131072.0;

    const double phi = lat_deg * kPi / 180.0;
    return a * (c0 * phi - c2 * std::sin(2.0 * phi) + c4 * std::sin(4.0 * phi) -
                c6 * std::sin(6.0 * phi) + c8 * std::sin(8.0 * phi));
}

// Latitude whose meridian arc equals the given distance (bisection).
double meridian_lat_for_distance(double distance_m) {
    double lo = 0.0, hi = 90.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (meridian_arc_m(mid) < distance_m ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("normalize_bearing wraps into [0,360)") {
    CHECK(normalize_bearing(-90.0).deg == doctest::Approx(270.0));
    CHECK(normalize_bearing(360.0).deg == doctest::Approx(0.0));
    CHECK(normalize_bearing(725.0).deg == doctest::Approx(5.0));
    CHECK(normalize_bearing(0.0).deg == 0.0);
    CHECK_THROWS_AS(normalize_bearing(std::nan("")), DomainError);
    CHECK_THROWS_AS(normalize_bearing(INFINITY), DomainError);

    // periodicity: x + 360k maps to the same bearing
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(-720.0, 720.0);
    for (int i = 0; i < 200; ++i) {
        const double x = angle(rng);
        const double base = normalize_bearing(x).deg;
        CHECK(normalize_bearing(x + 360.0 * 3).deg == doctest::Approx(base).epsilon(1e-12));
        CHECK(normalize_bearing(x - 360.0 * 2).deg == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("vincenty_direct: zero displacement is the identity") {
    const GeoPoint p{37.25, -3.5};
    const GeoPoint q = vincenty_direct(p, Bearing{123.0}, 0.0);
    CHECK(q.lat_deg == p.lat_deg);
    CHECK(q.lon_deg == p.lon_deg);

    // longitude comes back normalized
    const GeoPoint wrapped = vincenty_direct(GeoPoint{10.0, 200.0}, Bearing{0.0}, 0.0);
    CHECK(wrapped.lon_deg == -160.0);
}

TEST_CASE("vincenty_direct: meridian arc against the independent series") {
    const double distance = 111319.49;
    const GeoPoint dest = vincenty_direct(GeoPoint{0.0, 0.0}, Bearing{0.0}, distance);
    const double lat_oracle = meridian_lat_for_distance(distance);

    CHECK(dest.lon_deg == 0.0);
    CHECK(dest.lat_deg == doctest::Approx(lat_oracle).epsilon(1e-9));
    CHECK(dest.lat_deg == doctest::Approx(1.00673).epsilon(1e-5));
}

TEST_CASE("vincenty_direct: due north from the equator leaves longitude untouched") {
    for (double lon : {-179.0, -45.0, 0.0, 91.5}) {
        for (double d : {1.0, 5000.0, 1.0e6}) {
            const GeoPoint dest = vincenty_direct(GeoPoint{0.0, lon}, Bearing{0.0}, d);
            CHECK(std::fabs(dest.lon_deg - lon) < 1e-12);
            CHECK(dest.lat_deg > 0.0);
        }
    }
}

TEST_CASE("vincenty_inverse: coincident points") {
    const auto sol = vincenty_inverse(GeoPoint{12.0, 34.0}, GeoPoint{12.0, 34.0});
    CHECK(sol.distance_m == 0.0);
    CHECK(sol.initial_bearing.deg >= 0.0);
    CHECK(sol.initial_bearing.deg < 360.0);
}

TEST_CASE("vincenty_inverse: one degree along the equator") {
    // the equator is a geodesic circle of radius a, so the arc is a * lambda
    const double expected = kWgs84.semi_major_m * kPi / 180.0;
    const auto sol = vincenty_inverse(GeoPoint{0.0, 0.0}, GeoPoint{0.0, 1.0});
    CHECK(sol.distance_m == doctest::Approx(expected).epsilon(1e-12));
    CHECK(sol.initial_bearing.deg == doctest::Approx(90.0).epsilon(1e-9));
    CHECK(expected == doctest::Approx(111319.49).epsilon(1e-7));
}

TEST_CASE("vincenty_inverse: antipodal inputs do not converge") {
    CHECK_THROWS_AS(vincenty_inverse(GeoPoint{0.0, 0.0}, GeoPoint{0.0, 180.0}), ConvergenceError);
    CHECK_THROWS_AS(vincenty_inverse(GeoPoint{0.0, 0.0}, GeoPoint{0.5, 179.7}), ConvergenceError);
}

TEST_CASE("round trip: inverse recovers direct inputs to 0.5 mm and 1e-6 deg") {
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> lat(-89.9, 89.9);
    std::uniform_real_distribution<double> lon(-180.0, 180.0);
    std::uniform_real_distribution<double> brg(0.0, 360.0);
    std::uniform_real_distribution<double> dist(1.0, 100000.0);

    for (int i = 0; i < 2000; ++i) {
        const GeoPoint origin{lat(rng), normalize_lon(lon(rng))};
        const Bearing bearing = normalize_bearing(brg(rng));
        const double d = dist(rng);

        const GeoPoint dest = vincenty_direct(origin, bearing, d);
        const auto sol = vincenty_inverse(origin, dest);

        REQUIRE(std::fabs(sol.distance_m - d) < 0.5e-3);
        double bearing_err = std::fabs(sol.initial_bearing.deg - bearing.deg);
        if (bearing_err > 180.0) bearing_err = 360.0 - bearing_err;
        REQUIRE(bearing_err < 1e-6);
    }
}

TEST_CASE("haversine: coincident points and the equatorial closed form") {
    CHECK(haversine_distance_m(GeoPoint{10.0, 20.0}, GeoPoint{10.0, 20.0}) == 0.0);

    // R * dLambda for two equatorial points; R = 6371008.8 m gives
    // 111195.08 m (111194.9 corresponds to the rounder R = 6371000)
    const double expected = kMeanEarthRadiusM * kPi / 180.0;
    CHECK(haversine_distance_m(GeoPoint{0.0, 0.0}, GeoPoint{0.0, 1.0}) ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(111194.9).epsilon(2e-6));
}

TEST_CASE("haversine: metric properties on random points") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> lat(-89.0, 89.0);
    std::uniform_real_distribution<double> lon(-180.0, 180.0);

    auto random_point = [&]() { return GeoPoint{lat(rng), normalize_lon(lon(rng))}; };

    for (int i = 0; i < 500; ++i) {
        const GeoPoint a = random_point(), b = random_point(), c = random_point();
        const double ab = haversine_distance_m(a, b);
        const double ba = haversine_distance_m(b, a);
        const double bc = haversine_distance_m(b, c);
        const double ac = haversine_distance_m(a, c);

        CHECK(ab == ba);            // symmetry
        CHECK(ab >= 0.0);           // nonnegativity
        CHECK(ac <= ab + bc + 1e-6);  // triangle inequality
    }

    // zero iff coincident: a 1 m displacement is clearly visible
    const GeoPoint p{45.0, 9.0};
    const GeoPoint q = vincenty_direct(p, Bearing{77.0}, 1.0);
    CHECK(haversine_distance_m(p, q) > 0.5);
}

TEST_CASE("haversine tracks the ellipsoidal distance within 0.6% under 1000 km") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> lat(-80.0, 80.0);
    std::uniform_real_distribution<double> lon(-180.0, 180.0);
    std::uniform_real_distribution<double> brg(0.0, 360.0);
    std::uniform_real_distribution<double> dist(100.0, 1.0e6);

    for (int i = 0; i < 500; ++i) {
        const GeoPoint a{lat(rng), normalize_lon(lon(rng))};
        const GeoPoint b = vincenty_direct(a, normalize_bearing(brg(rng)), dist(rng));
        const double ell = vincenty_inverse(a, b).distance_m;
        const double sph = haversine_distance_m(a, b);
        CHECK(std::fabs(sph - ell) / ell < 0.006);
    }
}

TEST_CASE("domain validation") {
    CHECK_THROWS_AS(vincenty_direct(GeoPoint{91.0, 0.0}, Bearing{0.0}, 10.0), DomainError);
    CHECK_THROWS_AS(vincenty_direct(GeoPoint{0.0, 0.0}, Bearing{0.0}, -1.0), DomainError);
    CHECK_THROWS_AS(vincenty_direct(GeoPoint{0.0, 0.0}, Bearing{0.0}, std::nan("")), DomainError);
    CHECK_THROWS_AS(vincenty_direct(GeoPoint{0.0, 0.0}, Bearing{0.0}, 2.1e7), DomainError);
    CHECK_THROWS_AS(vincenty_inverse(GeoPoint{std::nan(""), 0.0}, GeoPoint{0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(make_geo_point(-90.5, 0.0), DomainError);
    CHECK(make_geo_point(10.0, 270.0).lon_deg == -90.0);
}
