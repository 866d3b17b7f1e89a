#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gac/energy.hpp"

#include <sstream>

using namespace gac;

namespace {
const PowerProfile kDefault{};  // Table values, fix duration 5 s
}

TEST_CASE("continuous GPS draws the measured 135 mA") {
    for (double t : {5.0, 10.0, 60.0, 3600.0})
        CHECK(average_current_mA(SchemeKind::GpsContinuous, t, kDefault) == 135.0);
}

TEST_CASE("duty-cycle anchors") {
    CHECK(average_current_mA(SchemeKind::GacAccFree, 60.0, kDefault) ==
          doctest::Approx(11.25).epsilon(1e-12));
    CHECK(average_current_mA(SchemeKind::Gac, 60.0, kDefault) ==
          doctest::Approx(26.25).epsilon(1e-12));
    CHECK(average_current_mA(SchemeKind::EnLoc, 60.0, kDefault) ==
          doctest::Approx(11.25).epsilon(1e-12));
}

TEST_CASE("charge per hour") {
    CHECK(charge_per_hour_mAh(SchemeKind::GpsContinuous, 60.0, kDefault) == 135.0);
    CHECK(charge_per_hour_mAh(SchemeKind::GacAccFree, 3600.0, kDefault) ==
          doctest::Approx(0.1875).epsilon(1e-12));
    CHECK(charge_per_hour_mAh(SchemeKind::Gac, 3600.0, kDefault) ==
          doctest::Approx(15.1875).epsilon(1e-12));
}

TEST_CASE("savings ratios") {
    CHECK(savings_ratio(SchemeKind::GacAccFree, 60.0, kDefault) ==
          doctest::Approx(12.0).epsilon(1e-12));
    CHECK(savings_ratio(SchemeKind::Gac, 60.0, kDefault) ==
          doctest::Approx(135.0 / 26.25).epsilon(1e-12));
    CHECK(savings_ratio(SchemeKind::GpsContinuous, 60.0, kDefault) == 1.0);
}

TEST_CASE("current decreases strictly with the sync period") {
    const double periods[] = {10, 20, 30, 60, 120, 240, 480};
    for (SchemeKind scheme : {SchemeKind::Gac, SchemeKind::GacAccFree, SchemeKind::EnLoc}) {
        double prev = 1e9;
        for (double t : periods) {
            const double cur = average_current_mA(scheme, t, kDefault);
            CHECK(cur < prev);
            prev = cur;
        }
    }
}

TEST_CASE("gac sits exactly one Normal-mode accelerometer above gac-accfree") {
    for (double t : {5.0, 7.5, 10.0, 33.0, 60.0, 240.0, 480.0, 86400.0}) {
        const double gap = average_current_mA(SchemeKind::Gac, t, kDefault) -
                           average_current_mA(SchemeKind::GacAccFree, t, kDefault);
        CHECK(gap == doctest::Approx(15.0).epsilon(1e-12));
        CHECK(average_current_mA(SchemeKind::EnLoc, t, kDefault) ==
              average_current_mA(SchemeKind::GacAccFree, t, kDefault));
    }
}

TEST_CASE("asymptotics as the sync period grows") {
    // gac-accfree savings diverge; gac savings approach 135/15 = 9
    CHECK(savings_ratio(SchemeKind::GacAccFree, 1e9, kDefault) > 1e6);
    CHECK(savings_ratio(SchemeKind::Gac, 1e9, kDefault) == doctest::Approx(9.0).epsilon(1e-6));
    // and gac current approaches the accelerometer floor from above
    CHECK(average_current_mA(SchemeKind::Gac, 1e9, kDefault) ==
          doctest::Approx(15.0).epsilon(1e-6));
}

TEST_CASE("receiver must be able to turn off") {
    CHECK_THROWS_AS(average_current_mA(SchemeKind::Gac, 4.0, kDefault), DomainError);
    CHECK_THROWS_AS(average_current_mA(SchemeKind::EnLoc, 4.999, kDefault), DomainError);
    CHECK(average_current_mA(SchemeKind::EnLoc, 5.0, kDefault) == 135.0);  // never off, but legal
}

TEST_CASE("scheme names round-trip") {
    for (SchemeKind s : {SchemeKind::GpsContinuous, SchemeKind::Gac, SchemeKind::GacAccFree,
                         SchemeKind::EnLoc})
        CHECK(parse_scheme(scheme_name(s)) == s);
    CHECK_THROWS_AS(parse_scheme("warp-drive"), DomainError);
}

TEST_CASE("profile file overrides named fields") {
    std::istringstream in(
        "# measured on other hardware\n"
        "gps_current_mA=150\n"
        "accel_normal_mA=12\n"
        "fix_duration_s=2\n");
    const PowerProfile p = load_power_profile(in);
    CHECK(p.gps_current_mA == 150.0);
    CHECK(p.accel_normal_mA == 12.0);
    CHECK(p.fix_duration_s == 2.0);
    CHECK(p.accel_ui_mA == 25.0);  // untouched default

    CHECK(average_current_mA(SchemeKind::Gac, 60.0, p) ==
          doctest::Approx(150.0 * 2.0 / 60.0 + 12.0).epsilon(1e-12));

    std::istringstream bad("accel_normal_mA: 12\n");
    CHECK_THROWS_AS(load_power_profile(bad), ParseError);
    std::istringstream unknown("warp_core_mA=1\n");
    CHECK_THROWS_AS(load_power_profile(unknown), ParseError);
    std::istringstream negative("gps_current_mA=-3\n");
    CHECK_THROWS_AS(load_power_profile(negative), DomainError);
}
