#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gac/estimators.hpp"
#include "gac/synth.hpp"

#include <cmath>
#include <map>
#include <random>

using namespace gac;

namespace {

constexpr double kG = 9.80665;

GpsFix fix_at(std::int64_t t_ms, double lat, double lon, double speed) {
    GpsFix f;
    f.t_ms = t_ms;
    f.pos = make_geo_point(lat, lon);
    f.speed_mps = speed;
    f.bearing_deg = Bearing{0.0};
    f.fix_duration_s = 5.0;
    return f;
}

SensorSample sample_at(std::int64_t t_ms, double forward_accel, double heading,
                       double lateral = 0.0) {
    SensorSample s;
    s.t_ms = t_ms;
    s.accel_mps2 = {lateral, forward_accel, -kG};
    s.heading_deg = normalize_bearing(heading);
    return s;
}

EstimatorConfig config_with(double tgsync, int window = 4) {
    EstimatorConfig c;
    c.T_s = 0.25;
    c.T_Gsync_s = tgsync;
    c.smoothing_window = window;
    return c;
}

Trace straight_zero_noise_trace(double duration_s, double speed, double bearing = 0.0) {
    Scenario sc;
    sc.name = "straight";
    sc.start = make_geo_point(31.0, 30.0);
    sc.start_speed_mps = speed;
    sc.start_bearing = normalize_bearing(bearing);
    sc.segments = {{duration_s, 0.0, 0.0}};
    const GroundTruth truth = generate_truth(sc, 0.25);
    return render_trace(truth, NoiseModel{0, 0, 0, 0, 1}, 0.25, 1.0);
}

double max_error_vs_truth(const std::vector<LocationEstimate>& estimates,
                          const GroundTruth& truth) {
    std::map<std::int64_t, GeoPoint> truth_at;
    for (const TruthPoint& p : truth.points) truth_at[p.t_ms] = p.pos;
    double worst = 0.0;
    for (const LocationEstimate& e : estimates) {
        const auto it = truth_at.find(e.t_ms);
        if (it != truth_at.end())
            worst = std::max(worst, haversine_distance_m(e.pos, it->second));
    }
    return worst;
}

}  // namespace

TEST_CASE("gac_init copies the fix") {
    const GpsFix f = fix_at(1000, 30.0, 31.0, 15.0);
    const EstimatorState s = gac_init(f, config_with(60.0));
    CHECK(s.pos.lat_deg == 30.0);
    CHECK(s.pos.lon_deg == 31.0);
    CHECK(s.speed_mps == 15.0);
    CHECK(s.phase == EstimatorPhase::DeadReckoning);
    CHECK(s.smoothing_buffer.empty());
    CHECK(s.last_sync_t_ms == 1000);

    const EstimatorState zero = gac_init(fix_at(0, 30.0, 31.0, 0.0), config_with(60.0));
    CHECK(zero.speed_mps == 0.0);

    const EstimatorState again = gac_init(f, config_with(60.0));
    CHECK(again.pos.lat_deg == s.pos.lat_deg);
    CHECK(again.speed_mps == s.speed_mps);
}

TEST_CASE("gac_step: cruise at 10 m/s moves 2.5 m along the heading") {
    EstimatorState state = gac_init(fix_at(0, 0.0, 0.0, 10.0), config_with(60.0));
    const LocationEstimate est = gac_step(state, sample_at(0, 0.0, 0.0), config_with(60.0));

    CHECK(est.t_ms == 250);
    CHECK(est.speed_mps == 10.0);

    const GeoPoint oracle = vincenty_direct(GeoPoint{0.0, 0.0}, Bearing{0.0}, 2.5);
    CHECK(haversine_distance_m(est.pos, oracle) < 1e-9);
    CHECK(est.pos.lon_deg == 0.0);

    // latitude delta of a 2.5 m northward move: about 2.2483e-5 degrees
    // (exact value depends on the local meridian radius)
    CHECK(est.pos.lat_deg == doctest::Approx(2.2483e-5).epsilon(0.01));
}

TEST_CASE("gac_step: acceleration from rest") {
    EstimatorState state = gac_init(fix_at(0, 31.0, 30.0, 0.0), config_with(60.0));
    const LocationEstimate est = gac_step(state, sample_at(0, 1.0, 0.0), config_with(60.0));

    CHECK(est.speed_mps == doctest::Approx(0.25).epsilon(1e-12));
    const double moved = vincenty_inverse(GeoPoint{31.0, 30.0}, est.pos).distance_m;
    CHECK(moved == doctest::Approx(0.03125).epsilon(1e-6));
}

TEST_CASE("gac_step: braking noise at standstill is clamped") {
    EstimatorState state = gac_init(fix_at(0, 31.0, 30.0, 0.0), config_with(60.0));
    const LocationEstimate est = gac_step(state, sample_at(0, -1.0, 0.0), config_with(60.0));

    CHECK(est.speed_mps == 0.0);
    CHECK(est.pos.lat_deg == 31.0);  // no reverse motion
    CHECK(est.pos.lon_deg == 30.0);
}

TEST_CASE("gac_step requires an initialized estimator") {
    EstimatorState state;
    CHECK_THROWS_AS(gac_step(state, sample_at(0, 0.0, 0.0), config_with(60.0)), DomainError);
}

TEST_CASE("estimator config is validated") {
    const GpsFix f = fix_at(0, 31.0, 30.0, 5.0);
    EstimatorConfig bad_window = config_with(60.0);
    bad_window.smoothing_window = 0;
    CHECK_THROWS_AS(gac_init(f, bad_window), DomainError);

    EstimatorConfig bad_period = config_with(60.0);
    bad_period.T_Gsync_s = 0.1;  // below T
    CHECK_THROWS_AS(gac_init(f, bad_period), DomainError);

    EstimatorConfig bad_t = config_with(60.0);
    bad_t.T_s = 0.0;
    CHECK_THROWS_AS(gac_init(f, bad_t), DomainError);
}

TEST_CASE("a fix-only trace degenerates to the initial sync estimate") {
    Trace trace;
    trace.gps_stream.push_back(fix_at(0, 31.0, 30.0, 5.0));
    const auto estimates = run_gac(trace, config_with(60.0));
    REQUIRE(estimates.size() == 1);
    CHECK(estimates[0].source == EstimateSource::GpsSync);
    CHECK(estimates[0].pos.lat_deg == 31.0);
}

TEST_CASE("gac_sync resets exactly and is idempotent") {
    EstimatorState state = gac_init(fix_at(0, 31.0, 30.0, 10.0), config_with(60.0));
    for (int i = 0; i < 10; ++i)
        gac_step(state, sample_at(250 * i, 0.3, 45.0), config_with(60.0));
    CHECK(state.pos.lat_deg != 31.0);

    const GpsFix f = fix_at(2500, 31.001, 30.001, 7.5);
    const LocationEstimate est = gac_sync(state, f);
    CHECK(state.pos.lat_deg == 31.001);
    CHECK(state.pos.lon_deg == 30.001);
    CHECK(state.speed_mps == 7.5);
    CHECK(state.smoothing_buffer.empty());
    CHECK(state.last_sync_t_ms == 2500);
    CHECK(est.source == EstimateSource::GpsSync);
    CHECK(haversine_distance_m(est.pos, f.pos) == 0.0);

    const EstimatorState before = state;
    gac_sync(state, f);
    CHECK(state.pos.lat_deg == before.pos.lat_deg);
    CHECK(state.speed_mps == before.speed_mps);
}

TEST_CASE("detect_constant_speed") {
    auto fixes = [](std::initializer_list<double> speeds) {
        std::vector<GpsFix> v;
        std::int64_t t = 0;
        for (double s : speeds) v.push_back(fix_at(t += 1000, 31.0, 30.0, s));
        return v;
    };
    CHECK(detect_constant_speed(fixes({10.0, 10.2, 10.4}), 0.5));
    CHECK_FALSE(detect_constant_speed(fixes({10.0, 10.6}), 0.5));
    CHECK(detect_constant_speed(fixes({7.0, 7.0}), 0.5));
    CHECK_THROWS_AS(detect_constant_speed(fixes({7.0}), 0.5), DomainError);
}

TEST_CASE("orientation correction: level device gives the identity") {
    EstimatorState state = gac_init(fix_at(0, 31.0, 30.0, 10.0), config_with(60.0));
    std::vector<SensorSample> seg;
    for (int i = 0; i < 8; ++i) seg.push_back(sample_at(250 * i, 0.0, 0.0));
    REQUIRE(update_orientation_correction(state, seg));
    REQUIRE(state.gravity_estimate_mps2.has_value());

    const Vec3 v{0.3, 1.7, -kG};
    const Vec3 r = state.orientation_correction.apply(v);
    CHECK(r[0] == doctest::Approx(v[0]).epsilon(1e-15));
    CHECK(r[1] == doctest::Approx(v[1]).epsilon(1e-15));
    CHECK(r[2] == doctest::Approx(v[2]).epsilon(1e-15));
}

TEST_CASE("orientation correction: 10 degree pitch is undone") {
    const double p = 10.0 * 3.14159265358979 / 180.0;
    EstimatorState state = gac_init(fix_at(0, 31.0, 30.0, 10.0), config_with(60.0));

    // gravity as seen by a device pitched 10 degrees
    std::vector<SensorSample> seg;
    for (int i = 0; i < 8; ++i) {
        SensorSample s;
        s.t_ms = 250 * i;
        s.accel_mps2 = {0.0, -kG * std::sin(p), -kG * std::cos(p)};
        s.heading_deg = Bearing{0.0};
        seg.push_back(s);
    }
    REQUIRE(update_orientation_correction(state, seg));

    // oracle: explicit rotation matrix for +10 degrees about x
    const double rot[3][3] = {{1, 0, 0},
                              {0, std::cos(p), -std::sin(p)},
                              {0, std::sin(p), std::cos(p)}};
    const Vec3 g_meas{0.0, -kG * std::sin(p), -kG * std::cos(p)};
    Vec3 expected{};
    for (int r = 0; r < 3; ++r)
        expected[r] = rot[r][0] * g_meas[0] + rot[r][1] * g_meas[1] + rot[r][2] * g_meas[2];
    CHECK(expected[0] == doctest::Approx(0.0));
    CHECK(expected[1] == doctest::Approx(0.0));
    CHECK(expected[2] == doctest::Approx(-kG));

    const Vec3 corrected_g = state.orientation_correction.apply(g_meas);
    CHECK(corrected_g[0] == doctest::Approx(0.0));
    CHECK(corrected_g[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(corrected_g[2] == doctest::Approx(-kG).epsilon(1e-12));

    // a pure forward acceleration (world frame) as measured by the
    // pitched device projects back to its full magnitude
    const double a = 1.8;
    const Vec3 measured{0.0, a * std::cos(p) - kG * std::sin(p),
                        -a * std::sin(p) - kG * std::cos(p)};
    const Vec3 corrected = state.orientation_correction.apply(measured);
    CHECK(corrected[1] == doctest::Approx(a).epsilon(1e-12));
    CHECK(corrected[2] == doctest::Approx(-kG).epsilon(1e-12));
}

TEST_CASE("orientation correction rejects contaminated segments") {
    EstimatorState state = gac_init(fix_at(0, 31.0, 30.0, 10.0), config_with(60.0));
    std::vector<SensorSample> seg;
    for (int i = 0; i < 8; ++i) {
        SensorSample s;
        s.t_ms = 250 * i;
        s.accel_mps2 = {0.0, 0.0, -7.0};  // magnitude 7 < 0.8 g
        seg.push_back(s);
    }
    CHECK_FALSE(update_orientation_correction(state, seg));
    CHECK_FALSE(state.gravity_estimate_mps2.has_value());
}

TEST_CASE("run_gac: zero-noise straight cruise stays on the truth") {
    Scenario sc;
    sc.name = "cruise";
    sc.start = make_geo_point(31.0, 30.0);
    sc.start_speed_mps = 12.0;
    sc.start_bearing = normalize_bearing(30.0);
    sc.segments = {{600.0, 0.0, 0.0}};
    const GroundTruth truth = generate_truth(sc, 0.25);
    const Trace trace = render_trace(truth, NoiseModel{0, 0, 0, 0, 1}, 0.25, 1.0);

    const auto estimates = run_gac(trace, config_with(60.0));
    CHECK(max_error_vs_truth(estimates, truth) < 0.01);
}

TEST_CASE("run_gac: piecewise-constant maneuvers are exact with window 1") {
    Scenario sc;
    sc.name = "maneuvers";
    sc.start = make_geo_point(31.1, 29.9);
    sc.start_speed_mps = 10.0;
    sc.start_bearing = normalize_bearing(0.0);
    sc.segments = {{60, 0, 0},   {10, 1.0, 0}, {30, 0, 3.0},  {60, 0, 0},
                   {5, -2.0, 0}, {20, 0, 0},   {15, 0, -6.0}, {60, 0, 0}};
    const GroundTruth truth = generate_truth(sc, 0.25);
    const Trace trace = render_trace(truth, NoiseModel{0, 0, 0, 0, 1}, 0.25, 1.0);

    const auto estimates = run_gac(trace, config_with(60.0, 1));
    CHECK(max_error_vs_truth(estimates, truth) < 0.01);
}

TEST_CASE("run_gac: gravity correction learned on a constant-speed segment rescues a tilted mount") {
    Scenario sc;
    sc.name = "tilted";
    sc.start = make_geo_point(31.0, 30.0);
    sc.start_speed_mps = 15.0;
    sc.start_bearing = Bearing{0.0};
    sc.segments = {{120.0, 0.0, 0.0}, {10.0, 1.0, 0.0}, {110.0, 0.0, 0.0}};
    const GroundTruth truth = generate_truth(sc, 0.25);
    const Trace trace =
        render_trace(truth, NoiseModel{0, 0, 0, 0, 1}, 0.25, 1.0, MountAttitude{10.0, 0.0});

    std::map<std::int64_t, GeoPoint> truth_at;
    for (const TruthPoint& p : truth.points) truth_at[p.t_ms] = p.pos;

    // a 10 degree pitch leaks -g*sin(10deg) = -1.7 m/s^2 into the forward
    // axis; uncorrected dead reckoning decelerates to a standstill
    auto worst_after_first_window = [&](bool corrected) {
        EstimatorConfig config = config_with(60.0, 1);
        config.orientation_correction_enabled = corrected;
        double worst = 0.0;
        for (const auto& e : run_gac(trace, config)) {
            const auto it = truth_at.find(e.t_ms);
            if (e.t_ms > 60000 && it != truth_at.end())
                worst = std::max(worst, haversine_distance_m(e.pos, it->second));
        }
        return worst;
    };

    // the first inter-fix window certifies constant speed, so the
    // correction is in force from the 60 s sync onward
    CHECK(worst_after_first_window(true) < 0.01);
    CHECK(worst_after_first_window(false) > 100.0);
}

TEST_CASE("run_gac: sync schedule follows T_Gsync") {
    const Trace trace = straight_zero_noise_trace(300.0, 10.0);
    const auto estimates = run_gac(trace, config_with(60.0));

    std::vector<std::int64_t> syncs;
    for (const auto& e : estimates)
        if (e.source == EstimateSource::GpsSync) syncs.push_back(e.t_ms);

    REQUIRE(syncs.size() == 6);  // t = 0, 60, ..., 300 s
    for (std::size_t i = 0; i < syncs.size(); ++i)
        CHECK(syncs[i] == static_cast<std::int64_t>(i) * 60000);
}

TEST_CASE("run_gac: continuous sync reproduces the GPS track at fix instants") {
    const Trace trace = straight_zero_noise_trace(30.0, 8.0);
    const auto estimates = run_gac(trace, config_with(1.0));

    std::size_t n_sync = 0;
    for (const auto& e : estimates)
        if (e.source == EstimateSource::GpsSync) {
            const auto& fix = trace.gps_stream[n_sync++];
            CHECK(e.t_ms == fix.t_ms);
            CHECK(haversine_distance_m(e.pos, fix.pos) == 0.0);
        }
    CHECK(n_sync == trace.gps_stream.size());
}

TEST_CASE("run_gac needs at least one fix") {
    Trace trace;
    trace.sensor_stream.push_back(sample_at(0, 0.0, 0.0));
    CHECK_THROWS_AS(run_gac(trace, config_with(60.0)), DomainError);
}

TEST_CASE("smoothing is neutral on a constant stream") {
    const Trace trace = straight_zero_noise_trace(120.0, 9.0, 77.0);
    const auto base = run_gac(trace, config_with(60.0, 1));
    for (int window : {2, 4, 8}) {
        const auto other = run_gac(trace, config_with(60.0, window));
        REQUIRE(other.size() == base.size());
        for (std::size_t i = 0; i < base.size(); ++i) {
            CHECK(haversine_distance_m(base[i].pos, other[i].pos) < 1e-6);
            CHECK(std::fabs(base[i].speed_mps - other[i].speed_mps) < 1e-9);
        }
    }
}

TEST_CASE("speed never goes negative under noisy braking") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> accel(-4.0, 1.0);
    std::uniform_real_distribution<double> heading(0.0, 360.0);

    Trace trace;
    trace.meta.sample_interval_T_s = 0.25;
    trace.gps_stream.push_back(fix_at(0, 31.0, 30.0, 3.0));
    for (int i = 1; i <= 400; ++i)
        trace.sensor_stream.push_back(sample_at(250 * i, accel(rng), heading(rng)));

    for (const auto& e : run_gac(trace, config_with(3600.0)))
        CHECK(e.speed_mps >= 0.0);
}

TEST_CASE("enloc extrapolates the previous two fixes linearly") {
    Trace trace;
    trace.meta.sample_interval_T_s = 0.25;
    trace.gps_stream.push_back(fix_at(0, 0.0, 0.0, 1.8));
    trace.gps_stream.push_back(fix_at(60000, 0.001, 0.0, 1.8));
    for (int i = 1; i <= 480; ++i) trace.sensor_stream.push_back(sample_at(250 * i, 0.0, 0.0));

    const auto estimates = run_enloc(trace, config_with(60.0));

    bool found = false;
    for (const auto& e : estimates)
        if (e.t_ms == 120000) {
            found = true;
            CHECK(e.source == EstimateSource::Predicted);
            CHECK(e.pos.lat_deg == doctest::Approx(0.002).epsilon(1e-12));
            CHECK(e.pos.lon_deg == doctest::Approx(0.0));
        }
    CHECK(found);

    // before the second fix the first one is held
    for (const auto& e : estimates)
        if (e.t_ms > 0 && e.t_ms < 60000) {
            CHECK(e.pos.lat_deg == 0.0);
            CHECK(e.source == EstimateSource::Predicted);
        }
}

TEST_CASE("enloc on a constant-velocity meridian run is nearly exact") {
    const Trace trace = straight_zero_noise_trace(300.0, 20.0);  // 6 km north
    Scenario sc;
    sc.name = "straight";
    sc.start = make_geo_point(31.0, 30.0);
    sc.start_speed_mps = 20.0;
    sc.start_bearing = Bearing{0.0};
    sc.segments = {{300.0, 0.0, 0.0}};
    const GroundTruth truth = generate_truth(sc, 0.25);

    // extrapolation starts at the second used fix; before that the
    // predictor can only hold the first fix
    std::vector<LocationEstimate> extrapolating;
    for (const auto& e : run_enloc(trace, config_with(60.0)))
        if (e.t_ms > 60000) extrapolating.push_back(e);

    // under 0.2 m per km traveled
    CHECK(max_error_vs_truth(extrapolating, truth) < 0.2 * 6.0);
}

TEST_CASE("enloc error grows linearly after a 90 degree turn") {
    Scenario sc;
    sc.name = "lshape";
    sc.start = make_geo_point(31.0, 30.0);
    sc.start_speed_mps = 10.0;
    sc.start_bearing = Bearing{0.0};
    sc.segments = {{62.0, 0.0, 0.0}, {2.0, 0.0, 45.0}, {120.0, 0.0, 0.0}};
    const GroundTruth truth = generate_truth(sc, 0.25);
    const Trace trace = render_trace(truth, NoiseModel{0, 0, 0, 0, 1}, 0.25, 1.0);

    const auto estimates = run_enloc(trace, config_with(60.0));
    std::map<std::int64_t, GeoPoint> truth_at;
    for (const TruthPoint& p : truth.points) truth_at[p.t_ms] = p.pos;

    auto error_at = [&](std::int64_t t_ms) {
        for (const auto& e : estimates)
            if (e.t_ms == t_ms && e.source == EstimateSource::Predicted)
                return haversine_distance_m(e.pos, truth_at.at(t_ms));
        FAIL("no estimate at requested time");
        return 0.0;
    };

    // error scales with distance traveled past the turn (turn midpoint 63 s)
    const double e1 = error_at(74000), e2 = error_at(84000), e3 = error_at(104000);
    CHECK(e1 > 10.0);
    CHECK(e2 / e1 == doctest::Approx((84.0 - 63.0) / (74.0 - 63.0)).epsilon(0.15));
    CHECK(e3 / e1 == doctest::Approx((104.0 - 63.0) / (74.0 - 63.0)).epsilon(0.15));
}

TEST_CASE("gac and enloc consume the identical fix subset") {
    Scenario sc = preset_scenario("city");
    const GroundTruth truth = generate_truth(sc, 0.25);
    NoiseModel noise;
    noise.seed = 3;
    const Trace trace = render_trace(truth, noise, 0.25, 1.0);

    for (double tgsync : {10.0, 30.0, 60.0, 240.0}) {
        const auto a = run_gac(trace, config_with(tgsync));
        const auto b = run_enloc(trace, config_with(tgsync));
        std::vector<std::int64_t> sa, sb;
        for (const auto& e : a)
            if (e.source == EstimateSource::GpsSync) sa.push_back(e.t_ms);
        for (const auto& e : b)
            if (e.source == EstimateSource::GpsSync) sb.push_back(e.t_ms);
        CHECK(sa == sb);
    }
}

TEST_CASE("select_sync_fixes honors the period") {
    std::vector<GpsFix> fixes;
    for (int i = 0; i <= 10; ++i) fixes.push_back(fix_at(1000 * i, 31.0, 30.0, 5.0));
    const auto used = select_sync_fixes(fixes, 2.5);
    // first fix, then every fix at least 2.5 s after the previous used one
    const std::vector<std::size_t> expected{0, 3, 6, 9};
    CHECK(used == expected);
}

TEST_CASE("run_gps_only passes fixes through") {
    Trace trace;
    trace.gps_stream.push_back(fix_at(0, 31.0, 30.0, 5.0));
    trace.gps_stream.push_back(fix_at(1000, 31.001, 30.0, 5.5));
    trace.gps_stream.push_back(fix_at(2000, 31.002, 30.0, 6.0));

    const auto estimates = run_gps_only(trace);
    REQUIRE(estimates.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(estimates[i].t_ms == trace.gps_stream[i].t_ms);
        CHECK(estimates[i].pos.lat_deg == trace.gps_stream[i].pos.lat_deg);
        CHECK(estimates[i].source == EstimateSource::GpsSync);
    }

    CHECK(run_gps_only(Trace{}).empty());
}

TEST_CASE("estimate count equals processed samples plus sync events") {
    const Trace trace = straight_zero_noise_trace(120.0, 10.0);
    const auto estimates = run_gac(trace, config_with(30.0));

    const std::int64_t first_fix_t = trace.gps_stream.front().t_ms;
    std::size_t processed_samples = 0;
    for (const auto& s : trace.sensor_stream)
        if (s.t_ms >= first_fix_t) ++processed_samples;
    const std::size_t used_fixes = select_sync_fixes(trace.gps_stream, 30.0).size();

    CHECK(estimates.size() == processed_samples + used_fixes);
}
