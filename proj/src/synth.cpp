#include "gac/synth.hpp"

#include "gac/kinematics.hpp"
#include "gac/vec3.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace gac {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Deterministic gaussian source. The uniform and Box-Muller transforms
// are spelled out here so a (scenario, noise, seed) triple renders the
// same bytes on every platform; std::normal_distribution is
// implementation-defined.
class NoiseRng {
public:
    explicit NoiseRng(std::uint64_t seed) : engine_(seed) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

private:
    std::mt19937_64 engine_;
};

std::int64_t to_ms(double seconds) { return std::llround(seconds * 1000.0); }

// Signed smallest difference b - a in degrees, in [-180, 180).
double bearing_diff_deg(double a, double b) {
    double d = std::fmod(b - a, 360.0);
    if (d < -180.0) d += 360.0;
    if (d >= 180.0) d -= 360.0;
    return d;
}

Mat3 mount_rotation(const MountAttitude& mount) {
    const double pitch = mount.pitch_deg * kPi / 180.0;
    const double roll = mount.roll_deg * kPi / 180.0;
    const Mat3 rx = rotation_about_axis(Vec3{1, 0, 0}, -pitch);
    const Mat3 ry = rotation_about_axis(Vec3{0, 1, 0}, -roll);
    return rx.compose(ry);
}

}  // namespace

GroundTruth generate_truth(const Scenario& scenario, double step_s) {
    if (!(step_s > 0.0)) throw DomainError("generate_truth: step must be > 0");
    if (scenario.segments.empty()) throw DomainError("generate_truth: scenario has no segments");

    const std::int64_t step_ms = to_ms(step_s);
    if (step_ms <= 0) throw DomainError("generate_truth: step below 1 ms resolution");

    for (const Segment& seg : scenario.segments) {
        if (!(seg.duration_s > 0.0)) throw DomainError("generate_truth: segment duration must be > 0");
        const double steps = seg.duration_s / step_s;
        if (std::fabs(steps - std::llround(steps)) > 1e-9)
            throw DomainError("generate_truth: step does not divide segment duration");
    }

    GroundTruth truth;
    truth.scenario_name = scenario.name;
    truth.step_s = step_s;

    GeoPoint pos = make_geo_point(scenario.start.lat_deg, scenario.start.lon_deg);
    double speed = scenario.start_speed_mps;
    Bearing bearing = normalize_bearing(scenario.start_bearing.deg);
    std::int64_t t_ms = 0;

    for (std::size_t si = 0; si < scenario.segments.size(); ++si) {
        const Segment& seg = scenario.segments[si];
        const auto n_steps = static_cast<std::int64_t>(std::llround(seg.duration_s / step_s));
        bool warned = false;
        for (std::int64_t k = 0; k < n_steps; ++k) {
            truth.points.push_back({t_ms, pos, speed, bearing, seg.accel_mps2});
            const KinematicStep kin = advance_constant_accel(speed, seg.accel_mps2, step_s);
            if (kin.clamped && !warned) {
                truth.warnings.push_back("segment " + std::to_string(si) +
                                         ": speed clamped at 0 (t=" + std::to_string(t_ms) + " ms)");
                warned = true;
            }
            if (kin.displacement_m > 0.0) pos = vincenty_direct(pos, bearing, kin.displacement_m);
            speed = kin.next_speed_mps;
            bearing = normalize_bearing(bearing.deg + seg.turn_rate_deg_per_s * step_s);
            t_ms += step_ms;
        }
    }
    truth.points.push_back({t_ms, pos, speed, bearing, 0.0});
    return truth;
}

Trace render_trace(const GroundTruth& truth, const NoiseModel& noise, double T_s,
                   double gps_period_s, const MountAttitude& mount, double fix_duration_s) {
    if (truth.points.empty()) throw DomainError("render_trace: empty truth");
    if (!(T_s > 0.0) || !(gps_period_s > 0.0))
        throw DomainError("render_trace: intervals must be > 0");
    if (!(fix_duration_s > 0.0)) throw DomainError("render_trace: fix duration must be > 0");
    if (noise.accel_sigma_mps2 < 0.0 || noise.heading_sigma_deg < 0.0 ||
        noise.gps_pos_sigma_m < 0.0 || noise.gps_speed_sigma_mps < 0.0)
        throw DomainError("render_trace: sigmas must be >= 0");

    const std::int64_t step_ms = to_ms(truth.step_s);
    const std::int64_t T_ms = to_ms(T_s);
    const std::int64_t gps_ms = to_ms(gps_period_s);
    if (T_ms <= 0 || step_ms % T_ms != 0)
        throw DomainError("render_trace: T must equal or subdivide the truth step");
    if (gps_ms % step_ms != 0)
        throw DomainError("render_trace: gps period must be a multiple of the truth step");

    const std::int64_t t0 = truth.points.front().t_ms;
    const std::int64_t t_end = truth.points.back().t_ms;
    const Mat3 device_from_vehicle = mount_rotation(mount);

    Trace trace;
    trace.meta.sample_interval_T_s = T_s;
    trace.meta.scenario_name = truth.scenario_name.empty() ? "unnamed" : truth.scenario_name;
    trace.meta.ground_truth_present = noise.accel_sigma_mps2 == 0.0 &&
                                      noise.heading_sigma_deg == 0.0 &&
                                      noise.gps_pos_sigma_m == 0.0 &&
                                      noise.gps_speed_sigma_mps == 0.0;

    NoiseRng rng(noise.seed);

    // Sensor stream first, then the GPS stream; a fixed draw order keeps
    // identical seeds byte-identical.
    for (std::int64_t t = t0; t <= t_end; t += T_ms) {
        const auto idx = static_cast<std::size_t>((t - t0) / step_ms);
        const TruthPoint& tp = truth.points[idx];
        const double dt_in_step = static_cast<double>(t - tp.t_ms) / 1000.0;
        const double v = std::max(0.0, tp.speed_mps + tp.accel_along_mps2 * dt_in_step);

        double turn_rate_deg_s = 0.0;
        if (idx + 1 < truth.points.size())
            turn_rate_deg_s =
                bearing_diff_deg(tp.bearing.deg, truth.points[idx + 1].bearing.deg) / truth.step_s;
        const double lateral = v * turn_rate_deg_s * kPi / 180.0;

        const Vec3 vehicle{lateral, tp.accel_along_mps2, -kStandardGravityMps2};
        Vec3 measured = device_from_vehicle.apply(vehicle);
        for (double& c : measured) c += rng.normal() * noise.accel_sigma_mps2;

        SensorSample s;
        s.t_ms = t;
        s.accel_mps2 = measured;
        s.heading_deg = normalize_bearing(tp.bearing.deg + rng.normal() * noise.heading_sigma_deg);
        trace.sensor_stream.push_back(s);
    }

    for (std::int64_t t = t0; t <= t_end; t += gps_ms) {
        const auto idx = static_cast<std::size_t>((t - t0) / step_ms);
        const TruthPoint& tp = truth.points[idx];

        GpsFix fix;
        fix.t_ms = t;
        const double offset_bearing = rng.uniform() * 360.0;
        const double offset_m = std::fabs(rng.normal()) * noise.gps_pos_sigma_m;
        fix.pos = offset_m > 0.0
                      ? vincenty_direct(tp.pos, normalize_bearing(offset_bearing), offset_m)
                      : tp.pos;
        fix.speed_mps = std::max(0.0, tp.speed_mps + rng.normal() * noise.gps_speed_sigma_mps);
        fix.bearing_deg = tp.bearing;
        fix.fix_duration_s = fix_duration_s;
        trace.gps_stream.push_back(fix);
    }
    return trace;
}

Scenario preset_scenario(const std::string& name) {
    if (name == "highway") {
        // ~20 km of mostly straight road: barely-there bends and small
        // speed drift around 24 m/s, the friendliest case for straight
        // line extrapolation.
        Scenario s;
        s.name = "highway";
        s.start = make_geo_point(31.0500, 29.5500);
        s.start_speed_mps = 24.0;
        s.start_bearing = normalize_bearing(40.0);
        s.segments = {
            {60, 0.00, 0.000},  {10, +0.05, 0.000}, {120, 0.00, 0.008}, {60, 0.00, 0.000},
            {10, -0.05, 0.000}, {90, 0.00, -0.008}, {60, 0.00, 0.000},  {10, +0.05, 0.000},
            {120, 0.00, 0.000}, {10, -0.05, 0.000}, {120, 0.00, 0.006}, {90, 0.00, 0.000},
            {10, +0.05, 0.000}, {60, 0.00, 0.000},
        };
        return s;
    }
    if (name == "city") {
        // Stop-and-go circuit around street blocks: 90 degree corners,
        // red-light dwells, speeds up to 14 m/s, all inside a small box.
        Scenario s;
        s.name = "city";
        s.start = make_geo_point(31.2001, 29.9187);
        s.start_speed_mps = 0.0;
        s.start_bearing = normalize_bearing(0.0);
        s.segments = {
            // lap A
            {8, +1.50, 0.0},  {36, 0.0, 0.0}, {5, -2.00, 0.0}, {10, 0.0, +9.0},
            {6, +1.50, 0.0},  {40, 0.0, 0.0}, {5, -2.20, 0.0}, {12, 0.0, 0.0},
            {8, +1.50, 0.0},  {14, 0.0, 0.0}, {6, -1.00, 0.0}, {15, 0.0, +6.0},
            {6, +1.00, 0.0},  {38, 0.0, 0.0}, {5, -2.00, 0.0}, {10, 0.0, +9.0},
            {8, +1.25, 0.0},  {42, 0.0, 0.0}, {6, -2.00, 0.0}, {10, 0.0, 0.0},
            // lap B
            {10, +1.20, 0.0}, {8, 0.0, 0.0},  {5, -2.00, 0.0}, {10, 0.0, +9.0},
            {8, +1.50, 0.0},  {30, 0.0, 0.0}, {5, -2.40, 0.0}, {10, 0.0, +9.0},
            {6, +1.50, 0.0},  {42, 0.0, 0.0}, {5, -2.20, 0.0}, {15, 0.0, 0.0},
            {8, +1.50, 0.0},  {20, 0.0, 0.0}, {6, -1.00, 0.0}, {15, 0.0, +6.0},
            {6, +1.00, 0.0},  {40, 0.0, 0.0}, {5, -2.00, 0.0}, {10, 0.0, +9.0},
            {8, +1.25, 0.0},  {46, 0.0, 0.0}, {6, -2.00, 0.0}, {8, 0.0, 0.0},
            // lap C (partial)
            {10, +1.20, 0.0}, {30, 0.0, 0.0}, {5, -2.00, 0.0}, {10, 0.0, +9.0},
            {8, +1.50, 0.0},  {40, 0.0, 0.0}, {5, -2.40, 0.0}, {10, 0.0, +9.0},
            {6, +1.50, 0.0},  {50, 0.0, 0.0}, {5, -2.20, 0.0}, {10, 0.0, 0.0},
            {8, +1.50, 0.0},  {30, 0.0, 0.0}, {6, -2.00, 0.0},
        };
        return s;
    }
    throw DomainError("unknown scenario preset: " + name);
}

namespace {

void fmt_real(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
}

}  // namespace

Scenario load_scenario(std::istream& source) {
    Scenario s;
    std::string line;
    long line_no = 0;
    bool header_seen = false, start_seen = false;

    while (std::getline(source, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream is(line);
        std::string key;
        is >> key;
        if (!header_seen) {
            if (line != "# gac-scenario v1")
                throw ParseError("expected header '# gac-scenario v1'", line_no);
            header_seen = true;
            continue;
        }
        if (key == "#") continue;
        if (key == "name") {
            is >> s.name;
        } else if (key == "start") {
            double lat = 0, lon = 0;
            if (!(is >> lat >> lon)) throw ParseError("start needs <lat> <lon>", line_no);
            try {
                s.start = make_geo_point(lat, lon);
            } catch (const DomainError& e) {
                throw ParseError(e.what(), line_no);
            }
            start_seen = true;
        } else if (key == "start_speed_mps") {
            if (!(is >> s.start_speed_mps) || s.start_speed_mps < 0.0)
                throw ParseError("start_speed_mps needs a nonnegative value", line_no);
        } else if (key == "start_bearing_deg") {
            double b = 0;
            if (!(is >> b)) throw ParseError("start_bearing_deg needs a value", line_no);
            s.start_bearing = normalize_bearing(b);
        } else if (key == "segment") {
            Segment seg{};
            if (!(is >> seg.duration_s >> seg.accel_mps2 >> seg.turn_rate_deg_per_s))
                throw ParseError("segment needs <duration_s> <accel> <turn_rate>", line_no);
            if (!(seg.duration_s > 0.0)) throw ParseError("segment duration must be > 0", line_no);
            s.segments.push_back(seg);
        } else {
            throw ParseError("unknown scenario key '" + key + "'", line_no);
        }
    }
    if (!header_seen) throw ParseError("missing scenario header", line_no);
    if (!start_seen) throw ParseError("scenario missing start point", line_no);
    if (s.segments.empty()) throw ParseError("scenario has no segments", line_no);
    if (s.name.empty()) s.name = "unnamed";
    return s;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file: " + path);
    return load_scenario(in);
}

void save_scenario(const Scenario& scenario, std::ostream& sink) {
    sink << "# gac-scenario v1\n";
    sink << "name " << scenario.name << '\n';
    sink << "start ";
    fmt_real(sink, scenario.start.lat_deg);
    sink << ' ';
    fmt_real(sink, scenario.start.lon_deg);
    sink << '\n';
    sink << "start_speed_mps ";
    fmt_real(sink, scenario.start_speed_mps);
    sink << '\n';
    sink << "start_bearing_deg ";
    fmt_real(sink, scenario.start_bearing.deg);
    sink << '\n';
    for (const Segment& seg : scenario.segments) {
        sink << "segment ";
        fmt_real(sink, seg.duration_s);
        sink << ' ';
        fmt_real(sink, seg.accel_mps2);
        sink << ' ';
        fmt_real(sink, seg.turn_rate_deg_per_s);
        sink << '\n';
    }
    if (!sink) throw IoError("scenario write failed");
}

}  // namespace gac
