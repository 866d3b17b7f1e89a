#ifndef GAC_SYNTH_HPP
#define GAC_SYNTH_HPP

#include "gac/geodesy.hpp"
#include "gac/traces.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace gac {

// One driving segment: constant acceleration and constant turn rate.
// Positive turn rate is clockwise (right turn).
struct Segment {
    double duration_s;
    double accel_mps2;
    double turn_rate_deg_per_s;
};

struct Scenario {
    std::string name;
    std::vector<Segment> segments;
    GeoPoint start{};
    double start_speed_mps = 0.0;
    Bearing start_bearing{};
};

// Gaussian sensor error model. Generation is fully deterministic given
// the seed (the generator and gaussian transform are hand-rolled, so
// traces are byte-identical across platforms and standard libraries).
struct NoiseModel {
    double accel_sigma_mps2 = 0.1;
    double heading_sigma_deg = 2.0;
    double gps_pos_sigma_m = 3.0;
    double gps_speed_sigma_mps = 0.2;
    std::uint64_t seed = 0;
};

// Constant device-vs-vehicle misalignment, used to exercise the
// gravity-based orientation correction. Zero angles = perfectly mounted.
struct MountAttitude {
    double pitch_deg = 0.0;  // rotation about the device x axis
    double roll_deg = 0.0;   // rotation about the device y axis
};

struct TruthPoint {
    std::int64_t t_ms;
    GeoPoint pos;
    double speed_mps;
    Bearing bearing;
    double accel_along_mps2;  // applied over the step starting here
};

struct GroundTruth {
    std::string scenario_name;
    double step_s = 0.25;
    std::vector<TruthPoint> points;
    std::vector<std::string> warnings;  // e.g. speed clamped at zero
};

// Samples the scenario every step_s, advancing positions on the
// ellipsoid. step_s must divide every segment duration. Within a step
// the acceleration and bearing are constant; speed is clamped at zero
// (with a warning) when a deceleration segment would drive it negative.
GroundTruth generate_truth(const Scenario& scenario, double step_s);

// Renders the logged sensor/GPS streams for a truth trajectory.
// Sensor samples are emitted every T_s (T_s must equal or subdivide the
// truth step), GPS fixes every gps_period_s (a multiple of the truth
// step). GPS position error is a half-normal distance at a uniformly
// random bearing, applied on the ellipsoid.
Trace render_trace(const GroundTruth& truth, const NoiseModel& noise, double T_s,
                   double gps_period_s, const MountAttitude& mount = {},
                   double fix_duration_s = 5.0);

// Built-in environments: "highway" (~20 km, mostly straight, gentle
// speed changes) and "city" (stop-and-go block circuit with frequent 90
// degree turns inside a small bounding box).
Scenario preset_scenario(const std::string& name);

// Scenario file format:
//   # gac-scenario v1
//   name <text>
//   start <lat_deg> <lon_deg>
//   start_speed_mps <v>
//   start_bearing_deg <deg>
//   segment <duration_s> <accel_mps2> <turn_rate_deg_per_s>
Scenario load_scenario(std::istream& source);
Scenario load_scenario_file(const std::string& path);
void save_scenario(const Scenario& scenario, std::ostream& sink);

}  // namespace gac

#endif  // GAC_SYNTH_HPP
