#ifndef GAC_ESTIMATORS_HPP
#define GAC_ESTIMATORS_HPP

#include "gac/geodesy.hpp"
#include "gac/traces.hpp"
#include "gac/vec3.hpp"

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

namespace gac {

struct EstimatorConfig {
    double T_s = 0.25;           // sensor sampling interval
    double T_Gsync_s = 60.0;     // GPS synchronization period
    int smoothing_window = 4;    // readings averaged before each step
    double const_speed_threshold_mps = 0.5;
    bool orientation_correction_enabled = true;
};

enum class EstimatorPhase { AwaitingFix, DeadReckoning, Synchronizing };

enum class EstimateSource { DeadReckoned, GpsSync, Predicted };

struct LocationEstimate {
    std::int64_t t_ms = 0;
    GeoPoint pos{};
    double speed_mps = 0.0;
    EstimateSource source = EstimateSource::DeadReckoned;
};

struct SmoothingEntry {
    Vec3 accel_mps2;
    double heading_deg;
};

// Dead-reckoning state: current position/speed plus the smoothing buffer
// and the gravity-derived mount correction. speed_mps never goes
// negative; reverse motion is not modeled.
struct EstimatorState {
    GeoPoint pos{};
    double speed_mps = 0.0;
    EstimatorPhase phase = EstimatorPhase::AwaitingFix;
    std::deque<SmoothingEntry> smoothing_buffer;
    std::optional<Vec3> gravity_estimate_mps2;
    Mat3 orientation_correction;  // maps measured gravity onto (0,0,-g)
    std::int64_t last_sync_t_ms = 0;
};

// Seeds the dead reckoner from a GPS fix: position and speed are copied,
// the smoothing buffer starts empty.
EstimatorState gac_init(const GpsFix& fix, const EstimatorConfig& config);

// One dead-reckoning step. The sample joins the smoothing buffer; the
// buffer means (vector mean for acceleration, circular mean for heading)
// drive the update:
//   a = forward component of the corrected, gravity-removed acceleration
//   l = v*T + a*T^2/2 (clamped at 0, no reverse motion)
//   pos' = destination of (pos, heading, l) on the ellipsoid
//   v' = max(0, v + a*T)
// The returned estimate is stamped at sample.t_ms + T: the reading at
// instant n yields the position at instant n+1.
LocationEstimate gac_step(EstimatorState& state, const SensorSample& sample,
                          const EstimatorConfig& config);

// GPS synchronization: position and speed are reset to the fix values
// exactly, the smoothing buffer is cleared. Emits a GpsSync estimate.
LocationEstimate gac_sync(EstimatorState& state, const GpsFix& fix);

// True iff max(speed) - min(speed) over the window is within threshold.
// Requires at least two fixes.
bool detect_constant_speed(const std::vector<GpsFix>& fix_window, double threshold_mps);

// Re-estimates the device orientation from a constant-speed segment:
// the mean acceleration is then due to gravity alone. The stored
// correction rotates that mean onto (0,0,-g). Returns false (state
// unchanged) when the mean magnitude deviates from g by more than 20%,
// meaning the segment was contaminated by real acceleration.
bool update_orientation_correction(EstimatorState& state,
                                   const std::vector<SensorSample>& samples_during_const_speed);

// The duty-cycled fix schedule: the first fix plus every fix arriving at
// least T_Gsync after the previously used one. All schemes share it.
std::vector<std::size_t> select_sync_fixes(const std::vector<GpsFix>& fixes, double T_Gsync_s);

// Full GAC replay over a trace: init on the first fix, dead-reckon on
// every sensor sample, re-sync on scheduled fixes (sync first when a fix
// and a sample share a timestamp). Between consecutive used fixes the
// recorded fix speeds feed constant-speed detection, and a certified
// segment updates the orientation correction for future readings.
std::vector<LocationEstimate> run_gac(const Trace& trace, const EstimatorConfig& config);

// EnLoc simple linear predictor on the same fix schedule: between used
// fixes the estimate extrapolates the previous two fixes linearly in
// lat/lon; before the second fix it holds the first.
std::vector<LocationEstimate> run_enloc(const Trace& trace, const EstimatorConfig& config);

// Accuracy reference: every fix passed through unchanged.
std::vector<LocationEstimate> run_gps_only(const Trace& trace);

}  // namespace gac

#endif  // GAC_ESTIMATORS_HPP
