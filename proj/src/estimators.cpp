#include "gac/estimators.hpp"

#include "gac/kinematics.hpp"

#include <cmath>

namespace gac {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void check_config(const EstimatorConfig& config) {
    if (!(config.T_s > 0.0)) throw DomainError("estimator config: T must be > 0");
    if (config.T_Gsync_s < config.T_s)
        throw DomainError("estimator config: T_Gsync must be >= T");
    if (config.smoothing_window < 1)
        throw DomainError("estimator config: smoothing window must be >= 1");
}

// Circular mean of compass headings; an arithmetic mean would be wrong
// across the 0/360 wrap.
double circular_mean_deg(const std::deque<SmoothingEntry>& buffer) {
    if (buffer.size() == 1) return buffer.back().heading_deg;
    double s = 0.0, c = 0.0;
    for (const SmoothingEntry& e : buffer) {
        s += std::sin(e.heading_deg * kPi / 180.0);
        c += std::cos(e.heading_deg * kPi / 180.0);
    }
    if (std::fabs(s) < 1e-12 && std::fabs(c) < 1e-12)
        return buffer.back().heading_deg;  // degenerate spread
    return normalize_bearing(std::atan2(s, c) * 180.0 / kPi).deg;
}

std::int64_t to_ms(double seconds) { return std::llround(seconds * 1000.0); }

}  // namespace

EstimatorState gac_init(const GpsFix& fix, const EstimatorConfig& config) {
    check_config(config);
    EstimatorState state;
    state.pos = make_geo_point(fix.pos.lat_deg, fix.pos.lon_deg);
    state.speed_mps = fix.speed_mps;
    state.phase = EstimatorPhase::DeadReckoning;
    state.last_sync_t_ms = fix.t_ms;
    return state;
}

LocationEstimate gac_step(EstimatorState& state, const SensorSample& sample,
                          const EstimatorConfig& config) {
    check_config(config);
    if (state.phase != EstimatorPhase::DeadReckoning)
        throw DomainError("gac_step: estimator not in dead-reckoning phase");

    state.smoothing_buffer.push_back({sample.accel_mps2, sample.heading_deg.deg});
    while (state.smoothing_buffer.size() > static_cast<std::size_t>(config.smoothing_window))
        state.smoothing_buffer.pop_front();

    Vec3 mean_accel{0.0, 0.0, 0.0};
    for (const SmoothingEntry& e : state.smoothing_buffer) mean_accel = add(mean_accel, e.accel_mps2);
    mean_accel = scale(mean_accel, 1.0 / static_cast<double>(state.smoothing_buffer.size()));
    const Bearing heading = normalize_bearing(circular_mean_deg(state.smoothing_buffer));

    if (config.orientation_correction_enabled && state.gravity_estimate_mps2)
        mean_accel = state.orientation_correction.apply(mean_accel);

    // Remove gravity, then take the horizontal component along the
    // heading axis (the device forward axis): signed, so braking slows
    // the reckoner down.
    const Vec3 motion = sub(mean_accel, Vec3{0.0, 0.0, -kStandardGravityMps2});
    const double accel_along = motion[1];

    const KinematicStep kin = advance_constant_accel(state.speed_mps, accel_along, config.T_s);
    if (kin.displacement_m > 0.0)
        state.pos = vincenty_direct(state.pos, heading, kin.displacement_m);
    state.speed_mps = kin.next_speed_mps;

    return LocationEstimate{sample.t_ms + to_ms(config.T_s), state.pos, state.speed_mps,
                            EstimateSource::DeadReckoned};
}

LocationEstimate gac_sync(EstimatorState& state, const GpsFix& fix) {
    if (state.phase == EstimatorPhase::AwaitingFix)
        throw DomainError("gac_sync: estimator not initialized");
    state.phase = EstimatorPhase::Synchronizing;
    state.pos = make_geo_point(fix.pos.lat_deg, fix.pos.lon_deg);
    state.speed_mps = fix.speed_mps;
    state.smoothing_buffer.clear();
    state.last_sync_t_ms = fix.t_ms;
    state.phase = EstimatorPhase::DeadReckoning;
    return LocationEstimate{fix.t_ms, state.pos, state.speed_mps, EstimateSource::GpsSync};
}

bool detect_constant_speed(const std::vector<GpsFix>& fix_window, double threshold_mps) {
    if (fix_window.size() < 2)
        throw DomainError("detect_constant_speed: need at least two fixes");
    double lo = fix_window.front().speed_mps, hi = lo;
    for (const GpsFix& f : fix_window) {
        lo = std::min(lo, f.speed_mps);
        hi = std::max(hi, f.speed_mps);
    }
    return hi - lo <= threshold_mps;
}

bool update_orientation_correction(EstimatorState& state,
                                   const std::vector<SensorSample>& samples_during_const_speed) {
    if (samples_during_const_speed.empty())
        throw DomainError("update_orientation_correction: empty segment");

    Vec3 mean{0.0, 0.0, 0.0};
    for (const SensorSample& s : samples_during_const_speed) mean = add(mean, s.accel_mps2);
    mean = scale(mean, 1.0 / static_cast<double>(samples_during_const_speed.size()));

    const double magnitude = norm(mean);
    if (std::fabs(magnitude - kStandardGravityMps2) > 0.2 * kStandardGravityMps2)
        return false;  // segment contaminated by real acceleration

    state.gravity_estimate_mps2 = mean;
    state.orientation_correction = rotation_between(mean, Vec3{0.0, 0.0, -kStandardGravityMps2});
    return true;
}

std::vector<std::size_t> select_sync_fixes(const std::vector<GpsFix>& fixes, double T_Gsync_s) {
    std::vector<std::size_t> used;
    if (fixes.empty()) return used;
    const std::int64_t period_ms = to_ms(T_Gsync_s);
    used.push_back(0);
    std::int64_t last = fixes[0].t_ms;
    for (std::size_t i = 1; i < fixes.size(); ++i) {
        if (fixes[i].t_ms >= last + period_ms) {
            used.push_back(i);
            last = fixes[i].t_ms;
        }
    }
    return used;
}

namespace {

// Shared replay driver: walks the merged sample/fix timeline in time
// order (fix first on equal timestamps, so the sync lands before the
// step) and dispatches to the scheme callbacks.
template <typename OnInit, typename OnSample, typename OnUsedFix, typename OnSkippedFix>
void replay(const Trace& trace, double T_Gsync_s, OnInit&& on_init, OnSample&& on_sample,
            OnUsedFix&& on_used_fix, OnSkippedFix&& on_skipped_fix) {
    if (trace.gps_stream.empty())
        throw DomainError("replay: trace has no GPS fix to initialize from");

    const std::vector<std::size_t> used = select_sync_fixes(trace.gps_stream, T_Gsync_s);
    std::size_t used_ptr = 0;

    std::size_t si = 0, gi = 0;
    bool initialized = false;
    while (si < trace.sensor_stream.size() || gi < trace.gps_stream.size()) {
        const bool take_gps =
            gi < trace.gps_stream.size() &&
            (si >= trace.sensor_stream.size() ||
             trace.gps_stream[gi].t_ms <= trace.sensor_stream[si].t_ms);
        if (take_gps) {
            const GpsFix& fix = trace.gps_stream[gi];
            const bool is_used = used_ptr < used.size() && used[used_ptr] == gi;
            if (is_used) {
                ++used_ptr;
                if (!initialized) {
                    on_init(fix);
                    initialized = true;
                } else {
                    on_used_fix(fix);
                }
            } else {
                on_skipped_fix(fix);
            }
            ++gi;
        } else {
            const SensorSample& sample = trace.sensor_stream[si];
            if (initialized) on_sample(sample);  // samples before the first fix are unusable
            ++si;
        }
    }
}

}  // namespace

std::vector<LocationEstimate> run_gac(const Trace& trace, const EstimatorConfig& config) {
    check_config(config);

    std::vector<LocationEstimate> estimates;
    estimates.reserve(trace.sensor_stream.size() + trace.gps_stream.size());

    EstimatorState state;
    // Everything recorded since the previous used fix, feeding the
    // constant-speed detector and the gravity estimate.
    std::vector<GpsFix> interval_fixes;
    std::vector<SensorSample> interval_samples;

    replay(
        trace, config.T_Gsync_s,
        [&](const GpsFix& fix) {
            state = gac_init(fix, config);
            estimates.push_back(
                LocationEstimate{fix.t_ms, state.pos, state.speed_mps, EstimateSource::GpsSync});
            interval_fixes.push_back(fix);
        },
        [&](const SensorSample& sample) {
            estimates.push_back(gac_step(state, sample, config));
            interval_samples.push_back(sample);
        },
        [&](const GpsFix& fix) {
            interval_fixes.push_back(fix);
            if (config.orientation_correction_enabled && interval_fixes.size() >= 2 &&
                !interval_samples.empty() &&
                detect_constant_speed(interval_fixes, config.const_speed_threshold_mps))
                update_orientation_correction(state, interval_samples);
            estimates.push_back(gac_sync(state, fix));
            interval_fixes.clear();
            interval_fixes.push_back(fix);
            interval_samples.clear();
        },
        [&](const GpsFix& fix) { interval_fixes.push_back(fix); });

    return estimates;
}

std::vector<LocationEstimate> run_enloc(const Trace& trace, const EstimatorConfig& config) {
    check_config(config);

    std::vector<LocationEstimate> estimates;
    estimates.reserve(trace.sensor_stream.size() + trace.gps_stream.size());

    const std::int64_t T_ms = to_ms(config.T_s);
    std::optional<GpsFix> prev_fix, last_fix;

    replay(
        trace, config.T_Gsync_s,
        [&](const GpsFix& fix) {
            last_fix = fix;
            estimates.push_back(
                LocationEstimate{fix.t_ms, fix.pos, fix.speed_mps, EstimateSource::GpsSync});
        },
        [&](const SensorSample& sample) {
            const std::int64_t t_est = sample.t_ms + T_ms;
            GeoPoint pos;
            if (prev_fix) {
                const double ratio = static_cast<double>(t_est - last_fix->t_ms) /
                                     static_cast<double>(last_fix->t_ms - prev_fix->t_ms);
                pos.lat_deg =
                    last_fix->pos.lat_deg + ratio * (last_fix->pos.lat_deg - prev_fix->pos.lat_deg);
                pos.lon_deg = normalize_lon(
                    last_fix->pos.lon_deg + ratio * (last_fix->pos.lon_deg - prev_fix->pos.lon_deg));
            } else {
                pos = last_fix->pos;  // hold the first fix
            }
            estimates.push_back(
                LocationEstimate{t_est, pos, last_fix->speed_mps, EstimateSource::Predicted});
        },
        [&](const GpsFix& fix) {
            prev_fix = last_fix;
            last_fix = fix;
            estimates.push_back(
                LocationEstimate{fix.t_ms, fix.pos, fix.speed_mps, EstimateSource::GpsSync});
        },
        [&](const GpsFix&) {});

    return estimates;
}

std::vector<LocationEstimate> run_gps_only(const Trace& trace) {
    std::vector<LocationEstimate> estimates;
    estimates.reserve(trace.gps_stream.size());
    for (const GpsFix& fix : trace.gps_stream)
        estimates.push_back(
            LocationEstimate{fix.t_ms, fix.pos, fix.speed_mps, EstimateSource::GpsSync});
    return estimates;
}

}  // namespace gac
