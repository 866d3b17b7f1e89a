#ifndef GAC_EVALUATION_HPP
#define GAC_EVALUATION_HPP

#include "gac/energy.hpp"
#include "gac/estimators.hpp"
#include "gac/synth.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace gac {

struct ErrorSample {
    std::int64_t t_ms;
    double h_m;  // haversine distance between estimate and truth
};

// One sweep point: the (energy, accuracy) pair the tradeoff plots are
// made of.
struct SweepRecord {
    SchemeKind scheme;
    double T_Gsync_s;
    std::uint64_t seed;
    double rmse_m;
    double avg_current_mA;
};

struct WindowStats {
    std::int64_t start_t_ms;  // sync instant opening the window
    std::size_t n_pairs;      // aligned estimates inside (start, next sync]
    double rmse_m;
};

// Pairs estimates with truth points carrying the same timestamp. When
// several estimates share a timestamp (a dead-reckoned step and the sync
// landing on the same instant) the last one emitted wins: after a sync
// the estimate at that instant is the GPS value. Throws when nothing
// aligns.
std::vector<ErrorSample> error_samples(const std::vector<LocationEstimate>& estimates,
                                       const GroundTruth& truth);

// Root mean square of the Haversine errors, pooled across the whole run:
// per sync window the N = floor(T_Gsync/T) aligned estimates contribute
// their squared errors, and the square root is taken over the pooled
// mean (equal-length windows make this identical to averaging per-window
// RMSE).
double rmse_m(const std::vector<LocationEstimate>& estimates, const GroundTruth& truth,
              double T_Gsync_s, double T_s);

// Per-window breakdown; windows are delimited by GpsSync estimates, a
// window owning the estimates in (sync, next sync].
std::vector<WindowStats> windowed_rmse(const std::vector<LocationEstimate>& estimates,
                                       const GroundTruth& truth, double T_Gsync_s, double T_s);

// Treats the recorded GPS stream as the reference track (the evaluation
// convention for field traces: GPS is the global reference).
GroundTruth truth_from_gps(const Trace& trace);

// Drops the warm-up: everything up to and including the second sync
// estimate. The linear predictor is unprimed until its second used fix,
// and pooling its cold-start hold error would swamp the steady-state
// scheme comparison. Applied to every scheme alike so sweeps stay
// apples-to-apples; with fewer than two syncs the input is returned
// unchanged.
std::vector<LocationEstimate> steady_state(const std::vector<LocationEstimate>& estimates);

struct SweepConfig {
    EstimatorConfig estimator{};  // T_Gsync_s is overridden per sweep point
    PowerProfile profile{};
    double truth_step_s = 0.25;
    double gps_period_s = 1.0;
    MountAttitude mount{};
};

// One record per (scheme, T_Gsync, seed), sorted by that key. The
// scenario is rendered once per seed (noise.seed is replaced by each
// entry of seeds) and every scheme/period runs on the same trace.
std::vector<SweepRecord> run_sweep(const Scenario& scenario, const NoiseModel& noise,
                                   const std::vector<SchemeKind>& schemes,
                                   const std::vector<double>& T_Gsync_values,
                                   const std::vector<std::uint64_t>& seeds,
                                   const SweepConfig& config);

// Sweep over an existing trace; the GPS stream is the reference and the
// seed column is 0.
std::vector<SweepRecord> run_sweep_on_trace(const Trace& trace,
                                            const std::vector<SchemeKind>& schemes,
                                            const std::vector<double>& T_Gsync_values,
                                            const SweepConfig& config);

// Default synchronization periods for tradeoff sweeps.
std::vector<double> default_sweep_periods();

// FeatureCollection with the truth track, the estimate track, and the
// GPS sync points, lon-first coordinates. Features for empty inputs are
// omitted.
void export_geojson(const std::vector<LocationEstimate>& estimates, const GroundTruth& truth,
                    std::ostream& sink);

// Estimate CSV: t_ms,lat_deg,lon_deg,speed_mps,source
void write_estimates_csv(const std::vector<LocationEstimate>& estimates, std::ostream& sink);
std::vector<LocationEstimate> read_estimates_csv(std::istream& source);

// Sweep CSV: scheme,T_Gsync_s,seed,rmse_m,avg_current_mA
void write_sweep_csv(const std::vector<SweepRecord>& records, std::ostream& sink);

}  // namespace gac

#endif  // GAC_EVALUATION_HPP
