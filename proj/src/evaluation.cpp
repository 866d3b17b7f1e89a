#include "gac/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace gac {

namespace {

// Final estimate per instant, in time order.
std::vector<LocationEstimate> dedup_by_instant(const std::vector<LocationEstimate>& estimates) {
    std::map<std::int64_t, LocationEstimate> latest;
    for (const LocationEstimate& e : estimates) latest[e.t_ms] = e;
    std::vector<LocationEstimate> out;
    out.reserve(latest.size());
    for (const auto& [t, e] : latest) out.push_back(e);
    return out;
}

void fmt_real(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
}

}  // namespace

std::vector<ErrorSample> error_samples(const std::vector<LocationEstimate>& estimates,
                                       const GroundTruth& truth) {
    std::map<std::int64_t, GeoPoint> truth_at;
    for (const TruthPoint& p : truth.points) truth_at[p.t_ms] = p.pos;

    std::vector<ErrorSample> samples;
    for (const LocationEstimate& e : dedup_by_instant(estimates)) {
        const auto it = truth_at.find(e.t_ms);
        if (it == truth_at.end()) continue;
        samples.push_back({e.t_ms, haversine_distance_m(e.pos, it->second)});
    }
    if (samples.empty())
        throw DomainError("rmse: no estimate timestamp aligns with the reference track");
    return samples;
}

double rmse_m(const std::vector<LocationEstimate>& estimates, const GroundTruth& truth,
              double T_Gsync_s, double T_s) {
    if (!(T_s > 0.0) || T_Gsync_s < T_s) throw DomainError("rmse: need T_Gsync >= T > 0");
    const std::vector<ErrorSample> samples = error_samples(estimates, truth);
    double sum_sq = 0.0;
    for (const ErrorSample& s : samples) sum_sq += s.h_m * s.h_m;
    return std::sqrt(sum_sq / static_cast<double>(samples.size()));
}

std::vector<WindowStats> windowed_rmse(const std::vector<LocationEstimate>& estimates,
                                       const GroundTruth& truth, double T_Gsync_s, double T_s) {
    if (!(T_s > 0.0) || T_Gsync_s < T_s) throw DomainError("rmse: need T_Gsync >= T > 0");

    std::map<std::int64_t, GeoPoint> truth_at;
    for (const TruthPoint& p : truth.points) truth_at[p.t_ms] = p.pos;

    const std::vector<LocationEstimate> track = dedup_by_instant(estimates);

    std::vector<WindowStats> windows;
    bool open = false;
    WindowStats current{};
    double sum_sq = 0.0;

    auto close_window = [&]() {
        if (open && current.n_pairs > 0) {
            current.rmse_m = std::sqrt(sum_sq / static_cast<double>(current.n_pairs));
            windows.push_back(current);
        }
    };

    for (const LocationEstimate& e : track) {
        const bool is_sync = e.source == EstimateSource::GpsSync;
        const auto it = truth_at.find(e.t_ms);
        // A sync estimate closes the window it terminates (its own pair
        // counts inside it) and opens the next one.
        if (it != truth_at.end() && open) {
            const double h = haversine_distance_m(e.pos, it->second);
            sum_sq += h * h;
            ++current.n_pairs;
        }
        if (is_sync) {
            close_window();
            open = true;
            current = WindowStats{e.t_ms, 0, 0.0};
            sum_sq = 0.0;
        }
    }
    close_window();
    return windows;
}

std::vector<LocationEstimate> steady_state(const std::vector<LocationEstimate>& estimates) {
    std::int64_t second_sync = 0;
    int syncs_seen = 0;
    for (const LocationEstimate& e : estimates) {
        if (e.source != EstimateSource::GpsSync) continue;
        if (++syncs_seen == 2) {
            second_sync = e.t_ms;
            break;
        }
    }
    if (syncs_seen < 2) return estimates;

    std::vector<LocationEstimate> out;
    out.reserve(estimates.size());
    for (const LocationEstimate& e : estimates)
        if (e.t_ms > second_sync) out.push_back(e);
    return out;
}

GroundTruth truth_from_gps(const Trace& trace) {
    GroundTruth truth;
    truth.scenario_name = trace.meta.scenario_name;
    truth.step_s = trace.meta.sample_interval_T_s;
    truth.points.reserve(trace.gps_stream.size());
    for (const GpsFix& f : trace.gps_stream)
        truth.points.push_back({f.t_ms, f.pos, f.speed_mps, f.bearing_deg, 0.0});
    return truth;
}

namespace {

std::vector<LocationEstimate> run_scheme(SchemeKind scheme, const Trace& trace,
                                         const EstimatorConfig& config) {
    switch (scheme) {
        case SchemeKind::GpsContinuous: return run_gps_only(trace);
        case SchemeKind::Gac:
        case SchemeKind::GacAccFree: return run_gac(trace, config);
        case SchemeKind::EnLoc: return run_enloc(trace, config);
    }
    throw DomainError("invalid scheme value");
}

void sort_records(std::vector<SweepRecord>& records) {
    std::sort(records.begin(), records.end(), [](const SweepRecord& a, const SweepRecord& b) {
        if (a.scheme != b.scheme) return static_cast<int>(a.scheme) < static_cast<int>(b.scheme);
        if (a.T_Gsync_s != b.T_Gsync_s) return a.T_Gsync_s < b.T_Gsync_s;
        return a.seed < b.seed;
    });
}

SweepRecord make_record(SchemeKind scheme, double T_Gsync_s, std::uint64_t seed,
                        const Trace& trace, const GroundTruth& truth, const SweepConfig& config) {
    EstimatorConfig est = config.estimator;
    est.T_Gsync_s = T_Gsync_s;
    est.T_s = trace.meta.sample_interval_T_s;
    const auto estimates = steady_state(run_scheme(scheme, trace, est));
    const double err = rmse_m(estimates, truth, T_Gsync_s, est.T_s);
    return SweepRecord{scheme, T_Gsync_s, seed, err,
                       average_current_mA(scheme, T_Gsync_s, config.profile)};
}

}  // namespace

std::vector<SweepRecord> run_sweep(const Scenario& scenario, const NoiseModel& noise,
                                   const std::vector<SchemeKind>& schemes,
                                   const std::vector<double>& T_Gsync_values,
                                   const std::vector<std::uint64_t>& seeds,
                                   const SweepConfig& config) {
    std::vector<SweepRecord> records;
    const GroundTruth truth = generate_truth(scenario, config.truth_step_s);
    for (const std::uint64_t seed : seeds) {
        NoiseModel seeded = noise;
        seeded.seed = seed;
        const Trace trace = render_trace(truth, seeded, config.estimator.T_s, config.gps_period_s,
                                         config.mount);
        for (const SchemeKind scheme : schemes)
            for (const double tgsync : T_Gsync_values)
                records.push_back(make_record(scheme, tgsync, seed, trace, truth, config));
    }
    sort_records(records);
    return records;
}

std::vector<SweepRecord> run_sweep_on_trace(const Trace& trace,
                                            const std::vector<SchemeKind>& schemes,
                                            const std::vector<double>& T_Gsync_values,
                                            const SweepConfig& config) {
    std::vector<SweepRecord> records;
    const GroundTruth truth = truth_from_gps(trace);
    for (const SchemeKind scheme : schemes)
        for (const double tgsync : T_Gsync_values)
            records.push_back(make_record(scheme, tgsync, 0, trace, truth, config));
    sort_records(records);
    return records;
}

std::vector<double> default_sweep_periods() { return {10, 20, 30, 60, 120, 240, 480}; }

void export_geojson(const std::vector<LocationEstimate>& estimates, const GroundTruth& truth,
                    std::ostream& sink) {
    using nlohmann::json;

    json features = json::array();

    if (!truth.points.empty()) {
        json coords = json::array();
        for (const TruthPoint& p : truth.points)
            coords.push_back({p.pos.lon_deg, p.pos.lat_deg});
        features.push_back({{"type", "Feature"},
                            {"geometry", {{"type", "LineString"}, {"coordinates", coords}}},
                            {"properties", {{"role", "truth"}}}});
    }

    if (!estimates.empty()) {
        json coords = json::array();
        json sync_coords = json::array();
        for (const LocationEstimate& e : estimates) {
            coords.push_back({e.pos.lon_deg, e.pos.lat_deg});
            if (e.source == EstimateSource::GpsSync)
                sync_coords.push_back({e.pos.lon_deg, e.pos.lat_deg});
        }
        features.push_back({{"type", "Feature"},
                            {"geometry", {{"type", "LineString"}, {"coordinates", coords}}},
                            {"properties", {{"role", "estimate"}}}});
        if (!sync_coords.empty())
            features.push_back(
                {{"type", "Feature"},
                 {"geometry", {{"type", "MultiPoint"}, {"coordinates", sync_coords}}},
                 {"properties", {{"role", "gps-sync"}}}});
    }

    const json doc = {{"type", "FeatureCollection"}, {"features", features}};
    sink << doc.dump(2) << '\n';
    if (!sink) throw IoError("geojson write failed");
}

void write_estimates_csv(const std::vector<LocationEstimate>& estimates, std::ostream& sink) {
    sink << "t_ms,lat_deg,lon_deg,speed_mps,source\n";
    for (const LocationEstimate& e : estimates) {
        sink << e.t_ms << ',';
        fmt_real(sink, e.pos.lat_deg);
        sink << ',';
        fmt_real(sink, e.pos.lon_deg);
        sink << ',';
        fmt_real(sink, e.speed_mps);
        sink << ',';
        switch (e.source) {
            case EstimateSource::DeadReckoned: sink << "DeadReckoned"; break;
            case EstimateSource::GpsSync: sink << "GpsSync"; break;
            case EstimateSource::Predicted: sink << "Predicted"; break;
        }
        sink << '\n';
    }
    if (!sink) throw IoError("estimate csv write failed");
}

std::vector<LocationEstimate> read_estimates_csv(std::istream& source) {
    std::vector<LocationEstimate> out;
    std::string line;
    long line_no = 0;
    bool header_seen = false;
    while (std::getline(source, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != "t_ms,lat_deg,lon_deg,speed_mps,source")
                throw ParseError("unexpected estimate csv header", line_no);
            header_seen = true;
            continue;
        }
        std::istringstream is(line);
        std::string field;
        LocationEstimate e;
        try {
            std::getline(is, field, ',');
            e.t_ms = std::stoll(field);
            std::getline(is, field, ',');
            const double lat = std::stod(field);
            std::getline(is, field, ',');
            e.pos = make_geo_point(lat, std::stod(field));
            std::getline(is, field, ',');
            e.speed_mps = std::stod(field);
            std::getline(is, field);
            if (field == "DeadReckoned") e.source = EstimateSource::DeadReckoned;
            else if (field == "GpsSync") e.source = EstimateSource::GpsSync;
            else if (field == "Predicted") e.source = EstimateSource::Predicted;
            else throw ParseError("unknown estimate source '" + field + "'", line_no);
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& ex) {
            throw ParseError(std::string("bad estimate row: ") + ex.what(), line_no);
        }
        out.push_back(e);
    }
    return out;
}

void write_sweep_csv(const std::vector<SweepRecord>& records, std::ostream& sink) {
    sink << "scheme,T_Gsync_s,seed,rmse_m,avg_current_mA\n";
    for (const SweepRecord& r : records) {
        sink << scheme_name(r.scheme) << ',';
        fmt_real(sink, r.T_Gsync_s);
        sink << ',' << r.seed << ',';
        fmt_real(sink, r.rmse_m);
        sink << ',';
        fmt_real(sink, r.avg_current_mA);
        sink << '\n';
    }
    if (!sink) throw IoError("sweep csv write failed");
}

}  // namespace gac
