#include "gac/traces.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace gac {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

double parse_real(const std::string& tok, long line_no) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw ParseError("bad numeric field '" + tok + "'", line_no);
    return v;
}

std::int64_t parse_t_ms(const std::string& tok, long line_no) {
    std::int64_t v = 0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw ParseError("bad timestamp '" + tok + "'", line_no);
    return v;
}

// key=value header field
std::string header_value(const std::string& tok, const std::string& key, long line_no) {
    const std::string prefix = key + "=";
    if (tok.rfind(prefix, 0) != 0)
        throw ParseError("expected '" + key + "=...' in header, got '" + tok + "'", line_no);
    return tok.substr(prefix.size());
}

void fmt_real(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
}

bool bearing_ok(const Bearing& b) {
    return std::isfinite(b.deg) && b.deg >= 0.0 && b.deg < 360.0;
}

}  // namespace

Trace load_trace(std::istream& source) {
    Trace trace;
    std::string line;
    long line_no = 0;
    bool header_seen = false;

    while (std::getline(source, line)) {
        ++line_no;
        if (line.empty()) continue;

        if (!header_seen) {
            auto tok = split_ws(line);
            if (tok.size() != 6 || tok[0] != "#" || tok[1] != "gac-trace" || tok[2] != "v1")
                throw ParseError("expected header '# gac-trace v1 T=<s> scenario=<name> truth=<0|1>'",
                                 line_no);
            trace.meta.sample_interval_T_s = parse_real(header_value(tok[3], "T", line_no), line_no);
            trace.meta.scenario_name = header_value(tok[4], "scenario", line_no);
            const std::string truth = header_value(tok[5], "truth", line_no);
            if (truth != "0" && truth != "1")
                throw ParseError("truth flag must be 0 or 1", line_no);
            trace.meta.ground_truth_present = truth == "1";
            if (!(trace.meta.sample_interval_T_s > 0.0))
                throw ParseError("sample interval T must be > 0", line_no);
            header_seen = true;
            continue;
        }
        if (line[0] == '#') continue;

        auto tok = split_ws(line);
        if (tok.empty()) continue;  // whitespace-only line
        try {
            if (tok[0] == "S") {
                if (tok.size() != 6)
                    throw ParseError("S record needs 6 fields", line_no);
                SensorSample s;
                s.t_ms = parse_t_ms(tok[1], line_no);
                for (int i = 0; i < 3; ++i) s.accel_mps2[i] = parse_real(tok[2 + i], line_no);
                for (double c : s.accel_mps2)
                    if (!std::isfinite(c)) throw ParseError("non-finite acceleration", line_no);
                s.heading_deg = normalize_bearing(parse_real(tok[5], line_no));
                trace.sensor_stream.push_back(s);
            } else if (tok[0] == "G") {
                if (tok.size() != 7)
                    throw ParseError("G record needs 7 fields", line_no);
                GpsFix g;
                g.t_ms = parse_t_ms(tok[1], line_no);
                g.pos = make_geo_point(parse_real(tok[2], line_no), parse_real(tok[3], line_no));
                g.speed_mps = parse_real(tok[4], line_no);
                if (!(g.speed_mps >= 0.0) || !std::isfinite(g.speed_mps))
                    throw ParseError("speed must be >= 0", line_no);
                g.bearing_deg = normalize_bearing(parse_real(tok[5], line_no));
                g.fix_duration_s = parse_real(tok[6], line_no);
                if (!(g.fix_duration_s > 0.0))
                    throw ParseError("fix duration must be > 0", line_no);
                trace.gps_stream.push_back(g);
            } else {
                throw ParseError("unknown record tag '" + tok[0] + "'", line_no);
            }
        } catch (const DomainError& e) {
            throw ParseError(e.what(), line_no);
        }
    }
    if (!header_seen) throw ParseError("missing trace header", line_no);

    for (std::size_t i = 1; i < trace.sensor_stream.size(); ++i)
        if (trace.sensor_stream[i].t_ms <= trace.sensor_stream[i - 1].t_ms)
            throw ValidationError("sensor stream timestamps not strictly increasing at index " +
                                  std::to_string(i));
    for (std::size_t i = 1; i < trace.gps_stream.size(); ++i)
        if (trace.gps_stream[i].t_ms <= trace.gps_stream[i - 1].t_ms)
            throw ValidationError("gps stream timestamps not strictly increasing at index " +
                                  std::to_string(i));
    return trace;
}

Trace load_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open trace file: " + path);
    return load_trace(in);
}

void save_trace(const Trace& trace, std::ostream& sink) {
    auto findings = validate_trace(trace);
    if (!findings.empty())
        throw ValidationError("refusing to save invalid trace: " + findings.front().rule + " — " +
                              findings.front().message);

    sink << "# gac-trace v1 T=";
    fmt_real(sink, trace.meta.sample_interval_T_s);
    sink << " scenario=" << trace.meta.scenario_name
         << " truth=" << (trace.meta.ground_truth_present ? '1' : '0') << '\n';

    // Interleave by timestamp; fixes first on ties so replay sees the sync
    // before the sample at the same instant.
    std::size_t si = 0, gi = 0;
    while (si < trace.sensor_stream.size() || gi < trace.gps_stream.size()) {
        const bool take_gps =
            gi < trace.gps_stream.size() &&
            (si >= trace.sensor_stream.size() ||
             trace.gps_stream[gi].t_ms <= trace.sensor_stream[si].t_ms);
        if (take_gps) {
            const GpsFix& g = trace.gps_stream[gi++];
            sink << "G " << g.t_ms << ' ';
            fmt_real(sink, g.pos.lat_deg);
            sink << ' ';
            fmt_real(sink, g.pos.lon_deg);
            sink << ' ';
            fmt_real(sink, g.speed_mps);
            sink << ' ';
            fmt_real(sink, g.bearing_deg.deg);
            sink << ' ';
            fmt_real(sink, g.fix_duration_s);
            sink << '\n';
        } else {
            const SensorSample& s = trace.sensor_stream[si++];
            sink << "S " << s.t_ms;
            for (double c : s.accel_mps2) {
                sink << ' ';
                fmt_real(sink, c);
            }
            sink << ' ';
            fmt_real(sink, s.heading_deg.deg);
            sink << '\n';
        }
    }
    if (!sink) throw IoError("trace write failed");
}

void save_trace_file(const Trace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open trace file for writing: " + path);
    save_trace(trace, out);
    out.flush();
    if (!out) throw IoError("trace write failed: " + path);
}

std::vector<Finding> validate_trace(const Trace& trace) {
    std::vector<Finding> findings;
    auto add = [&](std::size_t idx, char stream, const char* rule, std::string msg) {
        findings.push_back(Finding{idx, stream, rule, std::move(msg)});
    };

    if (!(trace.meta.sample_interval_T_s > 0.0) || !std::isfinite(trace.meta.sample_interval_T_s))
        add(0, '#', "range", "sample interval T must be > 0");

    const double gap_limit_ms = 10.0 * trace.meta.sample_interval_T_s * 1000.0;

    // Record index counts records in time-merged order (fix before sample
    // on equal timestamps), matching the on-disk layout.
    std::size_t si = 0, gi = 0, idx = 0;
    while (si < trace.sensor_stream.size() || gi < trace.gps_stream.size()) {
        const bool take_gps =
            gi < trace.gps_stream.size() &&
            (si >= trace.sensor_stream.size() ||
             trace.gps_stream[gi].t_ms <= trace.sensor_stream[si].t_ms);
        if (take_gps) {
            const GpsFix& g = trace.gps_stream[gi];
            if (gi > 0) {
                const std::int64_t prev = trace.gps_stream[gi - 1].t_ms;
                if (g.t_ms == prev)
                    add(idx, 'G', "duplicate", "repeated gps timestamp " + std::to_string(g.t_ms));
                else if (g.t_ms < prev)
                    add(idx, 'G', "order", "gps timestamp decreases at " + std::to_string(g.t_ms));
            }
            if (!std::isfinite(g.pos.lat_deg) || g.pos.lat_deg < -90.0 || g.pos.lat_deg > 90.0 ||
                !std::isfinite(g.pos.lon_deg) || g.pos.lon_deg < -180.0 || g.pos.lon_deg >= 180.0)
                add(idx, 'G', "range", "position out of domain");
            if (!std::isfinite(g.speed_mps) || g.speed_mps < 0.0)
                add(idx, 'G', "range", "speed must be >= 0");
            if (!bearing_ok(g.bearing_deg))
                add(idx, 'G', "range", "bearing not normalized");
            if (!(g.fix_duration_s > 0.0))
                add(idx, 'G', "range", "fix duration must be > 0");
            ++gi;
        } else {
            const SensorSample& s = trace.sensor_stream[si];
            if (si > 0) {
                const std::int64_t prev = trace.sensor_stream[si - 1].t_ms;
                if (s.t_ms == prev)
                    add(idx, 'S', "duplicate", "repeated sensor timestamp " + std::to_string(s.t_ms));
                else if (s.t_ms < prev)
                    add(idx, 'S', "order", "sensor timestamp decreases at " + std::to_string(s.t_ms));
                else if (static_cast<double>(s.t_ms - prev) > gap_limit_ms)
                    add(idx, 'S', "gap",
                        "sensor gap " + std::to_string(s.t_ms - prev) + " ms exceeds 10*T");
            }
            for (double c : s.accel_mps2)
                if (!std::isfinite(c)) {
                    add(idx, 'S', "range", "non-finite acceleration");
                    break;
                }
            if (!bearing_ok(s.heading_deg))
                add(idx, 'S', "range", "heading not normalized");
            ++si;
        }
        ++idx;
    }
    return findings;
}

}  // namespace gac
