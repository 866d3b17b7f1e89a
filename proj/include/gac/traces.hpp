#ifndef GAC_TRACES_HPP
#define GAC_TRACES_HPP

#include "gac/geodesy.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace gac {

// One accelerometer+compass reading. The acceleration vector is in the
// device frame (x right, y forward, z up); a level device at rest reads
// (0, 0, -g). heading_deg is the compass direction of motion.
struct SensorSample {
    std::int64_t t_ms = 0;
    std::array<double, 3> accel_mps2{0.0, 0.0, 0.0};
    Bearing heading_deg{};
};

struct GpsFix {
    std::int64_t t_ms = 0;
    GeoPoint pos{};
    double speed_mps = 0.0;
    Bearing bearing_deg{};
    double fix_duration_s = 1.0;  // receiver on-time spent obtaining this fix
};

struct TraceMetadata {
    double sample_interval_T_s = 0.25;
    std::string scenario_name = "unnamed";
    bool ground_truth_present = false;
};

// Immutable after load; both streams strictly increasing in t_ms.
struct Trace {
    TraceMetadata meta;
    std::vector<SensorSample> sensor_stream;
    std::vector<GpsFix> gps_stream;
};

// A validation finding: which record broke which rule. record_index is
// the position of the record in time-merged order (header findings use
// index 0 and stream '#').
struct Finding {
    std::size_t record_index = 0;
    char stream = '#';  // 'S', 'G', or '#'
    std::string rule;
    std::string message;
};

// Parses the line-delimited trace format:
//   # gac-trace v1 T=<seconds> scenario=<name> truth=<0|1>
//   S <t_ms> <ax> <ay> <az> <heading_deg>
//   G <t_ms> <lat_deg> <lon_deg> <speed_mps> <bearing_deg> <fix_duration_s>
// Throws ParseError (with line number) on malformed lines and
// ValidationError on non-monotonic timestamps.
Trace load_trace(std::istream& source);
Trace load_trace_file(const std::string& path);

// Inverse of load_trace. Records are interleaved by timestamp; all reals
// are written with 17 significant digits so loading reproduces every
// field exactly. Rejects traces that fail validate_trace before writing.
void save_trace(const Trace& trace, std::ostream& sink);
void save_trace_file(const Trace& trace, const std::string& path);

// Pure invariant scan; empty result iff the trace is well-formed.
// Findings are sorted by record index. Rules: "order" (non-increasing
// timestamp), "duplicate" (repeated timestamp within a stream), "gap"
// (sensor gap > 10*T), "range" (field out of domain).
std::vector<Finding> validate_trace(const Trace& trace);

}  // namespace gac

#endif  // GAC_TRACES_HPP
