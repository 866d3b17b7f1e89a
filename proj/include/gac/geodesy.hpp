#ifndef GAC_GEODESY_HPP
#define GAC_GEODESY_HPP

#include "gac/errors.hpp"

namespace gac {

// Geodetic position on the ellipsoid. Latitude in [-90, +90] degrees,
// longitude normalized to [-180, +180) degrees.
struct GeoPoint {
    double lat_deg = 0.0;
    double lon_deg = 0.0;
};

// Clockwise angle from true north, always normalized to [0, 360) degrees.
struct Bearing {
    double deg = 0.0;
};

struct EllipsoidParams {
    double semi_major_m;   // a
    double flattening;     // f
};

// WGS-84: a = 6378137.0 m, f = 1/298.257223563.
inline constexpr EllipsoidParams kWgs84{6378137.0, 1.0 / 298.257223563};

// Mean Earth radius used by the spherical (haversine) metric.
inline constexpr double kMeanEarthRadiusM = 6371008.8;

// The inverse iteration stops when |change in lambda| < kVincentyTolRad.
// The direct iteration converges quadratically and is driven to near
// machine precision so that chained dead-reckoning steps do not
// accumulate per-call truncation bias.
inline constexpr double kVincentyTolRad = 1e-12;
inline constexpr double kVincentyDirectTolRad = 1e-15;
inline constexpr int kVincentyMaxIter = 200;

// Wraps any finite angle into [0, 360). Throws DomainError on NaN/inf.
Bearing normalize_bearing(double deg);

// Wraps a longitude into [-180, +180).
double normalize_lon(double lon_deg);

// Validates ranges and normalizes longitude. Throws DomainError.
GeoPoint make_geo_point(double lat_deg, double lon_deg);

// Destination point a given distance and initial bearing from origin,
// on the ellipsoid (Vincenty direct formula). distance_m must be
// finite, nonnegative, and less than half the ellipsoid circumference.
GeoPoint vincenty_direct(const GeoPoint& origin, Bearing bearing, double distance_m,
                         const EllipsoidParams& ellipsoid = kWgs84);

struct InverseSolution {
    double distance_m;
    Bearing initial_bearing;
};

// Geodesic distance and forward azimuth from p1 to p2 (Vincenty inverse
// formula). Throws ConvergenceError for near-antipodal pairs.
InverseSolution vincenty_inverse(const GeoPoint& p1, const GeoPoint& p2,
                                 const EllipsoidParams& ellipsoid = kWgs84);

// Great-circle distance on a sphere of radius kMeanEarthRadiusM.
double haversine_distance_m(const GeoPoint& p1, const GeoPoint& p2);

}  // namespace gac

#endif  // GAC_GEODESY_HPP
