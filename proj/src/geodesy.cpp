#include "gac/geodesy.hpp"

#include <cmath>

namespace gac {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kDegToRad = kPi / 180.0;
constexpr double kRadToDeg = 180.0 / kPi;

// Series coefficients shared by the direct and inverse solutions.
double big_a(double u_sq) {
    return 1.0 + u_sq / 16384.0 * (4096.0 + u_sq * (-768.0 + u_sq * (320.0 - 175.0 * u_sq)));
}

double big_b(double u_sq) {
    return u_sq / 1024.0 * (256.0 + u_sq * (-128.0 + u_sq * (74.0 - 47.0 * u_sq)));
}

double delta_sigma(double big_b_val, double sin_sigma, double cos_sigma, double cos_2sigma_m) {
    const double c2m_sq = cos_2sigma_m * cos_2sigma_m;
    return big_b_val * sin_sigma *
           (cos_2sigma_m +
            big_b_val / 4.0 *
                (cos_sigma * (-1.0 + 2.0 * c2m_sq) -
                 big_b_val / 6.0 * cos_2sigma_m * (-3.0 + 4.0 * sin_sigma * sin_sigma) *
                     (-3.0 + 4.0 * c2m_sq)));
}

void check_point(const GeoPoint& p, const char* what) {
    if (!std::isfinite(p.lat_deg) || !std::isfinite(p.lon_deg))
        throw DomainError(std::string(what) + ": non-finite coordinates");
    if (p.lat_deg < -90.0 || p.lat_deg > 90.0)
        throw DomainError(std::string(what) + ": latitude out of [-90, 90]");
}

}  // namespace

Bearing normalize_bearing(double deg) {
    if (!std::isfinite(deg)) throw DomainError("bearing: non-finite angle");
    double b = std::fmod(deg, 360.0);
    if (b < 0.0) b += 360.0;
    if (b >= 360.0) b = 0.0;  // fmod rounding can land exactly on 360
    return Bearing{b};
}

double normalize_lon(double lon_deg) {
    if (lon_deg >= -180.0 && lon_deg < 180.0) return lon_deg;  // keep bits untouched
    double l = std::fmod(lon_deg + 180.0, 360.0);
    if (l < 0.0) l += 360.0;
    if (l >= 360.0) l = 0.0;
    return l - 180.0;
}

GeoPoint make_geo_point(double lat_deg, double lon_deg) {
    GeoPoint p{lat_deg, lon_deg};
    check_point(p, "point");
    p.lon_deg = normalize_lon(p.lon_deg);
    return p;
}

GeoPoint vincenty_direct(const GeoPoint& origin, Bearing bearing, double distance_m,
                         const EllipsoidParams& ellipsoid) {
    check_point(origin, "vincenty_direct origin");
    if (!std::isfinite(distance_m) || distance_m < 0.0)
        throw DomainError("vincenty_direct: distance must be finite and nonnegative");
    if (distance_m >= 20003000.0)
        throw DomainError("vincenty_direct: distance exceeds half the ellipsoid circumference");

    if (distance_m == 0.0)
        return GeoPoint{origin.lat_deg, normalize_lon(origin.lon_deg)};

    const double a = ellipsoid.semi_major_m;
    const double f = ellipsoid.flattening;
    const double b = a * (1.0 - f);

    const double alpha1 = bearing.deg * kDegToRad;
    const double sin_alpha1 = std::sin(alpha1);
    const double cos_alpha1 = std::cos(alpha1);

    const double tan_u1 = (1.0 - f) * std::tan(origin.lat_deg * kDegToRad);
    const double cos_u1 = 1.0 / std::sqrt(1.0 + tan_u1 * tan_u1);
    const double sin_u1 = tan_u1 * cos_u1;

    const double sigma1 = std::atan2(tan_u1, cos_alpha1);
    const double sin_alpha = cos_u1 * sin_alpha1;
    const double cos_sq_alpha = 1.0 - sin_alpha * sin_alpha;
    const double u_sq = cos_sq_alpha * (a * a - b * b) / (b * b);
    const double A = big_a(u_sq);
    const double B = big_b(u_sq);

    double sigma = distance_m / (b * A);
    double sin_sigma = 0.0, cos_sigma = 0.0, cos_2sigma_m = 0.0;
    double prev_sigma;
    int iter = 0;
    do {
        cos_2sigma_m = std::cos(2.0 * sigma1 + sigma);
        sin_sigma = std::sin(sigma);
        cos_sigma = std::cos(sigma);
        prev_sigma = sigma;
        sigma = distance_m / (b * A) + delta_sigma(B, sin_sigma, cos_sigma, cos_2sigma_m);
        if (++iter > kVincentyMaxIter)
            throw ConvergenceError("vincenty_direct: no convergence");
    } while (std::fabs(sigma - prev_sigma) > kVincentyDirectTolRad);

    const double tmp = sin_u1 * sin_sigma - cos_u1 * cos_sigma * cos_alpha1;
    const double lat2 = std::atan2(
        sin_u1 * cos_sigma + cos_u1 * sin_sigma * cos_alpha1,
        (1.0 - f) * std::sqrt(sin_alpha * sin_alpha + tmp * tmp));
    const double lambda = std::atan2(sin_sigma * sin_alpha1,
                                     cos_u1 * cos_sigma - sin_u1 * sin_sigma * cos_alpha1);
    const double C = f / 16.0 * cos_sq_alpha * (4.0 + f * (4.0 - 3.0 * cos_sq_alpha));
    const double L = lambda - (1.0 - C) * f * sin_alpha *
                                  (sigma + C * sin_sigma *
                                               (cos_2sigma_m +
                                                C * cos_sigma *
                                                    (-1.0 + 2.0 * cos_2sigma_m * cos_2sigma_m)));

    return GeoPoint{lat2 * kRadToDeg, normalize_lon(origin.lon_deg + L * kRadToDeg)};
}

InverseSolution vincenty_inverse(const GeoPoint& p1, const GeoPoint& p2,
                                 const EllipsoidParams& ellipsoid) {
    check_point(p1, "vincenty_inverse p1");
    check_point(p2, "vincenty_inverse p2");

    const double a = ellipsoid.semi_major_m;
    const double f = ellipsoid.flattening;
    const double b = a * (1.0 - f);

    const double L = (normalize_lon(p2.lon_deg) - normalize_lon(p1.lon_deg)) * kDegToRad;

    const double tan_u1 = (1.0 - f) * std::tan(p1.lat_deg * kDegToRad);
    const double cos_u1 = 1.0 / std::sqrt(1.0 + tan_u1 * tan_u1);
    const double sin_u1 = tan_u1 * cos_u1;
    const double tan_u2 = (1.0 - f) * std::tan(p2.lat_deg * kDegToRad);
    const double cos_u2 = 1.0 / std::sqrt(1.0 + tan_u2 * tan_u2);
    const double sin_u2 = tan_u2 * cos_u2;

    double lambda = L;
    double sin_sigma = 0.0, cos_sigma = 0.0, sigma = 0.0;
    double sin_alpha = 0.0, cos_sq_alpha = 0.0, cos_2sigma_m = 0.0;
    double prev_lambda;
    int iter = 0;
    do {
        const double sin_lambda = std::sin(lambda);
        const double cos_lambda = std::cos(lambda);
        const double t1 = cos_u2 * sin_lambda;
        const double t2 = cos_u1 * sin_u2 - sin_u1 * cos_u2 * cos_lambda;
        sin_sigma = std::sqrt(t1 * t1 + t2 * t2);
        cos_sigma = sin_u1 * sin_u2 + cos_u1 * cos_u2 * cos_lambda;
        if (sin_sigma == 0.0) {
            if (cos_sigma > 0.0) return {0.0, Bearing{0.0}};  // coincident points
            throw ConvergenceError("vincenty_inverse: antipodal points");
        }
        sigma = std::atan2(sin_sigma, cos_sigma);
        sin_alpha = cos_u1 * cos_u2 * sin_lambda / sin_sigma;
        cos_sq_alpha = 1.0 - sin_alpha * sin_alpha;
        // Equatorial geodesic: cos^2(alpha) = 0.
        cos_2sigma_m = cos_sq_alpha != 0.0
                           ? cos_sigma - 2.0 * sin_u1 * sin_u2 / cos_sq_alpha
                           : 0.0;
        const double C = f / 16.0 * cos_sq_alpha * (4.0 + f * (4.0 - 3.0 * cos_sq_alpha));
        prev_lambda = lambda;
        lambda = L + (1.0 - C) * f * sin_alpha *
                         (sigma + C * sin_sigma *
                                      (cos_2sigma_m +
                                       C * cos_sigma * (-1.0 + 2.0 * cos_2sigma_m * cos_2sigma_m)));
        if (++iter > kVincentyMaxIter)
            throw ConvergenceError("vincenty_inverse: no convergence (near-antipodal points)");
    } while (std::fabs(lambda - prev_lambda) > kVincentyTolRad);

    const double u_sq = cos_sq_alpha * (a * a - b * b) / (b * b);
    const double A = big_a(u_sq);
    const double B = big_b(u_sq);
    const double dsig = delta_sigma(B, sin_sigma, cos_sigma, cos_2sigma_m);
    const double distance = b * A * (sigma - dsig);

    const double alpha1 = std::atan2(cos_u2 * std::sin(lambda),
                                     cos_u1 * sin_u2 - sin_u1 * cos_u2 * std::cos(lambda));
    return {distance, normalize_bearing(alpha1 * kRadToDeg)};
}

double haversine_distance_m(const GeoPoint& p1, const GeoPoint& p2) {
    check_point(p1, "haversine p1");
    check_point(p2, "haversine p2");
    const double lat1 = p1.lat_deg * kDegToRad;
    const double lat2 = p2.lat_deg * kDegToRad;
    const double dlat = (p2.lat_deg - p1.lat_deg) * kDegToRad;
    const double dlon = (normalize_lon(p2.lon_deg) - normalize_lon(p1.lon_deg)) * kDegToRad;

    const double sin_dlat = std::sin(dlat / 2.0);
    const double sin_dlon = std::sin(dlon / 2.0);
    double h = sin_dlat * sin_dlat + std::cos(lat1) * std::cos(lat2) * sin_dlon * sin_dlon;
    if (h > 1.0) h = 1.0;
    return 2.0 * kMeanEarthRadiusM * std::asin(std::sqrt(h));
}

}  // namespace gac
