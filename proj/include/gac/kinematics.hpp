#ifndef GAC_KINEMATICS_HPP
#define GAC_KINEMATICS_HPP

#include <algorithm>

namespace gac {

inline constexpr double kStandardGravityMps2 = 9.80665;

struct KinematicStep {
    double displacement_m;
    double next_speed_mps;
    bool clamped;  // reverse motion was suppressed
};

// One interval of constant-acceleration motion along the heading:
//   l = v*dt + a*dt^2/2,  v' = v + a*dt
// Reverse motion is not modeled: a negative displacement is clamped to 0
// and the speed is zeroed. Both the trajectory generator and the dead
// reckoner advance with exactly this rule.
inline KinematicStep advance_constant_accel(double speed_mps, double accel_mps2, double dt_s) {
    double l = speed_mps * dt_s + 0.5 * accel_mps2 * dt_s * dt_s;
    bool clamped = false;
    if (l < 0.0) {
        l = 0.0;
        speed_mps = 0.0;
        clamped = true;
    }
    const double next_speed = std::max(0.0, speed_mps + accel_mps2 * dt_s);
    return {l, next_speed, clamped};
}

}  // namespace gac

#endif  // GAC_KINEMATICS_HPP
