#ifndef GAC_ENERGY_HPP
#define GAC_ENERGY_HPP

#include "gac/errors.hpp"

#include <iosfwd>
#include <string>

namespace gac {

// Measured average currents of the localization sensors (HTC Dream
// class hardware). Only the Normal accelerometer mode feeds the duty
// cycle model; the other query modes are carried for completeness.
struct PowerProfile {
    double gps_current_mA = 135.0;
    double accel_normal_mA = 15.0;
    double accel_ui_mA = 25.0;
    double accel_game_mA = 90.0;
    double accel_fastest_mA = 95.0;
    double fix_duration_s = 5.0;  // receiver on-time per fix
};

enum class SchemeKind { GpsContinuous, Gac, GacAccFree, EnLoc };

// "gps-continuous" | "gac" | "gac-accfree" | "enloc"
SchemeKind parse_scheme(const std::string& name);
std::string scheme_name(SchemeKind scheme);

// Average current drawn by a scheme at a given synchronization period.
//   GpsContinuous: gps_current
//   EnLoc:         gps_current * fix_duration / T_Gsync
//   GacAccFree:    same as EnLoc (the Normal-mode accelerometer is
//                  already running for screen rotation, so it is free)
//   Gac:           EnLoc value + accel_normal
// Duty-cycled schemes require T_Gsync >= fix_duration.
double average_current_mA(SchemeKind scheme, double T_Gsync_s, const PowerProfile& profile);

// Charge drawn over one hour: average current * 1 h.
double charge_per_hour_mAh(SchemeKind scheme, double T_Gsync_s, const PowerProfile& profile);

// Continuous-GPS current divided by the scheme current.
double savings_ratio(SchemeKind scheme, double T_Gsync_s, const PowerProfile& profile);

// key=value overrides, keys named exactly as the PowerProfile fields.
PowerProfile load_power_profile(std::istream& source);
PowerProfile load_power_profile_file(const std::string& path);

}  // namespace gac

#endif  // GAC_ENERGY_HPP
