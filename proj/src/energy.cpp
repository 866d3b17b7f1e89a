#include "gac/energy.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace gac {

SchemeKind parse_scheme(const std::string& name) {
    if (name == "gps-continuous") return SchemeKind::GpsContinuous;
    if (name == "gac") return SchemeKind::Gac;
    if (name == "gac-accfree") return SchemeKind::GacAccFree;
    if (name == "enloc") return SchemeKind::EnLoc;
    throw DomainError("unknown scheme: " + name);
}

std::string scheme_name(SchemeKind scheme) {
    switch (scheme) {
        case SchemeKind::GpsContinuous: return "gps-continuous";
        case SchemeKind::Gac: return "gac";
        case SchemeKind::GacAccFree: return "gac-accfree";
        case SchemeKind::EnLoc: return "enloc";
    }
    throw DomainError("invalid scheme value");
}

namespace {

void check_profile(const PowerProfile& p) {
    if (!(p.gps_current_mA > 0.0) || !(p.accel_normal_mA > 0.0) || !(p.accel_ui_mA > 0.0) ||
        !(p.accel_game_mA > 0.0) || !(p.accel_fastest_mA > 0.0))
        throw DomainError("power profile: currents must be > 0");
    if (!(p.fix_duration_s > 0.0)) throw DomainError("power profile: fix duration must be > 0");
}

}  // namespace

double average_current_mA(SchemeKind scheme, double T_Gsync_s, const PowerProfile& profile) {
    check_profile(profile);
    if (scheme == SchemeKind::GpsContinuous) return profile.gps_current_mA;

    if (!(T_Gsync_s >= profile.fix_duration_s))
        throw DomainError("T_Gsync shorter than the fix duration: receiver never off");
    const double duty_cycled = profile.gps_current_mA * profile.fix_duration_s / T_Gsync_s;
    switch (scheme) {
        case SchemeKind::EnLoc:
        case SchemeKind::GacAccFree: return duty_cycled;
        case SchemeKind::Gac: return duty_cycled + profile.accel_normal_mA;
        default: break;
    }
    throw DomainError("invalid scheme value");
}

double charge_per_hour_mAh(SchemeKind scheme, double T_Gsync_s, const PowerProfile& profile) {
    return average_current_mA(scheme, T_Gsync_s, profile) * 1.0;
}

double savings_ratio(SchemeKind scheme, double T_Gsync_s, const PowerProfile& profile) {
    return average_current_mA(SchemeKind::GpsContinuous, T_Gsync_s, profile) /
           average_current_mA(scheme, T_Gsync_s, profile);
}

PowerProfile load_power_profile(std::istream& source) {
    PowerProfile p;
    std::string line;
    long line_no = 0;
    while (std::getline(source, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value", line_no);
        const std::string key = line.substr(0, eq);
        double value = 0.0;
        std::istringstream vs(line.substr(eq + 1));
        if (!(vs >> value)) throw ParseError("bad value for key '" + key + "'", line_no);

        if (key == "gps_current_mA") p.gps_current_mA = value;
        else if (key == "accel_normal_mA") p.accel_normal_mA = value;
        else if (key == "accel_ui_mA") p.accel_ui_mA = value;
        else if (key == "accel_game_mA") p.accel_game_mA = value;
        else if (key == "accel_fastest_mA") p.accel_fastest_mA = value;
        else if (key == "fix_duration_s") p.fix_duration_s = value;
        else throw ParseError("unknown profile key '" + key + "'", line_no);
    }
    check_profile(p);
    return p;
}

PowerProfile load_power_profile_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open power profile: " + path);
    return load_power_profile(in);
}

}  // namespace gac
