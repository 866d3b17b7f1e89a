// gac - command line front end: trace synthesis, dead-reckoning runs,
// energy/accuracy sweeps, and GeoJSON export. Every file-producing
// command drops a <output>.manifest.json next to its output; `gac rerun
// <manifest>` reproduces the run byte-for-byte.

#include "gac/evaluation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using nlohmann::json;

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw gac::IoError("cannot open for writing: " + path);
    out << content;
    out.flush();
    if (!out) throw gac::IoError("write failed: " + path);
}

void write_manifest(const std::string& command, const json& parameters,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs, std::uint64_t seed) {
    json manifest = {{"command", command},
                     {"parameters", parameters},
                     {"inputs", inputs},
                     {"outputs", outputs},
                     {"seed", seed}};
    write_text_file(outputs.front() + ".manifest.json", manifest.dump(2) + "\n");
}

// ---------------------------------------------------------------- synth

struct SynthParams {
    std::string scenario;       // preset name, empty when a file is given
    std::string scenario_file;  // takes precedence over the preset
    std::uint64_t seed = 0;
    double t_s = 0.25;
    double truth_step_s = 0.25;
    double gps_period_s = 1.0;
    double accel_sigma = 0.1;
    double heading_sigma = 2.0;
    double gps_pos_sigma = 3.0;
    double gps_speed_sigma = 0.2;
    double mount_pitch_deg = 0.0;
    double mount_roll_deg = 0.0;
    double fix_duration_s = 5.0;
    std::string out;
};

json to_json(const SynthParams& p) {
    return {{"scenario", p.scenario},
            {"scenario-file", p.scenario_file},
            {"seed", p.seed},
            {"t-s", p.t_s},
            {"truth-step-s", p.truth_step_s},
            {"gps-period-s", p.gps_period_s},
            {"accel-sigma", p.accel_sigma},
            {"heading-sigma", p.heading_sigma},
            {"gps-pos-sigma", p.gps_pos_sigma},
            {"gps-speed-sigma", p.gps_speed_sigma},
            {"mount-pitch-deg", p.mount_pitch_deg},
            {"mount-roll-deg", p.mount_roll_deg},
            {"fix-duration-s", p.fix_duration_s},
            {"out", p.out}};
}

SynthParams synth_from_json(const json& j) {
    SynthParams p;
    p.scenario = j.at("scenario").get<std::string>();
    p.scenario_file = j.at("scenario-file").get<std::string>();
    p.seed = j.at("seed").get<std::uint64_t>();
    p.t_s = j.at("t-s").get<double>();
    p.truth_step_s = j.at("truth-step-s").get<double>();
    p.gps_period_s = j.at("gps-period-s").get<double>();
    p.accel_sigma = j.at("accel-sigma").get<double>();
    p.heading_sigma = j.at("heading-sigma").get<double>();
    p.gps_pos_sigma = j.at("gps-pos-sigma").get<double>();
    p.gps_speed_sigma = j.at("gps-speed-sigma").get<double>();
    p.mount_pitch_deg = j.at("mount-pitch-deg").get<double>();
    p.mount_roll_deg = j.at("mount-roll-deg").get<double>();
    p.fix_duration_s = j.at("fix-duration-s").get<double>();
    p.out = j.at("out").get<std::string>();
    return p;
}

gac::Scenario resolve_scenario(const std::string& preset, const std::string& file) {
    if (!file.empty()) return gac::load_scenario_file(file);
    if (!preset.empty()) return gac::preset_scenario(preset);
    throw gac::DomainError("a scenario is required (--scenario or --scenario-file)");
}

void do_synth(const SynthParams& p) {
    const gac::Scenario scenario = resolve_scenario(p.scenario, p.scenario_file);
    const gac::GroundTruth truth = gac::generate_truth(scenario, p.truth_step_s);
    const gac::NoiseModel noise{p.accel_sigma, p.heading_sigma, p.gps_pos_sigma,
                                p.gps_speed_sigma, p.seed};
    const gac::MountAttitude mount{p.mount_pitch_deg, p.mount_roll_deg};
    const gac::Trace trace =
        gac::render_trace(truth, noise, p.t_s, p.gps_period_s, mount, p.fix_duration_s);

    std::ostringstream os;
    gac::save_trace(trace, os);
    write_text_file(p.out, os.str());
    std::vector<std::string> inputs;
    if (!p.scenario_file.empty()) inputs.push_back(p.scenario_file);
    write_manifest("synth", to_json(p), inputs, {p.out}, p.seed);
    for (const std::string& w : truth.warnings) std::cerr << "warning: " << w << '\n';
}

// ------------------------------------------------------------------ run

struct RunParams {
    std::string trace;
    std::string scheme = "gac";
    double tgsync_s = 60.0;
    int smoothing_window = 4;
    double const_speed_threshold = 0.5;
    bool orientation_correction = true;
    std::string out;
};

json to_json(const RunParams& p) {
    return {{"trace", p.trace},
            {"scheme", p.scheme},
            {"tgsync-s", p.tgsync_s},
            {"smoothing-window", p.smoothing_window},
            {"const-speed-threshold", p.const_speed_threshold},
            {"orientation-correction", p.orientation_correction},
            {"out", p.out}};
}

RunParams run_from_json(const json& j) {
    RunParams p;
    p.trace = j.at("trace").get<std::string>();
    p.scheme = j.at("scheme").get<std::string>();
    p.tgsync_s = j.at("tgsync-s").get<double>();
    p.smoothing_window = j.at("smoothing-window").get<int>();
    p.const_speed_threshold = j.at("const-speed-threshold").get<double>();
    p.orientation_correction = j.at("orientation-correction").get<bool>();
    p.out = j.at("out").get<std::string>();
    return p;
}

gac::EstimatorConfig run_config(const RunParams& p, const gac::Trace& trace) {
    gac::EstimatorConfig config;
    config.T_s = trace.meta.sample_interval_T_s;
    config.T_Gsync_s = p.tgsync_s;
    config.smoothing_window = p.smoothing_window;
    config.const_speed_threshold_mps = p.const_speed_threshold;
    config.orientation_correction_enabled = p.orientation_correction;
    return config;
}

std::vector<gac::LocationEstimate> run_scheme_on_trace(const std::string& scheme,
                                                       const gac::Trace& trace,
                                                       const gac::EstimatorConfig& config) {
    switch (gac::parse_scheme(scheme)) {
        case gac::SchemeKind::GpsContinuous: return gac::run_gps_only(trace);
        case gac::SchemeKind::Gac:
        case gac::SchemeKind::GacAccFree: return gac::run_gac(trace, config);
        case gac::SchemeKind::EnLoc: return gac::run_enloc(trace, config);
    }
    throw gac::DomainError("invalid scheme value");
}

void do_run(const RunParams& p) {
    const gac::Trace trace = gac::load_trace_file(p.trace);
    const auto estimates = run_scheme_on_trace(p.scheme, trace, run_config(p, trace));
    std::ostringstream os;
    gac::write_estimates_csv(estimates, os);
    write_text_file(p.out, os.str());
    write_manifest("run", to_json(p), {p.trace}, {p.out}, 0);
}

// ---------------------------------------------------------------- sweep

struct SweepParams {
    std::string scenario;
    std::string scenario_file;
    std::string trace;
    std::vector<std::string> schemes{"gac", "enloc"};
    std::vector<double> tgsync_list{};  // empty -> defaults
    std::vector<std::uint64_t> seeds{1};
    double t_s = 0.25;
    double truth_step_s = 0.25;
    double gps_period_s = 1.0;
    double accel_sigma = 0.1;
    double heading_sigma = 2.0;
    double gps_pos_sigma = 3.0;
    double gps_speed_sigma = 0.2;
    int smoothing_window = 4;
    double const_speed_threshold = 0.5;
    bool orientation_correction = true;
    double fix_duration_s = -1.0;  // < 0: inherit from the profile
    std::string profile_file;
    std::string out;
};

json to_json(const SweepParams& p) {
    return {{"scenario", p.scenario},
            {"scenario-file", p.scenario_file},
            {"trace", p.trace},
            {"schemes", p.schemes},
            {"tgsync-list", p.tgsync_list},
            {"seeds", p.seeds},
            {"t-s", p.t_s},
            {"truth-step-s", p.truth_step_s},
            {"gps-period-s", p.gps_period_s},
            {"accel-sigma", p.accel_sigma},
            {"heading-sigma", p.heading_sigma},
            {"gps-pos-sigma", p.gps_pos_sigma},
            {"gps-speed-sigma", p.gps_speed_sigma},
            {"smoothing-window", p.smoothing_window},
            {"const-speed-threshold", p.const_speed_threshold},
            {"orientation-correction", p.orientation_correction},
            {"fix-duration-s", p.fix_duration_s},
            {"profile-file", p.profile_file},
            {"out", p.out}};
}

SweepParams sweep_from_json(const json& j) {
    SweepParams p;
    p.scenario = j.at("scenario").get<std::string>();
    p.scenario_file = j.at("scenario-file").get<std::string>();
    p.trace = j.at("trace").get<std::string>();
    p.schemes = j.at("schemes").get<std::vector<std::string>>();
    p.tgsync_list = j.at("tgsync-list").get<std::vector<double>>();
    p.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    p.t_s = j.at("t-s").get<double>();
    p.truth_step_s = j.at("truth-step-s").get<double>();
    p.gps_period_s = j.at("gps-period-s").get<double>();
    p.accel_sigma = j.at("accel-sigma").get<double>();
    p.heading_sigma = j.at("heading-sigma").get<double>();
    p.gps_pos_sigma = j.at("gps-pos-sigma").get<double>();
    p.gps_speed_sigma = j.at("gps-speed-sigma").get<double>();
    p.smoothing_window = j.at("smoothing-window").get<int>();
    p.const_speed_threshold = j.at("const-speed-threshold").get<double>();
    p.orientation_correction = j.at("orientation-correction").get<bool>();
    p.fix_duration_s = j.at("fix-duration-s").get<double>();
    p.profile_file = j.at("profile-file").get<std::string>();
    p.out = j.at("out").get<std::string>();
    return p;
}

void do_sweep(const SweepParams& p) {
    gac::SweepConfig config;
    config.estimator.T_s = p.t_s;
    config.estimator.smoothing_window = p.smoothing_window;
    config.estimator.const_speed_threshold_mps = p.const_speed_threshold;
    config.estimator.orientation_correction_enabled = p.orientation_correction;
    config.profile = p.profile_file.empty() ? gac::PowerProfile{}
                                            : gac::load_power_profile_file(p.profile_file);
    if (p.fix_duration_s >= 0.0) config.profile.fix_duration_s = p.fix_duration_s;
    config.truth_step_s = p.truth_step_s;
    config.gps_period_s = p.gps_period_s;

    std::vector<gac::SchemeKind> schemes;
    for (const std::string& s : p.schemes) schemes.push_back(gac::parse_scheme(s));
    const std::vector<double> periods =
        p.tgsync_list.empty() ? gac::default_sweep_periods() : p.tgsync_list;

    std::vector<gac::SweepRecord> records;
    std::vector<std::string> inputs;
    if (!p.trace.empty()) {
        inputs.push_back(p.trace);
        records = gac::run_sweep_on_trace(gac::load_trace_file(p.trace), schemes, periods, config);
    } else {
        if (!p.scenario_file.empty()) inputs.push_back(p.scenario_file);
        const gac::Scenario scenario = resolve_scenario(p.scenario, p.scenario_file);
        const gac::NoiseModel noise{p.accel_sigma, p.heading_sigma, p.gps_pos_sigma,
                                    p.gps_speed_sigma, 0};
        records = gac::run_sweep(scenario, noise, schemes, periods, p.seeds, config);
    }

    std::ostringstream os;
    gac::write_sweep_csv(records, os);
    write_text_file(p.out, os.str());
    write_manifest("sweep", to_json(p), inputs, {p.out},
                   p.seeds.empty() ? 0 : p.seeds.front());
}

// --------------------------------------------------------------- energy

struct EnergyParams {
    std::string scheme;
    double tgsync_s = 60.0;
    double fix_duration_s = -1.0;  // < 0: inherit from the profile
    std::string profile_file;
    std::string out;  // empty -> stdout
};

json to_json(const EnergyParams& p) {
    return {{"scheme", p.scheme},
            {"tgsync-s", p.tgsync_s},
            {"fix-duration-s", p.fix_duration_s},
            {"profile-file", p.profile_file},
            {"out", p.out}};
}

EnergyParams energy_from_json(const json& j) {
    EnergyParams p;
    p.scheme = j.at("scheme").get<std::string>();
    p.tgsync_s = j.at("tgsync-s").get<double>();
    p.fix_duration_s = j.at("fix-duration-s").get<double>();
    p.profile_file = j.at("profile-file").get<std::string>();
    p.out = j.at("out").get<std::string>();
    return p;
}

void do_energy(const EnergyParams& p) {
    gac::PowerProfile profile =
        p.profile_file.empty() ? gac::PowerProfile{} : gac::load_power_profile_file(p.profile_file);
    if (p.fix_duration_s >= 0.0) profile.fix_duration_s = p.fix_duration_s;
    const double current =
        gac::average_current_mA(gac::parse_scheme(p.scheme), p.tgsync_s, profile);
    char line[64];
    std::snprintf(line, sizeof(line), "%.3f mA\n", current);
    if (p.out.empty()) {
        std::cout << line;
    } else {
        write_text_file(p.out, line);
        std::vector<std::string> inputs;
        if (!p.profile_file.empty()) inputs.push_back(p.profile_file);
        write_manifest("energy", to_json(p), inputs, {p.out}, 0);
    }
}

// ------------------------------------------------------- export-geojson

struct ExportParams {
    std::string scenario;
    std::string scenario_file;
    std::string trace;
    std::string estimates_csv;  // optional precomputed estimates
    std::string scheme = "gac";
    double tgsync_s = 60.0;
    std::uint64_t seed = 0;
    double t_s = 0.25;
    double truth_step_s = 0.25;
    double gps_period_s = 1.0;
    double accel_sigma = 0.1;
    double heading_sigma = 2.0;
    double gps_pos_sigma = 3.0;
    double gps_speed_sigma = 0.2;
    int smoothing_window = 4;
    std::string out;
};

json to_json(const ExportParams& p) {
    return {{"scenario", p.scenario},
            {"scenario-file", p.scenario_file},
            {"trace", p.trace},
            {"estimates", p.estimates_csv},
            {"scheme", p.scheme},
            {"tgsync-s", p.tgsync_s},
            {"seed", p.seed},
            {"t-s", p.t_s},
            {"truth-step-s", p.truth_step_s},
            {"gps-period-s", p.gps_period_s},
            {"accel-sigma", p.accel_sigma},
            {"heading-sigma", p.heading_sigma},
            {"gps-pos-sigma", p.gps_pos_sigma},
            {"gps-speed-sigma", p.gps_speed_sigma},
            {"smoothing-window", p.smoothing_window},
            {"out", p.out}};
}

ExportParams export_from_json(const json& j) {
    ExportParams p;
    p.scenario = j.at("scenario").get<std::string>();
    p.scenario_file = j.at("scenario-file").get<std::string>();
    p.trace = j.at("trace").get<std::string>();
    p.estimates_csv = j.at("estimates").get<std::string>();
    p.scheme = j.at("scheme").get<std::string>();
    p.tgsync_s = j.at("tgsync-s").get<double>();
    p.seed = j.at("seed").get<std::uint64_t>();
    p.t_s = j.at("t-s").get<double>();
    p.truth_step_s = j.at("truth-step-s").get<double>();
    p.gps_period_s = j.at("gps-period-s").get<double>();
    p.accel_sigma = j.at("accel-sigma").get<double>();
    p.heading_sigma = j.at("heading-sigma").get<double>();
    p.gps_pos_sigma = j.at("gps-pos-sigma").get<double>();
    p.gps_speed_sigma = j.at("gps-speed-sigma").get<double>();
    p.smoothing_window = j.at("smoothing-window").get<int>();
    p.out = j.at("out").get<std::string>();
    return p;
}

void do_export_geojson(const ExportParams& p) {
    gac::GroundTruth truth;
    std::vector<gac::LocationEstimate> estimates;
    std::vector<std::string> inputs;

    gac::EstimatorConfig config;
    config.T_Gsync_s = p.tgsync_s;
    config.smoothing_window = p.smoothing_window;

    if (!p.trace.empty()) {
        inputs.push_back(p.trace);
        const gac::Trace trace = gac::load_trace_file(p.trace);
        config.T_s = trace.meta.sample_interval_T_s;
        truth = gac::truth_from_gps(trace);
        if (!p.estimates_csv.empty()) {
            inputs.push_back(p.estimates_csv);
            std::ifstream in(p.estimates_csv);
            if (!in) throw gac::IoError("cannot open estimates csv: " + p.estimates_csv);
            estimates = gac::read_estimates_csv(in);
        } else {
            estimates = run_scheme_on_trace(p.scheme, trace, config);
        }
    } else {
        if (!p.scenario_file.empty()) inputs.push_back(p.scenario_file);
        const gac::Scenario scenario = resolve_scenario(p.scenario, p.scenario_file);
        truth = gac::generate_truth(scenario, p.truth_step_s);
        const gac::NoiseModel noise{p.accel_sigma, p.heading_sigma, p.gps_pos_sigma,
                                    p.gps_speed_sigma, p.seed};
        const gac::Trace trace = gac::render_trace(truth, noise, p.t_s, p.gps_period_s);
        config.T_s = p.t_s;
        estimates = run_scheme_on_trace(p.scheme, trace, config);
    }

    std::ostringstream os;
    gac::export_geojson(estimates, truth, os);
    write_text_file(p.out, os.str());
    write_manifest("export-geojson", to_json(p), inputs, {p.out}, p.seed);
}

// ------------------------------------------------------------- validate

int do_validate(const std::string& trace_path) {
    const gac::Trace trace = gac::load_trace_file(trace_path);
    const auto findings = gac::validate_trace(trace);
    for (const gac::Finding& f : findings)
        std::cout << "record " << f.record_index << " [" << f.stream << "] " << f.rule << ": "
                  << f.message << '\n';
    if (findings.empty()) {
        std::cout << "ok: " << trace.sensor_stream.size() << " sensor samples, "
                  << trace.gps_stream.size() << " gps fixes\n";
        return 0;
    }
    return 1;
}

// ---------------------------------------------------------------- rerun

std::string redirect(const std::string& path, const std::string& out_dir) {
    if (out_dir.empty()) return path;
    const auto slash = path.find_last_of('/');
    const std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    return out_dir + "/" + base;
}

int do_rerun(const std::string& manifest_path, const std::string& out_dir) {
    std::ifstream in(manifest_path);
    if (!in) throw gac::IoError("cannot open manifest: " + manifest_path);
    json manifest;
    try {
        manifest = json::parse(in);
    } catch (const json::exception& e) {
        throw gac::ParseError(std::string("bad manifest: ") + e.what(), 0);
    }

    const std::string command = manifest.at("command").get<std::string>();
    const json& params = manifest.at("parameters");
    try {
        if (command == "synth") {
            SynthParams p = synth_from_json(params);
            p.out = redirect(p.out, out_dir);
            do_synth(p);
        } else if (command == "run") {
            RunParams p = run_from_json(params);
            p.out = redirect(p.out, out_dir);
            do_run(p);
        } else if (command == "sweep") {
            SweepParams p = sweep_from_json(params);
            p.out = redirect(p.out, out_dir);
            do_sweep(p);
        } else if (command == "energy") {
            EnergyParams p = energy_from_json(params);
            if (!p.out.empty()) p.out = redirect(p.out, out_dir);
            do_energy(p);
        } else if (command == "export-geojson") {
            ExportParams p = export_from_json(params);
            p.out = redirect(p.out, out_dir);
            do_export_geojson(p);
        } else {
            throw gac::DomainError("manifest names unknown command: " + command);
        }
    } catch (const json::exception& e) {
        throw gac::ParseError(std::string("bad manifest: ") + e.what(), 0);
    }
    return 0;
}

void add_noise_flags(CLI::App* cmd, double& accel, double& heading, double& gps_pos,
                     double& gps_speed) {
    cmd->add_option("--accel-sigma", accel, "Accelerometer noise sigma [m/s^2]");
    cmd->add_option("--heading-sigma", heading, "Compass heading noise sigma [deg]");
    cmd->add_option("--gps-pos-sigma", gps_pos, "GPS position noise sigma [m]");
    cmd->add_option("--gps-speed-sigma", gps_speed, "GPS speed noise sigma [m/s]");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GPS/accelerometer/compass dead-reckoning toolkit"};
    app.require_subcommand(1);

    SynthParams synth;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic sensor/GPS trace");
    synth_cmd->add_option("--scenario", synth.scenario, "Preset scenario: city | highway");
    synth_cmd->add_option("--scenario-file", synth.scenario_file, "Scenario description file");
    synth_cmd->add_option("--seed", synth.seed, "Noise seed");
    synth_cmd->add_option("--t-s", synth.t_s, "Sensor sampling interval [s]");
    synth_cmd->add_option("--truth-step-s", synth.truth_step_s, "Truth integration step [s]");
    synth_cmd->add_option("--gps-period-s", synth.gps_period_s, "GPS fix logging period [s]");
    add_noise_flags(synth_cmd, synth.accel_sigma, synth.heading_sigma, synth.gps_pos_sigma,
                    synth.gps_speed_sigma);
    synth_cmd->add_option("--mount-pitch-deg", synth.mount_pitch_deg, "Device mount pitch [deg]");
    synth_cmd->add_option("--mount-roll-deg", synth.mount_roll_deg, "Device mount roll [deg]");
    synth_cmd->add_option("--fix-duration-s", synth.fix_duration_s, "GPS fix duration [s]");
    synth_cmd->add_option("-o,--out", synth.out, "Output trace path")->required();

    RunParams run;
    auto* run_cmd = app.add_subcommand("run", "Run a localization scheme over a trace");
    run_cmd->add_option("--trace", run.trace, "Input trace path")->required();
    run_cmd->add_option("--scheme", run.scheme,
                        "gps-continuous | gac | gac-accfree | enloc");
    run_cmd->add_option("--tgsync-s", run.tgsync_s, "GPS synchronization period [s]");
    run_cmd->add_option("--smoothing-window", run.smoothing_window, "Readings averaged per step");
    run_cmd->add_option("--const-speed-threshold", run.const_speed_threshold,
                        "Constant-speed detection threshold [m/s]");
    run_cmd->add_flag("!--no-orientation-correction", run.orientation_correction,
                      "Disable gravity-based orientation correction");
    run_cmd->add_option("-o,--out", run.out, "Output estimates CSV")->required();

    SweepParams sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Energy/accuracy tradeoff sweep over T_Gsync");
    sweep_cmd->add_option("--scenario", sweep.scenario, "Preset scenario: city | highway");
    sweep_cmd->add_option("--scenario-file", sweep.scenario_file, "Scenario description file");
    sweep_cmd->add_option("--trace", sweep.trace, "Sweep over an existing trace instead");
    sweep_cmd->add_option("--schemes", sweep.schemes, "Schemes to evaluate")
        ->delimiter(',');
    sweep_cmd->add_option("--tgsync-list", sweep.tgsync_list, "T_Gsync values [s]")
        ->delimiter(',');
    sweep_cmd->add_option("--seeds", sweep.seeds, "Noise seeds")->delimiter(',');
    sweep_cmd->add_option("--t-s", sweep.t_s, "Sensor sampling interval [s]");
    sweep_cmd->add_option("--truth-step-s", sweep.truth_step_s, "Truth integration step [s]");
    sweep_cmd->add_option("--gps-period-s", sweep.gps_period_s, "GPS fix logging period [s]");
    add_noise_flags(sweep_cmd, sweep.accel_sigma, sweep.heading_sigma, sweep.gps_pos_sigma,
                    sweep.gps_speed_sigma);
    sweep_cmd->add_option("--smoothing-window", sweep.smoothing_window,
                          "Readings averaged per step");
    sweep_cmd->add_option("--const-speed-threshold", sweep.const_speed_threshold,
                          "Constant-speed detection threshold [m/s]");
    sweep_cmd->add_flag("!--no-orientation-correction", sweep.orientation_correction,
                        "Disable gravity-based orientation correction");
    sweep_cmd->add_option("--fix-duration-s", sweep.fix_duration_s,
                          "GPS fix duration [s] (default: profile value)");
    sweep_cmd->add_option("--profile", sweep.profile_file, "Power profile key=value file");
    sweep_cmd->add_option("-o,--out", sweep.out, "Output sweep CSV")->required();

    EnergyParams energy;
    auto* energy_cmd = app.add_subcommand("energy", "Average current for a scheme");
    energy_cmd->add_option("--scheme", energy.scheme,
                           "gps-continuous | gac | gac-accfree | enloc")
        ->required();
    energy_cmd->add_option("--tgsync-s", energy.tgsync_s, "GPS synchronization period [s]");
    energy_cmd->add_option("--fix-duration-s", energy.fix_duration_s,
                           "GPS fix duration [s] (default: profile value)");
    energy_cmd->add_option("--profile", energy.profile_file, "Power profile key=value file");
    energy_cmd->add_option("-o,--out", energy.out, "Write the report line to a file");

    ExportParams geo;
    auto* geo_cmd = app.add_subcommand("export-geojson",
                                       "Export truth/estimate tracks as GeoJSON");
    geo_cmd->add_option("--scenario", geo.scenario, "Preset scenario: city | highway");
    geo_cmd->add_option("--scenario-file", geo.scenario_file, "Scenario description file");
    geo_cmd->add_option("--trace", geo.trace, "Use an existing trace (GPS stream as reference)");
    geo_cmd->add_option("--estimates", geo.estimates_csv, "Precomputed estimates CSV");
    geo_cmd->add_option("--scheme", geo.scheme, "gps-continuous | gac | gac-accfree | enloc");
    geo_cmd->add_option("--tgsync-s", geo.tgsync_s, "GPS synchronization period [s]");
    geo_cmd->add_option("--seed", geo.seed, "Noise seed");
    geo_cmd->add_option("--t-s", geo.t_s, "Sensor sampling interval [s]");
    geo_cmd->add_option("--truth-step-s", geo.truth_step_s, "Truth integration step [s]");
    geo_cmd->add_option("--gps-period-s", geo.gps_period_s, "GPS fix logging period [s]");
    add_noise_flags(geo_cmd, geo.accel_sigma, geo.heading_sigma, geo.gps_pos_sigma,
                    geo.gps_speed_sigma);
    geo_cmd->add_option("--smoothing-window", geo.smoothing_window, "Readings averaged per step");
    geo_cmd->add_option("-o,--out", geo.out, "Output GeoJSON path")->required();

    std::string validate_trace_path;
    auto* validate_cmd = app.add_subcommand("validate", "Check a trace file's invariants");
    validate_cmd->add_option("--trace", validate_trace_path, "Trace path")->required();

    std::string manifest_path, rerun_out_dir;
    auto* rerun_cmd = app.add_subcommand("rerun", "Re-execute a command from its manifest");
    rerun_cmd->add_option("manifest", manifest_path, "Manifest JSON path")->required();
    rerun_cmd->add_option("--out-dir", rerun_out_dir, "Redirect outputs into this directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (synth_cmd->parsed()) do_synth(synth);
        else if (run_cmd->parsed()) do_run(run);
        else if (sweep_cmd->parsed()) do_sweep(sweep);
        else if (energy_cmd->parsed()) do_energy(energy);
        else if (geo_cmd->parsed()) do_export_geojson(geo);
        else if (validate_cmd->parsed()) return do_validate(validate_trace_path);
        else if (rerun_cmd->parsed()) return do_rerun(manifest_path, rerun_out_dir);
    } catch (const gac::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const gac::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
