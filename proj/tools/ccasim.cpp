// ccasim - atom/coupled-cavity-array simulator and analysis front end.
// Frequencies on the command line are in units of xi, times in 1/xi.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cca/analytic.hpp"
#include "cca/dynamics.hpp"
#include "cca/errors.hpp"
#include "cca/io.hpp"
#include "cca/metrology.hpp"
#include "cca/model.hpp"
#include "cca/spectral.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitNumerical = 4;

using Clock = std::chrono::steady_clock;

struct ParamFlags {
    std::optional<double> omega_atom;
    std::optional<double> omega_cavity;
    std::optional<double> coupling;
    std::optional<int> qubits;
    std::optional<int> cavities;
    std::string config_path;

    void add_to(CLI::App* cmd, bool need_size = true) {
        cmd->add_option("--omega-atom", omega_atom, "atom frequency Omega (units of xi)");
        cmd->add_option("--omega-cavity", omega_cavity, "cavity frequency omega_0 (units of xi)");
        cmd->add_option("--coupling", coupling, "atom-cavity coupling J (units of xi)");
        if (need_size) {
            auto* q = cmd->add_option("--qubits,-N", qubits, "qubit count N (n = 2^N - 1 cavities)");
            cmd->add_option("--cavities", cavities, "cavity count n (odd)")->excludes(q);
        }
        cmd->add_option("--config", config_path, "flat key=value parameter file");
    }

    // defaults < config file < explicit flags
    cca::ModelParams resolve(bool need_size = true) const {
        cca::ModelParams p;
        p.xi = 1.0;
        if (!config_path.empty()) {
            cca::apply_config(cca::read_config(config_path), p);
        }
        if (omega_atom) p.omega_atom = *omega_atom;
        if (omega_cavity) p.omega_cavity = *omega_cavity;
        if (coupling) p.coupling = *coupling;
        if (qubits) {
            if (*qubits < 1 || *qubits > 14) {
                throw std::invalid_argument("qubit count must be in 1..14");
            }
            p.cavities = (1 << *qubits) - 1;
        }
        if (cavities) p.cavities = *cavities;
        if (!need_size && p.cavities == 0) p.cavities = 3;
        return cca::validate(p);
    }
};

nlohmann::json params_json(const cca::ModelParams& p) {
    return {{"omega_atom", p.omega_atom},
            {"omega_cavity", p.omega_cavity},
            {"xi", p.xi},
            {"coupling_j", p.coupling},
            {"cavities", p.cavities}};
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    out << body;
}

void write_manifest(const std::string& command, const nlohmann::json& params,
                    const std::vector<std::string>& outputs, const std::string& out_prefix,
                    Clock::time_point started, const nlohmann::json& extra = {}) {
    nlohmann::json m;
    m["command"] = command;
    m["tool_version"] = kVersion;
    m["params"] = params;
    m["outputs"] = outputs;
    m["wall_seconds"] = std::chrono::duration<double>(Clock::now() - started).count();
    if (!extra.is_null() && !extra.empty()) m["settings"] = extra;
    write_text(out_prefix + ".manifest.json", m.dump(2) + "\n");
    std::cout << "wrote " << out_prefix << ".manifest.json\n";
}

cca::UncertaintySource parse_source(const std::string& name) {
    if (name == "numeric") return cca::UncertaintySource::numeric;
    if (name == "longtime") return cca::UncertaintySource::longtime_exact;
    if (name == "perturbative") return cca::UncertaintySource::perturbative;
    throw CLI::ValidationError("--source", "must be numeric, longtime or perturbative");
}

cca::DerivativeMode parse_mode(const std::string& name) {
    if (name == "auto") return cca::DerivativeMode::automatic;
    if (name == "central") return cca::DerivativeMode::central;
    if (name == "forward") return cca::DerivativeMode::forward;
    throw CLI::ValidationError("--derivative", "must be auto, central or forward");
}

int run(int argc, char** argv) {
    CLI::App app{"atom + coupled-cavity-array simulator (units: xi = 1)"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    // dynamics ------------------------------------------------------------
    auto* dyn = app.add_subcommand("dynamics", "excited-state population P_e(t)");
    ParamFlags dyn_params;
    dyn_params.add_to(dyn);
    double dyn_tmax = 300.0;
    double dyn_dt = 0.02;
    std::string dyn_out = "dynamics";
    dyn->add_option("--tmax", dyn_tmax, "final time (1/xi)");
    dyn->add_option("--dt", dyn_dt, "grid spacing (1/xi)");
    dyn->add_option("--out,-o", dyn_out, "output prefix");

    // poles ---------------------------------------------------------------
    auto* pol = app.add_subcommand("poles", "bound-state poles, weights and phi");
    ParamFlags pol_params;
    pol_params.add_to(pol);
    std::string pol_out = "poles";
    pol->add_option("--out,-o", pol_out, "output prefix");

    // spectrum ------------------------------------------------------------
    auto* spc = app.add_subcommand("spectrum", "Fourier spectrum of the regular window");
    ParamFlags spc_params;
    spc_params.add_to(spc);
    std::string spc_series;
    std::string spc_out = "spectrum";
    double spc_tmax = 0.0;
    double spc_dt = 0.02;
    bool spc_full = false;
    spc->add_option("--series", spc_series, "existing P_e CSV instead of simulating");
    spc->add_option("--tmax", spc_tmax, "simulated span; default: recurrence bound");
    spc->add_option("--dt", spc_dt, "grid spacing (1/xi)");
    spc->add_flag("--full-span", spc_full, "transform the whole series, skip window detection");
    spc->add_option("--out,-o", spc_out, "output prefix");

    // duration-scaling ------------------------------------------------------
    auto* dur = app.add_subcommand("duration-scaling",
                                   "regular-oscillation duration against qubit count");
    ParamFlags dur_params;
    dur_params.add_to(dur, /*need_size=*/false);
    std::vector<int> dur_qubits{5, 6, 7, 8, 9, 10};
    double dur_dt = 0.02;
    std::string dur_out = "duration";
    dur->add_option("--qubits-list", dur_qubits, "qubit counts to scan");
    dur->add_option("--dt", dur_dt, "grid spacing (1/xi)");
    dur->add_option("--out,-o", dur_out, "output prefix");

    // metrology -------------------------------------------------------------
    auto* met = app.add_subcommand("metrology", "frequency-uncertainty curve dOmega(t)");
    ParamFlags met_params;
    met_params.add_to(met);
    double met_ttotal = 120.0;
    double met_dt = 0.02;
    double met_tmin = 0.0;
    std::string met_source = "numeric";
    std::string met_mode = "auto";
    double met_central = 1e-5;
    double met_forward = 1e-3;
    std::string met_out = "metrology";
    met->add_option("--t-total,-T", met_ttotal, "total experiment duration T (1/xi)");
    met->add_option("--dt", met_dt, "encoding-time grid spacing");
    met->add_option("--tmin", met_tmin, "first encoding time (default dt)");
    met->add_option("--source", met_source, "numeric | longtime | perturbative");
    met->add_option("--derivative", met_mode, "auto | central | forward");
    met->add_option("--fd-step", met_central, "central-difference step (units xi)");
    met->add_option("--fd-forward-step", met_forward, "forward-difference step (units xi)");
    met->add_option("--out,-o", met_out, "output prefix");

    // scaling ---------------------------------------------------------------
    auto* scl = app.add_subcommand("scaling", "log-log fit of dOmega at optimal times");
    ParamFlags scl_params;
    scl_params.add_to(scl);
    double scl_ttotal = 120.0;
    double scl_dt = 0.02;
    double scl_lo = 0.0;
    double scl_hi = 0.0;
    std::string scl_source = "numeric";
    std::string scl_mode = "auto";
    std::string scl_out = "scaling";
    scl->add_option("--t-total,-T", scl_ttotal, "total experiment duration T (1/xi)");
    scl->add_option("--dt", scl_dt, "encoding-time grid spacing");
    scl->add_option("--window-lo", scl_lo, "fit window start (default 1/Gamma)");
    scl->add_option("--window-hi", scl_hi, "fit window end (default 0.7 n/(2 xi))");
    scl->add_option("--source", scl_source, "numeric | longtime | perturbative");
    scl->add_option("--derivative", scl_mode, "auto | central | forward");
    scl->add_option("--out,-o", scl_out, "output prefix");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    const auto started = Clock::now();

    if (dyn->parsed()) {
        const cca::ModelParams params = dyn_params.resolve();
        const cca::TimeSeries series = cca::evolve(params, cca::uniform_grid(dyn_tmax, dyn_dt));
        const std::string csv = dyn_out + ".csv";
        cca::write_timeseries_csv(csv, params, series);
        std::cout << "wrote " << csv << " (" << series.size() << " samples)\n";
        write_manifest("dynamics", params_json(params), {csv}, dyn_out, started,
                       {{"tmax", dyn_tmax}, {"dt", dyn_dt}});
        return 0;
    }

    if (pol->parsed()) {
        const cca::ModelParams params = pol_params.resolve(/*need_size=*/false);
        const cca::BoundStateSolution sol = cca::find_poles(params);
        const std::string json_path = pol_out + ".json";
        write_text(json_path, cca::bound_state_json(params, sol));
        std::cout << "x1=" << sol.x1 << " x2=" << sol.x2 << " phi=" << sol.phi
                  << " a1=" << sol.a1 << " a2=" << sol.a2 << "\n";
        std::cout << "wrote " << json_path << "\n";
        write_manifest("poles", params_json(params), {json_path}, pol_out, started);
        return 0;
    }

    if (spc->parsed()) {
        cca::ModelParams params = spc_params.resolve(spc_series.empty());
        cca::TimeSeries series;
        if (!spc_series.empty()) {
            series = cca::read_timeseries_csv(spc_series);
        } else {
            const double t_wrap = params.cavities / (2.0 * params.xi);
            const double tmax = spc_tmax > 0.0 ? spc_tmax : t_wrap + 30.0 / params.xi;
            series = cca::evolve(params, cca::uniform_grid(tmax, spc_dt));
        }
        nlohmann::json window_json;
        cca::TimeSeries windowed = series;
        if (!spc_full) {
            const cca::BoundStateSolution poles = cca::find_poles(params);
            const cca::OscillationWindow window = cca::detect_regular_window(series, poles);
            windowed = cca::restrict(series, window.t_start, window.t_end);
            const auto [amplitude, mean] = cca::oscillation_stats(windowed, poles.phi);
            window_json = {{"t_start", window.t_start},
                           {"t_end", window.t_end},
                           {"duration", window.duration()},
                           {"amplitude", amplitude},
                           {"mean", mean},
                           {"amplitude_infinite", std::abs(poles.longtime_amplitude())},
                           {"mean_infinite", poles.longtime_mean()}};
        }
        const cca::Spectrum spectrum = cca::fourier_spectrum(windowed);
        const std::string csv = spc_out + ".csv";
        cca::write_spectrum_csv(csv, params, spectrum);
        nlohmann::json summary = {{"peak", spectrum.main_peak_freq},
                                  {"height", spectrum.main_peak_height},
                                  {"fwhm", spectrum.fwhm},
                                  {"bin_width", spectrum.bin_width}};
        if (!window_json.is_null()) summary["window"] = window_json;
        const std::string summary_path = spc_out + ".summary.json";
        write_text(summary_path, summary.dump(2) + "\n");
        std::cout << "peak=" << spectrum.main_peak_freq << " fwhm=" << spectrum.fwhm << "\n";
        std::cout << "wrote " << csv << " and " << summary_path << "\n";
        write_manifest("spectrum", params_json(params), {csv, summary_path}, spc_out, started);
        return 0;
    }

    if (dur->parsed()) {
        const cca::ModelParams base = dur_params.resolve(/*need_size=*/false);
        const cca::DurationScalingResult result =
            cca::duration_scaling(base, dur_qubits, dur_dt);
        const std::string csv = dur_out + ".csv";
        {
            std::ostringstream os;
            os.precision(17);
            // cavity count varies per row; the header carries the rest
            os << "# omega_atom=" << base.omega_atom << " omega_cavity=" << base.omega_cavity
               << " xi=" << base.xi << " coupling_j=" << base.coupling << "\n";
            os << "qubits,duration\n";
            for (std::size_t i = 0; i < result.qubits.size(); ++i) {
                os << result.qubits[i] << "," << result.durations[i] << "\n";
            }
            write_text(csv, os.str());
        }
        nlohmann::json fit = {{"slope", result.fit.slope},
                              {"intercept", result.fit.intercept},
                              {"r", result.fit.r},
                              {"doubling_factor", result.doubling_factor},
                              {"skipped_qubits", result.skipped}};
        const std::string fit_path = dur_out + ".fit.json";
        write_text(fit_path, fit.dump(2) + "\n");
        std::cout << "slope=" << result.fit.slope << " r=" << result.fit.r
                  << " doubling=" << result.doubling_factor << "\n";
        std::cout << "wrote " << csv << " and " << fit_path << "\n";
        nlohmann::json template_params = params_json(base);
        template_params.erase("cavities");  // varies per row
        write_manifest("duration-scaling", template_params, {csv, fit_path}, dur_out, started,
                       {{"qubits_list", dur_qubits}, {"dt", dur_dt}});
        return 0;
    }

    if (met->parsed()) {
        const cca::ModelParams params = met_params.resolve();
        cca::UncertaintyOptions options;
        options.mode = parse_mode(met_mode);
        options.central_step = met_central;
        options.forward_step = met_forward;
        const double t0 = met_tmin > 0.0 ? met_tmin : met_dt;
        const cca::UncertaintyCurve curve =
            cca::uncertainty_curve(params, cca::uniform_grid(met_ttotal, met_dt, t0),
                                   met_ttotal, parse_source(met_source), options);
        const std::string csv = met_out + ".csv";
        cca::write_curve_csv(csv, params, curve);
        std::cout << "wrote " << csv << " (" << curve.size() << " points, "
                  << curve.skipped_times.size() << " skipped)\n";
        write_manifest("metrology", params_json(params), {csv}, met_out, started,
                       {{"t_total", met_ttotal},
                        {"dt", met_dt},
                        {"source", met_source},
                        {"derivative", met_mode},
                        {"skipped_points", curve.skipped_times.size()},
                        {"delta_sq_negative", curve.delta_sq_negative}});
        return 0;
    }

    if (scl->parsed()) {
        const cca::ModelParams params = scl_params.resolve();
        cca::UncertaintyOptions options;
        options.mode = parse_mode(scl_mode);
        const cca::UncertaintyCurve curve =
            cca::uncertainty_curve(params, cca::uniform_grid(scl_ttotal, scl_dt, scl_dt),
                                   scl_ttotal, parse_source(scl_source), options);
        const cca::BoundStateSolution poles = cca::find_poles(params);
        double lo = scl_lo;
        double hi = scl_hi;
        if (lo <= 0.0) {
            const double d = params.detuning();
            const double band = 4.0 * params.xi * params.xi - d * d;
            // default window skips the branch-cut transient ...
            lo = band > 0.0
                     ? std::sqrt(band) / (2.0 * params.coupling * params.coupling)
                     : scl_dt;
        }
        // ... and stops before the ring recurrence bends the power law
        if (hi <= 0.0) hi = 0.7 * params.cavities / (2.0 * params.xi);
        const cca::ScalingFit fit =
            cca::scaling_fit(curve, lo, hi, 2.0 * std::numbers::pi / poles.phi);
        nlohmann::json out = {{"slope", fit.slope},
                              {"intercept", fit.intercept},
                              {"r", fit.r},
                              {"points", fit.points},
                              {"window", {fit.window_lo, fit.window_hi}},
                              {"phi", poles.phi}};
        const std::string fit_path = scl_out + ".fit.json";
        write_text(fit_path, out.dump(2) + "\n");
        std::cout << "slope=" << fit.slope << " intercept=" << fit.intercept
                  << " r=" << fit.r << " window=[" << lo << "," << hi << "]\n";
        std::cout << "wrote " << fit_path << "\n";
        write_manifest("scaling", params_json(params), {fit_path}, scl_out, started,
                       {{"t_total", scl_ttotal},
                        {"dt", scl_dt},
                        {"source", scl_source},
                        {"derivative", scl_mode}});
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CLI::ParseError&) {
        // CLI11_PARSE handles these inside run(); anything escaping is usage
        return kExitUsage;
    } catch (const cca::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const cca::NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
