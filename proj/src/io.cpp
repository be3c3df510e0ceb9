#include "cca/io.hpp"

#include <json.hpp>

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cca {

namespace {

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

} // namespace

std::string params_header(const ModelParams& params) {
    std::ostringstream os;
    os.precision(17);
    os << "# omega_atom=" << params.omega_atom
       << " omega_cavity=" << params.omega_cavity
       << " xi=" << params.xi
       << " coupling_j=" << params.coupling
       << " cavities=" << params.cavities;
    return os.str();
}

void write_timeseries_csv(const std::string& path, const ModelParams& params,
                          const TimeSeries& series) {
    auto out = open_out(path);
    out << params_header(params) << "\n";
    out << "t,pe\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << format_double(series.times[i]) << "," << format_double(series.values[i]) << "\n";
    }
}

TimeSeries read_timeseries_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open for reading: " + path);
    }
    TimeSeries series;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#' || line.rfind("t,", 0) == 0) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::runtime_error("malformed series row: " + line);
        }
        series.times.push_back(std::stod(line.substr(0, comma)));
        series.values.push_back(std::stod(line.substr(comma + 1)));
    }
    if (series.times.empty()) {
        throw std::runtime_error("empty time series file: " + path);
    }
    return series;
}

void write_curve_csv(const std::string& path, const ModelParams& params,
                     const UncertaintyCurve& curve) {
    auto out = open_out(path);
    out << params_header(params) << " t_total=" << format_double(curve.t_total)
        << " source=" << to_string(curve.source);
    if (curve.delta_sq_negative) {
        out << " delta_sq_negative=1";
    }
    out << "\n";
    out << "t,delta_omega\n";
    for (std::size_t i = 0; i < curve.size(); ++i) {
        out << format_double(curve.times[i]) << "," << format_double(curve.delta_omega[i]) << "\n";
    }
}

void write_spectrum_csv(const std::string& path, const ModelParams& params,
                        const Spectrum& spectrum) {
    auto out = open_out(path);
    out << params_header(params) << "\n";
    out << "freq,magnitude\n";
    for (std::size_t i = 0; i < spectrum.frequencies.size(); ++i) {
        out << format_double(spectrum.frequencies[i]) << ","
            << format_double(spectrum.magnitudes[i]) << "\n";
    }
}

std::string bound_state_json(const ModelParams& params, const BoundStateSolution& solution) {
    nlohmann::json j;
    j["x1"] = solution.x1;
    j["x2"] = solution.x2;
    j["a1"] = solution.a1;
    j["a2"] = solution.a2;
    j["phi"] = solution.phi;
    j["residual_upper"] = solution.residual_upper;
    j["residual_lower"] = solution.residual_lower;
    j["params"] = {{"omega_atom", params.omega_atom},
                   {"omega_cavity", params.omega_cavity},
                   {"xi", params.xi},
                   {"coupling_j", params.coupling},
                   {"cavities", params.cavities}};
    return j.dump(2) + "\n";
}

std::map<std::string, double> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config: " + path);
    }
    std::map<std::string, double> config;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto sep = line.find('=');
        if (sep == std::string::npos) sep = line.find(' ');
        if (sep == std::string::npos) {
            throw std::runtime_error("malformed config line: " + line);
        }
        const std::string key = trim(line.substr(0, sep));
        const std::string value = trim(line.substr(sep + 1));
        try {
            config[key] = std::stod(value);
        } catch (const std::exception&) {
            throw std::runtime_error("malformed config value for " + key + ": " + value);
        }
    }
    return config;
}

void apply_config(const std::map<std::string, double>& config, ModelParams& params) {
    for (const auto& [key, value] : config) {
        if (key == "omega_atom") {
            params.omega_atom = value;
        } else if (key == "omega_cavity") {
            params.omega_cavity = value;
        } else if (key == "xi") {
            params.xi = value;
        } else if (key == "coupling_j") {
            params.coupling = value;
        } else if (key == "cavities") {
            params.cavities = static_cast<int>(value);
        } else if (key == "qubits") {
            const int qubits = static_cast<int>(value);
            if (qubits < 1 || qubits > 14) {
                throw std::runtime_error("config qubits must be in 1..14");
            }
            params.cavities = (1 << qubits) - 1;
        } else {
            throw std::runtime_error("unknown config key: " + key);
        }
    }
}

} // namespace cca
