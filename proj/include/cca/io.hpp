#pragma once

#include <map>
#include <string>
#include <vector>

#include "cca/analytic.hpp"
#include "cca/dynamics.hpp"
#include "cca/metrology.hpp"
#include "cca/model.hpp"
#include "cca/spectral.hpp"

namespace cca {

// "# key=value" header line recording the full parameter set.
std::string params_header(const ModelParams& params);

// Two-column CSV "t,pe" with the parameter header.
void write_timeseries_csv(const std::string& path, const ModelParams& params,
                          const TimeSeries& series);
TimeSeries read_timeseries_csv(const std::string& path);

// CSV "t,delta_omega" with the parameter header plus source and T.
void write_curve_csv(const std::string& path, const ModelParams& params,
                     const UncertaintyCurve& curve);

// CSV "freq,magnitude" with the parameter header.
void write_spectrum_csv(const std::string& path, const ModelParams& params,
                        const Spectrum& spectrum);

// JSON with keys x1, x2, a1, a2, phi, residual_upper, residual_lower, params.
std::string bound_state_json(const ModelParams& params, const BoundStateSolution& solution);

// Flat key=value parameter file. Keys: omega_atom, omega_cavity, xi,
// coupling_j, qubits or cavities. '#' starts a comment.
std::map<std::string, double> read_config(const std::string& path);
void apply_config(const std::map<std::string, double>& config, ModelParams& params);

} // namespace cca
