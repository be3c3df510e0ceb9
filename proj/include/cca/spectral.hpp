#pragma once

#include <utility>
#include <vector>

#include "cca/analytic.hpp"
#include "cca/dynamics.hpp"
#include "cca/model.hpp"

namespace cca {

struct OscillationWindow {
    double t_start = 0.0;
    double t_end = 0.0;
    double duration() const { return t_end - t_start; }
};

struct Spectrum {
    std::vector<double> frequencies;  // angular, units xi, ascending from 0
    std::vector<double> magnitudes;
    double main_peak_freq = 0.0;
    double main_peak_height = 0.0;
    double fwhm = 0.0;       // half-power width of the main peak, interpolated
    double bin_width = 0.0;  // padded-grid frequency spacing
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r = 0.0;
};

struct DetectionOptions {
    double periods_per_window = 4.0;
    double rms_threshold = 0.25;  // fraction of the model amplitude |2 A1 A2|
};

struct DurationScalingResult {
    std::vector<int> qubits;         // N values with a detected window
    std::vector<double> durations;   // xi * duration per N
    std::vector<int> skipped;        // N values without a window
    LinearFit fit;                   // ln(xi duration) against N
    double doubling_factor = 0.0;    // exp(slope)
};

// Longest contiguous run where a sliding 4-period window of the series stays
// within an RMS band of the phase-fitted long-time law. Throws WindowNotFound
// when no compliant window exists (small rings never settle).
OscillationWindow detect_regular_window(const TimeSeries& series,
                                        const BoundStateSolution& model,
                                        const DetectionOptions& options = {});

// Mean-subtracted, Hann-windowed, zero-padded (8x) Fourier magnitudes of a
// uniformly sampled series; main peak above zero frequency and its
// half-power width by linear interpolation.
Spectrum fourier_spectrum(const TimeSeries& series);

// Time mean and robust half-range (1st/99th percentiles) over the window.
// phi fixes the oscillation period for the length precondition.
std::pair<double, double> oscillation_stats(const TimeSeries& series, double phi);

// Restrict a series to [t_start, t_end].
TimeSeries restrict(const TimeSeries& series, double t_start, double t_end);

// Regular-oscillation duration per qubit count and the ln(duration)-vs-N fit.
DurationScalingResult duration_scaling(const ModelParams& params_template,
                                       const std::vector<int>& qubit_counts,
                                       double dt = 0.02,
                                       const DetectionOptions& options = {});

// Ordinary least squares with Pearson r.
LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys);

} // namespace cca
