#include "cca/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "cca/errors.hpp"

namespace cca {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// RMS deviation of one window from the long-time law with the phase free.
double window_rms(const double* ts, const double* ys, std::size_t count,
                  double mean, double amp, double phi) {
    double pc = 0.0, ps = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double d = ys[i] - mean;
        pc += d * std::cos(phi * ts[i]);
        ps += d * std::sin(phi * ts[i]);
    }
    pc *= 2.0 / static_cast<double>(count);
    ps *= 2.0 / static_cast<double>(count);
    const double norm = std::hypot(pc, ps);
    double a = 0.0, b = 0.0;
    if (norm > 0.0) {
        a = amp * pc / norm;
        b = amp * ps / norm;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double model = mean + a * std::cos(phi * ts[i]) + b * std::sin(phi * ts[i]);
        const double d = ys[i] - model;
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(count));
}

} // namespace

OscillationWindow detect_regular_window(const TimeSeries& series,
                                        const BoundStateSolution& model,
                                        const DetectionOptions& options) {
    if (series.size() < 2) {
        throw std::invalid_argument("series too short for window detection");
    }
    const double dt = series.dt();
    const double period = kTwoPi / model.phi;
    const double span = series.times.back() - series.times.front();
    if (span < 20.0 * period) {
        throw std::invalid_argument("series must span at least 20 oscillation periods");
    }
    const double amp = std::abs(model.longtime_amplitude());
    if (!(amp > 0.0)) {
        throw WindowNotFound("no regular window: vanishing oscillation amplitude");
    }
    const double mean = model.longtime_mean();

    const auto window_len =
        std::max<std::size_t>(8, static_cast<std::size_t>(std::lround(options.periods_per_window * period / dt)));
    const auto stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(period / (8.0 * dt))));
    if (series.size() < window_len + 1) {
        throw std::invalid_argument("series shorter than one detection window");
    }

    const double threshold = options.rms_threshold * amp;
    // longest run of compliant window starts
    double best_len = -1.0;
    OscillationWindow best;
    std::size_t i = 0;
    const std::size_t last_start = series.size() - window_len;
    while (i <= last_start) {
        const double rms = window_rms(series.times.data() + i, series.values.data() + i,
                                      window_len, mean, amp, model.phi);
        if (rms >= threshold) {
            i += stride;
            continue;
        }
        const double run_start = series.times[i];
        std::size_t j = i;
        std::size_t last_ok = i;
        while (j <= last_start) {
            const double r = window_rms(series.times.data() + j, series.values.data() + j,
                                        window_len, mean, amp, model.phi);
            if (r >= threshold) break;
            last_ok = j;
            j += stride;
        }
        const double run_end = series.times[std::min(last_ok + window_len - 1, series.size() - 1)];
        if (run_end - run_start > best_len) {
            best_len = run_end - run_start;
            best.t_start = run_start;
            best.t_end = run_end;
        }
        i = j + stride;
    }
    if (best_len <= 0.0) {
        throw WindowNotFound("no regular window: series never tracks the long-time law");
    }
    return best;
}

Spectrum fourier_spectrum(const TimeSeries& series) {
    if (series.size() < 256) {
        throw std::invalid_argument("spectrum requires at least 256 samples");
    }
    const double dt = series.dt();  // throws on non-uniform grids
    const std::size_t n = series.size();
    const std::size_t padded = 8 * n;

    std::vector<double> buf(padded, 0.0);
    double mean = 0.0;
    for (const double v : series.values) mean += v;
    mean /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double hann =
            0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(n - 1)));
        buf[i] = (series.values[i] - mean) * hann;
    }

    std::vector<std::complex<double>> out(padded / 2 + 1);
    // FFTW's planner has global state; this function is not reentrant
    fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(padded), buf.data(),
                                          reinterpret_cast<fftw_complex*>(out.data()),
                                          FFTW_ESTIMATE);
    if (plan == nullptr) {
        throw NumericalError("FFT plan creation failed");
    }
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    Spectrum spec;
    spec.bin_width = kTwoPi / (static_cast<double>(padded) * dt);
    spec.frequencies.resize(out.size());
    spec.magnitudes.resize(out.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        spec.frequencies[k] = static_cast<double>(k) * spec.bin_width;
        spec.magnitudes[k] = std::abs(out[k]);
    }

    std::size_t peak = 1;
    for (std::size_t k = 2; k < spec.magnitudes.size(); ++k) {
        if (spec.magnitudes[k] > spec.magnitudes[peak]) peak = k;
    }
    spec.main_peak_freq = spec.frequencies[peak];
    spec.main_peak_height = spec.magnitudes[peak];

    // half-power crossings, linearly interpolated
    const double half = spec.main_peak_height / std::numbers::sqrt2;
    std::size_t lo = peak;
    while (lo > 0 && spec.magnitudes[lo] > half) --lo;
    std::size_t hi = peak;
    while (hi + 1 < spec.magnitudes.size() && spec.magnitudes[hi] > half) ++hi;
    if (spec.magnitudes[lo] > half || spec.magnitudes[hi] > half) {
        throw NumericalError("half-power crossing not bracketed around the main peak");
    }
    const auto cross = [&](std::size_t a, std::size_t b) {
        const double ma = spec.magnitudes[a];
        const double mb = spec.magnitudes[b];
        return spec.frequencies[a] + (spec.frequencies[b] - spec.frequencies[a]) * (half - ma) / (mb - ma);
    };
    spec.fwhm = cross(hi - 1, hi) - cross(lo + 1, lo);
    return spec;
}

std::pair<double, double> oscillation_stats(const TimeSeries& series, double phi) {
    if (!(phi > 0.0)) {
        throw std::invalid_argument("phi must be positive");
    }
    if (series.size() < 2) {
        throw std::invalid_argument("window too short for statistics");
    }
    const double span = series.times.back() - series.times.front();
    if (span < 5.0 * kTwoPi / phi) {
        throw std::invalid_argument("window shorter than 5 oscillation periods");
    }
    double mean = 0.0;
    for (const double v : series.values) mean += v;
    mean /= static_cast<double>(series.size());

    std::vector<double> sorted = series.values;
    std::sort(sorted.begin(), sorted.end());
    const auto percentile = [&](double p) {
        const double pos = p * static_cast<double>(sorted.size() - 1);
        const auto k = static_cast<std::size_t>(pos);
        if (k + 1 >= sorted.size()) return sorted.back();
        const double frac = pos - static_cast<double>(k);
        return sorted[k] * (1.0 - frac) + sorted[k + 1] * frac;
    };
    const double amplitude = 0.5 * (percentile(0.99) - percentile(0.01));
    return {amplitude, mean};
}

TimeSeries restrict(const TimeSeries& series, double t_start, double t_end) {
    TimeSeries out;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series.times[i] >= t_start && series.times[i] <= t_end) {
            out.times.push_back(series.times[i]);
            out.values.push_back(series.values[i]);
        }
    }
    return out;
}

DurationScalingResult duration_scaling(const ModelParams& params_template,
                                       const std::vector<int>& qubit_counts,
                                       double dt, const DetectionOptions& options) {
    if (qubit_counts.size() < 4) {
        throw std::invalid_argument("duration scaling needs at least 4 qubit counts");
    }
    // pole equations are n-independent; any valid ring size works here
    ModelParams probe = params_template;
    probe.cavities = 3;
    const BoundStateSolution poles = find_poles(validate(probe));

    DurationScalingResult result;
    for (const int n_qubits : qubit_counts) {
        ModelParams p = ModelParams::from_qubits(params_template.omega_atom,
                                                 params_template.omega_cavity,
                                                 params_template.coupling, n_qubits,
                                                 params_template.xi);
        // windows cannot outlast the ring recurrence at group velocity 2 xi
        const double t_wrap = static_cast<double>(p.cavities) / (2.0 * p.xi);
        const double t_max = t_wrap + 30.0 / p.xi;
        const TimeSeries series = evolve(p, uniform_grid(t_max, dt));
        try {
            const OscillationWindow window = detect_regular_window(series, poles, options);
            result.qubits.push_back(n_qubits);
            result.durations.push_back(window.duration());
        } catch (const WindowNotFound&) {
            result.skipped.push_back(n_qubits);
        }
    }
    if (result.qubits.size() < 4) {
        throw DomainError("too few detectable windows for the duration fit");
    }
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < result.qubits.size(); ++i) {
        xs.push_back(static_cast<double>(result.qubits[i]));
        ys.push_back(std::log(result.durations[i] * params_template.xi));
    }
    result.fit = linear_fit(xs, ys);
    result.doubling_factor = std::exp(result.fit.slope);
    return result;
}

LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw std::invalid_argument("fit needs at least two points");
    }
    const auto n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        syy += ys[i] * ys[i];
        sxy += xs[i] * ys[i];
    }
    const double vxx = sxx - sx * sx / n;
    const double vyy = syy - sy * sy / n;
    const double vxy = sxy - sx * sy / n;
    if (!(vxx > 0.0)) {
        throw std::invalid_argument("degenerate x values in fit");
    }
    LinearFit fit;
    fit.slope = vxy / vxx;
    fit.intercept = (sy - fit.slope * sx) / n;
    fit.r = (vyy > 0.0) ? vxy / std::sqrt(vxx * vyy) : 0.0;
    return fit;
}

} // namespace cca
