#include "cca/metrology.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cca/errors.hpp"

namespace cca {

namespace {

constexpr double kPopulationFloor = 1e-13;

// Population and Omega-derivative evaluators for one parameter set, with the
// shifted diagonalizations precomputed once.
class NumericSource {
public:
    NumericSource(const ModelParams& params, const UncertaintyOptions& opt) {
        mode_ = opt.mode;
        if (mode_ == DerivativeMode::automatic) {
            // at Omega = omega_0 the population is even in the detuning and the
            // linear response vanishes identically; probe the quadratic channel
            const bool symmetric = std::abs(params.detuning()) < opt.forward_step;
            mode_ = symmetric ? DerivativeMode::forward : DerivativeMode::central;
        }
        base_ = diagonalize(params);
        const auto shifted = [&](double d) {
            ModelParams p = params;
            p.omega_atom += d;
            return diagonalize(p);
        };
        if (mode_ == DerivativeMode::forward) {
            step_ = opt.forward_step;
            plus_h_ = shifted(step_);
        } else {
            step_ = opt.central_step;
            plus_h_ = shifted(step_);
            minus_h_ = shifted(-step_);
            plus_half_ = shifted(0.5 * step_);
            minus_half_ = shifted(-0.5 * step_);
        }
    }

    double pe(double t) const { return base_.population(t); }

    double dpe(double t) const {
        if (mode_ == DerivativeMode::forward) {
            return (plus_h_.population(t) - base_.population(t)) / step_;
        }
        const double d_h = (plus_h_.population(t) - minus_h_.population(t)) / (2.0 * step_);
        const double d_half =
            (plus_half_.population(t) - minus_half_.population(t)) / step_;
        return (4.0 * d_half - d_h) / 3.0;
    }

private:
    DerivativeMode mode_;
    double step_ = 0.0;
    SpectralDecomposition base_, plus_h_, minus_h_, plus_half_, minus_half_;
};

class LongtimeSource {
public:
    LongtimeSource(const ModelParams& params, const UncertaintyOptions& opt)
        : step_(opt.central_step),
          center_(find_poles(params)) {
        ModelParams p = params;
        p.omega_atom += step_;
        plus_ = find_poles(p);
        p.omega_atom = params.omega_atom - step_;
        minus_ = find_poles(p);
    }

    double pe(double t) const { return pe_longtime(center_, t); }

    double dpe(double t) const {
        return (pe_longtime(plus_, t) - pe_longtime(minus_, t)) / (2.0 * step_);
    }

private:
    double step_;
    BoundStateSolution center_, plus_, minus_;
};

double uncertainty_from(double pe, double dpe, double t, double t_total) {
    const double fisher = fisher_information(pe, dpe);
    if (!(fisher > 0.0)) {
        throw DomainError("singular time point: Fisher information vanishes");
    }
    return std::sqrt(t / (t_total * fisher));
}

template <typename PeFn, typename DpeFn>
UncertaintyCurve build_curve(const std::vector<double>& times, double t_total,
                             UncertaintySource source, PeFn pe_fn, DpeFn dpe_fn) {
    UncertaintyCurve curve;
    curve.times.reserve(times.size());
    curve.delta_omega.reserve(times.size());
    curve.t_total = t_total;
    curve.source = source;
    const double t_cap = t_total * (1.0 + 1e-12);
    for (const double t : times) {
        if (!(t > 0.0) || t > t_cap) {
            throw std::invalid_argument("grid must lie within (0, t_total]");
        }
        try {
            const double value = uncertainty_from(pe_fn(t), dpe_fn(t), t, t_total);
            if (!std::isfinite(value)) {
                throw DomainError("non-finite uncertainty");
            }
            curve.times.push_back(t);
            curve.delta_omega.push_back(value);
        } catch (const DomainError&) {
            curve.skipped_times.push_back(t);
        }
    }
    return curve;
}

} // namespace

std::string to_string(UncertaintySource source) {
    switch (source) {
        case UncertaintySource::numeric: return "numeric";
        case UncertaintySource::longtime_exact: return "longtime_exact";
        case UncertaintySource::perturbative: return "perturbative";
    }
    return "unknown";
}

std::string to_string(DerivativeMode mode) {
    switch (mode) {
        case DerivativeMode::automatic: return "auto";
        case DerivativeMode::central: return "central";
        case DerivativeMode::forward: return "forward";
    }
    return "unknown";
}

double fisher_information(double pe, double dpe_domega) {
    if (!(pe > 0.0) || !(pe < 1.0)) {
        throw DegeneratePopulation("degenerate population: P_e at 0 or 1");
    }
    return dpe_domega * dpe_domega / (pe * (1.0 - pe));
}

double uncertainty_at(const ModelParams& params, double t, double t_total,
                      UncertaintySource source, const UncertaintyOptions& options) {
    if (!(t > 0.0) || !(t <= t_total)) {
        throw std::invalid_argument("require 0 < t <= t_total");
    }
    switch (source) {
        case UncertaintySource::numeric: {
            NumericSource src(params, options);
            const double pe = src.pe(t);
            if (pe <= kPopulationFloor || pe >= 1.0 - kPopulationFloor) {
                throw DegeneratePopulation("degenerate population: P_e at 0 or 1");
            }
            return uncertainty_from(pe, src.dpe(t), t, t_total);
        }
        case UncertaintySource::longtime_exact: {
            LongtimeSource src(params, options);
            return uncertainty_from(src.pe(t), src.dpe(t), t, t_total);
        }
        case UncertaintySource::perturbative: {
            return perturbative_uncertainty(params, t, t_total);
        }
    }
    throw std::invalid_argument("unknown uncertainty source");
}

UncertaintyCurve uncertainty_curve(const ModelParams& params,
                                   const std::vector<double>& times, double t_total,
                                   UncertaintySource source,
                                   const UncertaintyOptions& options) {
    if (times.empty()) {
        throw std::invalid_argument("time grid is empty");
    }
    switch (source) {
        case UncertaintySource::numeric: {
            NumericSource src(params, options);
            return build_curve(
                times, t_total, source,
                [&](double t) {
                    const double pe = src.pe(t);
                    if (pe <= kPopulationFloor || pe >= 1.0 - kPopulationFloor) {
                        throw DegeneratePopulation("degenerate population");
                    }
                    return pe;
                },
                [&](double t) { return src.dpe(t); });
        }
        case UncertaintySource::longtime_exact: {
            LongtimeSource src(params, options);
            return build_curve(times, t_total, source,
                               [&](double t) { return src.pe(t); },
                               [&](double t) { return src.dpe(t); });
        }
        case UncertaintySource::perturbative: {
            perturbative_solution(params);  // fail fast on band-edge degeneracy
            UncertaintyCurve curve;
            curve.t_total = t_total;
            curve.source = source;
            const double t_cap = t_total * (1.0 + 1e-12);
            for (const double t : times) {
                if (!(t > 0.0) || t > t_cap) {
                    throw std::invalid_argument("grid must lie within (0, t_total]");
                }
                try {
                    const double d2 = perturbative_uncertainty_squared(params, t, t_total);
                    if (d2 < 0.0) {
                        curve.delta_sq_negative = true;
                    }
                    const double value = std::sqrt(std::abs(d2));
                    if (!std::isfinite(value)) {
                        throw DomainError("non-finite uncertainty");
                    }
                    curve.times.push_back(t);
                    curve.delta_omega.push_back(value);
                } catch (const DomainError&) {
                    curve.skipped_times.push_back(t);
                }
            }
            return curve;
        }
    }
    throw std::invalid_argument("unknown uncertainty source");
}

ScalingFit scaling_fit(const UncertaintyCurve& curve, double window_lo,
                       double window_hi, double period) {
    if (!(window_hi > window_lo)) {
        throw std::invalid_argument("empty fit window");
    }
    const auto& ts = curve.times;
    const auto& ys = curve.delta_omega;

    std::vector<std::size_t> picks;
    if (period > 0.0) {
        // one optimal (minimal) sample per period bin
        const auto k0 = static_cast<long>(std::floor(window_lo / period));
        const auto k1 = static_cast<long>(std::ceil(window_hi / period));
        for (long k = k0; k < k1; ++k) {
            const double lo = std::max(window_lo, k * period);
            const double hi = std::min(window_hi, (k + 1) * period);
            std::size_t best = ts.size();
            for (std::size_t i = 0; i < ts.size(); ++i) {
                if (ts[i] < lo || ts[i] >= hi) continue;
                if (best == ts.size() || ys[i] < ys[best]) best = i;
            }
            if (best != ts.size()) picks.push_back(best);
        }
    } else {
        for (std::size_t i = 1; i + 1 < ts.size(); ++i) {
            if (ts[i] < window_lo || ts[i] > window_hi) continue;
            if (ys[i] < ys[i - 1] && ys[i] <= ys[i + 1]) picks.push_back(i);
        }
    }
    if (picks.size() < 10) {
        throw DomainError("insufficient optimal-time points in fit window");
    }

    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    const auto n = static_cast<double>(picks.size());
    for (const std::size_t i : picks) {
        const double x = std::log(1.0 / ts[i]);
        const double y = std::log(ys[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    const double vxx = sxx - sx * sx / n;
    const double vyy = syy - sy * sy / n;
    const double vxy = sxy - sx * sy / n;
    if (!(vxx > 0.0)) {
        throw DomainError("degenerate abscissa in fit window");
    }
    ScalingFit fit;
    fit.slope = vxy / vxx;
    fit.intercept = (sy - fit.slope * sx) / n;
    fit.r = (vyy > 0.0) ? vxy / std::sqrt(vxx * vyy) : 0.0;
    fit.points = picks.size();
    fit.window_lo = window_lo;
    fit.window_hi = window_hi;
    return fit;
}

} // namespace cca
