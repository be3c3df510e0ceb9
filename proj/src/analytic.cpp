#include "cca/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cca/errors.hpp"

namespace cca {

namespace {

constexpr double kBracketEpsFactor = 1e-8;
constexpr double kBisectTolFactor = 1e-12;

double band_parameter(const ModelParams& params, double x) {
    return (x - params.omega_cavity) / params.xi;  // M = (x - omega_0)/xi
}

// d/dx of the pole residuals; > 1 on both out-of-band domains.
double pole_function_upper_deriv(const ModelParams& params, double x) {
    const double m = band_parameter(params, x);
    const double j2 = params.coupling * params.coupling;
    const double s = m * m - 4.0;
    return 1.0 + j2 * m / (params.xi * params.xi * s * std::sqrt(s));
}

double pole_function_lower_deriv(const ModelParams& params, double x) {
    const double m = band_parameter(params, x);
    const double j2 = params.coupling * params.coupling;
    const double s = m * m - 4.0;
    return 1.0 - j2 * m / (params.xi * params.xi * s * std::sqrt(s));
}

template <typename F>
double bisect_root(F f, double a, double b, double tol) {
    double fa = f(a);
    const double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) {
        throw PoleNotFound("pole not found: no sign change in bracket");
    }
    while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (fa * fm < 0.0) {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    return 0.5 * (a + b);
}

struct B123 {
    double b1;
    double b2;
    double b3_sqrt;
};

B123 eval_b_terms(const ModelParams& params, double t) {
    const double xi = params.xi;
    const double j = params.coupling;
    const double om = params.omega_atom;
    const double w0 = params.omega_cavity;
    const double op = 2.0 * xi + w0 - om;   // Omega_+
    const double on = -2.0 * xi + w0 - om;  // Omega_-
    if (op == 0.0 || on == 0.0) {
        throw DomainError("band-edge degeneracy: Omega = omega_0 +/- 2 xi");
    }
    const double j4 = j * j * j * j;
    const double j8 = j4 * j4;
    const double op3 = op * op * op;
    const double on3 = on * on * on;
    const double op4 = op3 * op;
    const double on4 = on3 * on;
    const double op6 = op3 * op3;
    const double on6 = on3 * on3;
    const double op7 = op6 * op;
    const double on7 = on6 * on;

    const double c1 = 1.0 / (4.0 * xi * op * op);
    const double c2 = -1.0 / (4.0 * xi * on * on);
    const double phi = 4.0 * xi + (c1 - c2) * j4;
    const double cp = std::cos(phi * t);
    const double sp = std::sin(phi * t);

    B123 b;
    b.b1 = -j8 / (4.0 * on6 * xi * xi) - j8 / (4.0 * op6 * xi * xi)
           + j8 * cp / (2.0 * on3 * op3 * xi * xi) + 1.0;
    b.b2 = 1.0 / on6 + 1.0 / op6 - 2.0 * cp / (on3 * op3);
    const double d = om - w0;
    b.b3_sqrt = j4 * t * d * (12.0 * xi * xi + d * d) * sp / (xi * on6 * op6)
                - 3.0 / on7 - 3.0 / op7 + 3.0 * cp / (on4 * op3) + 3.0 * cp / (on3 * op4);
    return b;
}

} // namespace

double pole_function_upper(const ModelParams& params, double x) {
    const auto [lower, upper] = band_edges(params);
    (void)lower;
    if (!(x > upper)) {
        throw DomainError("upper pole function requires x above the band");
    }
    const double m = band_parameter(params, x);
    const double j2 = params.coupling * params.coupling;
    return x - params.omega_atom - j2 / (params.xi * std::sqrt(m * m - 4.0));
}

double pole_function_lower(const ModelParams& params, double x) {
    const auto [lower, upper] = band_edges(params);
    (void)upper;
    if (!(x < lower)) {
        throw DomainError("lower pole function requires x below the band");
    }
    const double m = band_parameter(params, x);
    const double j2 = params.coupling * params.coupling;
    return x - params.omega_atom + j2 / (params.xi * std::sqrt(m * m - 4.0));
}

BoundStateSolution find_poles(const ModelParams& params) {
    validate(params);
    if (!(params.coupling > 0.0)) {
        throw PoleNotFound("pole not found: decoupled atom (J = 0)");
    }
    const double xi = params.xi;
    const auto [lower, upper] = band_edges(params);
    const double eps = kBracketEpsFactor * xi;
    const double lambda = std::max(10.0 * xi, 2.0 * std::abs(params.detuning()) + 10.0 * xi);
    const double tol = kBisectTolFactor * xi;

    const auto f1 = [&](double x) { return pole_function_upper(params, x); };
    const auto f2 = [&](double x) { return pole_function_lower(params, x); };

    BoundStateSolution sol;
    sol.x1 = bisect_root(f1, upper + eps, upper + lambda, tol);
    sol.x2 = bisect_root(f2, lower - lambda, lower - eps, tol);

    // one Newton polish; the residuals are monotone with derivative > 1
    sol.x1 -= pole_function_upper(params, sol.x1) / pole_function_upper_deriv(params, sol.x1);
    sol.x2 -= pole_function_lower(params, sol.x2) / pole_function_lower_deriv(params, sol.x2);
    if (!(sol.x1 > upper)) sol.x1 = upper + eps;  // Newton cannot leave the domain by much
    if (!(sol.x2 < lower)) sol.x2 = lower - eps;

    sol.residual_upper = pole_function_upper(params, sol.x1);
    sol.residual_lower = pole_function_lower(params, sol.x2);
    // near-edge poles have steep residuals, so gate on the implied root error
    // |f/f'| (the residual in frequency units); f' >= 1 on both domains
    const double err_upper =
        std::abs(sol.residual_upper) / pole_function_upper_deriv(params, sol.x1);
    const double err_lower =
        std::abs(sol.residual_lower) / pole_function_lower_deriv(params, sol.x2);
    if (err_upper > 1e-10 * xi || err_lower > 1e-10 * xi) {
        throw NumericalError("pole location error above tolerance after refinement");
    }

    const auto [a1, a2] = residue_weights(params, sol);
    sol.a1 = a1;
    sol.a2 = a2;
    sol.phi = sol.x1 - sol.x2;
    return sol;
}

std::pair<double, double> residue_weights(const ModelParams& params,
                                          const BoundStateSolution& poles) {
    const auto weight = [&](double x) {
        const double dx0 = x - params.omega_cavity;
        const double num = dx0 * dx0 - 4.0 * params.xi * params.xi;
        return num / (num + (x - params.omega_atom) * dx0);
    };
    const auto [lower, upper] = band_edges(params);
    if (!(poles.x1 > upper) || !(poles.x2 < lower)) {
        throw DomainError("residue weights require out-of-band poles");
    }
    return {weight(poles.x1), weight(poles.x2)};
}

double branch_cut_density(const ModelParams& params, double x) {
    const double xi = params.xi;
    const double band = 4.0 * xi * xi - x * x;
    if (band <= 0.0) return 0.0;
    const double j2 = params.coupling * params.coupling;
    const double a = params.omega_atom - params.omega_cavity + x;
    // 1/pi restores the sum rule A1 + A2 + int C dx = 1
    return j2 * std::sqrt(band) / ((a * a * band + j2 * j2) * std::numbers::pi);
}

namespace {

// Fixed-order Gauss-Chebyshev (2nd kind) evaluation of the cut integral.
std::complex<double> cut_fixed_order(const ModelParams& params, double t, int order) {
    const double xi = params.xi;
    const double j2 = params.coupling * params.coupling;
    const double shift = params.omega_atom - params.omega_cavity;
    std::complex<double> acc(0.0, 0.0);
    const double step = std::numbers::pi / (order + 1.0);
    for (int i = 1; i <= order; ++i) {
        const double theta = i * step;
        const double s = std::sin(theta);
        const double u = std::cos(theta);
        const double x = 2.0 * xi * u;
        const double a = shift + x;
        const double band = 4.0 * xi * xi - x * x;
        const double g = 4.0 * xi * xi * j2 / ((a * a * band + j2 * j2) * std::numbers::pi);
        acc += (step * s * s * g) * std::polar(1.0, (x - params.omega_cavity) * t);
    }
    return acc;
}

int cut_seed_order(const ModelParams& params, double t, int min_order) {
    // resolve the e^{i 2 xi t cos(theta)} oscillation: >= ~2 nodes per radian
    const double span = 4.0 * params.xi * std::abs(t);
    int order = min_order;
    while (order < 2.0 * span && order < (1 << 20)) order *= 2;
    return order;
}

} // namespace

std::complex<double> branch_cut_integral(const ModelParams& params, double t,
                                         double tol, int min_order, int max_order) {
    if (params.coupling == 0.0) {
        return {0.0, 0.0};
    }
    int order = cut_seed_order(params, t, min_order);
    std::complex<double> prev = cut_fixed_order(params, t, order);
    while (order <= max_order) {
        order *= 2;
        const std::complex<double> cur = cut_fixed_order(params, t, order);
        if (std::abs(cur - prev) < tol) {
            return cur;
        }
        prev = cur;
    }
    throw NumericalError("branch-cut quadrature did not converge at maximum order");
}

std::complex<double> alpha_analytic(const ModelParams& params,
                                    const BoundStateSolution& poles, double t) {
    return poles.a1 * std::polar(1.0, -poles.x1 * t)
         + poles.a2 * std::polar(1.0, -poles.x2 * t)
         + branch_cut_integral(params, t);
}

std::vector<std::complex<double>> alpha_analytic_series(const ModelParams& params,
                                                        const BoundStateSolution& poles,
                                                        const std::vector<double>& times) {
    std::vector<std::complex<double>> out;
    out.reserve(times.size());
    int order = 64;
    for (const double t : times) {
        // reuse the previously converged order as the seed for the next time
        order = std::max(order, cut_seed_order(params, t, 64));
        std::complex<double> prev = cut_fixed_order(params, t, order);
        std::complex<double> cut;
        int o = order;
        for (;;) {
            o *= 2;
            if (o > (1 << 21)) {
                throw NumericalError("branch-cut quadrature did not converge at maximum order");
            }
            cut = cut_fixed_order(params, t, o);
            if (std::abs(cut - prev) < 1e-8) break;
            prev = cut;
        }
        order = std::max(64, o / 2);
        out.push_back(poles.a1 * std::polar(1.0, -poles.x1 * t)
                      + poles.a2 * std::polar(1.0, -poles.x2 * t) + cut);
    }
    return out;
}

double pe_longtime(const BoundStateSolution& poles, double t) {
    return poles.a1 * poles.a1 + poles.a2 * poles.a2
         + 2.0 * poles.a1 * poles.a2 * std::cos(poles.phi * t);
}

PerturbativeSolution perturbative_solution(const ModelParams& params) {
    validate(params);
    const double xi = params.xi;
    const double op = 2.0 * xi + params.omega_cavity - params.omega_atom;
    const double on = -2.0 * xi + params.omega_cavity - params.omega_atom;
    if (op == 0.0 || on == 0.0) {
        throw DomainError("band-edge degeneracy: Omega = omega_0 +/- 2 xi");
    }
    const double j4 = std::pow(params.coupling, 4);
    PerturbativeSolution p;
    p.x01 = params.omega_cavity + 2.0 * xi;
    p.x02 = params.omega_cavity - 2.0 * xi;
    p.c1 = 1.0 / (4.0 * xi * op * op);
    p.c2 = -1.0 / (4.0 * xi * on * on);
    p.x1 = p.x01 + p.c1 * j4;
    p.x2 = p.x02 + p.c2 * j4;
    p.a1 = j4 / (2.0 * op * op * op * xi);
    p.a2 = -j4 / (2.0 * on * on * on * xi);
    p.phi = 4.0 * xi + (p.c1 - p.c2) * j4;
    return p;
}

double perturbative_uncertainty_squared(const ModelParams& params, double t,
                                        double t_total) {
    if (!(t > 0.0) || !(t_total > 0.0)) {
        throw std::invalid_argument("times must be positive");
    }
    if (!(params.coupling > 0.0)) {
        throw DomainError("decoupled atom: no frequency sensitivity");
    }
    const auto b = eval_b_terms(params, t);
    const double b3 = b.b3_sqrt * b.b3_sqrt;
    if (b3 == 0.0) {
        throw DomainError("singular time point: B3 = 0");
    }
    const double j8 = std::pow(params.coupling, 8);
    return t * params.xi * params.xi * b.b1 * b.b2 / (j8 * t_total * b3);
}

double perturbative_uncertainty(const ModelParams& params, double t, double t_total) {
    const double d2 = perturbative_uncertainty_squared(params, t, t_total);
    if (d2 < 0.0) {
        throw DomainError("perturbative uncertainty undefined: delta Omega^2 < 0 "
                          "outside the weak-coupling regime");
    }
    return std::sqrt(d2);
}

} // namespace cca
