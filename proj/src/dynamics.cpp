#include "cca/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "cca/errors.hpp"

namespace cca {

double TimeSeries::dt() const {
    if (times.size() < 2) {
        throw std::invalid_argument("time grid too short");
    }
    const double step = times[1] - times[0];
    for (std::size_t i = 1; i + 1 < times.size(); ++i) {
        if (std::abs((times[i + 1] - times[i]) - step) > 1e-9 * std::max(1.0, step)) {
            throw std::invalid_argument("time grid is not uniform");
        }
    }
    return step;
}

std::complex<double> SpectralDecomposition::atom_amplitude(double t) const {
    std::complex<double> alpha(0.0, 0.0);
    for (Eigen::Index m = 0; m < eigenvalues.size(); ++m) {
        alpha += atom_overlaps(m) * std::polar(1.0, -eigenvalues(m) * t);
    }
    return alpha;
}

double SpectralDecomposition::population(double t) const {
    return std::norm(atom_amplitude(t));
}

Eigen::MatrixXd build_hamiltonian(const ModelParams& params) {
    validate(params);
    const int n = params.cavities;
    const int dim = n + 1;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);

    h(0, 0) = params.omega_atom;
    for (int c = 1; c <= n; ++c) {
        h(c, c) = params.omega_cavity;
    }
    for (int c = 1; c < n; ++c) {
        h(c, c + 1) = -params.xi;
        h(c + 1, c) = -params.xi;
    }
    if (n >= 3) {
        h(1, n) = -params.xi;
        h(n, 1) = -params.xi;
    }
    const int atom_cavity = params.half_span() + 1;  // lattice position 0
    h(0, atom_cavity) = params.coupling;
    h(atom_cavity, 0) = params.coupling;
    return h;
}

SpectralDecomposition diagonalize(const Eigen::MatrixXd& hamiltonian) {
    if (hamiltonian.rows() != hamiltonian.cols()) {
        throw std::invalid_argument("hamiltonian must be square");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigendecomposition failed");
    }
    SpectralDecomposition s;
    s.eigenvalues = solver.eigenvalues();
    s.eigenvectors = solver.eigenvectors();
    s.atom_overlaps = s.eigenvectors.row(0).array().square();
    return s;
}

SpectralDecomposition diagonalize(const ModelParams& params) {
    return diagonalize(build_hamiltonian(params));
}

TimeSeries evolve(const SpectralDecomposition& spectrum, const std::vector<double>& times) {
    if (times.empty()) {
        throw std::invalid_argument("time grid is empty");
    }
    if (times.front() < 0.0) {
        throw std::invalid_argument("time grid must start at t >= 0");
    }
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        if (!(times[i + 1] > times[i])) {
            throw std::invalid_argument("time grid must be strictly increasing");
        }
    }
    TimeSeries series;
    series.times = times;
    series.values.resize(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        series.values[i] = spectrum.population(times[i]);
    }
    return series;
}

TimeSeries evolve(const ModelParams& params, const std::vector<double>& times) {
    return evolve(diagonalize(params), times);
}

Eigen::VectorXcd evolve_state(const SpectralDecomposition& spectrum, double t) {
    const Eigen::Index dim = spectrum.eigenvalues.size();
    Eigen::VectorXcd phases(dim);
    for (Eigen::Index m = 0; m < dim; ++m) {
        // coefficient of eigenvector m in |e,vac> is its atom component
        phases(m) = spectrum.eigenvectors(0, m) * std::polar(1.0, -spectrum.eigenvalues(m) * t);
    }
    return spectrum.eigenvectors.cast<std::complex<double>>() * phases;
}

std::vector<double> uniform_grid(double t_max, double dt, double t0) {
    if (!(dt > 0.0) || !(t_max > t0)) {
        throw std::invalid_argument("grid requires dt > 0 and t_max > t0");
    }
    const auto count = static_cast<std::size_t>(std::floor((t_max - t0) / dt + 0.5)) + 1;
    std::vector<double> ts(count);
    for (std::size_t i = 0; i < count; ++i) {
        ts[i] = t0 + static_cast<double>(i) * dt;
    }
    return ts;
}

double population_derivative(const ModelParams& params, double t, double step) {
    if (!(step > 0.0)) {
        throw std::invalid_argument("derivative step must be positive");
    }
    const auto pe_at = [&](double omega) {
        ModelParams p = params;
        p.omega_atom = omega;
        return diagonalize(p).population(t);
    };
    const auto central = [&](double h) {
        return (pe_at(params.omega_atom + h) - pe_at(params.omega_atom - h)) / (2.0 * h);
    };
    const double d_h = central(step);
    const double d_half = central(0.5 * step);
    return (4.0 * d_half - d_h) / 3.0;
}

} // namespace cca
