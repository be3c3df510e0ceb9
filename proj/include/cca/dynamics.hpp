#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "cca/model.hpp"

namespace cca {

// Sampled excited-state population.
struct TimeSeries {
    std::vector<double> times;   // strictly increasing, units 1/xi
    std::vector<double> values;  // P_e in [0, 1]

    std::size_t size() const { return times.size(); }
    double dt() const;  // grid spacing; throws on non-uniform grids
};

// Eigensystem reduced to what the atom sees: eigenvalues plus the squared
// atom components of the orthonormal eigenvectors.
struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;    // ascending
    Eigen::VectorXd atom_overlaps;  // |<e|v_m>|^2, sums to 1
    Eigen::MatrixXd eigenvectors;   // columns, basis-ordered per BasisMap

    // alpha(t) = sum_m w_m e^{-i E_m t}
    std::complex<double> atom_amplitude(double t) const;
    double population(double t) const;
};

// Single-excitation Hamiltonian in the BasisMap ordering: row 0 the atom,
// rows 1..n the ring. Wrap bond between positions j_M and -j_M for n >= 3;
// the n = 1 block is the bare two-level Jaynes-Cummings pair.
Eigen::MatrixXd build_hamiltonian(const ModelParams& params);

SpectralDecomposition diagonalize(const Eigen::MatrixXd& hamiltonian);
SpectralDecomposition diagonalize(const ModelParams& params);

// P_e(t) on the given ascending grid from the initial state |e, vacuum>.
TimeSeries evolve(const ModelParams& params, const std::vector<double>& times);
TimeSeries evolve(const SpectralDecomposition& spectrum, const std::vector<double>& times);

// Full state vector at time t (entry 0 = alpha, entries 1..n cavity amplitudes).
Eigen::VectorXcd evolve_state(const SpectralDecomposition& spectrum, double t);

std::vector<double> uniform_grid(double t_max, double dt = 0.02, double t0 = 0.0);

// d P_e / d Omega at one time by central difference with one Richardson
// refinement; each evaluation is a full evolution at the shifted frequency.
double population_derivative(const ModelParams& params, double t, double step = 1e-5);

} // namespace cca
