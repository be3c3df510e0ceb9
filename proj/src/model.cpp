#include "cca/model.hpp"

#include <cmath>
#include <stdexcept>

namespace cca {

ModelParams ModelParams::from_qubits(double omega_atom, double omega_cavity,
                                     double coupling, int qubits, double xi) {
    if (qubits < 1) {
        throw std::invalid_argument("qubit count must be positive");
    }
    if (qubits > 14) {
        throw std::invalid_argument("qubit count too large for dense simulation");
    }
    ModelParams p;
    p.omega_atom = omega_atom;
    p.omega_cavity = omega_cavity;
    p.coupling = coupling;
    p.xi = xi;
    p.cavities = (1 << qubits) - 1;
    return p;
}

ModelParams validate(const ModelParams& params) {
    if (!(params.xi > 0.0)) {
        throw std::invalid_argument("hopping must be positive");
    }
    if (params.coupling < 0.0) {
        throw std::invalid_argument("coupling must be nonnegative");
    }
    if (params.cavities < 1) {
        throw std::invalid_argument("cavity count must be positive");
    }
    if (params.cavities % 2 == 0) {
        throw std::invalid_argument("n must be odd");
    }
    if (params.cavities >= (1 << 15)) {
        throw std::invalid_argument("cavity count too large for dense simulation");
    }
    if (!std::isfinite(params.omega_atom) || !std::isfinite(params.omega_cavity)) {
        throw std::invalid_argument("frequencies must be finite");
    }
    return params;
}

double dispersion(const ModelParams& params, double k) {
    return params.omega_cavity - 2.0 * params.xi * std::cos(k);
}

std::pair<double, double> band_edges(const ModelParams& params) {
    return {params.omega_cavity - 2.0 * params.xi,
            params.omega_cavity + 2.0 * params.xi};
}

double k_coupling(const ModelParams& params) {
    if (params.cavities < 1) {
        throw std::invalid_argument("cavity count must be positive");
    }
    return params.coupling / std::sqrt(static_cast<double>(params.cavities));
}

int BasisMap::position(int index) const {
    if (index < 1 || index >= size) {
        throw std::out_of_range("basis index has no lattice position");
    }
    const int j_m = (size - 2) / 2;  // (n-1)/2 with n = size-1
    return index - 1 - j_m;
}

int BasisMap::index_of_position(int position) const {
    const int j_m = (size - 2) / 2;
    if (position < -j_m || position > j_m) {
        throw std::out_of_range("lattice position outside the ring");
    }
    return position + 1 + j_m;
}

std::string BasisMap::label(int index) const {
    if (index == 0) {
        return "atom excited, cavities vacuum";
    }
    return "photon at site " + std::to_string(position(index));
}

BasisMap basis_map(int qubits) {
    if (qubits < 1) {
        throw std::invalid_argument("qubit count must be positive");
    }
    BasisMap m;
    m.qubits = qubits;
    m.size = 1 << qubits;
    return m;
}

} // namespace cca
