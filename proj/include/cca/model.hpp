#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace cca {

// Physical parameters of one atom coupled to a ring of n cavities.
// Internal unit system: all frequencies in units of xi, times in 1/xi.
struct ModelParams {
    double omega_atom = 0.0;    // atomic transition frequency
    double omega_cavity = 0.0;  // bare cavity frequency
    double xi = 1.0;            // inter-cavity hopping (the unit)
    double coupling = 0.0;      // atom <-> central cavity coupling J
    int cavities = 0;           // n, positive odd

    static ModelParams from_qubits(double omega_atom, double omega_cavity,
                                   double coupling, int qubits, double xi = 1.0);

    int half_span() const { return (cavities - 1) / 2; }  // j_M
    int dim() const { return cavities + 1; }               // single-excitation dimension
    double detuning() const { return omega_atom - omega_cavity; }
};

// Throws std::invalid_argument naming the violated invariant.
ModelParams validate(const ModelParams& params);

// omega_0 - 2 xi cos(k)
double dispersion(const ModelParams& params, double k);

// (omega_0 - 2 xi, omega_0 + 2 xi)
std::pair<double, double> band_edges(const ModelParams& params);

// J / sqrt(n), uniform over k
double k_coupling(const ModelParams& params);

// Bijection between computational basis indices and physical labels.
// Index 0 is the atomic excitation; index j in 1..n is one photon at
// lattice position j - 1 - j_M, positions running -j_M..j_M ascending.
struct BasisMap {
    int qubits = 0;
    int size = 0;  // 2^qubits

    // position of the photon for index in 1..size-1
    int position(int index) const;
    // inverse: basis index holding a photon at the given position
    int index_of_position(int position) const;

    bool is_atom(int index) const { return index == 0; }
    std::string label(int index) const;
};

BasisMap basis_map(int qubits);

} // namespace cca
