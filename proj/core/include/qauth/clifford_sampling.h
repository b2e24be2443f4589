#ifndef QAUTH_CLIFFORD_SAMPLING_H
#define QAUTH_CLIFFORD_SAMPLING_H

#include <cstddef>
#include <vector>

#include "qauth/stats.h"
#include "qauth/symplectic.h"

namespace qauth {

/// Gates acting on qubits first..n-1 whose circuit C satisfies
/// C X_first C† = a and C Z_first C† = b (phases dropped).
///
/// Requires a and b to anticommute and to be the identity on qubits < first.
std::vector<Gate> map_basis_pair(size_t first, const PauliOp& a, const PauliOp& b);

/// Uniformly random element of the n-qubit Clifford group modulo Paulis and
/// phases (i.e. of Sp(2n, F_2)), as a gate list over {H, S, CNOT}.
///
/// Qubit by qubit, the images of X_i and Z_i are drawn uniformly from the
/// anticommuting pairs supported on qubits i..n-1; every symplectic map
/// arises from exactly one sequence of draws.
std::vector<Gate> random_clifford_gates(size_t n, Rng& rng);

SymplecticCircuit random_clifford(size_t n, Rng& rng);

}  // namespace qauth

#endif  // QAUTH_CLIFFORD_SAMPLING_H
