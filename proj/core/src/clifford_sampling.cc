#include "qauth/clifford_sampling.h"

#include <stdexcept>

#include "qauth/errors.h"

namespace qauth {

namespace {

void push(std::vector<Gate>& gates, Gate g, PauliOp& a, PauliOp& b) {
  apply_gate(g, a);
  apply_gate(g, b);
  gates.push_back(std::move(g));
}

// Turns every non-identity position j >= first of `p` into X using H or S.
void make_x_only(size_t first, std::vector<Gate>& gates, PauliOp& track, PauliOp& a, PauliOp& b) {
  for (size_t j = first; j < track.num_qubits(); ++j) {
    bool x = track.x().get(j);
    bool z = track.z().get(j);
    if (z && !x) {
      push(gates, Gate::h(static_cast<uint32_t>(j)), a, b);
    } else if (z && x) {
      push(gates, Gate::s(static_cast<uint32_t>(j)), a, b);
    }
  }
}

PauliOp random_pauli_on_suffix(size_t n, size_t first, Rng& rng) {
  PauliOp p(n);
  for (size_t j = first; j < n; ++j) {
    uint64_t r = rng();
    if (r & 1) {
      p.x().set(j);
    }
    if (r & 2) {
      p.z().set(j);
    }
  }
  return p;
}

}  // namespace

std::vector<Gate> map_basis_pair(size_t first, const PauliOp& a_in, const PauliOp& b_in) {
  size_t n = a_in.num_qubits();
  check_dims(n, b_in.num_qubits(), "map_basis_pair");
  if (first >= n) {
    throw std::invalid_argument("map_basis_pair: first qubit out of range");
  }
  if (!sip(a_in, b_in)) {
    throw std::invalid_argument("map_basis_pair: images must anticommute");
  }
  for (size_t j = 0; j < first; ++j) {
    if (a_in.at(j) != 'I' || b_in.at(j) != 'I') {
      throw std::invalid_argument("map_basis_pair: images must be identity below the first qubit");
    }
  }
  // Reduce (a, b) to (X_first, Z_first) with gates R; the wanted circuit is R
  // reversed (each gate is its own inverse modulo phase).
  PauliOp a = a_in;
  PauliOp b = b_in;
  std::vector<Gate> gates;
  auto q = static_cast<uint32_t>(first);

  make_x_only(first, gates, a, a, b);
  if (!a.x().get(first)) {
    size_t j = first + 1;
    while (!a.x().get(j)) {
      ++j;
    }
    push(gates, Gate::cnot(static_cast<uint32_t>(j), q), a, b);
  }
  for (size_t j = first + 1; j < n; ++j) {
    if (a.x().get(j)) {
      push(gates, Gate::cnot(q, static_cast<uint32_t>(j)), a, b);
    }
  }
  // a = X_first, so b has a Z component there. Move a to Z_first and clear b elsewhere.
  push(gates, Gate::h(q), a, b);
  make_x_only(first + 1, gates, b, a, b);
  for (size_t j = first + 1; j < n; ++j) {
    if (b.x().get(j)) {
      push(gates, Gate::cnot(q, static_cast<uint32_t>(j)), a, b);
    }
  }
  if (b.z().get(first)) {
    push(gates, Gate::s(q), a, b);
  }
  push(gates, Gate::h(q), a, b);

  return {gates.rbegin(), gates.rend()};
}

std::vector<Gate> random_clifford_gates(size_t n, Rng& rng) {
  // U = C_0 (I ⊗ C_1) (I ⊗ I ⊗ C_2) ..., so C_{n-1} is applied first.
  std::vector<std::vector<Gate>> layers(n);
  for (size_t i = 0; i < n; ++i) {
    PauliOp a(n);
    do {
      a = random_pauli_on_suffix(n, i, rng);
    } while (a.is_identity());
    PauliOp b(n);
    do {
      b = random_pauli_on_suffix(n, i, rng);
    } while (!sip(a, b));
    layers[i] = map_basis_pair(i, a, b);
  }
  std::vector<Gate> gates;
  for (size_t i = n; i-- > 0;) {
    gates.insert(gates.end(), layers[i].begin(), layers[i].end());
  }
  return gates;
}

SymplecticCircuit random_clifford(size_t n, Rng& rng) { return SymplecticCircuit(n, random_clifford_gates(n, rng)); }

}  // namespace qauth
