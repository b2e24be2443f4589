#ifndef QAUTH_TESTS_ORACLES_H
#define QAUTH_TESTS_ORACLES_H

// Test-only reference implementations. Nothing here calls into the library's
// conjugation, classification or enumeration code paths, so agreement with the
// library is meaningful.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "qauth/auth_schemes.h"
#include "qauth/codes.h"
#include "qauth/stats.h"
#include "qauth/symplectic.h"

namespace qauth::testing {

PauliOp random_pauli(size_t n, Rng& rng);
PauliOp random_nonidentity_pauli(size_t n, Rng& rng);
/// Random circuit of `length` gates over {H, S, CNOT, PERM}.
SymplecticCircuit random_circuit(size_t n, size_t length, Rng& rng);

namespace dense {

/// Row-major 2^n x 2^n complex matrix; basis index bit q is qubit q.
struct Matrix {
  size_t dim = 0;
  std::vector<std::complex<double>> a;

  explicit Matrix(size_t d) : dim(d), a(d * d) {}
  std::complex<double>& operator()(size_t r, size_t c) { return a[r * dim + c]; }
  std::complex<double> operator()(size_t r, size_t c) const { return a[r * dim + c]; }
};

Matrix pauli_matrix(const PauliOp& p);
/// Unitary of the gate list applied in order (U = g_L ... g_1).
Matrix circuit_unitary(size_t n, const std::vector<Gate>& gates);
Matrix multiply(const Matrix& x, const Matrix& y);
Matrix adjoint(const Matrix& x);
/// x == λ y for some unit-modulus λ.
bool equal_up_to_phase(const Matrix& x, const Matrix& y, double tol = 1e-9);

}  // namespace dense

/// Every codeword of `c`, by brute force over all 2^k generator combinations.
std::vector<BitVec> enumerate_codewords(const LinearCode& c);
/// counts[w] over the brute-force codeword list.
std::vector<uint64_t> brute_weight_distribution(const LinearCode& c);
/// Minimum weight of a non-identity element of the stabilizer group generated
/// by X(r) and Z(r) for every generator row r of C2 (all 2^(2 k2) products).
size_t brute_stabilizer_min_weight(const CssCode& css);

/// Verdict of a trap-kind family computed combinatorially: invert the key's
/// permutation, split the attack into the three input blocks, and check each
/// block against its own acceptance rule (syndrome membership in C1 for
/// encoded blocks, basis consistency for bare traps).
DetectionClass block_oracle_verdict(const AuthFamily& f, const Key& k, const PauliOp& attack);

/// Canonical id of a 2-qubit symplectic map (its 4 image columns packed in 16 bits).
uint32_t symplectic_id(const SymplecticCircuit& c);

}  // namespace qauth::testing

#endif  // QAUTH_TESTS_ORACLES_H
