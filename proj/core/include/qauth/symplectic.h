#ifndef QAUTH_SYMPLECTIC_H
#define QAUTH_SYMPLECTIC_H

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qauth/bitvec.h"

namespace qauth {

/// An n-qubit Pauli operator in binary-symplectic form, global phase dropped.
///
/// Qubit i carries X iff x().get(i) and Z iff z().get(i); both set means Y.
/// Qubit indices are little-endian: qubit 0 is the first character of str().
class PauliOp {
 public:
  PauliOp() = default;
  /// Identity on `num_qubits` qubits.
  explicit PauliOp(size_t num_qubits);
  PauliOp(BitVec x_bits, BitVec z_bits);

  /// Parses a string over {I, X, Y, Z, _}; character i acts on qubit i.
  static PauliOp from_string(std::string_view text);
  /// Single-qubit `pauli` ('X', 'Y' or 'Z') on qubit `q`, identity elsewhere.
  static PauliOp single(size_t num_qubits, size_t q, char pauli);

  size_t num_qubits() const { return x_.size(); }
  const BitVec& x() const { return x_; }
  const BitVec& z() const { return z_; }
  BitVec& x() { return x_; }
  BitVec& z() { return z_; }

  /// One of 'I', 'X', 'Y', 'Z'.
  char at(size_t q) const;
  void set(size_t q, char pauli);

  bool is_identity() const { return x_.none() && z_.none(); }
  /// |supp(x) ∪ supp(z)|.
  size_t weight() const;
  /// Restriction to the listed qubits, in list order.
  PauliOp restrict_to(std::span<const size_t> qubits) const;

  /// Operator product modulo phase.
  PauliOp& operator*=(const PauliOp& other);
  friend PauliOp operator*(PauliOp a, const PauliOp& b) { return a *= b; }
  bool operator==(const PauliOp& other) const = default;

  std::string str() const;

 private:
  BitVec x_;
  BitVec z_;
};

/// Symplectic inner product x_a·z_b + x_b·z_a over GF(2): true iff a and b anticommute.
bool sip(const PauliOp& a, const PauliOp& b);

struct WeightProfile {
  size_t x = 0;      // X-only positions
  size_t y = 0;      // positions carrying both X and Z
  size_t z = 0;      // Z-only positions
  size_t total = 0;  // x + y + z

  /// Weight of the X part P_x (X and Y positions).
  size_t x_part() const { return x + y; }
  /// Weight of the Z part P_z (Z and Y positions).
  size_t z_part() const { return z + y; }
  bool operator==(const WeightProfile&) const = default;
};

WeightProfile weights(const PauliOp& p);

enum class GateKind { H, S, CNOT, PERM };

/// One Clifford gate. For CNOT, `a` is the control and `b` the target. For
/// PERM, qubit i is moved to position perm[i].
struct Gate {
  GateKind kind = GateKind::H;
  uint32_t a = 0;
  uint32_t b = 0;
  std::vector<uint32_t> perm;

  static Gate h(uint32_t q) { return {GateKind::H, q, 0, {}}; }
  static Gate s(uint32_t q) { return {GateKind::S, q, 0, {}}; }
  static Gate cnot(uint32_t control, uint32_t target) { return {GateKind::CNOT, control, target, {}}; }
  static Gate permutation(std::vector<uint32_t> perm) { return {GateKind::PERM, 0, 0, std::move(perm)}; }

  bool operator==(const Gate&) const = default;
  std::string str() const;
};

/// Applies the phase-free action of `gate` to `p` in place: p <- G p G†.
void apply_gate(const Gate& gate, PauliOp& p);
/// Applies the phase-free action of the inverse gate: p <- G† p G.
void apply_gate_inverse(const Gate& gate, PauliOp& p);

enum class Direction { FORWARD, INVERSE };

/// A Clifford circuit over {H, S, CNOT, PERM} together with its compiled
/// 2n×2n GF(2) action on (x ∥ z).
///
/// Gates are listed in application order, so the circuit unitary is
/// U = g_L ⋯ g_1. Forward conjugation computes U P U†, inverse conjugation
/// computes U† P U.
class SymplecticCircuit {
 public:
  SymplecticCircuit() = default;
  /// Validates every gate against `num_qubits` and compiles the action.
  SymplecticCircuit(size_t num_qubits, std::vector<Gate> gates);

  size_t num_qubits() const { return num_qubits_; }
  const std::vector<Gate>& gates() const { return gates_; }

  /// Image of the basis Pauli `j` (X_j for j < n, Z_{j-n} otherwise).
  const PauliOp& forward_column(size_t j) const { return forward_[j]; }
  const PauliOp& inverse_column(size_t j) const { return inverse_[j]; }

  PauliOp conjugate(const PauliOp& p, Direction direction) const;
  /// Allocation-free variant; `out` must already have num_qubits() qubits.
  void conjugate_into(const PauliOp& p, Direction direction, PauliOp& out) const;

  SymplecticCircuit inverse() const;
  /// Circuit that runs this one, then `next`.
  SymplecticCircuit then(const SymplecticCircuit& next) const;

 private:
  size_t num_qubits_ = 0;
  std::vector<Gate> gates_;
  std::vector<PauliOp> forward_;
  std::vector<PauliOp> inverse_;
};

PauliOp conjugate(const PauliOp& p, const SymplecticCircuit& c, Direction direction);

/// Partition of a code's input qubits into message and tag registers.
class TagLayout {
 public:
  TagLayout() = default;
  TagLayout(size_t n_total, std::vector<size_t> message_positions);

  /// Message on qubits 0..m-1, tags on m..n_total-1.
  static TagLayout leading_message(size_t n_total, size_t m);

  size_t n_total() const { return n_total_; }
  const std::vector<size_t>& message_positions() const { return message_; }
  const std::vector<size_t>& tag_positions() const { return tags_; }
  const BitVec& message_mask() const { return message_mask_; }
  const BitVec& tag_mask() const { return tag_mask_; }

 private:
  size_t n_total_ = 0;
  std::vector<size_t> message_;
  std::vector<size_t> tags_;
  BitVec message_mask_;
  BitVec tag_mask_;
};

enum class DetectionClass { REJECTED, ACCEPTED_IDENTITY, ACCEPTED_FORGED };

const char* to_string(DetectionClass c);

/// Classifies a decoded Pauli V†PV: rejected iff some tag carries an X
/// component; otherwise forged iff the message part is non-identity.
DetectionClass classify(const PauliOp& p, const TagLayout& layout);

}  // namespace qauth

#endif  // QAUTH_SYMPLECTIC_H
