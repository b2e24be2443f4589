#ifndef QAUTH_AUTH_SCHEMES_H
#define QAUTH_AUTH_SCHEMES_H

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qauth/codes.h"
#include "qauth/stats.h"
#include "qauth/symplectic.h"

namespace qauth {

enum class FamilyKind { TRAP, STRONG_TRAP, CLIFFORD };

const char* to_string(FamilyKind kind);

/// Which block of a trap-kind encoder an input qubit belongs to.
enum class BlockType { DATA = 0, ZERO_TRAP = 1, PLUS_TRAP = 2 };

const char* to_string(BlockType block);

/// A keyed authentication code family {V_k}.
///
/// Trap kinds have m = 1, t = 3n - 1 for an inner [[n, 1]] CSS code and keys
/// that are permutations of the 3n physical qubits:
///   TRAP:        V_k = π_k (E ⊗ I^{⊗n} ⊗ H^{⊗n})
///   STRONG_TRAP: V_k = π_k E^{⊗3} H_{2n}
/// Input qubit 0 is the message. Inputs are grouped in blocks of n: data
/// (message plus n-1 code ancillas), the |0⟩ traps, then the |+⟩ traps.
/// CLIFFORD keys are uniformly random Cliffords on m + t qubits.
class AuthFamily {
 public:
  static AuthFamily trap(CssCode inner, std::string inner_ref = "");
  static AuthFamily strong_trap(CssCode inner, std::string inner_ref = "");
  static AuthFamily clifford(size_t m, size_t t);

  FamilyKind kind() const { return kind_; }
  bool is_trap_kind() const { return kind_ != FamilyKind::CLIFFORD; }
  size_t m() const { return m_; }
  size_t t() const { return t_; }
  size_t num_qubits() const { return m_ + t_; }
  /// Block length n of the inner code (trap kinds only).
  size_t block_size() const;
  const CssCode& inner() const;
  const std::string& inner_ref() const { return inner_ref_; }
  const TagLayout& layout() const { return layout_; }
  /// Key-independent part of V_k (everything but the final permutation).
  const SymplecticCircuit& base_encoder() const;

  /// Block of input qubit `input` (trap kinds only).
  BlockType block_of_input(size_t input) const;

 private:
  AuthFamily() = default;

  FamilyKind kind_ = FamilyKind::CLIFFORD;
  size_t m_ = 0;
  size_t t_ = 0;
  std::shared_ptr<const CssCode> inner_;
  std::string inner_ref_;
  TagLayout layout_;
  std::shared_ptr<const SymplecticCircuit> base_;
};

/// Short human-readable name, e.g. "trap(rm-css:1)" or "clifford(m=1,t=6)".
std::string label(const AuthFamily& f);

/// A code key k_1, plus an optional one-time-pad key k_2.
///
/// For trap kinds `permutation[i]` is the physical position of input qubit i.
/// For CLIFFORD the key is a gate list and its compiled circuit.
struct Key {
  FamilyKind kind = FamilyKind::CLIFFORD;
  std::vector<uint32_t> permutation;
  /// inverse_permutation[p] is the input qubit placed at physical position p.
  std::vector<uint32_t> inverse_permutation;
  std::vector<Gate> clifford_gates;
  std::shared_ptr<const SymplecticCircuit> clifford;
  /// Seed the key was drawn from, for provenance in reports.
  uint64_t seed = 0;
  /// One-time pad P_{k2}; never affects verdicts.
  std::optional<PauliOp> otp;
};

/// Fisher–Yates permutation for trap kinds, uniform Clifford otherwise.
Key sample_key(const AuthFamily& f, Rng& rng);
/// Key number `index` of the stream rooted at `seed`.
Key key_for_index(const AuthFamily& f, uint64_t seed, uint64_t index);
/// Builds a trap-kind key from an explicit permutation (validated).
Key permutation_key(const AuthFamily& f, std::vector<uint32_t> permutation);
/// Builds a Clifford key from an explicit gate list (validated).
Key clifford_key(const AuthFamily& f, std::vector<Gate> gates);
/// Uniform one-time pad on the family's qubits.
PauliOp sample_otp(const AuthFamily& f, Rng& rng);

/// The full circuit V_k.
SymplecticCircuit encoder(const AuthFamily& f, const Key& k);

/// V_k† P V_k, computed without materializing V_k.
PauliOp decode(const AuthFamily& f, const Key& k, const PauliOp& attack);
void decode_into(const AuthFamily& f, const Key& k, const PauliOp& attack, PauliOp& scratch, PauliOp& out);

DetectionClass verdict(const AuthFamily& f, const Key& k, const PauliOp& attack);

/// Message-register component of V_k† P V_k. Throws std::logic_error when the
/// attack is rejected.
PauliOp logical_action(const AuthFamily& f, const Key& k, const PauliOp& attack);

/// Block that physical qubit `position` is drawn from under key `k` (trap kinds only).
BlockType block_of(const AuthFamily& f, const Key& k, size_t position);

}  // namespace qauth

#endif  // QAUTH_AUTH_SCHEMES_H
