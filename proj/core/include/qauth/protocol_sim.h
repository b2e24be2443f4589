#ifndef QAUTH_PROTOCOL_SIM_H
#define QAUTH_PROTOCOL_SIM_H

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qauth/auth_schemes.h"
#include "qauth/purity_analysis.h"
#include "qauth/stats.h"
#include "qauth/symplectic.h"

namespace qauth {

/// Verdict frequencies over fresh keys.
struct TrialStats {
  VerdictCounts counts;
  uint64_t n_trials = 0;
  double p_reject = 0.0;
  double p_accept_identity = 0.0;
  double p_accept_forged = 0.0;
};

/// One attack per trial, a fresh code key per trial.
TrialStats run_single(const AuthFamily& f, const PauliOp& attack, uint64_t n_trials, uint64_t seed,
                      unsigned shards = 1);

/// One ciphertext in Pauli-frame form: the code key it was encrypted under,
/// its fresh one-time pad, the adversary's accumulated Pauli and the
/// decrypted frame V† P_k2 P P_k2 V, updated incrementally.
class CiphertextFrame {
 public:
  CiphertextFrame(const AuthFamily& f, std::shared_ptr<const Key> key, PauliOp otp);

  /// Adversary applies `attack` to the ciphertext.
  void apply(const PauliOp& attack);

  const PauliOp& accumulated() const { return accumulated_; }
  const PauliOp& otp() const { return otp_; }
  /// Decrypted Pauli frame on the input side.
  const PauliOp& decoded() const { return decoded_; }
  DetectionClass verdict() const { return classify(decoded_, family_->layout()); }
  /// Message component of the frame; meaningful only when not rejected.
  PauliOp logical_frame() const { return decoded_.restrict_to(family_->layout().message_positions()); }

 private:
  const AuthFamily* family_;
  std::shared_ptr<const Key> key_;
  PauliOp otp_;
  PauliOp accumulated_;
  PauliOp decoded_;
  PauliOp scratch_;
  PauliOp step_;
};

/// Which conditioning event key_posterior looks at.
enum class Condition { ACCEPT, REJECT };

const char* to_string(Condition c);

/// Posterior over the block type of one physical position, given the verdict.
struct LeakageReport {
  std::string attack;
  Condition condition = Condition::ACCEPT;
  size_t position = 0;
  EstimateMode mode = EstimateMode::MONTE_CARLO;
  uint64_t n_keys = 0;
  uint64_t events = 0;
  /// Indexed by BlockType: data, zero-trap, plus-trap.
  std::array<double, 3> prior{};
  std::array<double, 3> posterior{};
  double tv_distance = 0.0;
};

/// Empirical posterior among `n_keys` keys whose verdict matches `condition`.
/// Throws GuardError("NO_EVENT") if no key produces the event.
LeakageReport key_posterior(const AuthFamily& f, const PauliOp& attack, Condition condition, size_t position,
                            uint64_t n_keys, uint64_t seed, unsigned shards = 1);

/// Largest attack weight exact_key_posterior enumerates.
inline constexpr size_t kMaxExactPosteriorWeight = 3;

/// Exact posterior by enumerating every placement of the attack's support
/// onto input qubits (all placements are equally likely under a uniform
/// permutation). Trap kinds only; weight <= kMaxExactPosteriorWeight.
/// Throws GuardError("NO_EVENT") if the event has probability zero.
LeakageReport exact_key_posterior(const AuthFamily& f, const PauliOp& attack, Condition condition,
                                  size_t position);

/// Total-variation distance between two distributions over block types.
double tv_distance(const std::array<double, 3>& p, const std::array<double, 3>& q);

/// An adversary attacking several ciphertexts that share one code key.
///
/// Ciphertexts are attacked and decrypted in order; the attack on
/// ciphertext i may depend only on the accept bits of ciphertexts < i and
/// on the strategy's own randomness. The last ciphertext is the target.
class AdversaryStrategy {
 public:
  virtual ~AdversaryStrategy() = default;
  virtual std::string name() const = 0;
  /// Number of ciphertexts for a family with `num_qubits` physical qubits.
  virtual size_t num_ciphertexts(size_t num_qubits) const = 0;
  virtual PauliOp attack(size_t index, const std::vector<bool>& accepted, size_t num_qubits, Rng& rng) const = 0;
};

/// Leaves every ciphertext alone.
class IdentityStrategy : public AdversaryStrategy {
 public:
  std::string name() const override { return "identity"; }
  size_t num_ciphertexts(size_t) const override { return 2; }
  PauliOp attack(size_t index, const std::vector<bool>& accepted, size_t num_qubits, Rng& rng) const override;
};

/// Probes `position` with a single-qubit `basis` on the first ciphertext.
/// On the second: if the probe was accepted, repeats it and adds `basis` at
/// `target`; otherwise attacks `target` alone.
class SingleProbeStrategy : public AdversaryStrategy {
 public:
  SingleProbeStrategy(size_t position, char basis, size_t target);
  std::string name() const override;
  size_t num_ciphertexts(size_t) const override { return 2; }
  PauliOp attack(size_t index, const std::vector<bool>& accepted, size_t num_qubits, Rng& rng) const override;

 private:
  size_t position_;
  char basis_;
  size_t target_;
};

enum class ProbeBases { XZ, X_ONLY };

const char* to_string(ProbeBases b);

/// What the probing adversary has learned about one position.
enum class InferredBlock { UNKNOWN, DATA, ZERO_TRAP, PLUS_TRAP };

const char* to_string(InferredBlock b);

/// Block inference from single-qubit probe outcomes: X accepted means a |+>
/// trap, Z accepted a |0> trap, both rejected data. With X_ONLY probes an
/// X rejection leaves the position UNKNOWN.
std::vector<InferredBlock> infer_blocks(size_t num_qubits, ProbeBases bases, const std::vector<bool>& accepted);

/// Probes every position with X (then Z), one ciphertext per probe, then
/// forges the last ciphertext with X on every position inferred to be data
/// or a |+> trap. With X_ONLY probes the forgery covers the inferred |+>
/// traps only. `budget` caps the number of probe ciphertexts (0 = no cap);
/// unprobed positions stay UNKNOWN and are left out of the forgery.
class ProbeAllThenForgeStrategy : public AdversaryStrategy {
 public:
  explicit ProbeAllThenForgeStrategy(ProbeBases bases = ProbeBases::XZ, size_t budget = 0);
  std::string name() const override;
  size_t num_ciphertexts(size_t num_qubits) const override { return probes(num_qubits) + 1; }
  PauliOp attack(size_t index, const std::vector<bool>& accepted, size_t num_qubits, Rng& rng) const override;

  size_t probes(size_t num_qubits) const;
  /// Pauli of probe number `index`.
  PauliOp probe(size_t index, size_t num_qubits) const;
  /// Forgery built from the inferred block map.
  PauliOp forgery(const std::vector<InferredBlock>& blocks) const;
  ProbeBases bases() const { return bases_; }

 private:
  ProbeBases bases_;
  size_t budget_;
};

/// Independent uniformly random Paulis of fixed weight on both ciphertexts.
class RandomPauliStrategy : public AdversaryStrategy {
 public:
  explicit RandomPauliStrategy(size_t weight);
  std::string name() const override;
  size_t num_ciphertexts(size_t) const override { return 2; }
  PauliOp attack(size_t index, const std::vector<bool>& accepted, size_t num_qubits, Rng& rng) const override;

 private:
  size_t weight_;
};

/// Fixed probe Paulis, then `on_accept` on the target if every probe was
/// accepted and `on_reject` otherwise.
class ScriptedStrategy : public AdversaryStrategy {
 public:
  ScriptedStrategy(std::vector<PauliOp> probes, PauliOp on_accept, PauliOp on_reject);
  std::string name() const override { return "custom"; }
  size_t num_ciphertexts(size_t) const override { return probes_.size() + 1; }
  PauliOp attack(size_t index, const std::vector<bool>& accepted, size_t num_qubits, Rng& rng) const override;

 private:
  std::vector<PauliOp> probes_;
  PauliOp on_accept_;
  PauliOp on_reject_;
};

/// Outcome of one run of a strategy against ciphertexts sharing a code key.
struct SessionOutcome {
  std::vector<PauliOp> attacks;
  std::vector<DetectionClass> verdicts;
  /// Message frame of the target ciphertext.
  PauliOp target_logical;
};

/// Runs one session: code key `key`, a fresh one-time pad per ciphertext
/// drawn from `otp_rng`, strategy randomness from `strategy_rng`.
SessionOutcome run_session(const AuthFamily& f, std::shared_ptr<const Key> key, const AdversaryStrategy& strategy,
                           Rng& otp_rng, Rng& strategy_rng);

struct ProbeReport {
  std::string family;
  uint64_t seed = 0;
  ProbeBases bases = ProbeBases::XZ;
  size_t probes_used = 0;
  size_t probes_accepted = 0;
  std::vector<InferredBlock> inferred;
  std::vector<BlockType> truth;
  /// Fraction of positions whose inferred block equals the true one.
  double block_map_accuracy = 0.0;
  std::string forgery_attack;
  DetectionClass forgery_verdict = DetectionClass::REJECTED;
  /// Logical action of the forgery, or nullopt when it was rejected.
  std::optional<PauliOp> forgery_logical_action;
};

/// Adaptive trap-location attack with one shared code key (key 0 of the
/// stream rooted at `seed`) and a fresh one-time pad per ciphertext.
ProbeReport adaptive_probe(const AuthFamily& f, uint64_t seed, ProbeBases bases = ProbeBases::XZ);

struct ReuseStats {
  std::string strategy;
  uint64_t n_trials = 0;
  uint64_t accepted_second = 0;
  uint64_t forged_second = 0;
  uint64_t probes_accepted = 0;
  uint64_t probes_total = 0;
  double p_accept_second = 0.0;
  double p_forge_second = 0.0;
  Interval accept_ci;
  Interval forge_ci;
};

/// Repeated sessions with a fresh code key per trial. "Second" refers to
/// the target ciphertext, decrypted after every earlier ciphertext under the
/// same code key.
ReuseStats parallel_reuse(const AuthFamily& f, const AdversaryStrategy& strategy, uint64_t n_trials, uint64_t seed,
                          unsigned shards = 1);

}  // namespace qauth

#endif  // QAUTH_PROTOCOL_SIM_H
