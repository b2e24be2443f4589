#ifndef QAUTH_PURITY_ANALYSIS_H
#define QAUTH_PURITY_ANALYSIS_H

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qauth/auth_schemes.h"
#include "qauth/stats.h"
#include "qauth/symplectic.h"

namespace qauth {

using Rational = boost::multiprecision::cpp_rational;

/// Which undetected event is counted.
///
/// PT counts accepted attacks that change the message (ACCEPTED_FORGED).
/// SPT additionally counts accepted non-identity attacks that leave the
/// message alone, i.e. every accepted non-identity attack.
enum class Flavor { PT, SPT };

const char* to_string(Flavor flavor);

enum class EstimateMode { EXACT, MONTE_CARLO };

const char* to_string(EstimateMode mode);

/// Verdict tallies over a set of keys.
struct VerdictCounts {
  uint64_t rejected = 0;
  uint64_t accepted_identity = 0;
  uint64_t accepted_forged = 0;

  uint64_t total() const { return rejected + accepted_identity + accepted_forged; }
  /// Undetected events of the given flavor for an attack that is (or is not) the identity.
  uint64_t undetected(Flavor flavor, bool identity_attack) const;
  void add(DetectionClass c);
  VerdictCounts& operator+=(const VerdictCounts& other);
};

/// A theoretical bound with a short formula tag such as "(2/3)^(d/2)".
struct Bound {
  double value = 1.0;
  std::string formula;
};

/// Point estimate of an undetected-attack probability.
struct EpsilonEstimate {
  Flavor flavor = Flavor::SPT;
  EstimateMode mode = EstimateMode::MONTE_CARLO;
  double value = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  uint64_t successes = 0;
  uint64_t n_samples = 0;
  /// Exact probability as "p/q" (EXACT mode only).
  std::optional<std::string> exact;
  Bound bound;
  /// The identity attack is excluded from ε; estimates for it are flagged.
  bool identity_attack = false;

  double ci_width() const { return ci_high - ci_low; }
};

/// Builds a Monte-Carlo estimate with a 99% Clopper–Pearson interval.
EpsilonEstimate monte_carlo_estimate(Flavor flavor, uint64_t successes, uint64_t trials, Bound bound,
                                     bool identity_attack);

/// Verdict tallies for every attack in `attacks` under keys 0..n_keys-1 of
/// the stream rooted at `seed`. Keys are the outer loop, so each key is
/// sampled once; shards split the key range and the result does not depend
/// on `shards`.
std::vector<VerdictCounts> count_verdicts(const AuthFamily& f, const std::vector<PauliOp>& attacks,
                                          uint64_t n_keys, uint64_t seed, unsigned shards = 1);

/// The family's bound on the undetected probability of the given flavor:
///   TRAP / PT:       (2/3)^(d/2)
///   TRAP / SPT:      none (1.0); the trap code is not strongly purity testing
///   STRONG_TRAP:     (2/3)^d + f_X, the finite-size form of the weight-sparse bound
///   CLIFFORD:        2^-t for both flavors
Bound family_bound(const AuthFamily& f, Flavor flavor);

/// Monte-Carlo estimate of Pr_k[attack undetected] over `n_keys` keys.
EpsilonEstimate undetected_prob(const AuthFamily& f, const PauliOp& attack, Flavor flavor, uint64_t n_keys,
                                uint64_t seed, unsigned shards = 1);

/// Exact undetected probability for a trap-kind family.
///
/// Applies only when the attack weight is below both the distance and the
/// benign distance of the inner code: then every block component that is not
/// the identity is detected inside an encoded block, and acceptance depends
/// only on which block each support position is drawn from. Throws
/// GuardError("NOT_WEIGHT_DETERMINED") otherwise.
EpsilonEstimate exact_undetected_prob_trap(const AuthFamily& f, const PauliOp& attack, Flavor flavor);

/// binom(2n, w) / binom(3n, w): probability that w X-positions all avoid one
/// fixed block of n out of 3n, which bounds a strong-trap-code attack with X
/// weight w.
struct BlockAvoidanceBound {
  Rational value;
  /// Whether value <= (2/3)^w was verified (equality holds at w = 1); not applicable at w = 0.
  bool below_two_thirds_power = false;
  bool applicable = false;
};

/// Throws std::out_of_range unless 0 <= w <= 3n.
BlockAvoidanceBound block_avoidance_bound(size_t n, size_t w);

/// A weight profile (X-only, Y, Z-only counts) from which attacks are drawn.
struct WeightClass {
  size_t x = 0;
  size_t y = 0;
  size_t z = 0;

  size_t total() const { return x + y + z; }
  bool is_identity() const { return total() == 0; }
  std::string str() const;
  bool operator==(const WeightClass&) const = default;
};

/// All non-identity classes with total weight <= max_weight, by total then (x, y, z) descending in x.
std::vector<WeightClass> weight_classes_upto(size_t max_weight);

/// Uniformly random Pauli on `num_qubits` qubits with the given weight profile.
PauliOp sample_attack(const WeightClass& c, size_t num_qubits, Rng& rng);

/// Every Pauli on `num_qubits` qubits with the given weight profile, in a fixed order.
std::vector<PauliOp> enumerate_class(const WeightClass& c, size_t num_qubits);

struct SweepConfig {
  size_t max_weight = 2;
  /// Classes up to this total weight are enumerated in full.
  size_t exhaustive_weight = 2;
  /// Classes with more members than this are sampled instead of enumerated.
  size_t exhaustive_cap = 100000;
  size_t reps_per_class = 4;
  uint64_t n_keys = 10000;
  uint64_t seed = 0;
  unsigned shards = 1;
  /// Extra explicit attacks (e.g. random Paulis) added as their own rows.
  std::vector<PauliOp> extra_attacks;
};

struct SweepRow {
  /// Weight class, or nullopt for an explicit attack row.
  std::optional<WeightClass> weight_class;
  /// Description of the worst member ("Pauli string" for single attacks).
  std::string worst_attack;
  size_t members = 0;
  bool exhaustive = false;
  /// Worst member's estimate for this flavor.
  EpsilonEstimate estimate;
};

struct SweepReport {
  std::string family;
  SweepConfig config;
  std::vector<SweepRow> rows;  // one per (class, flavor)
  EpsilonEstimate max_pt;
  EpsilonEstimate max_spt;
  /// max estimate <= bound + 3 CI widths of the maximizing row.
  bool pt_within_bound = true;
  bool spt_within_bound = true;
};

/// Max undetected probability per weight class, both flavors. The reported
/// maxima are lower estimates of the true ε (a max over all Paulis) and are
/// compared with the family's theoretical upper bound.
SweepReport epsilon_sweep(const AuthFamily& f, const SweepConfig& config);

/// true iff value <= bound + 3 * ci_width.
bool within_bound(const EpsilonEstimate& e);

/// CSV with columns family,class,flavor,estimate,ci_low,ci_high,bound,n_keys,seed.
std::string sweep_csv(const SweepReport& report);

}  // namespace qauth

#endif  // QAUTH_PURITY_ANALYSIS_H
