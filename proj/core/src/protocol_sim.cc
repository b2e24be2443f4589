#include "qauth/protocol_sim.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "parallel.h"
#include "qauth/errors.h"

namespace qauth {

TrialStats run_single(const AuthFamily& f, const PauliOp& attack, uint64_t n_trials, uint64_t seed,
                      unsigned shards) {
  TrialStats s;
  s.counts = count_verdicts(f, {attack}, n_trials, seed, shards)[0];
  s.n_trials = n_trials;
  if (n_trials > 0) {
    auto frac = [n_trials](uint64_t c) { return static_cast<double>(c) / static_cast<double>(n_trials); };
    s.p_reject = frac(s.counts.rejected);
    s.p_accept_identity = frac(s.counts.accepted_identity);
    s.p_accept_forged = frac(s.counts.accepted_forged);
  }
  return s;
}

CiphertextFrame::CiphertextFrame(const AuthFamily& f, std::shared_ptr<const Key> key, PauliOp otp)
    : family_(&f),
      key_(std::move(key)),
      otp_(std::move(otp)),
      accumulated_(f.num_qubits()),
      decoded_(f.num_qubits()),
      scratch_(f.num_qubits()),
      step_(f.num_qubits()) {
  check_dims(otp_.num_qubits(), f.num_qubits(), "CiphertextFrame one-time pad");
}

void CiphertextFrame::apply(const PauliOp& attack) {
  check_dims(attack.num_qubits(), family_->num_qubits(), "CiphertextFrame::apply");
  accumulated_ *= attack;
  // Decryption undoes the pad before decoding: P_k2 · attack · P_k2, which
  // equals the attack up to a sign. Decoding is linear, so the decoded
  // frame is updated by XOR.
  PauliOp padded = otp_ * attack * otp_;
  decode_into(*family_, *key_, padded, scratch_, step_);
  decoded_ *= step_;
}

const char* to_string(Condition c) { return c == Condition::ACCEPT ? "accept" : "reject"; }

double tv_distance(const std::array<double, 3>& p, const std::array<double, 3>& q) {
  double sum = 0.0;
  for (size_t i = 0; i < 3; ++i) {
    sum += std::abs(p[i] - q[i]);
  }
  return sum / 2.0;
}

namespace {

bool matches(Condition c, DetectionClass v) { return (v != DetectionClass::REJECTED) == (c == Condition::ACCEPT); }

void require_trap(const AuthFamily& f, const char* what) {
  if (!f.is_trap_kind()) {
    throw std::invalid_argument(std::string(what) + ": only defined for trap-kind families");
  }
}

std::array<double, 3> uniform_prior() { return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}; }

void no_event(const PauliOp& attack, Condition condition) {
  throw GuardError("NO_EVENT", "no key " + std::string(condition == Condition::ACCEPT ? "accepts" : "rejects") +
                                   " the attack " + attack.str() + "; the posterior is undefined");
}

}  // namespace

LeakageReport key_posterior(const AuthFamily& f, const PauliOp& attack, Condition condition, size_t position,
                            uint64_t n_keys, uint64_t seed, unsigned shards) {
  require_trap(f, "key_posterior");
  check_dims(attack.num_qubits(), f.num_qubits(), "key_posterior");
  if (position >= f.num_qubits()) {
    throw std::out_of_range("key_posterior: position out of range");
  }
  shards = std::max(1u, shards);
  std::vector<std::array<uint64_t, 3>> partial(shards, std::array<uint64_t, 3>{});
  detail::for_each_shard(n_keys, shards, [&](unsigned shard, uint64_t begin, uint64_t end) {
    PauliOp scratch(f.num_qubits());
    PauliOp decoded(f.num_qubits());
    for (uint64_t i = begin; i < end; ++i) {
      Key k = key_for_index(f, seed, i);
      decode_into(f, k, attack, scratch, decoded);
      if (matches(condition, classify(decoded, f.layout()))) {
        ++partial[shard][static_cast<size_t>(block_of(f, k, position))];
      }
    }
  });
  std::array<uint64_t, 3> counts{};
  for (const auto& p : partial) {
    for (size_t b = 0; b < 3; ++b) {
      counts[b] += p[b];
    }
  }

  LeakageReport r;
  r.attack = attack.str();
  r.condition = condition;
  r.position = position;
  r.mode = EstimateMode::MONTE_CARLO;
  r.n_keys = n_keys;
  r.events = counts[0] + counts[1] + counts[2];
  if (r.events == 0) {
    no_event(attack, condition);
  }
  r.prior = uniform_prior();
  for (size_t b = 0; b < 3; ++b) {
    r.posterior[b] = static_cast<double>(counts[b]) / static_cast<double>(r.events);
  }
  r.tv_distance = tv_distance(r.prior, r.posterior);
  return r;
}

LeakageReport exact_key_posterior(const AuthFamily& f, const PauliOp& attack, Condition condition,
                                  size_t position) {
  require_trap(f, "exact_key_posterior");
  check_dims(attack.num_qubits(), f.num_qubits(), "exact_key_posterior");
  const size_t total = f.num_qubits();
  const size_t n = f.block_size();
  if (position >= total) {
    throw std::out_of_range("exact_key_posterior: position out of range");
  }
  std::vector<size_t> support;
  for (size_t q = 0; q < total; ++q) {
    if (attack.at(q) != 'I') {
      support.push_back(q);
    }
  }
  if (support.size() > kMaxExactPosteriorWeight) {
    throw GuardError("WEIGHT_GUARD", "exact_key_posterior enumerates attacks of weight at most " +
                                         std::to_string(kMaxExactPosteriorWeight));
  }

  // A uniform permutation sends the support to a uniformly random injective
  // placement on input qubits, and the remaining positions uniformly onto
  // the remaining inputs.
  std::vector<size_t> placement(support.size());
  std::vector<bool> used(total, false);
  std::array<double, 3> mass{};
  uint64_t placements = 0;
  uint64_t events = 0;
  PauliOp input(total);
  PauliOp decoded(total);
  auto recurse = [&](auto&& self, size_t depth) -> void {
    if (depth == support.size()) {
      ++placements;
      input = PauliOp(total);
      for (size_t i = 0; i < support.size(); ++i) {
        input.set(placement[i], attack.at(support[i]));
      }
      f.base_encoder().conjugate_into(input, Direction::INVERSE, decoded);
      if (!matches(condition, classify(decoded, f.layout()))) {
        return;
      }
      ++events;
      auto hit = std::find(support.begin(), support.end(), position);
      if (hit != support.end()) {
        mass[static_cast<size_t>(f.block_of_input(placement[hit - support.begin()]))] += 1.0;
        return;
      }
      std::array<double, 3> free_slots = {static_cast<double>(n), static_cast<double>(n), static_cast<double>(n)};
      for (size_t j : placement) {
        free_slots[static_cast<size_t>(f.block_of_input(j))] -= 1.0;
      }
      double remaining = static_cast<double>(total - support.size());
      for (size_t b = 0; b < 3; ++b) {
        mass[b] += free_slots[b] / remaining;
      }
      return;
    }
    for (size_t j = 0; j < total; ++j) {
      if (!used[j]) {
        used[j] = true;
        placement[depth] = j;
        self(self, depth + 1);
        used[j] = false;
      }
    }
  };
  recurse(recurse, 0);

  LeakageReport r;
  r.attack = attack.str();
  r.condition = condition;
  r.position = position;
  r.mode = EstimateMode::EXACT;
  r.n_keys = placements;
  r.events = events;
  if (events == 0) {
    no_event(attack, condition);
  }
  r.prior = uniform_prior();
  for (size_t b = 0; b < 3; ++b) {
    r.posterior[b] = mass[b] / static_cast<double>(events);
  }
  r.tv_distance = tv_distance(r.prior, r.posterior);
  return r;
}

PauliOp IdentityStrategy::attack(size_t, const std::vector<bool>&, size_t num_qubits, Rng&) const {
  return PauliOp(num_qubits);
}

namespace {

void check_basis(char basis) {
  if (basis != 'X' && basis != 'Y' && basis != 'Z') {
    throw std::invalid_argument(std::string("probe basis must be X, Y or Z, got '") + basis + "'");
  }
}

void check_position(size_t position, size_t num_qubits, const char* what) {
  if (position >= num_qubits) {
    throw std::out_of_range(std::string(what) + " position " + std::to_string(position) + " out of range for " +
                            std::to_string(num_qubits) + " qubits");
  }
}

}  // namespace

SingleProbeStrategy::SingleProbeStrategy(size_t position, char basis, size_t target)
    : position_(position), basis_(basis), target_(target) {
  check_basis(basis);
}

std::string SingleProbeStrategy::name() const {
  return std::string("single-probe(") + basis_ + "@" + std::to_string(position_) + "->" + std::to_string(target_) +
         ")";
}

PauliOp SingleProbeStrategy::attack(size_t index, const std::vector<bool>& accepted, size_t num_qubits,
                                    Rng&) const {
  check_position(position_, num_qubits, "probe");
  check_position(target_, num_qubits, "target");
  PauliOp p(num_qubits);
  if (index == 0) {
    p.set(position_, basis_);
    return p;
  }
  if (!accepted.empty() && accepted[0]) {
    p.set(position_, basis_);
  }
  p.set(target_, basis_);
  return p;
}

const char* to_string(ProbeBases b) { return b == ProbeBases::XZ ? "XZ" : "X_ONLY"; }

const char* to_string(InferredBlock b) {
  switch (b) {
    case InferredBlock::UNKNOWN:
      return "unknown";
    case InferredBlock::DATA:
      return "data";
    case InferredBlock::ZERO_TRAP:
      return "zero-trap";
    case InferredBlock::PLUS_TRAP:
      return "plus-trap";
  }
  return "?";
}

std::vector<InferredBlock> infer_blocks(size_t num_qubits, ProbeBases bases, const std::vector<bool>& accepted) {
  std::vector<InferredBlock> out(num_qubits, InferredBlock::UNKNOWN);
  for (size_t p = 0; p < num_qubits; ++p) {
    std::optional<bool> x_ok;
    std::optional<bool> z_ok;
    if (p < accepted.size()) {
      x_ok = accepted[p];
    }
    if (bases == ProbeBases::XZ && num_qubits + p < accepted.size()) {
      z_ok = accepted[num_qubits + p];
    }
    if (x_ok == true) {
      out[p] = InferredBlock::PLUS_TRAP;
    } else if (z_ok == true) {
      out[p] = InferredBlock::ZERO_TRAP;
    } else if (x_ok == false && z_ok == false) {
      out[p] = InferredBlock::DATA;
    }
  }
  return out;
}

ProbeAllThenForgeStrategy::ProbeAllThenForgeStrategy(ProbeBases bases, size_t budget)
    : bases_(bases), budget_(budget) {}

std::string ProbeAllThenForgeStrategy::name() const {
  std::string s = std::string("probe-all-then-forge(") + to_string(bases_);
  if (budget_ > 0) {
    s += ",budget=" + std::to_string(budget_);
  }
  return s + ")";
}

size_t ProbeAllThenForgeStrategy::probes(size_t num_qubits) const {
  size_t all = bases_ == ProbeBases::XZ ? 2 * num_qubits : num_qubits;
  return budget_ > 0 ? std::min(all, budget_) : all;
}

PauliOp ProbeAllThenForgeStrategy::probe(size_t index, size_t num_qubits) const {
  PauliOp p(num_qubits);
  p.set(index % num_qubits, index < num_qubits ? 'X' : 'Z');
  return p;
}

PauliOp ProbeAllThenForgeStrategy::forgery(const std::vector<InferredBlock>& blocks) const {
  PauliOp p(blocks.size());
  for (size_t q = 0; q < blocks.size(); ++q) {
    bool hit = blocks[q] == InferredBlock::PLUS_TRAP || (bases_ == ProbeBases::XZ && blocks[q] == InferredBlock::DATA);
    if (hit) {
      p.set(q, 'X');
    }
  }
  return p;
}

PauliOp ProbeAllThenForgeStrategy::attack(size_t index, const std::vector<bool>& accepted, size_t num_qubits,
                                          Rng&) const {
  if (index < probes(num_qubits)) {
    return probe(index, num_qubits);
  }
  return forgery(infer_blocks(num_qubits, bases_, accepted));
}

RandomPauliStrategy::RandomPauliStrategy(size_t weight) : weight_(weight) {}

std::string RandomPauliStrategy::name() const { return "random-pauli(w=" + std::to_string(weight_) + ")"; }

PauliOp RandomPauliStrategy::attack(size_t, const std::vector<bool>&, size_t num_qubits, Rng& rng) const {
  if (weight_ > num_qubits) {
    throw std::invalid_argument("random-pauli weight exceeds the number of qubits");
  }
  std::vector<size_t> positions(num_qubits);
  for (size_t q = 0; q < num_qubits; ++q) {
    positions[q] = q;
  }
  PauliOp p(num_qubits);
  std::uniform_int_distribution<int> letter(0, 2);
  for (size_t i = 0; i < weight_; ++i) {
    std::uniform_int_distribution<size_t> pick(i, num_qubits - 1);
    std::swap(positions[i], positions[pick(rng)]);
    p.set(positions[i], "XYZ"[letter(rng)]);
  }
  return p;
}

ScriptedStrategy::ScriptedStrategy(std::vector<PauliOp> probes, PauliOp on_accept, PauliOp on_reject)
    : probes_(std::move(probes)), on_accept_(std::move(on_accept)), on_reject_(std::move(on_reject)) {
  for (const auto& p : probes_) {
    check_dims(p.num_qubits(), on_accept_.num_qubits(), "scripted strategy probe");
  }
  check_dims(on_reject_.num_qubits(), on_accept_.num_qubits(), "scripted strategy targets");
}

PauliOp ScriptedStrategy::attack(size_t index, const std::vector<bool>& accepted, size_t num_qubits, Rng&) const {
  check_dims(on_accept_.num_qubits(), num_qubits, "scripted strategy");
  if (index < probes_.size()) {
    return probes_[index];
  }
  bool all = std::all_of(accepted.begin(), accepted.end(), [](bool b) { return b; });
  return all ? on_accept_ : on_reject_;
}

SessionOutcome run_session(const AuthFamily& f, std::shared_ptr<const Key> key, const AdversaryStrategy& strategy,
                           Rng& otp_rng, Rng& strategy_rng) {
  const size_t total = f.num_qubits();
  const size_t count = strategy.num_ciphertexts(total);
  if (count == 0) {
    throw std::invalid_argument("strategy attacks no ciphertexts");
  }
  SessionOutcome out;
  std::vector<bool> accepted;
  for (size_t i = 0; i < count; ++i) {
    CiphertextFrame frame(f, key, sample_otp(f, otp_rng));
    PauliOp attack = strategy.attack(i, accepted, total, strategy_rng);
    frame.apply(attack);
    DetectionClass v = frame.verdict();
    accepted.push_back(v != DetectionClass::REJECTED);
    out.attacks.push_back(std::move(attack));
    out.verdicts.push_back(v);
    if (i + 1 == count) {
      out.target_logical = frame.logical_frame();
    }
  }
  return out;
}

ProbeReport adaptive_probe(const AuthFamily& f, uint64_t seed, ProbeBases bases) {
  require_trap(f, "adaptive_probe");
  const size_t total = f.num_qubits();
  auto key = std::make_shared<const Key>(key_for_index(f, seed, 0));
  Rng otp_rng = make_rng(seed, Stream::OTP_KEY, 0);
  Rng strategy_rng = make_rng(seed, Stream::STRATEGY, 0);
  ProbeAllThenForgeStrategy strategy(bases);
  SessionOutcome s = run_session(f, key, strategy, otp_rng, strategy_rng);

  ProbeReport r;
  r.family = label(f);
  r.seed = seed;
  r.bases = bases;
  r.probes_used = s.verdicts.size() - 1;
  std::vector<bool> accepted;
  for (size_t i = 0; i < r.probes_used; ++i) {
    accepted.push_back(s.verdicts[i] != DetectionClass::REJECTED);
    r.probes_accepted += accepted.back() ? 1 : 0;
  }
  r.inferred = infer_blocks(total, bases, accepted);
  size_t correct = 0;
  for (size_t q = 0; q < total; ++q) {
    BlockType truth = block_of(f, *key, q);
    r.truth.push_back(truth);
    bool match = (truth == BlockType::DATA && r.inferred[q] == InferredBlock::DATA) ||
                 (truth == BlockType::ZERO_TRAP && r.inferred[q] == InferredBlock::ZERO_TRAP) ||
                 (truth == BlockType::PLUS_TRAP && r.inferred[q] == InferredBlock::PLUS_TRAP);
    correct += match ? 1 : 0;
  }
  r.block_map_accuracy = static_cast<double>(correct) / static_cast<double>(total);
  r.forgery_attack = s.attacks.back().str();
  r.forgery_verdict = s.verdicts.back();
  if (r.forgery_verdict != DetectionClass::REJECTED) {
    r.forgery_logical_action = s.target_logical;
  }
  return r;
}

ReuseStats parallel_reuse(const AuthFamily& f, const AdversaryStrategy& strategy, uint64_t n_trials, uint64_t seed,
                          unsigned shards) {
  struct Tally {
    uint64_t accepted = 0;
    uint64_t forged = 0;
    uint64_t probes_accepted = 0;
    uint64_t probes_total = 0;
  };
  shards = std::max(1u, shards);
  std::vector<Tally> partial(shards);
  detail::for_each_shard(n_trials, shards, [&](unsigned shard, uint64_t begin, uint64_t end) {
    Tally& t = partial[shard];
    for (uint64_t i = begin; i < end; ++i) {
      auto key = std::make_shared<const Key>(key_for_index(f, seed, i));
      Rng otp_rng = make_rng(seed, Stream::OTP_KEY, i);
      Rng strategy_rng = make_rng(seed, Stream::STRATEGY, i);
      SessionOutcome s = run_session(f, key, strategy, otp_rng, strategy_rng);
      for (size_t c = 0; c + 1 < s.verdicts.size(); ++c) {
        ++t.probes_total;
        t.probes_accepted += s.verdicts[c] != DetectionClass::REJECTED ? 1 : 0;
      }
      t.accepted += s.verdicts.back() != DetectionClass::REJECTED ? 1 : 0;
      t.forged += s.verdicts.back() == DetectionClass::ACCEPTED_FORGED ? 1 : 0;
    }
  });
  ReuseStats r;
  r.strategy = strategy.name();
  r.n_trials = n_trials;
  for (const auto& t : partial) {
    r.accepted_second += t.accepted;
    r.forged_second += t.forged;
    r.probes_accepted += t.probes_accepted;
    r.probes_total += t.probes_total;
  }
  if (n_trials > 0) {
    r.p_accept_second = static_cast<double>(r.accepted_second) / static_cast<double>(n_trials);
    r.p_forge_second = static_cast<double>(r.forged_second) / static_cast<double>(n_trials);
  }
  r.accept_ci = clopper_pearson(r.accepted_second, n_trials);
  r.forge_ci = clopper_pearson(r.forged_second, n_trials);
  return r;
}

}  // namespace qauth
