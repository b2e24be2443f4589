#include "qauth/purity_analysis.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "parallel.h"
#include "qauth/errors.h"

namespace qauth {

using boost::multiprecision::cpp_int;

const char* to_string(Flavor flavor) { return flavor == Flavor::PT ? "PT" : "SPT"; }

const char* to_string(EstimateMode mode) { return mode == EstimateMode::EXACT ? "EXACT" : "MONTE_CARLO"; }

uint64_t VerdictCounts::undetected(Flavor flavor, bool identity_attack) const {
  if (flavor == Flavor::PT || identity_attack) {
    return accepted_forged;
  }
  return accepted_forged + accepted_identity;
}

void VerdictCounts::add(DetectionClass c) {
  switch (c) {
    case DetectionClass::REJECTED:
      ++rejected;
      break;
    case DetectionClass::ACCEPTED_IDENTITY:
      ++accepted_identity;
      break;
    case DetectionClass::ACCEPTED_FORGED:
      ++accepted_forged;
      break;
  }
}

VerdictCounts& VerdictCounts::operator+=(const VerdictCounts& other) {
  rejected += other.rejected;
  accepted_identity += other.accepted_identity;
  accepted_forged += other.accepted_forged;
  return *this;
}

EpsilonEstimate monte_carlo_estimate(Flavor flavor, uint64_t successes, uint64_t trials, Bound bound,
                                     bool identity_attack) {
  EpsilonEstimate e;
  e.flavor = flavor;
  e.mode = EstimateMode::MONTE_CARLO;
  e.successes = successes;
  e.n_samples = trials;
  e.value = trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
  Interval ci = clopper_pearson(successes, trials);
  e.ci_low = ci.low;
  e.ci_high = ci.high;
  e.bound = std::move(bound);
  e.identity_attack = identity_attack;
  return e;
}

std::vector<VerdictCounts> count_verdicts(const AuthFamily& f, const std::vector<PauliOp>& attacks,
                                          uint64_t n_keys, uint64_t seed, unsigned shards) {
  for (const auto& a : attacks) {
    check_dims(a.num_qubits(), f.num_qubits(), "count_verdicts");
  }
  shards = std::max(1u, shards);
  std::vector<std::vector<VerdictCounts>> partial(shards, std::vector<VerdictCounts>(attacks.size()));
  detail::for_each_shard(n_keys, shards, [&](unsigned shard, uint64_t begin, uint64_t end) {
    PauliOp scratch(f.num_qubits());
    PauliOp decoded(f.num_qubits());
    auto& counts = partial[shard];
    for (uint64_t i = begin; i < end; ++i) {
      Key k = key_for_index(f, seed, i);
      for (size_t a = 0; a < attacks.size(); ++a) {
        decode_into(f, k, attacks[a], scratch, decoded);
        counts[a].add(classify(decoded, f.layout()));
      }
    }
  });
  std::vector<VerdictCounts> total(attacks.size());
  for (const auto& p : partial) {
    for (size_t a = 0; a < attacks.size(); ++a) {
      total[a] += p[a];
    }
  }
  return total;
}

Bound family_bound(const AuthFamily& f, Flavor flavor) {
  switch (f.kind()) {
    case FamilyKind::CLIFFORD:
      return {std::ldexp(1.0, -static_cast<int>(f.t())), "2^-t"};
    case FamilyKind::TRAP: {
      if (flavor == Flavor::SPT) {
        return {1.0, "none"};
      }
      double d = static_cast<double>(f.inner().distance.value_or(0));
      return {std::pow(2.0 / 3.0, d / 2.0), "(2/3)^(d/2)"};
    }
    case FamilyKind::STRONG_TRAP: {
      double d = static_cast<double>(f.inner().distance.value_or(0));
      double fx = sparsity_report(f.inner()).f_x;
      return {std::min(1.0, std::pow(2.0 / 3.0, d) + fx), "(2/3)^d+f_X"};
    }
  }
  return {};
}

EpsilonEstimate undetected_prob(const AuthFamily& f, const PauliOp& attack, Flavor flavor, uint64_t n_keys,
                                uint64_t seed, unsigned shards) {
  auto counts = count_verdicts(f, {attack}, n_keys, seed, shards);
  bool identity = attack.is_identity();
  return monte_carlo_estimate(flavor, counts[0].undetected(flavor, identity), n_keys, family_bound(f, flavor),
                              identity);
}

namespace {

cpp_int falling_factorial(size_t n, size_t k) {
  cpp_int r = 1;
  for (size_t i = 0; i < k; ++i) {
    r *= n - i;
  }
  return r;
}

cpp_int binomial_big(size_t n, size_t k) {
  if (k > n) {
    return 0;
  }
  k = std::min(k, n - k);
  cpp_int r = 1;
  for (size_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
  }
  return r;
}

std::string rational_string(const Rational& r) {
  std::ostringstream out;
  out << numerator(r);
  if (denominator(r) != 1) out << "/" << denominator(r);
  return out.str();
}

}  // namespace

EpsilonEstimate exact_undetected_prob_trap(const AuthFamily& f, const PauliOp& attack, Flavor flavor) {
  if (!f.is_trap_kind()) {
    throw std::invalid_argument("exact_undetected_prob_trap: family is not trap-kind");
  }
  check_dims(attack.num_qubits(), f.num_qubits(), "exact_undetected_prob_trap");
  const CssCode& inner = f.inner();
  size_t limit = std::min(inner.distance.value_or(inner.n + 1), inner.benign_distance.value_or(inner.n + 1));
  WeightProfile w = weights(attack);
  if (w.total >= limit) {
    throw GuardError("NOT_WEIGHT_DETERMINED",
                     "attack weight " + std::to_string(w.total) +
                         " can place a block component at or above the inner code's distance " +
                         std::to_string(limit) + "; the verdict is not determined by block assignment");
  }

  // Any non-identity block component of weight below `limit` is detected
  // inside an encoded block. For TRAP the trap blocks are bare qubits:
  // X-only positions pass only in the |+> block, Z-only only in the |0> block,
  // and Y is detected everywhere. The message is never touched, so PT = 0.
  Rational p = 0;
  if (!attack.is_identity() && flavor == Flavor::SPT && f.kind() == FamilyKind::TRAP && w.y == 0) {
    size_t n = f.block_size();
    p = Rational(falling_factorial(n, w.x) * falling_factorial(n, w.z), falling_factorial(3 * n, w.x + w.z));
  }

  EpsilonEstimate e;
  e.flavor = flavor;
  e.mode = EstimateMode::EXACT;
  e.value = static_cast<double>(p);
  e.ci_low = e.value;
  e.ci_high = e.value;
  e.exact = rational_string(p);
  e.bound = family_bound(f, flavor);
  e.identity_attack = attack.is_identity();
  return e;
}

BlockAvoidanceBound block_avoidance_bound(size_t n, size_t w) {
  if (w > 3 * n) {
    throw std::out_of_range("block_avoidance_bound: weight " + std::to_string(w) + " exceeds 3n = " +
                            std::to_string(3 * n));
  }
  BlockAvoidanceBound b;
  b.value = Rational(binomial_big(2 * n, w), binomial_big(3 * n, w));
  b.applicable = w > 0;
  if (b.applicable) {
    Rational power(cpp_int(1) << w, boost::multiprecision::pow(cpp_int(3), static_cast<unsigned>(w)));
    b.below_two_thirds_power = b.value <= power;
  }
  return b;
}

std::string WeightClass::str() const {
  return std::to_string(x) + ":" + std::to_string(y) + ":" + std::to_string(z);
}

std::vector<WeightClass> weight_classes_upto(size_t max_weight) {
  std::vector<WeightClass> out;
  for (size_t total = 1; total <= max_weight; ++total) {
    for (size_t x = total + 1; x-- > 0;) {
      for (size_t y = total - x + 1; y-- > 0;) {
        out.push_back({x, y, total - x - y});
      }
    }
  }
  return out;
}

namespace {

void check_fits(const WeightClass& c, size_t num_qubits) {
  if (c.total() > num_qubits) {
    throw std::invalid_argument("weight class " + c.str() + " does not fit on " + std::to_string(num_qubits) +
                                " qubits");
  }
}

// Number of Paulis with the given weight profile, saturating at `cap` + 1.
uint64_t class_size(const WeightClass& c, size_t num_qubits, uint64_t cap) {
  long double count = 1;
  size_t remaining = num_qubits;
  for (size_t part : {c.x, c.y, c.z}) {
    count *= static_cast<long double>(binomial_big(remaining, part));
    remaining -= part;
    if (count > static_cast<long double>(cap)) {
      return cap + 1;
    }
  }
  return static_cast<uint64_t>(count);
}

}  // namespace

PauliOp sample_attack(const WeightClass& c, size_t num_qubits, Rng& rng) {
  check_fits(c, num_qubits);
  std::vector<size_t> positions(num_qubits);
  std::iota(positions.begin(), positions.end(), size_t{0});
  for (size_t i = 0; i < c.total(); ++i) {
    std::uniform_int_distribution<size_t> pick(i, num_qubits - 1);
    std::swap(positions[i], positions[pick(rng)]);
  }
  PauliOp p(num_qubits);
  for (size_t i = 0; i < c.total(); ++i) {
    p.set(positions[i], i < c.x ? 'X' : i < c.x + c.y ? 'Y' : 'Z');
  }
  return p;
}

std::vector<PauliOp> enumerate_class(const WeightClass& c, size_t num_qubits) {
  check_fits(c, num_qubits);
  std::vector<PauliOp> out;
  PauliOp current(num_qubits);
  // Depth-first over qubits, spending the remaining X/Y/Z budget.
  auto recurse = [&](auto&& self, size_t q, size_t x, size_t y, size_t z) -> void {
    if (x + y + z == 0) {
      out.push_back(current);
      return;
    }
    if (num_qubits - q < x + y + z) {
      return;
    }
    self(self, q + 1, x, y, z);
    const std::pair<char, size_t*> options[] = {{'X', &x}, {'Y', &y}, {'Z', &z}};
    for (auto [pauli, budget] : options) {
      if (*budget > 0) {
        --*budget;
        current.set(q, pauli);
        self(self, q + 1, x, y, z);
        current.set(q, 'I');
        ++*budget;
      }
    }
  };
  recurse(recurse, 0, c.x, c.y, c.z);
  return out;
}

bool within_bound(const EpsilonEstimate& e) { return e.value <= e.bound.value + 3.0 * e.ci_width(); }

SweepReport epsilon_sweep(const AuthFamily& f, const SweepConfig& config) {
  struct Group {
    std::optional<WeightClass> weight_class;
    size_t begin = 0;
    size_t end = 0;
    bool exhaustive = false;
  };
  const size_t n = f.num_qubits();
  std::vector<PauliOp> attacks;
  std::vector<Group> groups;

  auto classes = weight_classes_upto(std::min(config.max_weight, n));
  for (size_t ci = 0; ci < classes.size(); ++ci) {
    const WeightClass& c = classes[ci];
    Group g;
    g.weight_class = c;
    g.begin = attacks.size();
    if (c.total() <= config.exhaustive_weight && class_size(c, n, config.exhaustive_cap) <= config.exhaustive_cap) {
      auto members = enumerate_class(c, n);
      attacks.insert(attacks.end(), members.begin(), members.end());
      g.exhaustive = true;
    } else {
      Rng rng = make_rng(config.seed, Stream::ATTACK, ci);
      for (size_t r = 0; r < config.reps_per_class; ++r) {
        attacks.push_back(sample_attack(c, n, rng));
      }
    }
    g.end = attacks.size();
    groups.push_back(g);
  }
  for (const auto& a : config.extra_attacks) {
    check_dims(a.num_qubits(), n, "epsilon_sweep extra attack");
    groups.push_back({std::nullopt, attacks.size(), attacks.size() + 1, true});
    attacks.push_back(a);
  }

  auto counts = count_verdicts(f, attacks, config.n_keys, config.seed, config.shards);

  SweepReport report;
  report.family = label(f);
  report.config = config;
  const Flavor flavors[] = {Flavor::PT, Flavor::SPT};
  Bound bounds[] = {family_bound(f, Flavor::PT), family_bound(f, Flavor::SPT)};
  std::optional<EpsilonEstimate> best[2];
  for (const auto& g : groups) {
    for (int fi = 0; fi < 2; ++fi) {
      size_t worst = g.begin;
      uint64_t worst_count = 0;
      for (size_t a = g.begin; a < g.end; ++a) {
        uint64_t u = counts[a].undetected(flavors[fi], attacks[a].is_identity());
        if (a == g.begin || u > worst_count) {
          worst = a;
          worst_count = u;
        }
      }
      if (g.begin == g.end) {
        continue;
      }
      SweepRow row;
      row.weight_class = g.weight_class;
      row.worst_attack = attacks[worst].str();
      row.members = g.end - g.begin;
      row.exhaustive = g.exhaustive;
      row.estimate = monte_carlo_estimate(flavors[fi], worst_count, config.n_keys, bounds[fi],
                                          attacks[worst].is_identity());
      if (!best[fi] || row.estimate.value > best[fi]->value) {
        best[fi] = row.estimate;
      }
      report.rows.push_back(std::move(row));
    }
  }
  report.max_pt = best[0].value_or(monte_carlo_estimate(Flavor::PT, 0, config.n_keys, bounds[0], false));
  report.max_spt = best[1].value_or(monte_carlo_estimate(Flavor::SPT, 0, config.n_keys, bounds[1], false));
  report.pt_within_bound = within_bound(report.max_pt);
  report.spt_within_bound = within_bound(report.max_spt);
  return report;
}

namespace {

// RFC 4180 quoting for fields that contain separators or quotes.
std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) {
    return value;
  }
  std::string out = "\"";
  for (char ch : value) {
    out += ch;
    if (ch == '"') {
      out += '"';
    }
  }
  return out + "\"";
}

}  // namespace

std::string sweep_csv(const SweepReport& report) {
  std::string out = "family,class,flavor,estimate,ci_low,ci_high,bound,n_keys,seed\n";
  char buf[256];
  for (const auto& row : report.rows) {
    std::string cls = row.weight_class ? row.weight_class->str() : row.worst_attack;
    const auto& e = row.estimate;
    std::snprintf(buf, sizeof buf, ",%s,%.10g,%.10g,%.10g,%.10g,%llu,%llu\n", to_string(e.flavor), e.value,
                  e.ci_low, e.ci_high, e.bound.value, static_cast<unsigned long long>(e.n_samples),
                  static_cast<unsigned long long>(report.config.seed));
    out += csv_field(report.family) + "," + csv_field(cls) + buf;
  }
  return out;
}

}  // namespace qauth
