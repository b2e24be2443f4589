#include "qauth/purity_analysis.h"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <sstream>

#include "oracles.h"
#include "qauth/errors.h"

using namespace qauth;
using qauth::testing::random_nonidentity_pauli;

namespace {

const AuthFamily& trap7() {
  static const AuthFamily f = AuthFamily::trap(rm_css(1), "rm-css:1");
  return f;
}

const AuthFamily& strong7() {
  static const AuthFamily f = AuthFamily::strong_trap(rm_css(1), "rm-css:1");
  return f;
}

PauliOp two_x(size_t a, size_t b) {
  PauliOp p(21);
  p.set(a, 'X');
  p.set(b, 'X');
  return p;
}

// binom(2n, w) / binom(3n, w) as a product of ratios.
Rational avoidance_oracle(size_t n, size_t w) {
  Rational r = 1;
  for (size_t i = 0; i < w; ++i) {
    r *= Rational(static_cast<long long>(2 * n - i), static_cast<long long>(3 * n - i));
  }
  return r;
}

std::string guard_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const GuardError& e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST(ExactTrap, SingleProbes) {
  for (size_t q : {size_t{0}, size_t{13}}) {
    EpsilonEstimate x = exact_undetected_prob_trap(trap7(), PauliOp::single(21, q, 'X'), Flavor::SPT);
    EXPECT_EQ(x.mode, EstimateMode::EXACT);
    EXPECT_EQ(x.exact, "1/3");
    EXPECT_DOUBLE_EQ(x.value, 7.0 / 21.0);
    EXPECT_EQ(x.ci_low, x.value);
    EXPECT_EQ(x.ci_high, x.value);
    EXPECT_EQ(exact_undetected_prob_trap(trap7(), PauliOp::single(21, q, 'Z'), Flavor::SPT).exact, "1/3");
    EXPECT_EQ(exact_undetected_prob_trap(trap7(), PauliOp::single(21, q, 'Y'), Flavor::SPT).exact, "0");
    EXPECT_EQ(exact_undetected_prob_trap(trap7(), PauliOp::single(21, q, 'X'), Flavor::PT).exact, "0");
  }
}

TEST(ExactTrap, TwoPositions) {
  // Both X's must land in the |+> block: binom(7,2)/binom(21,2).
  EpsilonEstimate e = exact_undetected_prob_trap(trap7(), two_x(3, 17), Flavor::SPT);
  EXPECT_EQ(e.exact, "1/10");
  EXPECT_DOUBLE_EQ(e.value, 21.0 / 210.0);
  PauliOp xz(21);
  xz.set(0, 'X');
  xz.set(1, 'Z');
  // X in the |+> block and Z in the |0> block: 7*7 / (21*20).
  EXPECT_EQ(exact_undetected_prob_trap(trap7(), xz, Flavor::SPT).exact, "7/60");
}

TEST(ExactTrap, StrongTrapIsZero) {
  EXPECT_EQ(exact_undetected_prob_trap(strong7(), PauliOp::single(21, 0, 'X'), Flavor::SPT).exact, "0");
  EXPECT_EQ(exact_undetected_prob_trap(strong7(), two_x(0, 1), Flavor::SPT).exact, "0");
}

TEST(ExactTrap, RefusesWeightAtDistance) {
  PauliOp p = two_x(0, 1);
  p.set(2, 'X');
  EXPECT_EQ(guard_code([&] { exact_undetected_prob_trap(trap7(), p, Flavor::SPT); }), "NOT_WEIGHT_DETERMINED");
  const AuthFamily cf = AuthFamily::clifford(1, 6);
  EXPECT_THROW(exact_undetected_prob_trap(cf, PauliOp::single(7, 0, 'X'), Flavor::SPT), std::invalid_argument);
}

TEST(ExactTrap, AgreesWithMonteCarloCoverage) {
  // The 99% interval must cover the exact value in at least 99 of 100 seeded runs.
  std::vector<PauliOp> attacks = {PauliOp::single(21, 0, 'X'), PauliOp::single(21, 5, 'Z'), two_x(2, 9)};
  for (const auto& a : attacks) {
    double exact = exact_undetected_prob_trap(trap7(), a, Flavor::SPT).value;
    int covered = 0;
    for (uint64_t run = 0; run < 100; ++run) {
      EpsilonEstimate mc = undetected_prob(trap7(), a, Flavor::SPT, 2000, 1000 + run);
      covered += mc.ci_low <= exact && exact <= mc.ci_high;
    }
    EXPECT_GE(covered, 99) << a.str();
  }
}

TEST(MonteCarlo, SingleProbeEstimates) {
  EpsilonEstimate spt = undetected_prob(trap7(), PauliOp::single(21, 0, 'X'), Flavor::SPT, 20000, 3);
  EXPECT_TRUE(spt.ci_low <= 1.0 / 3.0 && 1.0 / 3.0 <= spt.ci_high);
  EXPECT_LE(spt.ci_low, spt.value);
  EXPECT_LE(spt.value, spt.ci_high);
  EpsilonEstimate pt = undetected_prob(trap7(), PauliOp::single(21, 0, 'X'), Flavor::PT, 20000, 3);
  EXPECT_EQ(pt.successes, 0u);
  EpsilonEstimate strong = undetected_prob(strong7(), PauliOp::single(21, 0, 'X'), Flavor::SPT, 20000, 3);
  EXPECT_EQ(strong.successes, 0u);
  EXPECT_EQ(strong.ci_low, 0.0);
  EXPECT_GT(strong.ci_high, 0.0);
}

TEST(MonteCarlo, IdentityAttackIsFlagged) {
  EpsilonEstimate e = undetected_prob(trap7(), PauliOp(21), Flavor::SPT, 100, 1);
  EXPECT_TRUE(e.identity_attack);
  EXPECT_EQ(e.successes, 0u);
}

TEST(CountVerdicts, ShardIndependentAndFlavorOrdered) {
  Rng rng = make_rng(41, Stream::TRIAL, 0);
  std::vector<PauliOp> attacks;
  for (int i = 0; i < 30; ++i) {
    PauliOp p(21);
    for (int j = 0; j < 1 + i % 4; ++j) p.set(rng() % 21, "XYZ"[rng() % 3]);
    attacks.push_back(p);
  }
  auto one = count_verdicts(trap7(), attacks, 3000, 41, 1);
  auto four = count_verdicts(trap7(), attacks, 3000, 41, 4);
  ASSERT_EQ(one.size(), attacks.size());
  for (size_t i = 0; i < attacks.size(); ++i) {
    EXPECT_EQ(one[i].rejected, four[i].rejected);
    EXPECT_EQ(one[i].accepted_identity, four[i].accepted_identity);
    EXPECT_EQ(one[i].accepted_forged, four[i].accepted_forged);
    EXPECT_EQ(one[i].total(), 3000u);
    bool id = attacks[i].is_identity();
    EXPECT_LE(one[i].undetected(Flavor::PT, id), one[i].undetected(Flavor::SPT, id));
  }
}

TEST(StrongTrap, ZeroUndetectedBelowDistance) {
  std::vector<PauliOp> attacks;
  for (const auto& c : weight_classes_upto(2)) {
    for (auto& p : enumerate_class(c, 21)) attacks.push_back(std::move(p));
  }
  ASSERT_EQ(attacks.size(), 63u + 210u * 9u);
  auto counts = count_verdicts(strong7(), attacks, 500, 42);
  for (size_t i = 0; i < attacks.size(); ++i) {
    ASSERT_EQ(counts[i].rejected, 500u) << attacks[i].str();
  }
}

TEST(Bounds, FamilyBounds) {
  EXPECT_NEAR(family_bound(trap7(), Flavor::PT).value, std::pow(2.0 / 3.0, 1.5), 1e-12);
  EXPECT_DOUBLE_EQ(family_bound(trap7(), Flavor::SPT).value, 1.0);
  EXPECT_NEAR(family_bound(strong7(), Flavor::SPT).value, std::pow(2.0 / 3.0, 3) + 0.2, 1e-12);
  EXPECT_DOUBLE_EQ(family_bound(AuthFamily::clifford(1, 6), Flavor::SPT).value, 1.0 / 64.0);
  EXPECT_FALSE(family_bound(trap7(), Flavor::PT).formula.empty());
}

TEST(Bounds, BlockAvoidance) {
  BlockAvoidanceBound b3 = block_avoidance_bound(7, 3);
  EXPECT_EQ(b3.value, Rational(364, 1330));
  EXPECT_EQ(b3.value, avoidance_oracle(7, 3));
  EXPECT_TRUE(b3.applicable);
  EXPECT_TRUE(b3.below_two_thirds_power);
  BlockAvoidanceBound b0 = block_avoidance_bound(7, 0);
  EXPECT_EQ(b0.value, Rational(1));
  EXPECT_FALSE(b0.applicable);
  EXPECT_EQ(block_avoidance_bound(7, 14).value, Rational(1, 116280));
  for (size_t w = 1; w <= 21; ++w) {
    BlockAvoidanceBound b = block_avoidance_bound(7, w);
    EXPECT_EQ(b.value, avoidance_oracle(7, w)) << w;
    EXPECT_TRUE(b.below_two_thirds_power) << w;
  }
  EXPECT_THROW(block_avoidance_bound(7, 22), std::out_of_range);
}

TEST(Bounds, WithinBound) {
  EpsilonEstimate e;
  e.value = 0.55;
  e.ci_low = 0.54;
  e.ci_high = 0.56;
  e.bound = {0.5, "x"};
  EXPECT_TRUE(within_bound(e));
  e.value = 0.60;
  EXPECT_FALSE(within_bound(e));
}

TEST(WeightClasses, EnumerationAndSampling) {
  auto classes = weight_classes_upto(2);
  EXPECT_EQ(classes.size(), 9u);
  EXPECT_EQ(classes.front().total(), 1u);
  EXPECT_EQ((WeightClass{1, 1, 0}).str(), "1:1:0");
  EXPECT_EQ(enumerate_class({1, 0, 0}, 21).size(), 21u);
  EXPECT_EQ(enumerate_class({1, 1, 0}, 21).size(), 420u);
  EXPECT_EQ(enumerate_class({2, 0, 0}, 21).size(), 210u);
  Rng rng = make_rng(43, Stream::TRIAL, 0);
  for (const auto& c : weight_classes_upto(6)) {
    PauliOp p = sample_attack(c, 21, rng);
    WeightProfile w = weights(p);
    EXPECT_EQ(w.x, c.x);
    EXPECT_EQ(w.y, c.y);
    EXPECT_EQ(w.z, c.z);
  }
}

TEST(Sweep, TrapPtWithinBound) {
  SweepConfig cfg;
  cfg.max_weight = 4;
  cfg.exhaustive_weight = 1;
  cfg.n_keys = 2000;
  cfg.seed = 44;
  SweepReport r = epsilon_sweep(trap7(), cfg);
  EXPECT_TRUE(r.pt_within_bound);
  EXPECT_GT(r.max_spt.value, 0.3);
  EXPECT_LE(r.max_pt.value, r.max_spt.value);
  // One row per (class, flavor).
  EXPECT_EQ(r.rows.size(), 2 * weight_classes_upto(4).size());
}

TEST(Sweep, DeterministicAcrossShards) {
  SweepConfig cfg;
  cfg.max_weight = 2;
  cfg.n_keys = 500;
  cfg.seed = 45;
  cfg.shards = 1;
  std::string a = sweep_csv(epsilon_sweep(trap7(), cfg));
  cfg.shards = 3;
  std::string b = sweep_csv(epsilon_sweep(trap7(), cfg));
  EXPECT_EQ(a, b);
}

TEST(Sweep, CsvColumnsAndQuoting) {
  SweepConfig cfg;
  cfg.max_weight = 1;
  cfg.n_keys = 200;
  cfg.seed = 46;
  Rng rng = make_rng(46, Stream::ATTACK, 0);
  cfg.extra_attacks.push_back(random_nonidentity_pauli(7, rng));
  std::string csv = sweep_csv(epsilon_sweep(AuthFamily::clifford(1, 6), cfg));
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "family,class,flavor,estimate,ci_low,ci_high,bound,n_keys,seed");
  std::getline(in, line);
  EXPECT_EQ(line.rfind("\"clifford(m=1,t=6)\",1:0:0,", 0), 0u) << line;
  size_t rows = 1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 2u * (3u + 1u));
}
