#include "qauth/auth_schemes.h"

#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <map>
#include <numeric>

#include "oracles.h"
#include "qauth/clifford_sampling.h"
#include "qauth/errors.h"

using namespace qauth;
using qauth::testing::block_oracle_verdict;
using qauth::testing::random_nonidentity_pauli;
using qauth::testing::random_pauli;

namespace {

const AuthFamily& trap7() {
  static const AuthFamily f = AuthFamily::trap(rm_css(1), "rm-css:1");
  return f;
}

const AuthFamily& strong7() {
  static const AuthFamily f = AuthFamily::strong_trap(rm_css(1), "rm-css:1");
  return f;
}

Key identity_key(const AuthFamily& f) {
  std::vector<uint32_t> perm(f.num_qubits());
  std::iota(perm.begin(), perm.end(), 0u);
  return permutation_key(f, perm);
}

bool is_symplectic(const SymplecticCircuit& c) {
  const size_t n = c.num_qubits();
  for (size_t i = 0; i < 2 * n; ++i) {
    for (size_t j = 0; j < 2 * n; ++j) {
      bool expected = (i % n == j % n) && (i / n != j / n);
      if (sip(c.forward_column(i), c.forward_column(j)) != expected) return false;
    }
  }
  return true;
}

}  // namespace

TEST(Family, Shapes) {
  EXPECT_EQ(trap7().num_qubits(), 21u);
  EXPECT_EQ(trap7().m(), 1u);
  EXPECT_EQ(trap7().t(), 20u);
  EXPECT_EQ(trap7().block_size(), 7u);
  EXPECT_EQ(trap7().block_of_input(0), BlockType::DATA);
  EXPECT_EQ(trap7().block_of_input(7), BlockType::ZERO_TRAP);
  EXPECT_EQ(trap7().block_of_input(20), BlockType::PLUS_TRAP);
  AuthFamily c = AuthFamily::clifford(1, 6);
  EXPECT_EQ(c.num_qubits(), 7u);
  EXPECT_FALSE(c.is_trap_kind());
  EXPECT_THROW(c.block_size(), std::invalid_argument);
  EXPECT_EQ(label(c), "clifford(m=1,t=6)");
  EXPECT_EQ(label(trap7()), "trap(rm-css:1)");
}

TEST(SampleKey, DeterministicAndSeedSensitive) {
  Key a = key_for_index(trap7(), 5, 0);
  Key b = key_for_index(trap7(), 5, 0);
  Key c = key_for_index(trap7(), 6, 0);
  EXPECT_EQ(a.permutation, b.permutation);
  EXPECT_NE(a.permutation, c.permutation);
  std::vector<uint32_t> sorted = a.permutation;
  std::sort(sorted.begin(), sorted.end());
  for (uint32_t i = 0; i < 21; ++i) EXPECT_EQ(sorted[i], i);
  for (uint32_t i = 0; i < 21; ++i) EXPECT_EQ(a.inverse_permutation[a.permutation[i]], i);

  const AuthFamily cf = AuthFamily::clifford(1, 3);
  Key k = key_for_index(cf, 5, 0);
  ASSERT_TRUE(k.clifford);
  EXPECT_EQ(k.clifford->num_qubits(), 4u);
  EXPECT_TRUE(is_symplectic(*k.clifford));
  EXPECT_EQ(key_for_index(cf, 5, 0).clifford_gates, k.clifford_gates);
}

TEST(SampleKey, RejectsMalformedPermutations) {
  EXPECT_THROW(permutation_key(trap7(), {0, 1, 2}), DimensionError);
  std::vector<uint32_t> dup(21, 0);
  EXPECT_THROW(permutation_key(trap7(), dup), std::invalid_argument);
}

TEST(Encoder, IdentityPermutationExamples) {
  Key k = identity_key(trap7());
  // Input tag 8 (0-based 7) is a |0> trap: X there is visible.
  EXPECT_EQ(verdict(trap7(), k, PauliOp::single(21, 7, 'X')), DetectionClass::REJECTED);
  EXPECT_EQ(decode(trap7(), k, PauliOp::single(21, 7, 'X')), PauliOp::single(21, 7, 'X'));
  // Input 15 (0-based 14) is a |+> trap: X becomes Z.
  EXPECT_EQ(decode(trap7(), k, PauliOp::single(21, 14, 'X')), PauliOp::single(21, 14, 'Z'));
  EXPECT_EQ(verdict(trap7(), k, PauliOp::single(21, 14, 'X')), DetectionClass::ACCEPTED_IDENTITY);
  // Full encoder circuit agrees with the fast decode path.
  SymplecticCircuit v = encoder(trap7(), k);
  Rng rng = make_rng(31, Stream::TRIAL, 0);
  for (int rep = 0; rep < 100; ++rep) {
    PauliOp p = random_pauli(21, rng);
    EXPECT_EQ(v.conjugate(p, Direction::INVERSE), decode(trap7(), k, p));
  }
}

TEST(Encoder, DecodeMatchesFullCircuitForAllKinds) {
  Rng rng = make_rng(32, Stream::TRIAL, 0);
  for (const AuthFamily* f : {&trap7(), &strong7()}) {
    for (uint64_t i = 0; i < 20; ++i) {
      Key k = key_for_index(*f, 3, i);
      SymplecticCircuit v = encoder(*f, k);
      for (int rep = 0; rep < 20; ++rep) {
        PauliOp p = random_pauli(f->num_qubits(), rng);
        ASSERT_EQ(v.conjugate(p, Direction::INVERSE), decode(*f, k, p));
      }
    }
  }
  const AuthFamily cf = AuthFamily::clifford(2, 5);
  for (uint64_t i = 0; i < 20; ++i) {
    Key k = key_for_index(cf, 3, i);
    PauliOp p = random_pauli(7, rng);
    EXPECT_EQ(encoder(cf, k).conjugate(p, Direction::INVERSE), k.clifford->conjugate(p, Direction::INVERSE));
  }
}

TEST(Verdict, IdentityAlwaysAccepted) {
  const AuthFamily cf = AuthFamily::clifford(1, 6);
  for (uint64_t i = 0; i < 50; ++i) {
    for (const AuthFamily* f : {&trap7(), &strong7(), &cf}) {
      EXPECT_EQ(verdict(*f, key_for_index(*f, 1, i), PauliOp(f->num_qubits())), DetectionClass::ACCEPTED_IDENTITY);
    }
  }
  EXPECT_EQ(logical_action(trap7(), key_for_index(trap7(), 1, 0), PauliOp(21)), PauliOp(1));
}

TEST(Verdict, BlockOracleAgreementOn10kPairs) {
  Rng rng = make_rng(33, Stream::TRIAL, 0);
  size_t counts[3] = {0, 0, 0};
  for (uint64_t i = 0; i < 10000; ++i) {
    const AuthFamily& f = (i % 2) ? strong7() : trap7();
    Key k = key_for_index(f, 33, i);
    // Mix dense random attacks with sparse ones so all three verdicts occur.
    PauliOp p(f.num_qubits());
    if (i % 4 < 2) {
      p = random_pauli(f.num_qubits(), rng);
    } else {
      size_t w = 1 + rng() % 4;
      for (size_t j = 0; j < w; ++j) p.set(rng() % f.num_qubits(), "XYZ"[rng() % 3]);
    }
    if (i % 8 == 7) {
      // Build an accepted forgery: X on the data block and on the |+> traps.
      p = PauliOp(f.num_qubits());
      for (size_t in = 0; in < 21; ++in) {
        if (f.block_of_input(in) != BlockType::ZERO_TRAP) p.set(k.permutation[in], 'X');
      }
    }
    DetectionClass got = verdict(f, k, p);
    ASSERT_EQ(got, block_oracle_verdict(f, k, p)) << to_string(f.kind()) << " key " << i << " " << p.str();
    ++counts[static_cast<int>(got)];
  }
  EXPECT_GT(counts[0], 0u);
  EXPECT_GT(counts[1], 0u);
  EXPECT_GT(counts[2], 0u);
}

TEST(Verdict, OtpIndependence) {
  // Dense check on a 3-qubit Clifford family: V† P_k2† P P_k2 V equals V† P V
  // up to phase, so the verdict cannot depend on k2.
  namespace dense = qauth::testing::dense;
  const AuthFamily cf = AuthFamily::clifford(1, 2);
  Rng rng = make_rng(34, Stream::TRIAL, 0);
  for (uint64_t i = 0; i < 40; ++i) {
    Key k = key_for_index(cf, 34, i);
    auto v = dense::circuit_unitary(3, k.clifford_gates);
    auto vd = dense::adjoint(v);
    for (int rep = 0; rep < 10; ++rep) {
      PauliOp attack = random_pauli(3, rng);
      auto pk2 = dense::pauli_matrix(sample_otp(cf, rng));
      auto padded = dense::multiply(dense::multiply(dense::adjoint(pk2), dense::pauli_matrix(attack)), pk2);
      auto lhs = dense::multiply(dense::multiply(vd, padded), v);
      ASSERT_TRUE(dense::equal_up_to_phase(lhs, dense::pauli_matrix(decode(cf, k, attack)))) << attack.str();
    }
  }
}

TEST(Verdict, TrapSingleProbeCharacterization) {
  for (uint64_t i = 0; i < 200; ++i) {
    Key k = key_for_index(trap7(), 35, i);
    for (size_t p = 0; p < 21; ++p) {
      size_t input = k.inverse_permutation[p];
      bool plus = input >= 14;
      EXPECT_EQ(verdict(trap7(), k, PauliOp::single(21, p, 'X')) == DetectionClass::ACCEPTED_IDENTITY, plus);
    }
  }
}

TEST(Verdict, TrapSingleProbeRateIsOneThird) {
  const uint64_t n_keys = 10000;
  for (size_t p : {size_t{0}, size_t{10}, size_t{20}}) {
    uint64_t accepted = 0;
    for (uint64_t i = 0; i < n_keys; ++i) {
      accepted += verdict(trap7(), key_for_index(trap7(), 36, i), PauliOp::single(21, p, 'X')) ==
                  DetectionClass::ACCEPTED_IDENTITY;
    }
    EXPECT_TRUE(clopper_pearson(accepted, n_keys).contains(1.0 / 3.0)) << "position " << p << ": " << accepted;
  }
}

TEST(Verdict, StrongTrapCertaintyBand) {
  // 0 < max(w_x', w_z') < d = 3: rejected under every key.
  Rng rng = make_rng(37, Stream::TRIAL, 0);
  for (uint64_t i = 0; i < 300; ++i) {
    Key k = key_for_index(strong7(), 37, i);
    for (int rep = 0; rep < 20; ++rep) {
      PauliOp p(21);
      size_t w = 1 + rng() % 2;
      for (size_t j = 0; j < w; ++j) p.set(rng() % 21, "XYZ"[rng() % 3]);
      if (p.is_identity()) continue;
      EXPECT_EQ(verdict(strong7(), k, p), DetectionClass::REJECTED) << p.str();
    }
  }
}

TEST(LogicalAction, Examples) {
  Key k = identity_key(trap7());
  PauliOp forge(21);
  for (size_t q = 0; q < 7; ++q) forge.set(q, 'X');
  for (size_t q = 14; q < 21; ++q) forge.set(q, 'X');
  EXPECT_EQ(verdict(trap7(), k, forge), DetectionClass::ACCEPTED_FORGED);
  EXPECT_EQ(logical_action(trap7(), k, forge).str(), "X");
  EXPECT_THROW(logical_action(trap7(), k, PauliOp::single(21, 0, 'X')), std::logic_error);

  Rng rng = make_rng(38, Stream::TRIAL, 0);
  for (uint64_t i = 0; i < 2000; ++i) {
    Key sk = key_for_index(strong7(), 38, i);
    PauliOp p = random_nonidentity_pauli(21, rng);
    if (verdict(strong7(), sk, p) == DetectionClass::ACCEPTED_FORGED) {
      EXPECT_FALSE(logical_action(strong7(), sk, p).is_identity());
    }
  }
}

TEST(Verdict, CliffordAcceptanceNearTwoToMinusT) {
  const AuthFamily cf = AuthFamily::clifford(1, 4);
  PauliOp attack = PauliOp::from_string("XIZII");
  const uint64_t n_keys = 20000;
  uint64_t accepted = 0;
  for (uint64_t i = 0; i < n_keys; ++i) {
    accepted += verdict(cf, key_for_index(cf, 39, i), attack) != DetectionClass::REJECTED;
  }
  // Exactly (4^m 2^t - 1) / (4^(m+t) - 1) for a uniform Clifford; close to 2^-t.
  double exact = (4.0 * 16.0 - 1.0) / (std::pow(4.0, 5) - 1.0);
  EXPECT_TRUE(clopper_pearson(accepted, n_keys).contains(exact)) << accepted;
}

TEST(CliffordSampling, MapBasisPair) {
  PauliOp a = PauliOp::from_string("XZY");
  PauliOp b = PauliOp::from_string("YXZ");
  ASSERT_TRUE(sip(a, b));
  SymplecticCircuit c(3, map_basis_pair(0, a, b));
  EXPECT_EQ(c.conjugate(PauliOp::single(3, 0, 'X'), Direction::FORWARD), a);
  EXPECT_EQ(c.conjugate(PauliOp::single(3, 0, 'Z'), Direction::FORWARD), b);
  EXPECT_THROW(map_basis_pair(0, a, a), std::invalid_argument);
}

TEST(CliffordSampling, TwoQubitChiSquared) {
  Rng rng = make_rng(40, Stream::TRIAL, 0);
  const uint64_t samples = 100000;
  std::map<uint32_t, uint64_t> counts;
  for (uint64_t s = 0; s < samples; ++s) {
    SymplecticCircuit c = random_clifford(2, rng);
    ASSERT_TRUE(is_symplectic(c));
    ++counts[qauth::testing::symplectic_id(c)];
  }
  ASSERT_EQ(counts.size(), 720u);  // |Sp(4, F_2)|
  const double expected = static_cast<double>(samples) / 720.0;
  double chi2 = 0.0;
  for (const auto& [id, n] : counts) {
    chi2 += (n - expected) * (n - expected) / expected;
  }
  boost::math::chi_squared dist(719);
  EXPECT_LT(chi2, boost::math::quantile(dist, 0.999)) << chi2;
  EXPECT_GT(chi2, boost::math::quantile(dist, 0.001)) << chi2;
}
