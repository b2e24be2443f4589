#include "qauth/symplectic.h"

#include <gtest/gtest.h>

#include "oracles.h"
#include "qauth/errors.h"
#include "qauth/gf2.h"

using namespace qauth;
using qauth::testing::random_circuit;
using qauth::testing::random_pauli;

namespace {

PauliOp P(const char* s) { return PauliOp::from_string(s); }

}  // namespace

TEST(BitVec, HexRoundTripAndOrder) {
  BitVec v = BitVec::from_bits("1000110");
  EXPECT_EQ(v.to_hex(), "13");
  EXPECT_EQ(BitVec::from_hex("13", 7), v);
  EXPECT_EQ(v.popcount(), 3u);
  EXPECT_EQ(v.first_set(), 0u);
  EXPECT_EQ(v.support(), (std::vector<size_t>{0, 4, 5}));
  EXPECT_THROW(BitVec::from_hex("zz", 7), std::invalid_argument);
}

TEST(BitVec, MultiWordOperations) {
  BitVec a(130);
  BitVec b(130);
  a.set(3);
  a.set(129);
  b.set(129);
  b.set(64);
  EXPECT_EQ((a ^ b).support(), (std::vector<size_t>{3, 64}));
  EXPECT_TRUE(a.dot(b));
  EXPECT_EQ((a & b).popcount(), 1u);
  EXPECT_THROW(a ^= BitVec(129), std::invalid_argument);
}

TEST(Gf2, RowReduceAndNullSpace) {
  std::vector<BitVec> rows = {BitVec::from_bits("1100"), BitVec::from_bits("0110"), BitVec::from_bits("1010")};
  auto e = gf2::row_reduce(rows, 4);
  EXPECT_EQ(e.rank(), 2u);
  EXPECT_TRUE(gf2::in_row_space(e, BitVec::from_bits("1010")));
  EXPECT_FALSE(gf2::in_row_space(e, BitVec::from_bits("0001")));
  auto ns = gf2::null_space(e);
  ASSERT_EQ(ns.size(), 2u);
  for (const auto& v : ns) {
    for (const auto& r : rows) {
      EXPECT_FALSE(v.dot(r));
    }
  }
}

TEST(PauliOp, ParseAndWeights) {
  EXPECT_EQ(weights(PauliOp(3)), (WeightProfile{0, 0, 0, 0}));
  EXPECT_EQ(weights(P("XYZ")), (WeightProfile{1, 1, 1, 3}));
  PauliOp p(BitVec::from_bits("110"), BitVec::from_bits("011"));
  EXPECT_EQ(p.str(), "XYZ");
  WeightProfile w = weights(p);
  EXPECT_EQ(w, (WeightProfile{1, 1, 1, 3}));
  EXPECT_EQ(w.x_part(), 2u);
  EXPECT_EQ(w.z_part(), 2u);
  EXPECT_EQ(P("I_XI").weight(), 1u);
  EXPECT_THROW(P("XQ"), std::invalid_argument);
}

TEST(PauliOp, ProductIgnoresPhase) {
  EXPECT_EQ(P("XI") * P("ZI"), P("YI"));
  EXPECT_EQ(P("XY") * P("XY"), P("II"));
}

TEST(Sip, Examples) {
  EXPECT_TRUE(sip(P("X"), P("Z")));
  EXPECT_FALSE(sip(P("X"), P("X")));
  EXPECT_FALSE(sip(P("XZ"), P("ZX")));
  EXPECT_THROW(sip(P("X"), P("XX")), DimensionError);
}

TEST(Conjugate, SingleGateExamples) {
  SymplecticCircuit h(1, {Gate::h(0)});
  EXPECT_EQ(h.conjugate(P("X"), Direction::FORWARD), P("Z"));
  SymplecticCircuit cx(2, {Gate::cnot(0, 1)});
  EXPECT_EQ(cx.conjugate(P("XI"), Direction::FORWARD), P("XX"));
  EXPECT_EQ(cx.conjugate(P("IZ"), Direction::FORWARD), P("ZZ"));
  SymplecticCircuit s(1, {Gate::s(0)});
  PauliOp y = s.conjugate(P("X"), Direction::FORWARD);
  EXPECT_TRUE(y.x().get(0));
  EXPECT_TRUE(y.z().get(0));
  SymplecticCircuit perm(3, {Gate::permutation({2, 0, 1})});
  EXPECT_EQ(perm.conjugate(P("XII"), Direction::FORWARD), P("IIX"));
  EXPECT_EQ(perm.conjugate(P("IIX"), Direction::INVERSE), P("XII"));
}

TEST(Conjugate, RejectsBadInput) {
  SymplecticCircuit h(1, {Gate::h(0)});
  EXPECT_THROW(h.conjugate(P("XX"), Direction::FORWARD), DimensionError);
  EXPECT_THROW(SymplecticCircuit(2, {Gate::cnot(1, 1)}), std::invalid_argument);
  EXPECT_THROW(SymplecticCircuit(2, {Gate::h(2)}), std::invalid_argument);
  EXPECT_THROW(SymplecticCircuit(3, {Gate::permutation({0, 0, 1})}), std::invalid_argument);
}

TEST(Conjugate, RoundTripUpTo64Qubits) {
  Rng rng = make_rng(11, Stream::TRIAL, 0);
  for (size_t n = 1; n <= 64; ++n) {
    SymplecticCircuit c = random_circuit(n, 4 * n, rng);
    for (int rep = 0; rep < 8; ++rep) {
      PauliOp p = random_pauli(n, rng);
      ASSERT_EQ(c.conjugate(c.conjugate(p, Direction::FORWARD), Direction::INVERSE), p) << "n=" << n;
      ASSERT_EQ(c.conjugate(c.conjugate(p, Direction::INVERSE), Direction::FORWARD), p) << "n=" << n;
    }
  }
}

TEST(Conjugate, PreservesCommutation) {
  Rng rng = make_rng(12, Stream::TRIAL, 0);
  for (size_t n = 1; n <= 64; ++n) {
    SymplecticCircuit c = random_circuit(n, 4 * n, rng);
    for (int rep = 0; rep < 8; ++rep) {
      PauliOp a = random_pauli(n, rng);
      PauliOp b = random_pauli(n, rng);
      for (auto dir : {Direction::FORWARD, Direction::INVERSE}) {
        ASSERT_EQ(sip(a, b), sip(c.conjugate(a, dir), c.conjugate(b, dir))) << "n=" << n;
      }
    }
  }
}

TEST(Conjugate, InverseAndThenCompose) {
  Rng rng = make_rng(13, Stream::TRIAL, 0);
  SymplecticCircuit a = random_circuit(9, 30, rng);
  SymplecticCircuit b = random_circuit(9, 30, rng);
  SymplecticCircuit ab = a.then(b);
  for (int rep = 0; rep < 50; ++rep) {
    PauliOp p = random_pauli(9, rng);
    EXPECT_EQ(ab.conjugate(p, Direction::FORWARD),
              b.conjugate(a.conjugate(p, Direction::FORWARD), Direction::FORWARD));
    EXPECT_EQ(a.inverse().conjugate(p, Direction::FORWARD), a.conjugate(p, Direction::INVERSE));
  }
}

TEST(DenseOracle, EverySingleGate) {
  std::vector<std::pair<size_t, Gate>> cases = {
      {1, Gate::h(0)},           {1, Gate::s(0)},          {2, Gate::cnot(0, 1)},
      {2, Gate::cnot(1, 0)},     {3, Gate::h(2)},          {3, Gate::s(1)},
      {3, Gate::cnot(2, 0)},     {2, Gate::permutation({1, 0})},
      {3, Gate::permutation({2, 0, 1})},
  };
  for (const auto& [n, g] : cases) {
    SymplecticCircuit c(n, {g});
    auto u = qauth::testing::dense::circuit_unitary(n, {g});
    auto ud = qauth::testing::dense::adjoint(u);
    for (uint64_t code = 0; code < (uint64_t{1} << (2 * n)); ++code) {
      PauliOp p(BitVec::from_u64(code, n), BitVec::from_u64(code >> n, n));
      auto lhs = qauth::testing::dense::multiply(qauth::testing::dense::multiply(u, qauth::testing::dense::pauli_matrix(p)), ud);
      auto fwd = qauth::testing::dense::pauli_matrix(c.conjugate(p, Direction::FORWARD));
      ASSERT_TRUE(qauth::testing::dense::equal_up_to_phase(lhs, fwd)) << g.str() << " on " << p.str();
      auto rhs = qauth::testing::dense::multiply(qauth::testing::dense::multiply(ud, qauth::testing::dense::pauli_matrix(p)), u);
      auto inv = qauth::testing::dense::pauli_matrix(c.conjugate(p, Direction::INVERSE));
      ASSERT_TRUE(qauth::testing::dense::equal_up_to_phase(rhs, inv)) << g.str() << " inverse on " << p.str();
    }
  }
}

TEST(DenseOracle, RandomCompositionsUpTo4Qubits) {
  Rng rng = make_rng(14, Stream::TRIAL, 0);
  for (size_t n = 2; n <= 4; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      SymplecticCircuit c = random_circuit(n, 12, rng);
      auto u = qauth::testing::dense::circuit_unitary(n, c.gates());
      auto ud = qauth::testing::dense::adjoint(u);
      for (int k = 0; k < 8; ++k) {
        PauliOp p = random_pauli(n, rng);
        auto lhs = qauth::testing::dense::multiply(qauth::testing::dense::multiply(u, qauth::testing::dense::pauli_matrix(p)), ud);
        ASSERT_TRUE(qauth::testing::dense::equal_up_to_phase(
            lhs, qauth::testing::dense::pauli_matrix(c.conjugate(p, Direction::FORWARD))))
            << "n=" << n << " p=" << p.str();
      }
    }
  }
}

TEST(Twirl, ExhaustiveUpTo3Qubits) {
  for (size_t n = 1; n <= 3; ++n) {
    const uint64_t count = uint64_t{1} << (2 * n);
    for (uint64_t a = 0; a < count; ++a) {
      PauliOp pa(BitVec::from_u64(a, n), BitVec::from_u64(a >> n, n));
      int64_t sum = 0;
      for (uint64_t k = 0; k < count; ++k) {
        sum += sip(pa, PauliOp(BitVec::from_u64(k, n), BitVec::from_u64(k >> n, n))) ? -1 : 1;
      }
      EXPECT_EQ(sum, a == 0 ? static_cast<int64_t>(count) : 0) << pa.str();
    }
  }
}

TEST(Classify, Examples) {
  TagLayout layout = TagLayout::leading_message(3, 1);
  EXPECT_EQ(classify(P("III"), layout), DetectionClass::ACCEPTED_IDENTITY);
  EXPECT_EQ(classify(P("IZI"), layout), DetectionClass::ACCEPTED_IDENTITY);
  EXPECT_EQ(classify(P("XII"), layout), DetectionClass::ACCEPTED_FORGED);
  EXPECT_EQ(classify(P("ZIZ"), layout), DetectionClass::ACCEPTED_FORGED);
  EXPECT_EQ(classify(P("IIY"), layout), DetectionClass::REJECTED);
  EXPECT_EQ(classify(P("XXI"), layout), DetectionClass::REJECTED);
  EXPECT_THROW(classify(P("XX"), layout), DimensionError);
}

TEST(Classify, PartitionsAllPaulisUpTo4Qubits) {
  for (size_t n = 1; n <= 4; ++n) {
    for (size_t m = 1; m <= n; ++m) {
      TagLayout layout = TagLayout::leading_message(n, m);
      uint64_t counts[3] = {0, 0, 0};
      const uint64_t total = uint64_t{1} << (2 * n);
      for (uint64_t a = 0; a < total; ++a) {
        PauliOp p(BitVec::from_u64(a, n), BitVec::from_u64(a >> n, n));
        // Oracle straight from the set definitions.
        bool tag_x = false;
        bool msg_nonidentity = false;
        for (size_t q = 0; q < n; ++q) {
          char c = p.at(q);
          if (q >= m && (c == 'X' || c == 'Y')) tag_x = true;
          if (q < m && c != 'I') msg_nonidentity = true;
        }
        DetectionClass expected = tag_x             ? DetectionClass::REJECTED
                                  : msg_nonidentity ? DetectionClass::ACCEPTED_FORGED
                                                    : DetectionClass::ACCEPTED_IDENTITY;
        DetectionClass got = classify(p, layout);
        ASSERT_EQ(got, expected) << p.str();
        ++counts[static_cast<int>(got)];
      }
      EXPECT_EQ(counts[0] + counts[1] + counts[2], total);
      EXPECT_EQ(counts[1], uint64_t{1} << (n - m));
    }
  }
}

TEST(TagLayout, CustomPositions) {
  TagLayout layout(4, {2});
  EXPECT_EQ(layout.tag_positions(), (std::vector<size_t>{0, 1, 3}));
  EXPECT_EQ(classify(P("IIXI"), layout), DetectionClass::ACCEPTED_FORGED);
  EXPECT_EQ(classify(P("XIII"), layout), DetectionClass::REJECTED);
  EXPECT_THROW(TagLayout(3, {3}), std::invalid_argument);
}
