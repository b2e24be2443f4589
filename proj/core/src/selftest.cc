#include "qauth/selftest.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <numeric>

#include "qauth/auth_schemes.h"
#include "qauth/codes.h"
#include "qauth/stats.h"
#include "qauth/symplectic.h"

namespace qauth {

bool SelftestSummary::all_passed() const { return failures() == 0; }

size_t SelftestSummary::failures() const {
  return static_cast<size_t>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.passed; }));
}

namespace {

PauliOp random_pauli(size_t n, Rng& rng) {
  PauliOp p(n);
  for (size_t q = 0; q < n; ++q) {
    uint64_t r = rng();
    p.x().set(q, r & 1);
    p.z().set(q, (r >> 1) & 1);
  }
  return p;
}

SymplecticCircuit random_circuit(size_t n, size_t length, Rng& rng) {
  std::vector<Gate> gates;
  std::uniform_int_distribution<uint32_t> qubit(0, static_cast<uint32_t>(n - 1));
  for (size_t i = 0; i < length; ++i) {
    switch (rng() % 4) {
      case 0:
        gates.push_back(Gate::h(qubit(rng)));
        break;
      case 1:
        gates.push_back(Gate::s(qubit(rng)));
        break;
      case 2: {
        uint32_t a = qubit(rng);
        uint32_t b = qubit(rng);
        if (a != b) {
          gates.push_back(Gate::cnot(a, b));
        }
        break;
      }
      default: {
        std::vector<uint32_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0u);
        std::shuffle(perm.begin(), perm.end(), rng);
        gates.push_back(Gate::permutation(std::move(perm)));
        break;
      }
    }
  }
  return SymplecticCircuit(n, std::move(gates));
}

// Runs `body`, turning a false return or an exception into a failed check.
SelftestCheck run_check(const std::string& name, const std::function<bool(std::string&)>& body) {
  SelftestCheck c;
  c.name = name;
  try {
    c.passed = body(c.detail);
  } catch (const std::exception& e) {
    c.passed = false;
    c.detail = std::string("exception: ") + e.what();
  }
  if (c.passed && c.detail.empty()) {
    c.detail = "ok";
  }
  return c;
}

LinearCode steane_parent(const SelftestFixture& fixture) {
  if (!fixture.steane_generator) {
    return reed_muller(1, 3);
  }
  std::vector<BitVec> rows;
  size_t n = 0;
  for (const auto& r : *fixture.steane_generator) {
    rows.push_back(BitVec::from_bits(r));
    n = rows.back().size();
  }
  return LinearCode(n, std::move(rows));
}

}  // namespace

SelftestSummary run_selftest(const SelftestFixture& fixture) {
  SelftestSummary s;
  const uint64_t seed = fixture.seed;

  s.checks.push_back(run_check("round-trip", [&](std::string& detail) {
    Rng rng = make_rng(seed, Stream::TRIAL, 1);
    for (size_t trial = 0; trial < 64; ++trial) {
      size_t n = 1 + trial;
      SymplecticCircuit c = random_circuit(n, 3 * n, rng);
      PauliOp p = random_pauli(n, rng);
      if (c.conjugate(c.conjugate(p, Direction::FORWARD), Direction::INVERSE) != p ||
          c.conjugate(c.conjugate(p, Direction::INVERSE), Direction::FORWARD) != p) {
        detail = "round trip failed at n=" + std::to_string(n);
        return false;
      }
    }
    return true;
  }));

  s.checks.push_back(run_check("commutation", [&](std::string& detail) {
    Rng rng = make_rng(seed, Stream::TRIAL, 2);
    for (size_t trial = 0; trial < 64; ++trial) {
      size_t n = 1 + trial;
      SymplecticCircuit c = random_circuit(n, 3 * n, rng);
      PauliOp a = random_pauli(n, rng);
      PauliOp b = random_pauli(n, rng);
      for (auto dir : {Direction::FORWARD, Direction::INVERSE}) {
        if (sip(a, b) != sip(c.conjugate(a, dir), c.conjugate(b, dir))) {
          detail = "symplectic form not preserved at n=" + std::to_string(n);
          return false;
        }
      }
    }
    return true;
  }));

  s.checks.push_back(run_check("twirl-identity", [&](std::string& detail) {
    for (size_t n = 1; n <= 3; ++n) {
      uint64_t count = uint64_t{1} << (2 * n);
      for (uint64_t a = 0; a < count; ++a) {
        PauliOp pa(BitVec::from_u64(a, n), BitVec::from_u64(a >> n, n));
        int64_t sum = 0;
        for (uint64_t k = 0; k < count; ++k) {
          PauliOp pk(BitVec::from_u64(k, n), BitVec::from_u64(k >> n, n));
          sum += sip(pa, pk) ? -1 : 1;
        }
        int64_t expected = a == 0 ? static_cast<int64_t>(count) : 0;
        if (sum != expected) {
          detail = "sum " + std::to_string(sum) + " for " + pa.str();
          return false;
        }
      }
    }
    return true;
  }));

  s.checks.push_back(run_check("classify-partition", [&](std::string& detail) {
    for (size_t n = 1; n <= 4; ++n) {
      for (size_t m = 1; m <= n; ++m) {
        TagLayout layout = TagLayout::leading_message(n, m);
        uint64_t counts[3] = {0, 0, 0};
        uint64_t total = uint64_t{1} << (2 * n);
        for (uint64_t a = 0; a < total; ++a) {
          PauliOp p(BitVec::from_u64(a, n), BitVec::from_u64(a >> n, n));
          ++counts[static_cast<int>(classify(p, layout))];
        }
        uint64_t tags_ok = uint64_t{1} << (n - m);  // {I,Z} on every tag
        uint64_t accepted = (uint64_t{1} << (2 * m)) * tags_ok;
        if (counts[1] != tags_ok || counts[2] != accepted - tags_ok || counts[0] != total - accepted) {
          detail = "class sizes wrong at n=" + std::to_string(n) + ", m=" + std::to_string(m);
          return false;
        }
      }
    }
    return true;
  }));

  s.checks.push_back(run_check("rm-parameters", [&](std::string& detail) {
    for (size_t i = 1; i <= 2; ++i) {
      LinearCode c = reed_muller(i, 2 * i + 1);
      size_t len = size_t{1} << (2 * i + 1);
      size_t rank = size_t{1} << (2 * i);
      size_t d = size_t{1} << (i + 1);
      if (c.n() != len || c.k() != rank || min_distance(c).value != d || !is_self_dual(c)) {
        detail = "RM(" + std::to_string(i) + "," + std::to_string(2 * i + 1) + ") parameters wrong";
        return false;
      }
    }
    return true;
  }));

  s.checks.push_back(run_check("steane-golden", [&](std::string& detail) {
    CssCode css = css_from_selfdual(steane_parent(fixture));
    SparsityReport sr = sparsity_report(css);
    bool ok = css.n == 7 && css.m == 1 && css.distance == size_t{3} && css.benign_distance == size_t{4} &&
              std::abs(sr.f_x - 0.2) < 1e-12;
    if (!ok) {
      detail = "expected [[7,1,3]] with benign distance 4 and f_X 0.2, got n=" + std::to_string(css.n) +
               " m=" + std::to_string(css.m) + " d=" + std::to_string(css.distance.value_or(0)) +
               " benign=" + std::to_string(css.benign_distance.value_or(0));
    }
    return ok;
  }));

  s.checks.push_back(run_check("steane-encoder", [&](std::string& detail) {
    CssCode css = css_from_selfdual(steane_parent(fixture));
    for (const auto& row : css.c2.generator()) {
      PauliOp xs(row, BitVec(css.n));
      PauliOp zs(BitVec(css.n), row);
      for (const auto& stab : {xs, zs}) {
        if (classify(css.encoder.conjugate(stab, Direction::INVERSE), css.layout) !=
            DetectionClass::ACCEPTED_IDENTITY) {
          detail = "stabilizer " + stab.str() + " is not accepted as identity";
          return false;
        }
      }
    }
    PauliOp logical(css.logical_x.at(0), BitVec(css.n));
    if (classify(css.encoder.conjugate(logical, Direction::INVERSE), css.layout) != DetectionClass::ACCEPTED_FORGED) {
      detail = "logical X " + logical.str() + " is not a forgery";
      return false;
    }
    return true;
  }));

  s.checks.push_back(run_check("trap-probe-characterization", [&](std::string& detail) {
    AuthFamily f = AuthFamily::trap(rm_css(1), "rm-css:1");
    for (uint64_t i = 0; i < 200; ++i) {
      Key k = key_for_index(f, seed, i);
      for (size_t q = 0; q < f.num_qubits(); ++q) {
        BlockType b = block_of(f, k, q);
        bool x_ok = verdict(f, k, PauliOp::single(f.num_qubits(), q, 'X')) == DetectionClass::ACCEPTED_IDENTITY;
        bool z_ok = verdict(f, k, PauliOp::single(f.num_qubits(), q, 'Z')) == DetectionClass::ACCEPTED_IDENTITY;
        if (x_ok != (b == BlockType::PLUS_TRAP) || z_ok != (b == BlockType::ZERO_TRAP)) {
          detail = "probe at position " + std::to_string(q) + " disagrees with its block under key " +
                   std::to_string(i);
          return false;
        }
      }
    }
    return true;
  }));

  s.checks.push_back(run_check("strong-trap-weight-one", [&](std::string& detail) {
    AuthFamily f = AuthFamily::strong_trap(rm_css(1), "rm-css:1");
    for (uint64_t i = 0; i < 200; ++i) {
      Key k = key_for_index(f, seed, i);
      for (size_t q = 0; q < f.num_qubits(); ++q) {
        for (char pauli : {'X', 'Y', 'Z'}) {
          if (verdict(f, k, PauliOp::single(f.num_qubits(), q, pauli)) != DetectionClass::REJECTED) {
            detail = std::string("single ") + pauli + " at " + std::to_string(q) + " was accepted";
            return false;
          }
        }
      }
    }
    return true;
  }));

  return s;
}

}  // namespace qauth
