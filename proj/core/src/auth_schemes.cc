#include "qauth/auth_schemes.h"

#include <bit>
#include <numeric>
#include <stdexcept>

#include "qauth/clifford_sampling.h"
#include "qauth/errors.h"

namespace qauth {

const char* to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::TRAP:
      return "trap";
    case FamilyKind::STRONG_TRAP:
      return "strong-trap";
    case FamilyKind::CLIFFORD:
      return "clifford";
  }
  return "?";
}

const char* to_string(BlockType block) {
  switch (block) {
    case BlockType::DATA:
      return "data";
    case BlockType::ZERO_TRAP:
      return "zero-trap";
    case BlockType::PLUS_TRAP:
      return "plus-trap";
  }
  return "?";
}

namespace {

// Copies the gates of an n-qubit circuit onto qubits offset..offset+n-1 of a
// total-qubit register.
void append_shifted(const SymplecticCircuit& c, size_t offset, size_t total, std::vector<Gate>& out) {
  auto shift = [offset](uint32_t q) { return static_cast<uint32_t>(q + offset); };
  for (const auto& g : c.gates()) {
    switch (g.kind) {
      case GateKind::H:
        out.push_back(Gate::h(shift(g.a)));
        break;
      case GateKind::S:
        out.push_back(Gate::s(shift(g.a)));
        break;
      case GateKind::CNOT:
        out.push_back(Gate::cnot(shift(g.a), shift(g.b)));
        break;
      case GateKind::PERM: {
        std::vector<uint32_t> perm(total);
        std::iota(perm.begin(), perm.end(), 0u);
        for (size_t i = 0; i < g.perm.size(); ++i) {
          perm[offset + i] = shift(g.perm[i]);
        }
        out.push_back(Gate::permutation(std::move(perm)));
        break;
      }
    }
  }
}

void require_trap_kind(const AuthFamily& f, const char* what) {
  if (!f.is_trap_kind()) {
    throw std::invalid_argument(std::string(what) + ": only defined for trap-kind families");
  }
}

void require_single_logical(const CssCode& inner) {
  if (inner.m != 1) {
    throw std::invalid_argument("trap families need an inner code encoding exactly one qubit");
  }
}

}  // namespace

AuthFamily AuthFamily::trap(CssCode inner, std::string inner_ref) {
  require_single_logical(inner);
  AuthFamily f;
  size_t n = inner.n;
  f.kind_ = FamilyKind::TRAP;
  f.m_ = 1;
  f.t_ = 3 * n - 1;
  std::vector<Gate> gates;
  append_shifted(inner.encoder, 0, 3 * n, gates);
  for (size_t q = 2 * n; q < 3 * n; ++q) {
    gates.push_back(Gate::h(static_cast<uint32_t>(q)));
  }
  f.base_ = std::make_shared<const SymplecticCircuit>(3 * n, std::move(gates));
  f.inner_ = std::make_shared<const CssCode>(std::move(inner));
  f.inner_ref_ = std::move(inner_ref);
  f.layout_ = TagLayout::leading_message(3 * n, 1);
  return f;
}

AuthFamily AuthFamily::strong_trap(CssCode inner, std::string inner_ref) {
  require_single_logical(inner);
  AuthFamily f;
  size_t n = inner.n;
  f.kind_ = FamilyKind::STRONG_TRAP;
  f.m_ = 1;
  f.t_ = 3 * n - 1;
  std::vector<Gate> gates;
  gates.push_back(Gate::h(static_cast<uint32_t>(2 * n)));
  for (size_t block = 0; block < 3; ++block) {
    append_shifted(inner.encoder, block * n, 3 * n, gates);
  }
  f.base_ = std::make_shared<const SymplecticCircuit>(3 * n, std::move(gates));
  f.inner_ = std::make_shared<const CssCode>(std::move(inner));
  f.inner_ref_ = std::move(inner_ref);
  f.layout_ = TagLayout::leading_message(3 * n, 1);
  return f;
}

AuthFamily AuthFamily::clifford(size_t m, size_t t) {
  if (m == 0) {
    throw std::invalid_argument("clifford family needs at least one message qubit");
  }
  AuthFamily f;
  f.kind_ = FamilyKind::CLIFFORD;
  f.m_ = m;
  f.t_ = t;
  f.layout_ = TagLayout::leading_message(m + t, m);
  return f;
}

std::string label(const AuthFamily& f) {
  if (f.kind() == FamilyKind::CLIFFORD) {
    return "clifford(m=" + std::to_string(f.m()) + ",t=" + std::to_string(f.t()) + ")";
  }
  std::string inner = f.inner_ref().empty() ? "n=" + std::to_string(f.block_size()) : f.inner_ref();
  return std::string(to_string(f.kind())) + "(" + inner + ")";
}

size_t AuthFamily::block_size() const {
  require_trap_kind(*this, "block_size");
  return inner_->n;
}

const CssCode& AuthFamily::inner() const {
  require_trap_kind(*this, "inner");
  return *inner_;
}

const SymplecticCircuit& AuthFamily::base_encoder() const {
  require_trap_kind(*this, "base_encoder");
  return *base_;
}

BlockType AuthFamily::block_of_input(size_t input) const {
  size_t n = block_size();
  if (input >= 3 * n) {
    throw std::out_of_range("input qubit out of range");
  }
  return static_cast<BlockType>(input / n);
}

Key permutation_key(const AuthFamily& f, std::vector<uint32_t> permutation) {
  require_trap_kind(f, "permutation_key");
  size_t total = f.num_qubits();
  if (permutation.size() != total) {
    throw DimensionError("permutation key has " + std::to_string(permutation.size()) + " entries, expected " +
                         std::to_string(total));
  }
  Key k;
  k.kind = f.kind();
  k.inverse_permutation.assign(total, static_cast<uint32_t>(total));
  for (size_t i = 0; i < total; ++i) {
    uint32_t p = permutation[i];
    if (p >= total || k.inverse_permutation[p] != total) {
      throw std::invalid_argument("permutation key is not a bijection");
    }
    k.inverse_permutation[p] = static_cast<uint32_t>(i);
  }
  k.permutation = std::move(permutation);
  return k;
}

Key clifford_key(const AuthFamily& f, std::vector<Gate> gates) {
  if (f.kind() != FamilyKind::CLIFFORD) {
    throw std::invalid_argument("clifford_key: family is not a Clifford family");
  }
  Key k;
  k.kind = FamilyKind::CLIFFORD;
  k.clifford = std::make_shared<const SymplecticCircuit>(f.num_qubits(), gates);
  k.clifford_gates = std::move(gates);
  return k;
}

Key sample_key(const AuthFamily& f, Rng& rng) {
  if (f.kind() == FamilyKind::CLIFFORD) {
    return clifford_key(f, random_clifford_gates(f.num_qubits(), rng));
  }
  size_t total = f.num_qubits();
  std::vector<uint32_t> perm(total);
  std::iota(perm.begin(), perm.end(), 0u);
  for (size_t i = total; i-- > 1;) {
    std::uniform_int_distribution<size_t> pick(0, i);
    std::swap(perm[i], perm[pick(rng)]);
  }
  return permutation_key(f, std::move(perm));
}

Key key_for_index(const AuthFamily& f, uint64_t seed, uint64_t index) {
  Rng rng = make_rng(seed, Stream::CODE_KEY, index);
  Key k = sample_key(f, rng);
  k.seed = derive_seed(seed, Stream::CODE_KEY, index);
  return k;
}

PauliOp sample_otp(const AuthFamily& f, Rng& rng) {
  PauliOp p(f.num_qubits());
  for (size_t q = 0; q < f.num_qubits(); ++q) {
    uint64_t r = rng();
    p.x().set(q, r & 1);
    p.z().set(q, (r >> 1) & 1);
  }
  return p;
}

namespace {

void check_key(const AuthFamily& f, const Key& k) {
  if (k.kind != f.kind()) {
    throw std::invalid_argument(std::string("key kind '") + to_string(k.kind) + "' does not match family kind '" +
                                to_string(f.kind()) + "'");
  }
  if (f.kind() == FamilyKind::CLIFFORD) {
    if (!k.clifford) {
      throw std::invalid_argument("Clifford key has no compiled circuit");
    }
  } else if (k.permutation.size() != f.num_qubits() || k.inverse_permutation.size() != f.num_qubits()) {
    throw std::invalid_argument("permutation key does not match the family size");
  }
}

}  // namespace

SymplecticCircuit encoder(const AuthFamily& f, const Key& k) {
  check_key(f, k);
  if (f.kind() == FamilyKind::CLIFFORD) {
    return *k.clifford;
  }
  std::vector<Gate> gates = f.base_encoder().gates();
  gates.push_back(Gate::permutation(k.permutation));
  return SymplecticCircuit(f.num_qubits(), std::move(gates));
}

void decode_into(const AuthFamily& f, const Key& k, const PauliOp& attack, PauliOp& scratch, PauliOp& out) {
  check_dims(attack.num_qubits(), f.num_qubits(), "decode");
  check_key(f, k);
  if (f.kind() == FamilyKind::CLIFFORD) {
    k.clifford->conjugate_into(attack, Direction::INVERSE, out);
    return;
  }
  // π† P π moves the Pauli at physical position p back to input π^{-1}(p).
  scratch.x().clear();
  scratch.z().clear();
  auto scatter = [&k](const BitVec& from, BitVec& to) {
    auto words = from.words();
    for (size_t w = 0; w < words.size(); ++w) {
      for (uint64_t bits = words[w]; bits != 0; bits &= bits - 1) {
        to.set(k.inverse_permutation[w * 64 + static_cast<size_t>(std::countr_zero(bits))]);
      }
    }
  };
  scatter(attack.x(), scratch.x());
  scatter(attack.z(), scratch.z());
  f.base_encoder().conjugate_into(scratch, Direction::INVERSE, out);
}

PauliOp decode(const AuthFamily& f, const Key& k, const PauliOp& attack) {
  PauliOp scratch(f.num_qubits());
  PauliOp out(f.num_qubits());
  decode_into(f, k, attack, scratch, out);
  return out;
}

DetectionClass verdict(const AuthFamily& f, const Key& k, const PauliOp& attack) {
  return classify(decode(f, k, attack), f.layout());
}

PauliOp logical_action(const AuthFamily& f, const Key& k, const PauliOp& attack) {
  PauliOp decoded = decode(f, k, attack);
  if (classify(decoded, f.layout()) == DetectionClass::REJECTED) {
    throw std::logic_error("logical_action: attack is rejected; its action is discarded by decryption");
  }
  return decoded.restrict_to(f.layout().message_positions());
}

BlockType block_of(const AuthFamily& f, const Key& k, size_t position) {
  check_key(f, k);
  if (position >= f.num_qubits()) {
    throw std::out_of_range("position out of range");
  }
  return f.block_of_input(k.inverse_permutation[position]);
}

}  // namespace qauth
