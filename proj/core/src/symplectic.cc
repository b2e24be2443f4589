#include "qauth/symplectic.h"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "qauth/errors.h"

namespace qauth {

PauliOp::PauliOp(size_t num_qubits) : x_(num_qubits), z_(num_qubits) {}

PauliOp::PauliOp(BitVec x_bits, BitVec z_bits) : x_(std::move(x_bits)), z_(std::move(z_bits)) {
  check_dims(x_.size(), z_.size(), "PauliOp x/z parts");
}

PauliOp PauliOp::from_string(std::string_view text) {
  PauliOp p(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    p.set(i, text[i]);
  }
  return p;
}

PauliOp PauliOp::single(size_t num_qubits, size_t q, char pauli) {
  if (q >= num_qubits) {
    throw std::out_of_range("qubit " + std::to_string(q) + " out of range for " + std::to_string(num_qubits) +
                            " qubits");
  }
  PauliOp p(num_qubits);
  p.set(q, pauli);
  return p;
}

char PauliOp::at(size_t q) const {
  static constexpr char kNames[] = {'I', 'X', 'Z', 'Y'};
  return kNames[static_cast<int>(x_.get(q)) | (static_cast<int>(z_.get(q)) << 1)];
}

void PauliOp::set(size_t q, char pauli) {
  switch (pauli) {
    case 'I':
    case '_':
      x_.set(q, false);
      z_.set(q, false);
      break;
    case 'X':
      x_.set(q, true);
      z_.set(q, false);
      break;
    case 'Y':
      x_.set(q, true);
      z_.set(q, true);
      break;
    case 'Z':
      x_.set(q, false);
      z_.set(q, true);
      break;
    default:
      throw std::invalid_argument(std::string("not a Pauli character: '") + pauli + "'");
  }
}

size_t PauliOp::weight() const { return (x_ | z_).popcount(); }

PauliOp PauliOp::restrict_to(std::span<const size_t> qubits) const {
  PauliOp out(qubits.size());
  for (size_t i = 0; i < qubits.size(); ++i) {
    out.x_.set(i, x_.get(qubits[i]));
    out.z_.set(i, z_.get(qubits[i]));
  }
  return out;
}

PauliOp& PauliOp::operator*=(const PauliOp& other) {
  check_dims(num_qubits(), other.num_qubits(), "Pauli product");
  x_ ^= other.x_;
  z_ ^= other.z_;
  return *this;
}

std::string PauliOp::str() const {
  std::string out(num_qubits(), 'I');
  for (size_t q = 0; q < num_qubits(); ++q) {
    out[q] = at(q);
  }
  return out;
}

bool sip(const PauliOp& a, const PauliOp& b) {
  check_dims(a.num_qubits(), b.num_qubits(), "sip");
  return a.x().dot(b.z()) ^ b.x().dot(a.z());
}

WeightProfile weights(const PauliOp& p) {
  WeightProfile w;
  auto xs = p.x().words();
  auto zs = p.z().words();
  for (size_t i = 0; i < xs.size(); ++i) {
    w.x += static_cast<size_t>(std::popcount(xs[i] & ~zs[i]));
    w.y += static_cast<size_t>(std::popcount(xs[i] & zs[i]));
    w.z += static_cast<size_t>(std::popcount(zs[i] & ~xs[i]));
  }
  w.total = w.x + w.y + w.z;
  return w;
}

std::string Gate::str() const {
  switch (kind) {
    case GateKind::H:
      return "H " + std::to_string(a);
    case GateKind::S:
      return "S " + std::to_string(a);
    case GateKind::CNOT:
      return "CNOT " + std::to_string(a) + " " + std::to_string(b);
    case GateKind::PERM: {
      std::string out = "PERM";
      for (uint32_t v : perm) {
        out += " " + std::to_string(v);
      }
      return out;
    }
  }
  return "?";
}

namespace {

void permute_bits(const BitVec& in, std::span<const uint32_t> dest, BitVec& out) {
  out.clear();
  for (size_t i : in.support()) {
    out.set(dest[i]);
  }
}

void apply_permutation(std::span<const uint32_t> dest, PauliOp& p) {
  BitVec x(p.num_qubits());
  BitVec z(p.num_qubits());
  permute_bits(p.x(), dest, x);
  permute_bits(p.z(), dest, z);
  p.x() = std::move(x);
  p.z() = std::move(z);
}

std::vector<uint32_t> invert_permutation(std::span<const uint32_t> dest) {
  std::vector<uint32_t> inv(dest.size());
  for (size_t i = 0; i < dest.size(); ++i) {
    inv[dest[i]] = static_cast<uint32_t>(i);
  }
  return inv;
}

void validate_gate(const Gate& g, size_t n) {
  auto in_range = [n](uint32_t q) { return q < n; };
  switch (g.kind) {
    case GateKind::H:
    case GateKind::S:
      if (!in_range(g.a)) {
        throw std::invalid_argument("gate '" + g.str() + "' addresses a qubit outside 0.." + std::to_string(n - 1));
      }
      break;
    case GateKind::CNOT:
      if (!in_range(g.a) || !in_range(g.b) || g.a == g.b) {
        throw std::invalid_argument("invalid CNOT '" + g.str() + "' on " + std::to_string(n) + " qubits");
      }
      break;
    case GateKind::PERM: {
      if (g.perm.size() != n) {
        throw std::invalid_argument("PERM gate has " + std::to_string(g.perm.size()) + " entries, expected " +
                                    std::to_string(n));
      }
      std::vector<bool> seen(n, false);
      for (uint32_t v : g.perm) {
        if (v >= n || seen[v]) {
          throw std::invalid_argument("PERM gate is not a bijection");
        }
        seen[v] = true;
      }
      break;
    }
  }
}

}  // namespace

void apply_gate(const Gate& gate, PauliOp& p) {
  switch (gate.kind) {
    case GateKind::H: {
      bool xb = p.x().get(gate.a);
      p.x().set(gate.a, p.z().get(gate.a));
      p.z().set(gate.a, xb);
      break;
    }
    case GateKind::S:
      if (p.x().get(gate.a)) {
        p.z().flip(gate.a);
      }
      break;
    case GateKind::CNOT:
      if (p.x().get(gate.a)) {
        p.x().flip(gate.b);
      }
      if (p.z().get(gate.b)) {
        p.z().flip(gate.a);
      }
      break;
    case GateKind::PERM:
      apply_permutation(gate.perm, p);
      break;
  }
}

void apply_gate_inverse(const Gate& gate, PauliOp& p) {
  // H, S and CNOT are involutions once phases are dropped.
  if (gate.kind == GateKind::PERM) {
    apply_permutation(invert_permutation(gate.perm), p);
  } else {
    apply_gate(gate, p);
  }
}

namespace {

// Tableau stored transposed: xs[q] / zs[q] hold the x / z bit at qubit q of
// every column, so each gate becomes a few word-parallel row operations.
struct TransposedTableau {
  std::vector<BitVec> xs;
  std::vector<BitVec> zs;

  explicit TransposedTableau(size_t n) : xs(n, BitVec(2 * n)), zs(n, BitVec(2 * n)) {
    for (size_t q = 0; q < n; ++q) {
      xs[q].set(q);
      zs[q].set(n + q);
    }
  }

  void apply(const Gate& g, bool inverse) {
    switch (g.kind) {
      case GateKind::H:
        std::swap(xs[g.a], zs[g.a]);
        break;
      case GateKind::S:
        zs[g.a] ^= xs[g.a];
        break;
      case GateKind::CNOT:
        xs[g.b] ^= xs[g.a];
        zs[g.a] ^= zs[g.b];
        break;
      case GateKind::PERM: {
        std::vector<BitVec> nx(xs.size());
        std::vector<BitVec> nz(zs.size());
        for (size_t i = 0; i < g.perm.size(); ++i) {
          size_t from = inverse ? g.perm[i] : i;
          size_t to = inverse ? i : g.perm[i];
          nx[to] = std::move(xs[from]);
          nz[to] = std::move(zs[from]);
        }
        xs = std::move(nx);
        zs = std::move(nz);
        break;
      }
    }
  }

  std::vector<PauliOp> columns() const {
    size_t n = xs.size();
    std::vector<PauliOp> out(2 * n, PauliOp(n));
    for (size_t q = 0; q < n; ++q) {
      for (size_t j : xs[q].support()) {
        out[j].x().set(q);
      }
      for (size_t j : zs[q].support()) {
        out[j].z().set(q);
      }
    }
    return out;
  }
};

}  // namespace

SymplecticCircuit::SymplecticCircuit(size_t num_qubits, std::vector<Gate> gates)
    : num_qubits_(num_qubits), gates_(std::move(gates)) {
  for (const auto& g : gates_) {
    validate_gate(g, num_qubits_);
  }
  TransposedTableau fwd(num_qubits_);
  for (const auto& g : gates_) {
    fwd.apply(g, false);
  }
  TransposedTableau inv(num_qubits_);
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
    inv.apply(*it, true);
  }
  forward_ = fwd.columns();
  inverse_ = inv.columns();
}

PauliOp SymplecticCircuit::conjugate(const PauliOp& p, Direction direction) const {
  PauliOp out(num_qubits_);
  conjugate_into(p, direction, out);
  return out;
}

void SymplecticCircuit::conjugate_into(const PauliOp& p, Direction direction, PauliOp& out) const {
  check_dims(p.num_qubits(), num_qubits_, "conjugate");
  check_dims(out.num_qubits(), num_qubits_, "conjugate output");
  const auto& columns = direction == Direction::FORWARD ? forward_ : inverse_;
  auto ox = out.x().words();
  auto oz = out.z().words();
  std::fill(ox.begin(), ox.end(), 0);
  std::fill(oz.begin(), oz.end(), 0);
  auto accumulate = [&](std::span<const uint64_t> bits, size_t offset) {
    for (size_t w = 0; w < bits.size(); ++w) {
      uint64_t word = bits[w];
      while (word) {
        size_t j = offset + w * 64 + static_cast<size_t>(std::countr_zero(word));
        word &= word - 1;
        auto cx = columns[j].x().words();
        auto cz = columns[j].z().words();
        for (size_t k = 0; k < ox.size(); ++k) {
          ox[k] ^= cx[k];
          oz[k] ^= cz[k];
        }
      }
    }
  };
  accumulate(p.x().words(), 0);
  accumulate(p.z().words(), num_qubits_);
}

SymplecticCircuit SymplecticCircuit::inverse() const {
  std::vector<Gate> reversed;
  reversed.reserve(gates_.size());
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
    if (it->kind == GateKind::PERM) {
      reversed.push_back(Gate::permutation(invert_permutation(it->perm)));
    } else {
      reversed.push_back(*it);
    }
  }
  return SymplecticCircuit(num_qubits_, std::move(reversed));
}

SymplecticCircuit SymplecticCircuit::then(const SymplecticCircuit& next) const {
  check_dims(num_qubits_, next.num_qubits_, "circuit composition");
  std::vector<Gate> all = gates_;
  all.insert(all.end(), next.gates_.begin(), next.gates_.end());
  return SymplecticCircuit(num_qubits_, std::move(all));
}

PauliOp conjugate(const PauliOp& p, const SymplecticCircuit& c, Direction direction) {
  return c.conjugate(p, direction);
}

TagLayout::TagLayout(size_t n_total, std::vector<size_t> message_positions)
    : n_total_(n_total), message_(std::move(message_positions)), message_mask_(n_total), tag_mask_(n_total) {
  for (size_t q : message_) {
    if (q >= n_total_) {
      throw std::invalid_argument("message position " + std::to_string(q) + " out of range");
    }
    if (message_mask_.get(q)) {
      throw std::invalid_argument("duplicate message position " + std::to_string(q));
    }
    message_mask_.set(q);
  }
  for (size_t q = 0; q < n_total_; ++q) {
    if (!message_mask_.get(q)) {
      tags_.push_back(q);
      tag_mask_.set(q);
    }
  }
}

TagLayout TagLayout::leading_message(size_t n_total, size_t m) {
  if (m > n_total) {
    throw std::invalid_argument("message register larger than the code");
  }
  std::vector<size_t> message(m);
  for (size_t i = 0; i < m; ++i) {
    message[i] = i;
  }
  return TagLayout(n_total, std::move(message));
}

const char* to_string(DetectionClass c) {
  switch (c) {
    case DetectionClass::REJECTED:
      return "REJECTED";
    case DetectionClass::ACCEPTED_IDENTITY:
      return "ACCEPTED_IDENTITY";
    case DetectionClass::ACCEPTED_FORGED:
      return "ACCEPTED_FORGED";
  }
  return "?";
}

DetectionClass classify(const PauliOp& p, const TagLayout& layout) {
  check_dims(p.num_qubits(), layout.n_total(), "classify");
  auto px = p.x().words();
  auto pz = p.z().words();
  auto tags = layout.tag_mask().words();
  auto msg = layout.message_mask().words();
  bool forged = false;
  for (size_t i = 0; i < px.size(); ++i) {
    if (px[i] & tags[i]) {
      return DetectionClass::REJECTED;
    }
    forged |= ((px[i] | pz[i]) & msg[i]) != 0;
  }
  return forged ? DetectionClass::ACCEPTED_FORGED : DetectionClass::ACCEPTED_IDENTITY;
}

}  // namespace qauth
