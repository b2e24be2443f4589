#ifndef QAUTH_CODES_H
#define QAUTH_CODES_H

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qauth/bitvec.h"
#include "qauth/gf2.h"
#include "qauth/symplectic.h"

namespace qauth {

/// Largest rank whose codewords are enumerated exhaustively.
inline constexpr size_t kMaxEnumerationRank = 24;

/// Binary linear code given by a generator matrix kept in reduced row echelon form.
class LinearCode {
 public:
  LinearCode() = default;
  /// Spanning rows need not be independent; they are reduced on construction.
  LinearCode(size_t n, std::vector<BitVec> spanning_rows);

  size_t n() const { return echelon_.num_cols; }
  size_t k() const { return echelon_.rank(); }
  const std::vector<BitVec>& generator() const { return echelon_.rows; }
  const gf2::RowEchelon& echelon() const { return echelon_; }

  bool contains(const BitVec& word) const { return gf2::in_row_space(echelon_, word); }
  /// XOR of the generator rows selected by the low k() bits of `message`.
  BitVec encode(uint64_t message) const;

  /// Same row space (the reduced form is canonical).
  bool operator==(const LinearCode& other) const {
    return echelon_.num_cols == other.echelon_.num_cols && echelon_.rows == other.echelon_.rows;
  }

 private:
  gf2::RowEchelon echelon_;
};

/// counts[w] = number of codewords of Hamming weight w, for w = 0..n.
struct WeightDistribution {
  std::vector<uint64_t> counts;

  uint64_t total() const;
  /// Smallest nonzero weight with a codeword, if any.
  std::optional<size_t> min_nonzero_weight() const;
};

/// Reed–Muller code R(r, a): evaluations of all monomials of degree <= r on F_2^a.
/// Evaluation point j is the binary expansion of j (variable v is bit v).
LinearCode reed_muller(size_t r, size_t a);

/// Deletes coordinate `position` from every codeword.
/// Requires min distance > 1 and that some codeword is nonzero at `position`.
LinearCode puncture(const LinearCode& c, size_t position);
LinearCode puncture_last(const LinearCode& c);

LinearCode dual(const LinearCode& c);
bool is_subcode(const LinearCode& inner, const LinearCode& outer);
bool is_self_dual(const LinearCode& c);

/// Exhaustive weight enumeration. Throws GuardError("RANK_GUARD") above kMaxEnumerationRank.
WeightDistribution weight_distribution(const LinearCode& c);

struct DistanceResult {
  std::optional<size_t> value;  // nullopt: no nonzero codeword (infinite distance)
  bool exact = true;
  std::string method;  // "exhaustive" or "upper-bound:min-generator-row"
};

/// Minimum nonzero weight. Exhaustive up to kMaxEnumerationRank; above it an
/// upper bound (lightest reduced generator row) is returned with exact = false.
DistanceResult min_distance(const LinearCode& c);

/// CSS code CSS(C1, C2) with C2 = C1^⊥ ⊂ C1, plus an encoder circuit.
///
/// The encoder maps input qubits 0..m-1 (message) and m..n-1 (ancillas in |0⟩)
/// to the n codeword qubits. Inverse conjugation of any stabilizer lands on
/// Z-only ancilla Paulis; logical operators land on the message qubits.
struct CssCode {
  LinearCode c1;
  LinearCode c2;
  size_t n = 0;
  size_t m = 0;
  SymplecticCircuit encoder;
  TagLayout layout;
  /// X patterns of the logical X operators, one per message qubit.
  std::vector<BitVec> logical_x;
  std::optional<size_t> distance;
  std::optional<size_t> benign_distance;
};

/// Validates C2 ⊂ C1 and C2 = C1^⊥, synthesizes the encoder and computes both distances.
CssCode make_css(LinearCode c1, LinearCode c2);
/// CSS(C1, C1^⊥) with C1 the puncture of the self-dual code `c` (at its last
/// coordinate, or the last coordinate that is not identically zero).
CssCode css_from_selfdual(const LinearCode& c);
/// The punctured self-dual Reed–Muller code R(i, 2i+1): an [[2^(2i+1)-1, 1]] CSS code.
CssCode rm_css(size_t index);

/// Minimum weight of a non-identity stabilizer; equals the minimum nonzero weight of C2.
std::optional<size_t> benign_distance(const CssCode& css);

/// X-weight sparsity table of a CSS code.
struct SparsityReport {
  size_t n = 0;
  size_t d = 0;  // conventional distance used in the intersection bound
  /// benign[w] = B^X(w) = |C2(w)| for w >= 1; benign[0] = 0 (identity excluded).
  std::vector<uint64_t> benign;
  /// all[w] = A^X(w) = binom(n, w).
  std::vector<uint64_t> all;
  std::vector<double> ratio;
  double f_x = 0.0;
  size_t f_x_weight = 0;
  /// Weights d <= w < n/8 and whether |C2(w)| <= binom(n, floor(w - d/2)) holds there.
  std::vector<size_t> middle_range;
  std::vector<bool> rcw_ok;
  bool rcw_all_ok = true;
  /// |C2(n)| == 0, i.e. the all-ones word is not benign.
  bool full_word_excluded = false;
  /// Binary entropy h(1/8) and whether it exceeds 1/2.
  double entropy_eighth = 0.0;
  bool entropy_check = false;
  /// max over n/8 <= w <= (n-1)/2 of |C1| / binom(n, w).
  double tail_ratio_max = 0.0;
};

/// Throws GuardError("RANK_GUARD") when rank(C2) exceeds kMaxEnumerationRank.
SparsityReport sparsity_report(const CssCode& css);

/// Exact binomial coefficient; throws std::overflow_error past 64 bits.
uint64_t binomial(size_t n, size_t k);
double binary_entropy(double p);

}  // namespace qauth

#endif  // QAUTH_CODES_H
