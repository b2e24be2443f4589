#include "qauth/codes.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qauth/errors.h"

namespace qauth {

LinearCode::LinearCode(size_t n, std::vector<BitVec> spanning_rows)
    : echelon_(gf2::row_reduce(std::move(spanning_rows), n)) {}

BitVec LinearCode::encode(uint64_t message) const {
  BitVec word(n());
  for (size_t i = 0; i < k(); ++i) {
    if ((message >> i) & 1) {
      word ^= echelon_.rows[i];
    }
  }
  return word;
}

uint64_t WeightDistribution::total() const {
  uint64_t t = 0;
  for (uint64_t c : counts) {
    t += c;
  }
  return t;
}

std::optional<size_t> WeightDistribution::min_nonzero_weight() const {
  for (size_t w = 1; w < counts.size(); ++w) {
    if (counts[w]) {
      return w;
    }
  }
  return std::nullopt;
}

LinearCode reed_muller(size_t r, size_t a) {
  if (a > 16) {
    throw std::invalid_argument("reed_muller: a = " + std::to_string(a) + " exceeds the enumeration guard of 16");
  }
  if (r > a) {
    throw std::invalid_argument("reed_muller: degree r = " + std::to_string(r) + " exceeds a = " + std::to_string(a));
  }
  size_t length = size_t{1} << a;
  std::vector<BitVec> rows;
  // Monomials are subsets of the a variables, encoded as bitmasks.
  for (uint32_t mono = 0; mono < (uint32_t{1} << a); ++mono) {
    if (static_cast<size_t>(std::popcount(mono)) > r) {
      continue;
    }
    BitVec row(length);
    for (size_t point = 0; point < length; ++point) {
      if ((point & mono) == mono) {
        row.set(point);
      }
    }
    rows.push_back(std::move(row));
  }
  return LinearCode(length, std::move(rows));
}

namespace {

bool has_weight_one_word(const LinearCode& c) {
  for (size_t i = 0; i < c.n(); ++i) {
    BitVec unit(c.n());
    unit.set(i);
    if (c.contains(unit)) {
      return true;
    }
  }
  return false;
}

bool coordinate_identically_zero(const LinearCode& c, size_t position) {
  return std::none_of(c.generator().begin(), c.generator().end(),
                      [position](const BitVec& row) { return row.get(position); });
}

// Gray-code walk over all 2^k codewords of the code spanned by `basis`.
// `visit(word, gray)` sees every codeword once, with `gray` its coefficient vector.
template <typename Visit>
void enumerate_codewords(const std::vector<BitVec>& basis, size_t n, Visit&& visit) {
  size_t k = basis.size();
  if (k > kMaxEnumerationRank) {
    throw GuardError("RANK_GUARD", "rank " + std::to_string(k) + " exceeds the exhaustive enumeration limit of " +
                                       std::to_string(kMaxEnumerationRank));
  }
  BitVec word(n);
  visit(word, uint64_t{0});
  uint64_t gray = 0;
  for (uint64_t step = 1; step < (uint64_t{1} << k); ++step) {
    size_t flip = static_cast<size_t>(std::countr_zero(step));
    gray ^= uint64_t{1} << flip;
    word ^= basis[flip];
    visit(word, gray);
  }
}

}  // namespace

LinearCode puncture(const LinearCode& c, size_t position) {
  if (position >= c.n()) {
    throw std::invalid_argument("puncture: position " + std::to_string(position) + " out of range");
  }
  if (has_weight_one_word(c)) {
    throw std::invalid_argument("puncture: code has minimum distance 1; puncturing would merge codewords");
  }
  if (coordinate_identically_zero(c, position)) {
    throw std::invalid_argument("puncture: every codeword is zero at position " + std::to_string(position) +
                                "; puncture at a different position");
  }
  std::vector<BitVec> rows;
  for (const auto& row : c.generator()) {
    BitVec shortened(c.n() - 1);
    for (size_t i = 0, j = 0; i < c.n(); ++i) {
      if (i == position) {
        continue;
      }
      shortened.set(j++, row.get(i));
    }
    rows.push_back(std::move(shortened));
  }
  return LinearCode(c.n() - 1, std::move(rows));
}

LinearCode puncture_last(const LinearCode& c) {
  if (c.n() == 0) {
    throw std::invalid_argument("puncture_last: empty code");
  }
  return puncture(c, c.n() - 1);
}

LinearCode dual(const LinearCode& c) { return LinearCode(c.n(), gf2::null_space(c.echelon())); }

bool is_subcode(const LinearCode& inner, const LinearCode& outer) {
  if (inner.n() != outer.n()) {
    return false;
  }
  return std::all_of(inner.generator().begin(), inner.generator().end(),
                     [&](const BitVec& row) { return outer.contains(row); });
}

bool is_self_dual(const LinearCode& c) { return 2 * c.k() == c.n() && dual(c) == c; }

WeightDistribution weight_distribution(const LinearCode& c) {
  WeightDistribution dist;
  dist.counts.assign(c.n() + 1, 0);
  enumerate_codewords(c.generator(), c.n(), [&](const BitVec& word, uint64_t) { ++dist.counts[word.popcount()]; });
  return dist;
}

DistanceResult min_distance(const LinearCode& c) {
  if (c.k() <= kMaxEnumerationRank) {
    return {weight_distribution(c).min_nonzero_weight(), true, "exhaustive"};
  }
  size_t best = c.n();
  for (const auto& row : c.generator()) {
    best = std::min(best, row.popcount());
  }
  return {best, false, "upper-bound:min-generator-row"};
}

namespace {

// Encoder for CSS(C1, C2) with C2 ⊂ C1.
//
// With C2 in reduced form (pivots p_j) and logical representatives ℓ_i of
// C1 / C2 reduced against C2 and against each other (pivots q_i), the
// computational-basis map |b, a⟩ -> |Σ b_i ℓ_i + Σ a_j g_j⟩ is realized by
// CNOTs fanning out from q_i and then from p_j. Input ancillas that end up on
// a C2 pivot get a Hadamard first so that they carry the X-stabilizer sum.
SymplecticCircuit synthesize_encoder(const LinearCode& c2, const std::vector<BitVec>& logicals,
                                     const std::vector<size_t>& logical_pivots) {
  size_t n = c2.n();
  size_t m = logicals.size();
  const auto& g2 = c2.generator();
  const auto& p2 = c2.echelon().pivots;

  std::vector<bool> placed(n, false);
  std::vector<uint32_t> dest(n);
  size_t input = 0;
  for (size_t i = 0; i < m; ++i) {
    dest[input++] = static_cast<uint32_t>(logical_pivots[i]);
    placed[logical_pivots[i]] = true;
  }
  for (size_t p : p2) {
    dest[input++] = static_cast<uint32_t>(p);
    placed[p] = true;
  }
  for (size_t q = 0; q < n; ++q) {
    if (!placed[q]) {
      dest[input++] = static_cast<uint32_t>(q);
    }
  }

  std::vector<Gate> gates;
  gates.push_back(Gate::permutation(dest));
  for (size_t p : p2) {
    gates.push_back(Gate::h(static_cast<uint32_t>(p)));
  }
  for (size_t i = 0; i < m; ++i) {
    for (size_t t : logicals[i].support()) {
      if (t != logical_pivots[i]) {
        gates.push_back(Gate::cnot(static_cast<uint32_t>(logical_pivots[i]), static_cast<uint32_t>(t)));
      }
    }
  }
  for (size_t j = 0; j < g2.size(); ++j) {
    for (size_t t : g2[j].support()) {
      if (t != p2[j]) {
        gates.push_back(Gate::cnot(static_cast<uint32_t>(p2[j]), static_cast<uint32_t>(t)));
      }
    }
  }
  return SymplecticCircuit(n, std::move(gates));
}

}  // namespace

CssCode make_css(LinearCode c1, LinearCode c2) {
  if (c1.n() != c2.n()) {
    throw DimensionError("make_css: C1 and C2 have different lengths");
  }
  if (!is_subcode(c2, c1)) {
    throw std::invalid_argument("make_css: C2 is not contained in C1");
  }
  if (!(dual(c1) == c2)) {
    throw std::invalid_argument("make_css: C2 is not the dual of C1");
  }
  CssCode css;
  css.n = c1.n();
  css.m = c1.k() - c2.k();

  // Logical representatives: C1 rows reduced modulo C2, then against each other.
  std::vector<BitVec> reduced;
  for (BitVec row : c1.generator()) {
    if (!gf2::reduce(c2.echelon(), row)) {
      reduced.push_back(std::move(row));
    }
  }
  gf2::RowEchelon logical = gf2::row_reduce(std::move(reduced), css.n);
  if (logical.rank() != css.m) {
    throw std::logic_error("make_css: logical basis has unexpected rank");
  }
  css.logical_x = logical.rows;
  css.encoder = synthesize_encoder(c2, logical.rows, logical.pivots);
  css.layout = TagLayout::leading_message(css.n, css.m);

  // Distance: lightest word of C1 outside C2. Enumerate C1 on the basis
  // [logicals..., C2 rows...] so the coset is read off the coefficient bits.
  std::vector<BitVec> basis = logical.rows;
  basis.insert(basis.end(), c2.generator().begin(), c2.generator().end());
  uint64_t logical_mask = css.m >= 64 ? ~uint64_t{0} : (uint64_t{1} << css.m) - 1;
  std::optional<size_t> best;
  enumerate_codewords(basis, css.n, [&](const BitVec& word, uint64_t gray) {
    if (gray & logical_mask) {
      size_t w = word.popcount();
      if (!best || w < *best) {
        best = w;
      }
    }
  });
  css.distance = best;
  css.c1 = std::move(c1);
  css.c2 = std::move(c2);
  css.benign_distance = benign_distance(css);
  return css;
}

CssCode css_from_selfdual(const LinearCode& c) {
  if (!is_self_dual(c)) {
    throw std::invalid_argument("css_from_selfdual: input code is not self-dual");
  }
  if (has_weight_one_word(c)) {
    throw std::invalid_argument("css_from_selfdual: input code has distance 1");
  }
  size_t position = c.n();
  while (position > 0 && coordinate_identically_zero(c, position - 1)) {
    --position;
  }
  if (position == 0) {
    throw std::invalid_argument("css_from_selfdual: code has no nonzero coordinate");
  }
  LinearCode c1 = puncture(c, position - 1);
  LinearCode c2 = dual(c1);
  if (!is_subcode(c2, c1)) {
    throw std::invalid_argument("css_from_selfdual: dual of the punctured code is not contained in it");
  }
  if (c2.k() + 1 != c1.k()) {
    throw std::invalid_argument("css_from_selfdual: punctured code does not encode exactly one qubit");
  }
  return make_css(std::move(c1), std::move(c2));
}

CssCode rm_css(size_t index) {
  if (index == 0 || 2 * index + 1 > 16) {
    throw std::invalid_argument("rm_css: index must be in 1..7");
  }
  return css_from_selfdual(reed_muller(index, 2 * index + 1));
}

std::optional<size_t> benign_distance(const CssCode& css) {
  // A stabilizer X(u)Z(v) has weight |supp u ∪ supp v| >= max(|u|, |v|), so the
  // minimum is attained by a pure X- or Z-type element of C2.
  return min_distance(css.c2).value;
}

uint64_t binomial(size_t n, size_t k) {
  if (k > n) {
    return 0;
  }
  k = std::min(k, n - k);
  __extension__ using Wide = unsigned __int128;  // products n * C(n, k) overflow 64 bits before dividing
  Wide result = 1;
  for (size_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > std::numeric_limits<uint64_t>::max()) {
      throw std::overflow_error("binomial(" + std::to_string(n) + ", " + std::to_string(k) + ") exceeds 64 bits");
    }
  }
  return static_cast<uint64_t>(result);
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) {
    return 0.0;
  }
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

SparsityReport sparsity_report(const CssCode& css) {
  SparsityReport rep;
  rep.n = css.n;
  rep.d = css.distance.value_or(0);
  WeightDistribution c2 = weight_distribution(css.c2);
  size_t n = css.n;
  rep.benign.assign(n + 1, 0);
  rep.all.assign(n + 1, 0);
  rep.ratio.assign(n + 1, 0.0);
  for (size_t w = 0; w <= n; ++w) {
    rep.all[w] = binomial(n, w);
    rep.benign[w] = w == 0 ? 0 : c2.counts[w];
    rep.ratio[w] = static_cast<double>(rep.benign[w]) / static_cast<double>(rep.all[w]);
    if (rep.ratio[w] > rep.f_x) {
      rep.f_x = rep.ratio[w];
      rep.f_x_weight = w;
    }
  }
  for (size_t w = rep.d; 8 * w < n; ++w) {
    // floor(w - d/2) = floor((2w - d) / 2) for w >= d.
    size_t s = (2 * w - rep.d) / 2;
    rep.middle_range.push_back(w);
    bool ok = c2.counts[w] <= binomial(n, s);
    rep.rcw_ok.push_back(ok);
    rep.rcw_all_ok = rep.rcw_all_ok && ok;
  }
  rep.full_word_excluded = c2.counts[n] == 0;
  rep.entropy_eighth = binary_entropy(1.0 / 8.0);
  rep.entropy_check = rep.entropy_eighth > 0.5;
  double c1_size = std::ldexp(1.0, static_cast<int>(css.c1.k()));
  for (size_t w = (n + 7) / 8; 2 * w <= n - 1; ++w) {
    rep.tail_ratio_max = std::max(rep.tail_ratio_max, c1_size / static_cast<double>(binomial(n, w)));
  }
  return rep;
}

}  // namespace qauth
