#include "qauth/gf2.h"

#include "qauth/errors.h"

namespace qauth::gf2 {

RowEchelon row_reduce(std::vector<BitVec> rows, size_t num_cols) {
  for (const auto& r : rows) {
    check_dims(r.size(), num_cols, "row_reduce");
  }
  RowEchelon out;
  out.num_cols = num_cols;
  size_t next = 0;
  for (size_t col = 0; col < num_cols && next < rows.size(); ++col) {
    size_t pivot = next;
    while (pivot < rows.size() && !rows[pivot].get(col)) {
      ++pivot;
    }
    if (pivot == rows.size()) {
      continue;
    }
    std::swap(rows[next], rows[pivot]);
    for (size_t r = 0; r < rows.size(); ++r) {
      if (r != next && rows[r].get(col)) {
        rows[r] ^= rows[next];
      }
    }
    out.pivots.push_back(col);
    ++next;
  }
  rows.resize(next);
  out.rows = std::move(rows);
  return out;
}

bool reduce(const RowEchelon& echelon, BitVec& v) {
  check_dims(v.size(), echelon.num_cols, "reduce");
  for (size_t i = 0; i < echelon.rows.size(); ++i) {
    if (v.get(echelon.pivots[i])) {
      v ^= echelon.rows[i];
    }
  }
  return v.none();
}

bool in_row_space(const RowEchelon& echelon, BitVec v) { return reduce(echelon, v); }

std::vector<BitVec> null_space(const RowEchelon& echelon) {
  size_t n = echelon.num_cols;
  std::vector<bool> is_pivot(n, false);
  for (size_t p : echelon.pivots) {
    is_pivot[p] = true;
  }
  std::vector<BitVec> basis;
  for (size_t free_col = 0; free_col < n; ++free_col) {
    if (is_pivot[free_col]) {
      continue;
    }
    // Free variable set to one; each pivot variable is then forced by its row.
    BitVec v(n);
    v.set(free_col);
    for (size_t i = 0; i < echelon.rows.size(); ++i) {
      if (echelon.rows[i].get(free_col)) {
        v.set(echelon.pivots[i]);
      }
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace qauth::gf2
