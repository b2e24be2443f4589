#ifndef QAUTH_GF2_H
#define QAUTH_GF2_H

#include <cstddef>
#include <vector>

#include "qauth/bitvec.h"

namespace qauth::gf2 {

/// Reduced row echelon form of a set of vectors of common length.
/// rows[i] has a leading one at pivots[i]; pivots are strictly increasing and
/// every other row is zero in each pivot column.
struct RowEchelon {
  size_t num_cols = 0;
  std::vector<BitVec> rows;
  std::vector<size_t> pivots;

  size_t rank() const { return rows.size(); }
};

/// Row-reduces `rows` (each of length `num_cols`); zero and dependent rows are dropped.
RowEchelon row_reduce(std::vector<BitVec> rows, size_t num_cols);

/// Reduces `v` modulo the row space in place. Returns true iff v ends up zero,
/// i.e. iff the original v lies in the row space.
bool reduce(const RowEchelon& echelon, BitVec& v);
bool in_row_space(const RowEchelon& echelon, BitVec v);

/// Basis of { v : <r, v> = 0 for every row r }.
std::vector<BitVec> null_space(const RowEchelon& echelon);

}  // namespace qauth::gf2

#endif  // QAUTH_GF2_H
