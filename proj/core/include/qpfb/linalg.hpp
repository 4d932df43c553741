#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "qpfb/scalar.hpp"

namespace qpfb {

/// Sparse vector over the Laurent ring, keyed by row index.
using SparseVector = std::map<std::size_t, Scalar>;

/// Outcome of an exact solve over the Laurent ring.
enum class SolveStatus {
  Solved,
  Inconsistent,
  /// Elimination met a pivot that is not a unit; nothing definitive can be said.
  Undetermined,
};

struct SolveResult {
  SolveStatus status = SolveStatus::Undetermined;
  std::vector<Scalar> x;
};

/// Gaussian elimination that only pivots on units (single-term Laurent
/// monomials). Every returned solution or kernel vector is re-verified by
/// multiplication, so a non-unit pivot can only cost completeness.
class UnitPivotSystem {
 public:
  UnitPivotSystem(std::vector<SparseVector> columns, std::size_t rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return columns_.size(); }

  SolveResult solve(const SparseVector& rhs) const;
  /// Kernel vectors found by elimination; `complete` is cleared when a
  /// non-unit pivot may hide further kernel directions.
  std::vector<std::vector<Scalar>> kernel(bool* complete = nullptr) const;

  SparseVector apply(const std::vector<Scalar>& x) const;

 private:
  struct Reduced;
  Reduced reduce(const SparseVector* rhs) const;

  std::vector<SparseVector> columns_;
  std::size_t rows_;
};

}  // namespace qpfb
