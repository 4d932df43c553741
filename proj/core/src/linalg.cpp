#include "qpfb/linalg.hpp"

#include <optional>

namespace qpfb {

struct UnitPivotSystem::Reduced {
  std::vector<SparseVector> rows;  // keyed by column
  std::vector<Scalar> rhs;
  std::vector<std::optional<std::size_t>> pivot_row;  // per column
  bool complete = true;
};

UnitPivotSystem::UnitPivotSystem(std::vector<SparseVector> columns, std::size_t rows)
    : columns_(std::move(columns)), rows_(rows) {}

namespace {

void axpy(SparseVector& row, const Scalar& f, const SparseVector& other) {
  for (const auto& [k, v] : other) {
    auto [it, inserted] = row.try_emplace(k, Scalar());
    it->second -= f * v;
    if (it->second.is_zero()) row.erase(it);
  }
}

}  // namespace

UnitPivotSystem::Reduced UnitPivotSystem::reduce(const SparseVector* rhs) const {
  Reduced r;
  r.rows.assign(rows_, {});
  r.rhs.assign(rows_, Scalar());
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    for (const auto& [i, v] : columns_[c]) r.rows.at(i).emplace(c, v);
  }
  if (rhs) {
    for (const auto& [i, v] : *rhs) r.rhs.at(i) = v;
  }
  r.pivot_row.assign(columns_.size(), std::nullopt);
  std::vector<bool> used(rows_, false);

  for (std::size_t c = 0; c < columns_.size(); ++c) {
    std::optional<std::size_t> piv;
    bool nonunit_seen = false;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (used[i]) continue;
      auto it = r.rows[i].find(c);
      if (it == r.rows[i].end()) continue;
      if (it->second.is_unit()) {
        piv = i;
        break;
      }
      nonunit_seen = true;
    }
    if (!piv) {
      if (nonunit_seen) r.complete = false;
      continue;
    }
    used[*piv] = true;
    r.pivot_row[c] = *piv;
    const Scalar inv = r.rows[*piv].at(c).unit_inverse();
    for (auto& [k, v] : r.rows[*piv]) v *= inv;
    r.rhs[*piv] *= inv;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == *piv) continue;
      auto it = r.rows[i].find(c);
      if (it == r.rows[i].end()) continue;
      const Scalar f = it->second;
      axpy(r.rows[i], f, r.rows[*piv]);
      r.rhs[i] -= f * r.rhs[*piv];
    }
  }
  return r;
}

SparseVector UnitPivotSystem::apply(const std::vector<Scalar>& x) const {
  SparseVector out;
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (x[c].is_zero()) continue;
    for (const auto& [i, v] : columns_[c]) {
      auto [it, inserted] = out.try_emplace(i, Scalar());
      it->second += x[c] * v;
      if (it->second.is_zero()) out.erase(it);
    }
  }
  return out;
}

SolveResult UnitPivotSystem::solve(const SparseVector& rhs) const {
  Reduced r = reduce(&rhs);
  SolveResult out;
  for (std::size_t i = 0; i < rows_; ++i) {
    if (r.rows[i].empty() && !r.rhs[i].is_zero()) {
      out.status = r.complete ? SolveStatus::Inconsistent : SolveStatus::Undetermined;
      return out;
    }
  }
  out.x.assign(columns_.size(), Scalar());
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (r.pivot_row[c]) out.x[c] = r.rhs[*r.pivot_row[c]];
  }
  SparseVector check = apply(out.x);
  SparseVector want;
  for (const auto& [i, v] : rhs) {
    if (!v.is_zero()) want.emplace(i, v);
  }
  if (check != want) {
    out.x.clear();
    out.status = SolveStatus::Undetermined;
    return out;
  }
  out.status = SolveStatus::Solved;
  return out;
}

std::vector<std::vector<Scalar>> UnitPivotSystem::kernel(bool* complete) const {
  Reduced r = reduce(nullptr);
  bool ok = r.complete;
  std::vector<std::vector<Scalar>> out;
  for (std::size_t f = 0; f < columns_.size(); ++f) {
    if (r.pivot_row[f]) continue;
    std::vector<Scalar> x(columns_.size());
    x[f] = Scalar(1L);
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      if (!r.pivot_row[c]) continue;
      auto it = r.rows[*r.pivot_row[c]].find(f);
      if (it != r.rows[*r.pivot_row[c]].end()) x[c] = -it->second;
    }
    if (apply(x).empty()) {
      out.push_back(std::move(x));
    } else {
      ok = false;
    }
  }
  if (complete) *complete = ok;
  return out;
}

}  // namespace qpfb
