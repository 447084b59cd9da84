#pragma once

#include <optional>
#include <vector>

#include "ebdl/algebra/integer.hpp"
#include "ebdl/errors.hpp"

namespace ebdl {

using SparseRow = std::vector<std::pair<u32, u64>>;

// Complete factorization, certified by multiplication and primality.
inline std::vector<std::pair<u64, int>> factor_modulus(u64 M, u64 rho_budget = 1ull << 32) {
  if (M < 2) throw Error(Errc::FactorizationTimeout, "modulus must be at least 2");
  auto fs = factor_u64(M, rho_budget);
  u128 prod = 1;
  for (auto& [p, e] : fs) {
    if (!is_prime_u64(p)) throw Error(Errc::FactorizationTimeout, "composite factor " + std::to_string(p));
    for (int i = 0; i < e; ++i) prod *= p;
  }
  if (prod != M) throw Error(Errc::FactorizationTimeout, "factorization of " + std::to_string(M) + " incomplete");
  return fs;
}

// Reduced row echelon form over Z/l, dense.
struct Echelon {
  u64 l = 0;
  u32 ncols = 0;
  std::vector<std::vector<u64>> rows;  // ncols + 1 entries; last is the right-hand side
  std::vector<int> pivot_of_row;
  std::vector<int> row_of_col;  // -1 if free
  bool consistent = true;

  int rank() const { return static_cast<int>(pivot_of_row.size()); }
  int kernel_dim() const { return static_cast<int>(ncols) - rank(); }
};

inline Echelon echelon(const std::vector<SparseRow>& A, const std::vector<u64>& rhs, u32 ncols, u64 l) {
  Echelon E;
  E.l = l;
  E.ncols = ncols;
  std::vector<std::vector<u64>> M;
  M.reserve(A.size());
  for (size_t i = 0; i < A.size(); ++i) {
    std::vector<u64> r(ncols + 1, 0);
    for (auto& [j, v] : A[i]) r[j] = addmod(r[j], v % l, l);
    r[ncols] = rhs.empty() ? 0 : rhs[i] % l;
    M.push_back(std::move(r));
  }
  E.row_of_col.assign(ncols, -1);
  size_t row = 0;
  for (u32 col = 0; col < ncols && row < M.size(); ++col) {
    size_t piv = row;
    while (piv < M.size() && M[piv][col] == 0) ++piv;
    if (piv == M.size()) continue;
    std::swap(M[piv], M[row]);
    u64 inv = invmod(M[row][col], l);
    for (auto& a : M[row]) a = mulmod(a, inv, l);
    for (size_t r = 0; r < M.size(); ++r) {
      if (r == row || M[r][col] == 0) continue;
      u64 f = M[r][col];
      for (u32 j = col; j <= ncols; ++j)
        if (M[row][j]) M[r][j] = submod(M[r][j], mulmod(f, M[row][j], l), l);
    }
    E.row_of_col[col] = static_cast<int>(row);
    E.pivot_of_row.push_back(static_cast<int>(col));
    ++row;
  }
  for (size_t r = row; r < M.size(); ++r)
    if (M[r][ncols]) E.consistent = false;
  M.resize(row);
  E.rows = std::move(M);
  return E;
}

// Kernel basis of the homogeneous system, one vector per free column.
inline std::vector<std::vector<u64>> kernel_basis(const Echelon& E) {
  std::vector<std::vector<u64>> out;
  for (u32 f = 0; f < E.ncols; ++f) {
    if (E.row_of_col[f] >= 0) continue;
    std::vector<u64> v(E.ncols, 0);
    v[f] = 1;
    for (size_t r = 0; r < E.rows.size(); ++r)
      if (E.rows[r][f]) v[E.pivot_of_row[r]] = submod(0, E.rows[r][f], E.l);
    out.push_back(std::move(v));
  }
  return out;
}

// One-dimensional kernel normalized so that column `ref` is 1.
inline std::vector<u64> solve_mod(const std::vector<SparseRow>& A, u32 ncols, u64 l, u32 ref) {
  Echelon E = echelon(A, {}, ncols, l);
  auto K = kernel_basis(E);
  if (K.size() != 1) throw Error(Errc::MoreRelationsNeeded, "kernel dimension " + std::to_string(K.size()));
  auto v = K[0];
  if (v[ref] == 0) throw Error(Errc::MoreRelationsNeeded, "reference unknown vanishes on the kernel");
  u64 s = invmod(v[ref], l);
  for (auto& x : v) x = mulmod(x, s, l);
  return v;
}

// Unknowns fixed by A x = rhs mod l: pivot columns whose row touches no free
// column.
inline std::vector<std::optional<u64>> determined_unknowns(const std::vector<SparseRow>& A, const std::vector<u64>& rhs,
                                                            u32 ncols, u64 l) {
  Echelon E = echelon(A, rhs, ncols, l);
  if (!E.consistent) throw Error(Errc::InconsistentSystem, "inhomogeneous system has no solution");
  std::vector<std::optional<u64>> x(ncols);
  for (size_t r = 0; r < E.rows.size(); ++r) {
    bool pure = true;
    for (u32 j = 0; j < ncols && pure; ++j)
      if (static_cast<int>(j) != E.pivot_of_row[r] && E.rows[r][j]) pure = false;
    if (pure) x[E.pivot_of_row[r]] = E.rows[r][ncols];
  }
  return x;
}

}  // namespace ebdl
