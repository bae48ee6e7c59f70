#pragma once

// Dense linear algebra over the prime field Z_p (p < 2^15 so products fit in int).

#include <cassert>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ame/errors.hpp"

namespace ame {

inline int mod_p(long long value, int p) noexcept {
  long long r = value % p;
  return static_cast<int>(r < 0 ? r + p : r);
}

/// Multiplicative inverse in Z_p, p prime.
inline int inv_mod(int a, int p) {
  a = mod_p(a, p);
  if (a == 0) throw DomainError("zero has no inverse");
  int t = 0, new_t = 1, r = p, new_r = a;
  while (new_r != 0) {
    int quotient = r / new_r;
    t = std::exchange(new_t, t - quotient * new_t);
    r = std::exchange(new_r, r - quotient * new_r);
  }
  return mod_p(t, p);
}

class ZpMatrix {
 public:
  ZpMatrix(int p, std::size_t rows, std::size_t cols)
      : p_(p), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static ZpMatrix from_rows(int p, const std::vector<std::vector<int>>& rows, std::size_t cols) {
    ZpMatrix m(p, rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      assert(rows[r].size() == cols);
      for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = mod_p(rows[r][c], p);
    }
    return m;
  }

  static ZpMatrix identity(int p, std::size_t n) {
    ZpMatrix m(p, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  int modulus() const noexcept { return p_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  int& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  int at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const int> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::vector<int> row_vector(std::size_t r) const { return {row(r).begin(), row(r).end()}; }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap(at(a, c), at(b, c));
  }

  void scale_row(std::size_t r, int factor) {
    for (std::size_t c = 0; c < cols_; ++c) at(r, c) = mod_p(static_cast<long long>(at(r, c)) * factor, p_);
  }

  /// row[dst] += factor * row[src]
  void add_row_multiple(std::size_t dst, std::size_t src, int factor) {
    factor = mod_p(factor, p_);
    if (factor == 0) return;
    for (std::size_t c = 0; c < cols_; ++c)
      at(dst, c) = mod_p(at(dst, c) + static_cast<long long>(factor) * at(src, c), p_);
  }

  ZpMatrix multiply(const ZpMatrix& other) const {
    assert(cols_ == other.rows_);
    ZpMatrix out(p_, rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const int a = at(i, k);
        if (a == 0) continue;
        for (std::size_t j = 0; j < other.cols_; ++j)
          out.at(i, j) = mod_p(out.at(i, j) + static_cast<long long>(a) * other.at(k, j), p_);
      }
    return out;
  }

  friend bool operator==(const ZpMatrix&, const ZpMatrix&) = default;

 private:
  int p_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<int> data_;
};

struct RowEchelon {
  ZpMatrix matrix;  // reduced row echelon form
  std::vector<std::size_t> pivot_cols;
  std::size_t rank() const noexcept { return pivot_cols.size(); }
};

/// Gauss-Jordan elimination to reduced row echelon form.
inline RowEchelon row_reduce(ZpMatrix m) {
  const int p = m.modulus();
  std::vector<std::size_t> pivots;
  std::size_t lead_row = 0;
  for (std::size_t c = 0; c < m.cols() && lead_row < m.rows(); ++c) {
    std::size_t pivot = lead_row;
    while (pivot < m.rows() && m.at(pivot, c) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    m.swap_rows(pivot, lead_row);
    m.scale_row(lead_row, inv_mod(m.at(lead_row, c), p));
    for (std::size_t r = 0; r < m.rows(); ++r)
      if (r != lead_row && m.at(r, c) != 0) m.add_row_multiple(r, lead_row, p - m.at(r, c));
    pivots.push_back(c);
    ++lead_row;
  }
  return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const ZpMatrix& m) { return row_reduce(m).rank(); }

inline std::optional<ZpMatrix> inverse(const ZpMatrix& m) {
  assert(m.rows() == m.cols());
  const std::size_t n = m.rows();
  ZpMatrix aug(m.modulus(), n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug.at(r, c) = m.at(r, c);
    aug.at(r, n + r) = 1;
  }
  RowEchelon e = row_reduce(std::move(aug));
  if (e.rank() < n || e.pivot_cols[n - 1] != n - 1) return std::nullopt;
  ZpMatrix out(m.modulus(), n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) out.at(r, c) = e.matrix.at(r, n + c);
  return out;
}

/// Nonzero w with sum_i w_i * row_i = 0, normalized so its first nonzero entry is 1.
inline std::optional<std::vector<int>> left_kernel_vector(const ZpMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  ZpMatrix aug(m.modulus(), rows, cols + rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) aug.at(r, c) = m.at(r, c);
    aug.at(r, cols + r) = 1;
  }
  // Eliminate on the left block only.
  const int p = m.modulus();
  std::size_t lead = 0;
  for (std::size_t c = 0; c < cols && lead < rows; ++c) {
    std::size_t pivot = lead;
    while (pivot < rows && aug.at(pivot, c) == 0) ++pivot;
    if (pivot == rows) continue;
    aug.swap_rows(pivot, lead);
    aug.scale_row(lead, inv_mod(aug.at(lead, c), p));
    for (std::size_t r = 0; r < rows; ++r)
      if (r != lead && aug.at(r, c) != 0) aug.add_row_multiple(r, lead, p - aug.at(r, c));
    ++lead;
  }
  if (lead == rows) return std::nullopt;
  std::vector<int> w(rows);
  for (std::size_t i = 0; i < rows; ++i) w[i] = aug.at(lead, cols + i);
  for (int v : w)
    if (v != 0) {
      const int s = inv_mod(v, p);
      for (int& x : w) x = mod_p(static_cast<long long>(x) * s, p);
      break;
    }
  return w;
}

/// Some x with A x = b, if consistent.
inline std::optional<std::vector<int>> solve(const ZpMatrix& a, std::span<const int> b) {
  assert(b.size() == a.rows());
  ZpMatrix aug(a.modulus(), a.rows(), a.cols() + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) aug.at(r, c) = a.at(r, c);
    aug.at(r, a.cols()) = mod_p(b[r], a.modulus());
  }
  RowEchelon e = row_reduce(std::move(aug));
  std::vector<int> x(a.cols(), 0);
  for (std::size_t i = 0; i < e.rank(); ++i) {
    const std::size_t c = e.pivot_cols[i];
    if (c == a.cols()) return std::nullopt;
    x[c] = e.matrix.at(i, a.cols());
  }
  return x;
}

}  // namespace ame
