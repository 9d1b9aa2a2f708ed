#pragma once

// Dense real-symmetric eigensolver (cyclic Jacobi), bisection root finding
// and a least-squares quadratic fit. Sized for the 2..16 dimensional spin
// problems in this library; no external solver is involved.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "donorspin/errors.hpp"

namespace donorspin {

/// Real symmetric matrix, dense row-major. Writes through set() keep both
/// triangles identical, so symmetry holds exactly.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {
    if (dim == 0) throw InputError("matrix dimension must be >= 1");
  }

  /// Builds from explicit rows; throws InputError unless square and symmetric.
  SymmetricMatrix(std::initializer_list<std::initializer_list<double>> rows)
      : SymmetricMatrix(rows.size()) {
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != dim_) throw InputError("matrix rows must be square");
      std::size_t j = 0;
      for (double v : row) data_[i * dim_ + j++] = v;
      ++i;
    }
    for (std::size_t r = 0; r < dim_; ++r) {
      for (std::size_t c = r + 1; c < dim_; ++c) {
        if ((*this)(r, c) != (*this)(c, r)) throw InputError("matrix is not symmetric");
      }
    }
  }

  [[nodiscard]] std::size_t dim() const { return dim_; }

  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const {
    return data_[i * dim_ + j];
  }

  void set(std::size_t i, std::size_t j, double value) {
    data_[i * dim_ + j] = value;
    data_[j * dim_ + i] = value;
  }

  void add(std::size_t i, std::size_t j, double value) {
    data_[i * dim_ + j] += value;
    if (i != j) data_[j * dim_ + i] += value;
  }

  [[nodiscard]] std::span<const double> entries() const { return data_; }

  [[nodiscard]] double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  [[nodiscard]] double frobenius_norm() const {
    return std::sqrt(std::inner_product(data_.begin(), data_.end(), data_.begin(), 0.0));
  }

  friend bool operator==(const SymmetricMatrix&, const SymmetricMatrix&) = default;

 private:
  std::size_t dim_;
  std::vector<double> data_;
};

struct EigenSystem {
  std::vector<double> values;                // ascending
  std::vector<std::vector<double>> vectors;  // vectors[k] belongs to values[k]
};

namespace detail {

inline std::size_t first_significant(const std::vector<double>& v, double tiny) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > tiny) return i;
  }
  return v.size();
}

}  // namespace detail

/// Full spectrum of a symmetric matrix by cyclic Jacobi rotations.
///
/// Ordering is deterministic: eigenvalues ascend; each eigenvector is signed so
/// that its first non-negligible component is positive; inside a degenerate
/// cluster vectors are ordered by the position of that component.
inline EigenSystem eig_sym(const SymmetricMatrix& m) {
  const std::size_t n = m.dim();
  for (double x : m.entries()) {
    if (!std::isfinite(x)) throw InputError("eig_sym: non-finite matrix entry");
  }

  std::vector<double> a(m.entries().begin(), m.entries().end());
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  auto A = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
  auto V = [&](std::size_t i, std::size_t j) -> double& { return v[i * n + j]; };

  const double norm = m.frobenius_norm();
  const double floor = norm * 1e-18;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    if (std::sqrt(off) <= floor) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (std::abs(apq) <= floor) {
          A(p, q) = A(q, p) = 0.0;
          continue;
        }
        const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = A(k, p);
          const double akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = A(p, k);
          const double aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        A(p, q) = A(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = V(k, p);
          const double vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  const double tiny = 1e-12;
  std::vector<std::pair<double, std::vector<double>>> pairs(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = V(i, k);
    const std::size_t lead = detail::first_significant(col, tiny);
    if (lead < n && col[lead] < 0.0) {
      for (double& x : col) x = -x;
    }
    pairs[k] = {A(k, k), std::move(col)};
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });

  // Degenerate clusters: order by the leading component position.
  const double degenerate = 1e-10 * std::max(1.0, norm);
  for (std::size_t begin = 0; begin < n;) {
    std::size_t end = begin + 1;
    while (end < n && pairs[end].first - pairs[end - 1].first <= degenerate) ++end;
    std::stable_sort(pairs.begin() + static_cast<std::ptrdiff_t>(begin),
                     pairs.begin() + static_cast<std::ptrdiff_t>(end),
                     [tiny](const auto& l, const auto& r) {
                       return detail::first_significant(l.second, tiny) <
                              detail::first_significant(r.second, tiny);
                     });
    begin = end;
  }

  EigenSystem out;
  out.values.reserve(n);
  out.vectors.reserve(n);
  for (auto& [value, vec] : pairs) {
    out.values.push_back(value);
    out.vectors.push_back(std::move(vec));
  }
  return out;
}

/// Eigenvalues only, ascending.
inline std::vector<double> eigenvalues(const SymmetricMatrix& m) { return eig_sym(m).values; }

struct RootResult {
  double root;
  double residual;                   // |f(root)|
  double lo;
  double hi;
  int iterations;
  std::vector<double> bracket_widths;  // one entry per bisection step
};

/// Bisection on [lo, hi] until the bracket is no wider than tol.
/// Throws BracketingError when f(lo) and f(hi) share a strict sign.
template <class F>
RootResult find_root(F&& f, double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw InputError("find_root: tolerance must be positive");
  if (lo > hi) std::swap(lo, hi);
  double flo = f(lo);
  const double fhi = f(hi);
  if (!std::isfinite(flo) || !std::isfinite(fhi)) {
    throw BracketingError("find_root: non-finite function value at bracket end");
  }
  if (flo == 0.0) return {lo, 0.0, lo, lo, 0, {}};
  if (fhi == 0.0) return {hi, 0.0, hi, hi, 0, {}};
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw BracketingError("find_root: no sign change in [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
  }

  RootResult r{0.0, 0.0, lo, hi, 0, {}};
  while (r.hi - r.lo > tol && r.iterations < 2000) {
    const double mid = 0.5 * (r.lo + r.hi);
    if (mid <= r.lo || mid >= r.hi) break;  // bracket at floating-point resolution
    const double fmid = f(mid);
    ++r.iterations;
    if (fmid == 0.0) {
      r.lo = r.hi = mid;
    } else if ((fmid > 0.0) == (flo > 0.0)) {
      r.lo = mid;
      flo = fmid;
    } else {
      r.hi = mid;
    }
    r.bracket_widths.push_back(r.hi - r.lo);
  }
  r.root = 0.5 * (r.lo + r.hi);
  r.residual = std::abs(f(r.root));
  return r;
}

/// Least-squares fit y = c0 + c1 x + c2 x^2.
inline std::array<double, 3> fit_quadratic(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw InputError("fit_quadratic: need at least three (x, y) pairs");
  }
  // Normal equations, solved by Gaussian elimination with partial pivoting.
  std::array<std::array<double, 4>, 3> m{};
  for (std::size_t k = 0; k < x.size(); ++k) {
    const std::array<double, 3> basis{1.0, x[k], x[k] * x[k]};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) m[i][j] += basis[i] * basis[j];
      m[i][3] += basis[i] * y[k];
    }
  }
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    std::swap(m[col], m[pivot]);
    if (m[col][col] == 0.0) throw InputError("fit_quadratic: singular design");
    for (int r = col + 1; r < 3; ++r) {
      const double f = m[r][col] / m[col][col];
      for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
    }
  }
  std::array<double, 3> c{};
  for (int i = 2; i >= 0; --i) {
    double s = m[i][3];
    for (int j = i + 1; j < 3; ++j) s -= m[i][j] * c[j];
    c[i] = s / m[i][i];
  }
  return c;
}

}  // namespace donorspin
