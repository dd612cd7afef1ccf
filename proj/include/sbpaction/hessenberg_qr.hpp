#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "sbpaction/types.hpp"

// Dense nonsymmetric eigenvalue kernel: Householder reduction to upper
// Hessenberg form followed by Francis double-shift QR iteration (the
// classical EISPACK/JAMA scheme, eigenvalues only). Templated on the
// working scalar so the same code can run in extended precision when a
// spectrum contains defective clusters that double rounding would split.

namespace sbpact::detail {

template <typename S>
struct FloatTraits;

template <>
struct FloatTraits<double> {
  static double abs(double x) { return std::fabs(x); }
  static double sqrt(double x) { return std::sqrt(x); }
  static double epsilon() { return 2.220446049250313e-16; }
};

// Row-major square matrix of working scalars.
template <typename S>
class WorkMatrix {
 public:
  explicit WorkMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * n, S(0)) {}
  S& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
  const S& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }
  int size() const { return n_; }

 private:
  int n_;
  std::vector<S> a_;
};

// In-place Householder reduction to upper Hessenberg form.
template <typename S>
void hessenberg_reduce(WorkMatrix<S>& h) {
  using T = FloatTraits<S>;
  const int n = h.size();
  const int low = 0;
  const int high = n - 1;
  std::vector<S> ort(n, S(0));

  for (int m = low + 1; m <= high - 1; ++m) {
    S scale(0);
    for (int i = m; i <= high; ++i) scale = scale + T::abs(h(i, m - 1));
    if (scale == S(0)) continue;

    S hh(0);
    for (int i = high; i >= m; --i) {
      ort[i] = h(i, m - 1) / scale;
      hh = hh + ort[i] * ort[i];
    }
    S g = T::sqrt(hh);
    if (ort[m] > S(0)) g = -g;
    hh = hh - ort[m] * g;
    ort[m] = ort[m] - g;

    // similarity transform H <- (I - u u^T / hh) H (I - u u^T / hh)
    for (int j = m; j < n; ++j) {
      S f(0);
      for (int i = high; i >= m; --i) f = f + ort[i] * h(i, j);
      f = f / hh;
      for (int i = m; i <= high; ++i) h(i, j) = h(i, j) - f * ort[i];
    }
    for (int i = 0; i <= high; ++i) {
      S f(0);
      for (int j = high; j >= m; --j) f = f + ort[j] * h(i, j);
      f = f / hh;
      for (int j = m; j <= high; ++j) h(i, j) = h(i, j) - f * ort[j];
    }
    ort[m] = scale * ort[m];
    h(m, m - 1) = scale * g;
  }

  for (int i = 2; i < n; ++i)
    for (int j = 0; j < i - 1; ++j) h(i, j) = S(0);
}

// Francis double-shift QR on an upper Hessenberg matrix. Returns
// eigenvalues as (real, imag) pairs; complex ones appear as exact
// conjugate pairs. Throws NoConvergence when the iteration budget for a
// single eigenvalue is exhausted.
template <typename S>
std::vector<std::pair<S, S>> hessenberg_qr_eigenvalues(WorkMatrix<S>& h) {
  using T = FloatTraits<S>;
  const int nn = h.size();
  const int low = 0;
  const S eps = T::epsilon();
  const int max_iter_per_eig = 50;

  std::vector<S> d(nn, S(0)), e(nn, S(0));

  S norm(0);
  for (int i = 0; i < nn; ++i)
    for (int j = (i > 1 ? i - 1 : 0); j < nn; ++j) norm = norm + T::abs(h(i, j));
  if (norm == S(0)) {
    std::vector<std::pair<S, S>> zero(nn, {S(0), S(0)});
    return zero;
  }

  int n = nn - 1;
  S exshift(0);
  S p(0), q(0), r(0), s(0), z(0), w(0), x(0), y(0);
  int iter = 0;

  while (n >= low) {
    // look for a single small subdiagonal element
    int l = n;
    while (l > low) {
      s = T::abs(h(l - 1, l - 1)) + T::abs(h(l, l));
      if (s == S(0)) s = norm;
      if (T::abs(h(l, l - 1)) < eps * s) break;
      --l;
    }

    if (l == n) {
      // one real root
      h(n, n) = h(n, n) + exshift;
      d[n] = h(n, n);
      e[n] = S(0);
      --n;
      iter = 0;
    } else if (l == n - 1) {
      // a pair of roots from the trailing 2x2 block
      w = h(n, n - 1) * h(n - 1, n);
      p = (h(n - 1, n - 1) - h(n, n)) / S(2);
      q = p * p + w;
      z = T::sqrt(T::abs(q));
      h(n, n) = h(n, n) + exshift;
      h(n - 1, n - 1) = h(n - 1, n - 1) + exshift;
      x = h(n, n);
      if (q >= S(0)) {
        z = (p >= S(0)) ? p + z : p - z;
        d[n - 1] = x + z;
        d[n] = d[n - 1];
        if (z != S(0)) d[n] = x - w / z;
        e[n - 1] = S(0);
        e[n] = S(0);
      } else {
        d[n - 1] = x + p;
        d[n] = x + p;
        e[n - 1] = z;
        e[n] = -z;
      }
      n -= 2;
      iter = 0;
    } else {
      // form a shift
      x = h(n, n);
      y = S(0);
      w = S(0);
      if (l < n) {
        y = h(n - 1, n - 1);
        w = h(n, n - 1) * h(n - 1, n);
      }

      if (iter == 10) {
        // Wilkinson's exceptional shift
        exshift = exshift + x;
        for (int i = low; i <= n; ++i) h(i, i) = h(i, i) - x;
        s = T::abs(h(n, n - 1)) + T::abs(h(n - 1, n - 2));
        x = y = S(0.75) * s;
        w = S(-0.4375) * s * s;
      }
      if (iter == 30) {
        s = (y - x) / S(2);
        s = s * s + w;
        if (s > S(0)) {
          s = T::sqrt(s);
          if (y < x) s = -s;
          s = x - w / ((y - x) / S(2) + s);
          for (int i = low; i <= n; ++i) h(i, i) = h(i, i) - s;
          exshift = exshift + s;
          x = y = w = S(0.964);
        }
      }
      if (iter >= max_iter_per_eig)
        throw NoConvergence("qr eigenvalue iteration budget exhausted");
      ++iter;

      // look for two consecutive small subdiagonal elements
      int m = n - 2;
      while (m >= l) {
        z = h(m, m);
        r = x - z;
        s = y - z;
        p = (r * s - w) / h(m + 1, m) + h(m, m + 1);
        q = h(m + 1, m + 1) - z - r - s;
        r = h(m + 2, m + 1);
        s = T::abs(p) + T::abs(q) + T::abs(r);
        p = p / s;
        q = q / s;
        r = r / s;
        if (m == l) break;
        if (T::abs(h(m, m - 1)) * (T::abs(q) + T::abs(r)) <
            eps * (T::abs(p) *
                   (T::abs(h(m - 1, m - 1)) + T::abs(z) + T::abs(h(m + 1, m + 1)))))
          break;
        --m;
      }
      for (int i = m + 2; i <= n; ++i) {
        h(i, i - 2) = S(0);
        if (i > m + 2) h(i, i - 3) = S(0);
      }

      // double QR sweep on rows l..n, columns m..n
      for (int k = m; k <= n - 1; ++k) {
        const bool notlast = (k != n - 1);
        if (k != m) {
          p = h(k, k - 1);
          q = h(k + 1, k - 1);
          r = notlast ? h(k + 2, k - 1) : S(0);
          x = T::abs(p) + T::abs(q) + T::abs(r);
          if (x == S(0)) continue;
          p = p / x;
          q = q / x;
          r = r / x;
        }
        s = T::sqrt(p * p + q * q + r * r);
        if (p < S(0)) s = -s;
        if (s == S(0)) continue;
        if (k != m) {
          h(k, k - 1) = -s * x;
        } else if (l != m) {
          h(k, k - 1) = -h(k, k - 1);
        }
        p = p + s;
        x = p / s;
        y = q / s;
        z = r / s;
        q = q / p;
        r = r / p;

        for (int j = k; j < nn; ++j) {
          p = h(k, j) + q * h(k + 1, j);
          if (notlast) {
            p = p + r * h(k + 2, j);
            h(k + 2, j) = h(k + 2, j) - p * z;
          }
          h(k, j) = h(k, j) - p * x;
          h(k + 1, j) = h(k + 1, j) - p * y;
        }
        const int imax = (n < k + 3) ? n : k + 3;
        for (int i = 0; i <= imax; ++i) {
          p = x * h(i, k) + y * h(i, k + 1);
          if (notlast) {
            p = p + z * h(i, k + 2);
            h(i, k + 2) = h(i, k + 2) - p * r;
          }
          h(i, k) = h(i, k) - p;
          h(i, k + 1) = h(i, k + 1) - p * q;
        }
      }
    }
  }

  std::vector<std::pair<S, S>> out(nn);
  for (int i = 0; i < nn; ++i) out[i] = {d[i], e[i]};
  return out;
}

template <typename S>
std::vector<std::pair<S, S>> dense_eigenvalues(WorkMatrix<S>& a) {
  hessenberg_reduce(a);
  return hessenberg_qr_eigenvalues(a);
}

}  // namespace sbpact::detail
