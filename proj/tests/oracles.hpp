// Copyright 2026 The statlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Independent reference computations for the tests. Nothing here calls the
// library's special functions: integrals use adaptive Gauss-Kronrod in long
// double, mass functions use lgammal, and least squares solves the normal
// equations in long double.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <queue>
#include <random>
#include <utility>
#include <vector>

namespace statlab::oracle {

using Real = long double;

namespace detail {

// 7-point Gauss / 15-point Kronrod nodes and weights on [-1, 1].
inline constexpr Real kXgk[8] = {
    0.991455371120812639206854697526329L, 0.949107912342758524526189684047851L,
    0.864864423359769072789712788640926L, 0.741531185599394439863864773280788L,
    0.586087235467691130294144845693013L, 0.405845151377397166906606412076961L,
    0.207784955007898467600689403773245L, 0.000000000000000000000000000000000L};
inline constexpr Real kWgk[8] = {
    0.022935322010529224963732008058970L, 0.063092092629978553290700663189204L,
    0.104790010322250183839876322541518L, 0.140653259715525918745189590510238L,
    0.169004726639267902826583426598550L, 0.190350578064785409913256402421014L,
    0.204432940075298892414161999234649L, 0.209482141084727828012999174891714L};
inline constexpr Real kWg[4] = {
    0.129484966168869693270611432679082L, 0.279705391489276667901467771423780L,
    0.381830050505118944950369775488975L, 0.417959183673469387755102040816327L};

inline std::pair<Real, Real> gk15(const std::function<Real(Real)>& f, Real a,
                                  Real b) {
  const Real c = (a + b) / 2;
  const Real h = (b - a) / 2;
  const Real fc = f(c);
  Real kronrod = fc * kWgk[7];
  Real gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const Real dx = h * kXgk[j];
    const Real s = f(c - dx) + f(c + dx);
    kronrod += kWgk[j] * s;
    if (j % 2 == 1) gauss += kWg[j / 2] * s;
  }
  return {kronrod * h, std::fabs((kronrod - gauss) * h)};
}

}  // namespace detail

/// ∫_a^b f with absolute error target `tol`. Globally adaptive: the
/// subinterval with the largest error estimate is bisected until the total
/// estimate meets `tol` or `max_intervals` is reached.
inline Real integrate(const std::function<Real(Real)>& f, Real a, Real b,
                      Real tol = 1e-13L, int max_intervals = 4000) {
  if (a == b) return 0;
  struct Piece {
    Real lo, hi, value, err;
    bool operator<(const Piece& o) const { return err < o.err; }
  };
  std::priority_queue<Piece> heap;
  Real total = 0;
  Real total_err = 0;
  auto push = [&](Real lo, Real hi) {
    const auto [value, err] = detail::gk15(f, lo, hi);
    heap.push({lo, hi, value, err});
    total += value;
    total_err += err;
  };
  push(a, b);
  while (total_err > tol && static_cast<int>(heap.size()) < max_intervals) {
    const Piece worst = heap.top();
    const Real mid = (worst.lo + worst.hi) / 2;
    if (!(mid > worst.lo && mid < worst.hi)) break;
    heap.pop();
    total -= worst.value;
    total_err -= worst.err;
    push(worst.lo, mid);
    push(mid, worst.hi);
  }
  // Re-add from scratch to shed the running sums' rounding.
  total = 0;
  while (!heap.empty()) {
    total += heap.top().value;
    heap.pop();
  }
  return total;
}

/// erf by its Maclaurin series, summed in long double until terms vanish.
inline Real erf_series(Real x) {
  Real term = x;
  Real sum = x;
  for (int n = 1; n < 500; ++n) {
    term *= -x * x / n;
    const Real add = term / (2 * n + 1);
    sum += add;
    if (std::fabs(add) < 1e-30L * std::fabs(sum)) break;
  }
  return 2 * sum / std::sqrt(3.14159265358979323846264338327950288L);
}

inline Real normal_cdf(Real x) {
  return 0.5L * (1 + erf_series(x / std::sqrt(2.0L)));
}

/// Smallest-error bisection inverse of a nondecreasing function.
inline Real bisect(const std::function<Real(Real)>& f, Real p, Real lo,
                   Real hi) {
  for (int i = 0; i < 200 && hi - lo > 1e-17L * (std::fabs(lo) + 1); ++i) {
    const Real mid = (lo + hi) / 2;
    (f(mid) < p ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

inline Real log_choose(Real n, Real k) {
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

// Mass functions evaluated directly from their textbook definitions.
inline Real binomial_pmf(Real k, Real n, Real p) {
  if (k < 0 || k > n) return 0;
  if (p == 0) return k == 0 ? 1 : 0;
  if (p == 1) return k == n ? 1 : 0;
  return std::exp(log_choose(n, k) + k * std::log(p) + (n - k) * std::log1p(-p));
}

inline Real poisson_pmf(Real k, Real lambda) {
  if (k < 0) return 0;
  return std::exp(k * std::log(lambda) - lambda - std::lgamma(k + 1));
}

inline Real geometric_failures_pmf(Real k, Real p) {
  if (k < 0) return 0;
  if (p == 1) return k == 0 ? 1 : 0;
  return p * std::exp(k * std::log1p(-p));
}

inline Real hypergeometric_pmf(Real k, Real N, Real K, Real n) {
  if (k < 0 || k > n || k > K || n - k > N - K) return 0;
  return std::exp(log_choose(K, k) + log_choose(N - K, n - k) -
                  log_choose(N, n));
}

inline Real negative_binomial_pmf(Real k, Real r, Real p) {
  if (k < 0) return 0;
  if (p == 1) return k == 0 ? 1 : 0;
  return std::exp(std::lgamma(k + r) - std::lgamma(r) - std::lgamma(k + 1) +
                  r * std::log(p) + k * std::log1p(-p));
}

struct LineFit {
  Real beta0;
  Real beta1;
};

/// Least squares from [[n, Σx], [Σx, Σx²]] β = [Σy, Σxy], solved in long
/// double after shifting x and y by their first values.
inline LineFit least_squares(const std::vector<double>& x,
                             const std::vector<double>& y) {
  const Real x0 = x[0];
  const Real y0 = y[0];
  Real n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Real u = x[i] - x0;
    const Real v = y[i] - y0;
    n += 1;
    sx += u;
    sy += v;
    sxx += u * u;
    sxy += u * v;
  }
  const Real det = n * sxx - sx * sx;
  const Real b1 = (n * sxy - sx * sy) / det;
  const Real b0_shifted = (sy - b1 * sx) / n;
  return {b0_shifted + y0 - b1 * x0, b1};
}

/// Minimizes the residual sum of squares over the slope by golden-section
/// search; the intercept is profiled out. A derivative-free cross-check of
/// the normal equations.
inline LineFit least_squares_search(const std::vector<double>& x,
                                    const std::vector<double>& y, Real lo,
                                    Real hi) {
  Real mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  auto sse = [&](Real b1) {
    Real s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const Real e = (y[i] - my) - b1 * (x[i] - mx);
      s += e * e;
    }
    return s;
  };
  const Real g = (std::sqrt(5.0L) - 1) / 2;
  Real a = lo, b = hi;
  Real c = b - g * (b - a), d = a + g * (b - a);
  Real fc = sse(c), fd = sse(d);
  for (int i = 0; i < 200 && b - a > 1e-16L * (std::fabs(a) + 1); ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = sse(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = sse(d);
    }
  }
  const Real b1 = (a + b) / 2;
  return {my - b1 * mx, b1};
}

/// Deterministic random draws for randomized property checks.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
  long integer(long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(engine_);
  }
  /// Uniform on the open interval (0, 1).
  double open_unit() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }
  double normal(double mean, double sd) {
    return std::normal_distribution<double>(mean, sd)(engine_);
  }
  bool coin(double p = 0.5) { return uniform(0, 1) < p; }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace statlab::oracle
