// This file is part of vortexpair.
// SPDX-License-Identifier: Apache-2.0

#include "vortexpair/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>
#include <sstream>

namespace vortexpair::quadrature {

namespace {

// Kronrod 15-point nodes/weights on [-1,1] (positive half; symmetric),
// with the embedded Gauss-7 weights.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename T>
struct Panel {
  double a, b;
  T value;
  double err;
};

template <typename T, typename F>
Panel<T> gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  T resk{}, resg{};
  for (int j = 0; j < 8; ++j) {
    if (j == 7) {
      T fc = f(c);
      resk = resk + kWgk[7] * h * fc;
      resg = resg + kWg[3] * h * fc;
      break;
    }
    T f1 = f(c - h * kXgk[j]);
    T f2 = f(c + h * kXgk[j]);
    resk = resk + kWgk[j] * h * (f1 + f2);
    if (j % 2 == 1) resg = resg + kWg[j / 2] * h * (f1 + f2);
  }
  double err = std::abs(resk - resg);
  err = std::pow(200.0 * err, 1.5) < err ? std::pow(200.0 * err, 1.5) : err;
  return {a, b, resk, err};
}

template <typename T, typename F>
std::pair<T, double> adaptive(const F& f, double a, double b, double rel_tol, double abs_floor,
                              const std::vector<double>& seeds, int max_panels) {
  std::vector<double> pts{a, b};
  for (double s : seeds)
    if (s > a && s < b) pts.push_back(s);
  std::sort(pts.begin(), pts.end());

  auto cmp = [](const Panel<T>& p, const Panel<T>& q) { return p.err < q.err; };
  std::priority_queue<Panel<T>, std::vector<Panel<T>>, decltype(cmp)> heap(cmp);
  T total{};
  double toterr = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    auto p = gk15<T>(f, pts[i], pts[i + 1]);
    total = total + p.value;
    toterr += p.err;
    heap.push(p);
  }
  int n = static_cast<int>(pts.size()) - 1;
  while (n < max_panels) {
    double target = std::max(rel_tol * std::abs(total), abs_floor);
    if (toterr <= target || heap.empty()) break;
    Panel<T> worst = heap.top();
    heap.pop();
    if (worst.b - worst.a < 1e-300) break;
    double mid = 0.5 * (worst.a + worst.b);
    auto p1 = gk15<T>(f, worst.a, mid);
    auto p2 = gk15<T>(f, mid, worst.b);
    total = total - worst.value + p1.value + p2.value;
    toterr += p1.err + p2.err - worst.err;
    heap.push(p1);
    heap.push(p2);
    ++n;
  }
  return {total, toterr};
}

} // namespace

Result integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 double abs_floor, const std::vector<double>& seeds, int max_panels) {
  auto [v, e] = adaptive<double>(f, a, b, rel_tol, abs_floor, seeds, max_panels);
  if (e > std::max(rel_tol * std::abs(v), abs_floor) * 50.0 && e > 1e-300) {
    std::ostringstream os;
    os << "quadrature: accuracy target not met on [" << a << "," << b << "]; value=" << v
       << " err=" << e << " panels=" << max_panels;
    throw NumericalError(os.str());
  }
  return {v, e};
}

ComplexResult integrate_complex(const std::function<std::complex<double>(double)>& f, double a,
                                double b, double rel_tol, double abs_floor,
                                const std::vector<double>& seeds, int max_panels) {
  auto [v, e] = adaptive<std::complex<double>>(f, a, b, rel_tol, abs_floor, seeds, max_panels);
  if (e > std::max(rel_tol * std::abs(v), abs_floor) * 50.0 && e > 1e-300) {
    std::ostringstream os;
    os << "quadrature: accuracy target not met on [" << a << "," << b << "] (complex); |value|="
       << std::abs(v) << " err=" << e;
    throw NumericalError(os.str());
  }
  return {v, e};
}

const GaussRule& gauss_legendre(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5)); // Chebyshev start
    double p0, p1, dp;
    for (int it2 = 0; it2 < 100; ++it2) {
      p0 = 1.0;
      p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.w[i] = w;
    r.w[n - 1 - i] = w;
  }
  return cache.emplace(n, std::move(r)).first->second;
}

GaussRule gauss_laguerre(int n) {
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  double x = 0.0;
  for (int i = 0; i < n; ++i) {
    // standard starting guesses (Stroud & Secrest)
    if (i == 0)
      x = 3.0 / (1.0 + 2.4 * n);
    else if (i == 1)
      x += 15.0 / (1.0 + 2.5 * n);
    else
      x += ((1.0 + 2.55 * (i - 1)) / (1.9 * (i - 1))) * (x - r.x[i - 2]);
    double p1 = 0.0, p2 = 0.0;
    for (int it = 0; it < 200; ++it) {
      p1 = 1.0;
      p2 = 0.0;
      for (int k = 1; k <= n; ++k) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * k - 1.0 - x) * p2 - (k - 1.0) * p3) / k;
      }
      double dp = n * (p1 - p2) / x;
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-14 * std::max(1.0, x)) break;
    }
    r.x[i] = x;
    double p1n = 1.0, p2n = 0.0;
    for (int k = 1; k <= n + 1; ++k) {
      double p3 = p2n;
      p2n = p1n;
      p1n = ((2.0 * k - 1.0 - x) * p2n - (k - 1.0) * p3) / k;
    }
    // w_i = x_i / ((n+1)^2 [L_{n+1}(x_i)]^2)
    r.w[i] = x / ((n + 1.0) * (n + 1.0) * p1n * p1n);
  }
  return r;
}

PanelGrid panel_grid(const std::vector<double>& breakpoints, int nodes_per_panel) {
  PanelGrid g;
  const GaussRule& base = gauss_legendre(nodes_per_panel);
  for (size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    double a = breakpoints[i], b = breakpoints[i + 1];
    if (!(b > a)) continue;
    for (int j = 0; j < nodes_per_panel; ++j) {
      g.x.push_back(0.5 * (a + b) + 0.5 * (b - a) * base.x[j]);
      g.w.push_back(0.5 * (b - a) * base.w[j]);
    }
  }
  return g;
}

} // namespace vortexpair::quadrature
