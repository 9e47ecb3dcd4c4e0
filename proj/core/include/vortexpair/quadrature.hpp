// This file is part of vortexpair.
// SPDX-License-Identifier: Apache-2.0

#ifndef VORTEXPAIR_QUADRATURE_HPP
#define VORTEXPAIR_QUADRATURE_HPP

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vortexpair {

/// Raised when a quadrature or series fails to meet its accuracy target;
/// carries a refinement trace for diagnostics.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

namespace quadrature {

struct Result {
  double value = 0.0;
  double error = 0.0; // estimated absolute error
};

struct ComplexResult {
  std::complex<double> value{0.0, 0.0};
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod (G7/K15) on [a,b]. `seeds` are interior points
/// where the interval is pre-split (sharp features, panel boundaries).
Result integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, double abs_floor = 0.0,
                 const std::vector<double>& seeds = {}, int max_panels = 4000);

ComplexResult integrate_complex(const std::function<std::complex<double>(double)>& f, double a,
                                double b, double rel_tol = 1e-10, double abs_floor = 0.0,
                                const std::vector<double>& seeds = {}, int max_panels = 4000);

/// Gauss-Legendre nodes/weights on [-1,1], any n (Newton on P_n).
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};
const GaussRule& gauss_legendre(int n);

/// Gauss-Laguerre nodes/weights for int_0^inf e^{-u} f(u) du.
GaussRule gauss_laguerre(int n);

/// Panelized Gauss-Legendre grid over sorted breakpoints.
struct PanelGrid {
  std::vector<double> x;
  std::vector<double> w;
};
PanelGrid panel_grid(const std::vector<double>& breakpoints, int nodes_per_panel);

} // namespace quadrature
} // namespace vortexpair

#endif
