#pragma once

#include <optional>

#include "bergman/geometry.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/symbolic.hpp"

namespace bergman {

/// |Q_I|_alpha = |I|^{2+alpha} / (1 + alpha).
double alpha_measure_box(const Interval& I, double alpha);

/// |T_I|_alpha = |I|^{2+alpha} (1 - 2^{-(1+alpha)}) / (1 + alpha).
double alpha_measure_tent(const Interval& I, double alpha);

/// Integral of y^nu over a rectangle [x0,x1) x [y0,y1), in closed form.
double rect_height_moment(const Rect& r, double nu);

/// Integral of |z|^s y^t over rect intersected with {|z| <= radius}. With no rect the
/// region is the upper half-plane. The angular integral is adaptive; the radial
/// one is exact. Throws DivergenceError when the integral is infinite.
QuadResult integrate_monomial(double s, double t, const std::optional<Rect>& rect,
                              const std::optional<double>& radius, double tolerance, int max_intervals = 2000);

/// Integral of |f| y^nu over the support of f, optionally intersected with `region`.
/// Pure monomials use integrate_monomial; functions with kernel factors use the
/// polar (unbounded support) or rectangle (bounded support) iterated drivers.
/// Divergence is decided from the exponents before any quadrature.
IntegralResult integrate_function(const NormalForm& f, double nu, const QuadratureConfig& qc,
                                  const std::optional<Rect>& region = std::nullopt);

/// As integrate_function, but throws ToleranceError when the result did not converge.
double integrate_function_checked(const NormalForm& f, double nu, const QuadratureConfig& qc,
                                  const std::optional<Rect>& region = std::nullopt);

/// |E|_{w,alpha} = integral over E of w dV_alpha. Throws ToleranceError if not converged.
IntegralResult weighted_region_measure(const CarlesonBox& box, const SymbolicFunction& w, double alpha,
                                       const QuadratureConfig& qc);
IntegralResult weighted_region_measure(const Tent& tent, const SymbolicFunction& w, double alpha,
                                       const QuadratureConfig& qc);

/// ||f||_{p,nu} = (integral over H of |f|^p y^nu dxdy)^{1/p}.
double lp_norm(const SymbolicFunction& f, double p, double nu, const QuadratureConfig& qc);
double lp_norm(const NormalForm& f, double p, double nu, const QuadratureConfig& qc);

}  // namespace bergman
