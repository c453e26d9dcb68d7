#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "lrd/model.hpp"
#include "lrd/quadrature.hpp"

namespace lrd {

enum class ArMethod { ClosedForm, NumericInversion };

/// AR(infinity) side of the duality: alpha(t) and a(t) = -alpha'(t).
///
/// For fBm the closed forms are exact and mandatory.  Otherwise alpha and a
/// are recovered by fixed-Talbot inversion of alpha_hat(z) = 1/(z c_hat(z))
/// on a log grid (64 nodes/decade over [1e-6, 1e6]), the derivative taken
/// analytically through the contour integrand, and values in between by
/// log-log interpolation with power-law extension beyond the grid.
class ArCoefficient {
  public:
    static ArCoefficient closed_form(const LrdModel& model);
    static ArCoefficient numeric_inversion(const LrdModel& model, const QuadratureConfig& q,
                                           int inversionNodes = 32);

    ArMethod method() const { return method_; }
    const LrdModel& model() const { return model_; }
    int inversionNodes() const { return inversionNodes_; }

    double a(double t) const;
    double alpha(double t) const;

  private:
    ArCoefficient(const LrdModel& m, ArMethod method) : model_(m), method_(method) {}
    LrdModel model_;
    ArMethod method_;
    int inversionNodes_ = 0;
    std::shared_ptr<const detail::LogLogTable> aTable_;
    std::shared_ptr<const detail::LogLogTable> alphaTable_;
};

/// Laplace transform of c along the positive reals and its analytic
/// continuation off the cut (-inf, 0].
double c_hat(const LrdModel& model, double y, const QuadratureConfig& q);
std::complex<double> c_hat(const LrdModel& model, std::complex<double> z,
                           const QuadratureConfig& q);

/// alpha_hat(y) = 1 / (y c_hat(y)); equals y^{H-3/2} for fBm.
double alpha_hat(const LrdModel& model, double y, const QuadratureConfig& q);

double eval_a(const ArCoefficient& ar, double t);
double eval_alpha(const ArCoefficient& ar, double t);

/// beta(t) = int_0^inf c(v) a(t+v) dv; equals sin(pi d)/(pi t) for fBm.
double eval_beta(const LrdModel& model, const ArCoefficient& ar, double t,
                 const QuadratureConfig& q);

/// Gaver-Stehfest inversion of alpha_hat (test oracle; real axis only).
double gaver_stehfest_alpha(const LrdModel& model, double t, const QuadratureConfig& q,
                            int order = 14);

}  // namespace lrd
