#pragma once

#include <memory>
#include <string>

#include "lrd/quadrature.hpp"

namespace lrd {

enum class ModelKind { FbmClosedForm, TwoIndexDensity };

/// A process specification: either closed-form fractional Brownian motion
/// with Hurst index H, or the two-index spectral-density model
///   f(s) = scaleK * s^{1/2-H} * (1+s)^{H-H0},
/// whose Laplace transform gives the moving-average coefficient c(t).
/// Immutable after construction; all evaluators are pure and thread-safe.
class LrdModel {
  public:
    static LrdModel fbm(double H);
    static LrdModel two_index(double H, double H0);
    static LrdModel two_index(double H, double H0, double scaleK);
    /// Parse `{"kind":"fbm"|"two_index","H":...,"H0":...,"scaleK":...}`.
    static LrdModel from_json_text(const std::string& text);
    static LrdModel from_json_file(const std::string& path);

    ModelKind kind() const { return kind_; }
    double hurst() const { return H_; }
    double localIndex() const { return H0_; }
    double scaleK() const { return scaleK_; }

    /// spectral density f(s); only defined for TwoIndexDensity
    double density(double s) const;

    /// interpolation-backed fast evaluators used by kernel assembly.  For
    /// FbmClosedForm these are the exact closed forms; for TwoIndexDensity
    /// they read caches built at construction (relative accuracy ~1e-9).
    double c_fast(double t) const;
    double g_fast(double t) const;

  private:
    LrdModel() = default;
    void build_caches();

    ModelKind kind_ = ModelKind::FbmClosedForm;
    double H_ = 0.75;
    double H0_ = 0.75;
    double scaleK_ = 0.0;
    std::shared_ptr<const detail::LogLogTable> cTable_;
    std::shared_ptr<const detail::LogLogTable> gTable_;
};

/// MA(infinity) coefficient c(t); 0 for t <= 0.
double eval_c(const LrdModel& model, double t, const QuadratureConfig& q);

/// g(t) = int_0^t c(s) ds; 0 for t <= 0.
double eval_g(const LrdModel& model, double t, const QuadratureConfig& q);

/// sigma^2(t) = E[|X(t+s) - X(s)|^2].
double variogram(const LrdModel& model, double t, const QuadratureConfig& q);

/// E[ (X(t+s)-X(t)) (X(s)-X(0)) ] for lag t and span s > 0.
double increment_autocov(const LrdModel& model, double lag, double span,
                         const QuadratureConfig& q);

/// v(H) = Gamma(2-2H) cos(pi H) / (pi H (1-2H)); variogram(t) = v(H) t^{2H} for fBm.
double fbm_variogram_constant(double H);

}  // namespace lrd
