#pragma once

#include <vector>

#include "lrd/kernels.hpp"

namespace lrd {

/// Observation/prediction window of Eq. (1.10):
/// observe on [-t0, t1] (or (-inf, t1]), predict X(T).
struct PredictionWindow {
    double t0 = 0.0;  ///< past horizon (observations from -t0)
    double t1 = 0.0;  ///< present time
    double T = 0.0;   ///< prediction target
    double t2 = 0.0;  ///< t0 + t1
    double t3 = 0.0;  ///< T - t1

    PredictionWindow() = default;
    PredictionWindow(double t0_, double t1_, double T_);
};

enum class PredictionMode { InfinitePast, FinitePast };

struct PathSample;  // montecarlo.hpp

struct PredictionReport {
    PredictionWindow window;
    /// (s, coefficient) samples for s < t1 resp. s in (-t0, t1)
    std::vector<std::pair<double, double>> infiniteCoeffSamples;
    std::vector<std::pair<double, double>> finiteCoeffSamples;
    double infiniteErrorVar = 0.0;
    double finiteErrorVar = 0.0;
    std::vector<double> dnTermContributions;  ///< int_0^inf D_n(s)^2 ds, n = 1..
    double infiniteTruncatedMass = 0.0;       ///< coefficient mass dropped below s-cutoff
};

/// integrand of the infinite-past formula (1.11):
///   coeff(s) = int_0^{t3} b(t1-s, tau) dtau,   s < t1.
double infinite_past_coeff(const LrdModel& model, const ArCoefficient& ar,
                           const PredictionWindow& w, double s, const QuadratureConfig& q);

/// integrand of the finite-past formula (1.12):
///   coeff(s) = int_0^{t3} h(s+t0, u) du,   -t0 < s < t1.
double finite_past_coeff(const KernelTable& table, const PredictionWindow& w, double s,
                         const QuadratureConfig& q);

/// D_n(s) of Section 4.2 with f = indicator of (t1, T]:
///   n = 0: g(t3-s) for s < t3 else 0
///   n >= 1: int_0^inf du c(u) int_0^{t3} b_n(t2+u+s, tau) dtau
double eval_Dn(const LrdModel& model, const ArCoefficient& ar, const KernelTable& table,
               const PredictionWindow& w, int n, double s, const QuadratureConfig& q);

/// Mean-square prediction error (Theorem 4.12):
///   InfinitePast: int_0^{t3} g^2
///   FinitePast:   int_0^{t3} g^2 + sum_{n>=1} int_0^inf D_n^2
double error_variance(const LrdModel& model, const ArCoefficient& ar, const KernelTable* table,
                      const PredictionWindow& w, PredictionMode mode,
                      const QuadratureConfig& q,
                      std::vector<double>* dnTerms = nullptr);

/// Full report: coefficient samples on `sCount` points plus both error
/// variances and the D_n decomposition.
PredictionReport build_report(const LrdModel& model, const ArCoefficient& ar,
                              const KernelTable& table, const PredictionWindow& w,
                              const QuadratureConfig& q, int sCount = 129);

/// Riemann-Stieltjes discretization of the predictor integral:
///   X(t1) + sum_j coeff(midpoint_j) (X(s_{j+1}) - X(s_j))
/// over path cells inside the observation window.  Coefficients between
/// report samples are interpolated monotone-cubically.
double apply_predictor(const PredictionReport& report, const PathSample& path,
                       PredictionMode mode = PredictionMode::FinitePast);

}  // namespace lrd
