#pragma once

#include <cstdint>
#include <vector>

#include "lrd/prediction.hpp"

namespace lrd {

/// One simulated path on a fixed grid (exact Gaussian sample).
struct PathSample {
    std::vector<double> gridTimes;  ///< strictly increasing, contains 0
    std::vector<double> values;     ///< X at gridTimes; X(0) = 0 exactly
    std::uint64_t seed = 0;
    std::uint64_t replicateIndex = 0;
    double jitterApplied = 0.0;  ///< diagonal jitter added to the covariance, if any
};

struct McReport {
    std::uint64_t replicates = 0;
    double empiricalMse = 0.0;
    double theoreticalVar = 0.0;
    double standardError = 0.0;  ///< SE of the mean of r^2
    double empiricalBias = 0.0;  ///< mean residual
    double biasStandardError = 0.0;
    double jitterApplied = 0.0;
    /// sample correlations of the residual with X at probe times
    std::vector<std::pair<double, double>> residualCorrelations;
    std::vector<double> residuals;  ///< per-replicate residuals (ordered)
};

/// E[X(t)X(s)] = (sigma^2(|t|) + sigma^2(|s|) - sigma^2(|t-s|)) / 2.
double covariance(const LrdModel& model, double t, double s, const QuadratureConfig& q);

/// Exact Gaussian sample via Cholesky factorization of the grid covariance.
/// Deterministic given (seed, replicateIndex).  Throws NumericError when the
/// factorization fails even with jitter.
PathSample simulate(const LrdModel& model, const std::vector<double>& gridTimes,
                    std::uint64_t seed, std::uint64_t replicateIndex,
                    const QuadratureConfig& q);

/// Monte Carlo validation of the finite-past predictor: simulates on
/// [-t0, T] with the given step, applies the predictor per replicate and
/// compares the empirical MSE with error_variance(FinitePast).
McReport validate_prediction(const LrdModel& model, const ArCoefficient& ar,
                             const KernelTable& table, const PredictionWindow& w,
                             double gridStep, std::uint64_t replicates, std::uint64_t seed,
                             const QuadratureConfig& q, int threads = 0);

}  // namespace lrd
