#pragma once

#include <utility>
#include <vector>

#include "lrd/prediction.hpp"

namespace lrd {

/// One Baxter sweep: both sides of Theorem 5.1 across increasing past
/// horizons, with the Lemma 5.4 limit constant.
struct BaxterSweep {
    double d = 0.0;  ///< H - 1/2
    std::vector<double> t0Values;
    std::vector<double> lhsValues;
    std::vector<double> rhsValues;
    double limitConstant = 0.0;
    double empiricalK = 0.0;  ///< sup of lhs/rhs across the sweep
};

/// lhs = int_{-t0}^{t1} ds int_0^{t3} {h(s+t0,u) - b(t1-s,u)} du
///     = sum_{k>=2} int_0^{t2} J_k  (Eq. 5.1 / Lemma 5.4 identity)
double baxter_lhs(const LrdModel& model, const ArCoefficient& ar, const KernelTable& table,
                  const PredictionWindow& w, const QuadratureConfig& q);

/// rhs tail mass (without the constant K):
///   int_{-inf}^{-t0} ds int_0^{t3} b(t1-s,u) du = int_{t2}^inf J_1
double baxter_rhs(const LrdModel& model, const ArCoefficient& ar, const PredictionWindow& w,
                  const QuadratureConfig& q);

/// d * int_0^1 s^{-d-1} [(1-s)^{-d} - 1] ds  (Lemma 5.4)
double lemma54_constant(double d, const QuadratureConfig& q);

/// f_m(u) of Section 5.2; m <= 4 by iterated quadrature, m in [5,8] by QMC.
double eval_f_m(int m, double u, const QuadratureConfig& q, QmcEstimate* qmcInfo = nullptr);

/// Lemma 5.5: M-term partial sum of the left side and the right-side
/// integral; the caller asserts convergence.
std::pair<double, double> lemma55_check(double d, int M, const QuadratureConfig& q);

BaxterSweep baxter_sweep(const LrdModel& model, const ArCoefficient& ar, double t1, double T,
                         const std::vector<double>& t0Values, const QuadratureConfig& q);

constexpr int kMaxFmDepth = 8;

}  // namespace lrd
