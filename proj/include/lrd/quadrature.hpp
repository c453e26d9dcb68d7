#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lrd {

/// Tolerances and truncation parameters shared by every integral in the
/// library.  Immutable value type; safe to copy across threads.
struct QuadratureConfig {
    double relTol = 1e-9;            ///< target relative error per integral
    double absTol = 1e-14;           ///< absolute floor
    double truncationRadius = 1e6;   ///< default upper cutoff U for half-line integrals
    double singularitySplit = 0.125; ///< width fraction of the endpoint interval handled by weighted quadrature
    int maxSubdivisions = 15;

    void validate() const;
};

/// Thrown when a quadrature or inversion fails to reach its tolerance.
/// Carries the achieved error estimate so callers can report diagnostics.
class NumericError : public std::runtime_error {
  public:
    NumericError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}
    double achieved() const { return achieved_; }

  private:
    double achieved_;
};

/// Fixed composite Gauss-Legendre rule on (0,1) with dyadic grading toward
/// both endpoints.  Segments are octaves down to 2^-nOct on each side.
struct GradedRule {
    std::vector<double> x;
    std::vector<double> w;
};

/// Cached rule lookup (rules are built once and shared; read-only afterwards).
const GradedRule& graded_rule(int nOct, int glOrder);

/// Gauss-Legendre nodes/weights on [-1,1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

/// Gauss-Jacobi rule for integrals of the form
///   int_0^1 x^alpha f(x) dx,   alpha > -1,
/// with the weight singularity at the left endpoint.  Nodes/weights via
/// Golub-Welsch on the Jacobi recurrence.
struct GaussJacobiRule {
    double alpha;
    std::vector<double> x;
    std::vector<double> w;
};
GaussJacobiRule gauss_jacobi(double alpha, int n);

/// integral_0^1 of f against a graded rule (no adaptivity; spectral on
/// endpoint power singularities thanks to the dyadic grading).
double integrate01(const std::function<double(double)>& f, const GradedRule& r);

/// integral_a^b, mapped onto (0,1).
double integrate_graded(const std::function<double(double)>& f, double a, double b,
                        const GradedRule& r);

/// integral_0^inf via u = scale * x/(1-x).
double integrate_half_line(const std::function<double(double)>& f, double scale,
                           const GradedRule& r);

/// integral_a^inf via u = a + scale * x/(1-x).
double integrate_from(const std::function<double(double)>& f, double a, double scale,
                      const GradedRule& r);

/// Adaptive integral over [a,b]; handles integrable endpoint singularities.
/// Throws NumericError when the error estimate exceeds the tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const QuadratureConfig& q);

/// Adaptive integral over (a, inf) for integrands with algebraic or
/// exponential decay: splits at a+scale and maps the tail through 1/u.
double integrate_adaptive_half_line(const std::function<double(double)>& f, double a,
                                    double scale, const QuadratureConfig& q);

/// Halton low-discrepancy sequence in up to 8 dimensions with an optional
/// Cranley-Patterson rotation (deterministic given the shift seed).
class HaltonSequence {
  public:
    HaltonSequence(int dim, std::uint64_t shiftSeed = 0);
    /// i-th point (i >= 0), components in (0,1).
    void point(std::uint64_t i, double* out) const;
    int dim() const { return dim_; }

  private:
    int dim_;
    std::vector<double> shift_;
};

/// SplitMix64 stream derivation; used wherever deterministic substreams are
/// required (QMC shifts, Monte Carlo replicates).
std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index);

namespace detail {
/// Cubic-spline table in (log x, log y) with power-law extension below the
/// grid and a t^{-p}(A + B log t) extension above it.  All kernel caches in
/// the library are positive functions with power-law tails, so this is the
/// common interpolation currency.
class LogLogTable {
  public:
    LogLogTable() = default;
    /// pLo: exponent of the pure power continuation below x.front().
    /// pHi: decay exponent p of the t^{-p}(A + B log t) continuation above
    ///      x.back(); A, B are fit on the last decade of nodes.
    LogLogTable(std::vector<double> x, const std::vector<double>& y, double pLo, double pHi);
    double operator()(double x) const;
    bool empty() const { return lx_.empty(); }
    double xmin() const;
    double xmax() const;

  private:
    std::vector<double> lx_, ly_, m_;  // nodes, log-values, spline slopes
    double pLo_ = 0.0, pHi_ = 0.0, tailA_ = 0.0, tailB_ = 0.0;
};
}  // namespace detail

}  // namespace lrd
