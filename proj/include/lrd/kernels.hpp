#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "lrd/duality.hpp"
#include "lrd/model.hpp"

namespace lrd {

enum class KernelPath { Auto, ClosedForm, Quadrature };

/// b(t,s) = int_0^s c(u) a(t+s-u) du.  The endpoint singularity
/// c(u) ~ u^{H0-3/2} is handled by Gauss-Jacobi weighted nodes on the
/// singular piece and tanh-sinh on the rest.  For fBm Eq. (3.13) is the
/// closed form; `path` selects between it and the quadrature route.
double eval_b(const LrdModel& model, const ArCoefficient& ar, double t, double s,
              const QuadratureConfig& q, KernelPath path = KernelPath::Auto);

/// k(t,s) = int_0^inf c(t+u) a(t2+u+s) du  (Theorem 4.8 kernel).
double eval_k_kernel(const LrdModel& model, const ArCoefficient& ar, double t, double s,
                     double t2, const QuadratureConfig& q);

namespace detail {

/// Nystrom discretization of the alternating-projection composition
///   (K psi)(x) = int_0^inf b(x,u) psi(t2+u) du
/// on a dyadically graded mesh compactified by u = t2 x/(1-x), augmented
/// with the analytic tail closure psi(t2+u) ~ g1/(t2+u) + g2/(t2+u)^2 for
/// u beyond the mesh.  The series sums solve (I -+ K); individual iterates
/// b_n come from matrix powers applied to the right-hand side.
class SeriesOperator {
  public:
    SeriesOperator(const LrdModel& model, const ArCoefficient& ar, double t2,
                   const QuadratureConfig& q, int nOct = 26, int glOrder = 12);

    double t2() const { return t2_; }
    int size() const { return static_cast<int>(u_.size()); }

    /// kernel evaluation bound to the model (closed form for fBm)
    double b(double t, double s) const;

    struct Resolvent {
        Eigen::VectorXd nodes;   // psi at t2+u_q
        Eigen::Vector2d gammas;  // tail closure coefficients
    };
    /// solve (I - sign*K) psi = rhs with tail closure
    Resolvent solve(int sign, const Eigen::VectorXd& rhs) const;

    /// one application of the discretized operator to a closure-carrying
    /// iterate: out = M v + T g, with the new gammas refit at the junction
    Resolvent apply(const Resolvent& v) const;
    /// fit the two-power tail coefficients to the last mesh nodes
    Eigen::Vector2d fit_gammas(const Eigen::VectorXd& nodes) const;

    /// Nystrom extension of int b(x,u) psi(t2+u) du to arbitrary x > 0
    double extend(double x, const Eigen::VectorXd& nodes) const;
    double extend(double x, const Resolvent& r) const;

    /// rhs vectors sampled at the mesh: v[i] = f(t2 + u_i)
    Eigen::VectorXd sample(const std::function<double(double)>& f) const;

    const std::vector<double>& u() const { return u_; }
    const std::vector<double>& w() const { return w_; }

    const LrdModel& model() const { return model_; }
    const ArCoefficient& ar() const { return ar_; }
    const QuadratureConfig& config() const { return q_; }

  private:
    double tail_moment(double x, double power) const;

    LrdModel model_;
    ArCoefficient ar_;
    QuadratureConfig q_;
    double t2_;
    double uM_;  // mesh end; analytic tail beyond
    std::vector<double> u_, w_;
    Eigen::MatrixXd M_;             // w_q b(t2+u_i, u_q)
    Eigen::MatrixXd T_;             // tail closure columns
    Eigen::PartialPivLU<Eigen::MatrixXd> luMinus_, luPlus_;
};

}  // namespace detail

/// Cached kernel evaluations for one window length t2: the discretized
/// series operator plus per-second-argument iterate stacks, and dump grids.
class KernelTable {
  public:
    KernelTable(const LrdModel& model, const ArCoefficient& ar, double t2,
                const QuadratureConfig& q);

    double t2() const { return op_->t2(); }
    const detail::SeriesOperator& op() const { return *op_; }
    const QuadratureConfig& config() const { return op_->config(); }

    int seriesTerms() const { return seriesTerms_; }
    double truncationEstimate() const { return truncationEstimate_; }

    /// b_n(t,s;t2) of Eq. (4.1); n=1 is b itself.
    double b_n(int n, double t, double s) const;

    /// h(s,u;t2): partial sum of Eq. (4.6) through the stopping rule;
    /// records seriesTerms and truncationEstimate on first use per s.
    double h(double s, double u) const;

    /// resolvent-summed h (partial sum plus closed tail); used internally
    /// and cross-checked against the partial sum in tests.
    double h_resolvent(double s, double u) const;

  private:
    struct Stack {
        std::vector<detail::SeriesOperator::Resolvent> iterates;  // K^{n-1} rhs, n = 2..
        Eigen::VectorXd rhs;
        detail::SeriesOperator::Resolvent sumS, sumA;
        int terms = 0;
        double truncation = 0.0;
    };
    Stack& stack_locked(double s) const;  // callers hold mtx_
    detail::SeriesOperator::Resolvent iterate_for(double s, int idx) const;

    std::shared_ptr<detail::SeriesOperator> op_;
    mutable std::map<double, Stack> stacks_;
    mutable std::mutex mtx_;
    mutable int seriesTerms_ = 0;
    mutable double truncationEstimate_ = 0.0;
    int maxPairs_ = 96;
};

/// delta_k(u,v;t) of Section 5.1: k=1 is beta(t+v+u); k in {2,3} by iterated
/// quadrature; k >= 4 by quasi-Monte Carlo (2^16 Halton points, 8 shifted
/// replicates for the error estimate).
struct QmcEstimate {
    double value;
    double standardError;
};
double eval_delta_k(const LrdModel& model, const ArCoefficient& ar, int k, double u,
                    double v, double t, const QuadratureConfig& q,
                    QmcEstimate* qmcInfo = nullptr);

/// B_k(t,s;t2) of Prop. 5.2 (equals b_k; the recursion is the test oracle).
double eval_B_k(const LrdModel& model, const ArCoefficient& ar, int k, double t, double s,
                double t2, const QuadratureConfig& q);

constexpr int kMaxDeltaDepth = 6;

}  // namespace lrd
