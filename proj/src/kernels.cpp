#include "lrd/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "lrd/parallel.hpp"

namespace lrd {

namespace {

/// int_0^upper c(v) F(v) dv with the c(v) ~ v^{H0-3/2} endpoint handled by
/// Gauss-Jacobi nodes on [0, vc] and tanh-sinh on the rest.
double integrate_c_weighted(const LrdModel& model, const std::function<double(double)>& F,
                            double upper, const QuadratureConfig& q) {
    double vc = upper * std::min(q.singularitySplit, 0.5);
    double alpha = model.localIndex() - 1.5;
    GaussJacobiRule gj = gauss_jacobi(alpha, 32);
    double head = 0.0;
    for (std::size_t i = 0; i < gj.x.size(); ++i) {
        double v = vc * gj.x[i];
        head += gj.w[i] * model.c_fast(v) * std::pow(v, -alpha) * F(v);
    }
    head *= std::pow(vc, alpha + 1.0);
    double rest = integrate_adaptive([&](double v) { return model.c_fast(v) * F(v); }, vc,
                                     upper, q);
    return head + rest;
}

/// same, but against a fixed graded rule (fast path for operator assembly)
double integrate_c_weighted_fixed(const LrdModel& model,
                                  const std::function<double(double)>& F, double upper,
                                  const GaussJacobiRule& gj, const GradedRule& gr) {
    double vc = 0.125 * upper;
    double alpha = model.localIndex() - 1.5;
    double head = 0.0;
    for (std::size_t i = 0; i < gj.x.size(); ++i) {
        double v = vc * gj.x[i];
        head += gj.w[i] * model.c_fast(v) * std::pow(v, -alpha) * F(v);
    }
    head *= std::pow(vc, alpha + 1.0);
    double rest = 0.0;
    const double len = upper - vc;
    for (std::size_t i = 0; i < gr.x.size(); ++i) {
        double v = vc + len * gr.x[i];
        rest += gr.w[i] * model.c_fast(v) * F(v);
    }
    return head + rest * len;
}

}  // namespace

double eval_b(const LrdModel& model, const ArCoefficient& ar, double t, double s,
              const QuadratureConfig& q, KernelPath path) {
    if (!(t > 0.0) || !(s > 0.0)) throw std::invalid_argument("eval_b: t, s must be positive");
    const bool haveClosed =
        model.kind() == ModelKind::FbmClosedForm && ar.method() == ArMethod::ClosedForm;
    if (path == KernelPath::ClosedForm && !haveClosed)
        throw std::invalid_argument("eval_b: closed form requires fBm with ClosedForm AR");
    if (haveClosed && path != KernelPath::Quadrature) {
        double d = model.hurst() - 0.5;
        return std::sin(M_PI * d) / M_PI * std::pow(s / t, d) / (t + s);
    }
    return integrate_c_weighted(model, [&](double v) { return ar.a(t + s - v); }, s, q);
}

double eval_k_kernel(const LrdModel& model, const ArCoefficient& ar, double t, double s,
                     double t2, const QuadratureConfig& q) {
    if (!(t > 0.0) || !(s > 0.0) || !(t2 > 0.0))
        throw std::invalid_argument("eval_k_kernel: t, s, t2 must be positive");
    double scale = std::max({t, t2 + s, 1.0});
    return integrate_adaptive_half_line(
        [&](double u) { return model.c_fast(t + u) * ar.a(t2 + u + s); }, 0.0, scale, q);
}

namespace detail {

SeriesOperator::SeriesOperator(const LrdModel& model, const ArCoefficient& ar, double t2,
                               const QuadratureConfig& q, int nOct, int glOrder)
    : model_(model), ar_(ar), q_(q), t2_(t2) {
    if (!(t2 > 0.0)) throw std::invalid_argument("SeriesOperator: t2 must be positive");
    const GradedRule& r = graded_rule(nOct, glOrder);
    const double xCut = 1.0 - std::ldexp(1.0, -nOct);
    for (std::size_t i = 0; i < r.x.size(); ++i) {
        if (r.x[i] > xCut) continue;
        double om = 1.0 - r.x[i];
        u_.push_back(t2 * r.x[i] / om);
        w_.push_back(r.w[i] * t2 / (om * om));
    }
    uM_ = t2 * xCut / (1.0 - xCut);
    const int n = static_cast<int>(u_.size());

    M_.resize(n, n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        double x = t2_ + u_[i];
        for (int c = 0; c < n; ++c) M_(i, c) = w_[c] * b(x, u_[c]);
    });

    T_.resize(n, 2);
    const GradedRule& rt = graded_rule(16, 10);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        double x = t2_ + u_[i];
        for (int p = 1; p <= 2; ++p) {
            T_(i, p - 1) = integrate_from(
                [&](double uu) { return b(x, uu) * std::pow(t2_ + uu, -static_cast<double>(p)); },
                uM_, uM_, rt);
        }
    });

    // augmented systems (I -+ K) with the two-power tail closure;
    // junction rows tie psi at the last two nodes to the tail form
    auto build = [&](double sign) {
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + 2, n + 2);
        A.topLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n) - sign * M_;
        A.topRightCorner(n, 2) = -sign * T_;
        for (int k = 0; k < 2; ++k) {
            int idx = n - 1 - k;
            A(n + k, idx) = 1.0;
            A(n + k, n) = -1.0 / (t2_ + u_[idx]);
            A(n + k, n + 1) = -1.0 / ((t2_ + u_[idx]) * (t2_ + u_[idx]));
        }
        return Eigen::PartialPivLU<Eigen::MatrixXd>(A);
    };
    luMinus_ = build(+1.0);
    luPlus_ = build(-1.0);
}

double SeriesOperator::b(double t, double s) const {
    if (model_.kind() == ModelKind::FbmClosedForm) {
        double d = model_.hurst() - 0.5;
        return std::sin(M_PI * d) / M_PI * std::pow(s / t, d) / (t + s);
    }
    static thread_local GaussJacobiRule gj;  // keyed by H0 via rebuild check
    static thread_local double gjAlpha = 2.0;
    double alpha = model_.localIndex() - 1.5;
    if (gjAlpha != alpha) {
        gj = gauss_jacobi(alpha, 24);
        gjAlpha = alpha;
    }
    static thread_local std::vector<double> gx, gw;
    if (gx.empty()) gauss_legendre(12, gx, gw);
    // int_0^s c(v) a(t+s-v) dv: GJ head at v -> 0, log-composite rest
    double vc = 0.125 * s;
    double head = 0.0;
    for (std::size_t i = 0; i < gj.x.size(); ++i) {
        double v = vc * gj.x[i];
        head += gj.w[i] * model_.c_fast(v) * std::pow(v, -alpha) * ar_.a(t + s - v);
    }
    head *= std::pow(vc, alpha + 1.0);
    // [vc, s] on dyadically-refined-toward-s segments (a may peak at v=s for small t)
    double rest = 0.0;
    double lo = vc;
    for (int seg = 0; seg < 24 && lo < s; ++seg) {
        double hi = (seg == 23) ? s : s - (s - lo) * 0.5;
        double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (std::size_t i = 0; i < gx.size(); ++i) {
            double v = mid + half * gx[i];
            rest += half * gw[i] * model_.c_fast(v) * ar_.a(t + s - v);
        }
        lo = hi;
    }
    return head + rest;
}

double SeriesOperator::tail_moment(double x, double power) const {
    const GradedRule& rt = graded_rule(16, 10);
    return integrate_from([&](double uu) { return b(x, uu) * std::pow(t2_ + uu, -power); },
                          uM_, uM_, rt);
}

SeriesOperator::Resolvent SeriesOperator::solve(int sign, const Eigen::VectorXd& rhs) const {
    const int n = size();
    Eigen::VectorXd full = Eigen::VectorXd::Zero(n + 2);
    full.head(n) = rhs;
    Eigen::VectorXd sol = (sign > 0 ? luMinus_ : luPlus_).solve(full);
    Resolvent r;
    r.nodes = sol.head(n);
    r.gammas = sol.tail(2);
    return r;
}

Eigen::Vector2d SeriesOperator::fit_gammas(const Eigen::VectorXd& nodes) const {
    const int n = size();
    Eigen::Matrix2d A;
    Eigen::Vector2d rhs;
    for (int k = 0; k < 2; ++k) {
        double x = t2_ + u_[n - 1 - k];
        A(k, 0) = 1.0 / x;
        A(k, 1) = 1.0 / (x * x);
        rhs[k] = nodes[n - 1 - k];
    }
    return A.colPivHouseholderQr().solve(rhs);
}

SeriesOperator::Resolvent SeriesOperator::apply(const Resolvent& v) const {
    Resolvent out;
    out.nodes = M_ * v.nodes + T_ * v.gammas;
    out.gammas = fit_gammas(out.nodes);
    return out;
}

double SeriesOperator::extend(double x, const Eigen::VectorXd& nodes) const {
    const int n = size();
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += w_[i] * b(x, u_[i]) * nodes[i];
    return acc;
}

double SeriesOperator::extend(double x, const Resolvent& r) const {
    double acc = extend(x, r.nodes);
    acc += r.gammas[0] * tail_moment(x, 1.0);
    acc += r.gammas[1] * tail_moment(x, 2.0);
    return acc;
}

Eigen::VectorXd SeriesOperator::sample(const std::function<double(double)>& f) const {
    const int n = size();
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = f(t2_ + u_[i]);
    return v;
}

}  // namespace detail

KernelTable::KernelTable(const LrdModel& model, const ArCoefficient& ar, double t2,
                         const QuadratureConfig& q)
    : op_(std::make_shared<detail::SeriesOperator>(model, ar, t2, q)) {}

KernelTable::Stack& KernelTable::stack_locked(double s) const {
    auto it = stacks_.find(s);
    if (it != stacks_.end()) return it->second;
    Stack st;
    st.rhs = op_->sample([&](double x) { return op_->b(x, s); });
    st.sumS = op_->solve(+1, st.rhs);
    st.sumA = op_->solve(-1, st.rhs);
    return stacks_.emplace(s, std::move(st)).first->second;
}

double KernelTable::b_n(int n, double t, double s) const {
    if (n < 1) throw std::invalid_argument("b_n: n must be >= 1");
    if (!(t > 0.0) || !(s > 0.0)) throw std::invalid_argument("b_n: t, s must be positive");
    if (n == 1) return op_->b(t, s);
    detail::SeriesOperator::Resolvent iter = iterate_for(s, n - 2);
    return op_->extend(t, iter);
}

detail::SeriesOperator::Resolvent KernelTable::iterate_for(double s, int idx) const {
    std::lock_guard<std::mutex> lock(mtx_);
    Stack& st = stack_locked(s);
    while (static_cast<int>(st.iterates.size()) <= idx) {
        if (st.iterates.empty()) {
            detail::SeriesOperator::Resolvent first;
            first.nodes = st.rhs;
            first.gammas = op_->fit_gammas(st.rhs);
            st.iterates.push_back(std::move(first));
        } else {
            st.iterates.push_back(op_->apply(st.iterates.back()));
        }
    }
    return st.iterates[idx];
}

double KernelTable::h(double s, double u) const {
    const double t2 = op_->t2();
    if (!(s > 0.0) || !(s < t2)) throw std::invalid_argument("h: s must lie in (0, t2)");
    if (!(u > 0.0)) throw std::invalid_argument("h: u must be positive");
    const double relTol = op_->config().relTol;
    double sum = 0.0, prev = 0.0;
    int pairs = 0;
    double ratio = 0.0;
    for (int k = 1; k <= maxPairs_; ++k) {
        double term = b_n(2 * k - 1, t2 - s, u) + b_n(2 * k, s, u);
        sum += term;
        pairs = k;
        if (k > 1) ratio = term / prev;
        prev = term;
        if (k >= 3 && term < std::max(relTol, 1e-9) * sum) break;
    }
    double trunc = ratio > 0.0 && ratio < 1.0 ? prev * ratio / (1.0 - ratio) : prev;
    {
        std::lock_guard<std::mutex> lock(mtx_);
        seriesTerms_ = std::max(seriesTerms_, 2 * pairs);
        truncationEstimate_ = std::max(truncationEstimate_, trunc);
        if (pairs >= maxPairs_ && trunc > 1e-4 * sum)
            throw NumericError("h-series not converged within " + std::to_string(maxPairs_) +
                                   " pairs; last-term share " + std::to_string(trunc / sum),
                               trunc);
    }
    return sum;
}

double KernelTable::h_resolvent(double s, double u) const {
    const double t2 = op_->t2();
    if (!(s > 0.0) || !(s < t2)) throw std::invalid_argument("h: s must lie in (0, t2)");
    detail::SeriesOperator::Resolvent sumS, sumA;
    {
        std::lock_guard<std::mutex> lock(mtx_);
        Stack& st = stack_locked(u);
        sumS = st.sumS;
        sumA = st.sumA;
    }
    detail::SeriesOperator::Resolvent Eres, Ores;
    Eres.nodes = 0.5 * (sumS.nodes + sumA.nodes);
    Eres.gammas = 0.5 * (sumS.gammas + sumA.gammas);
    Ores.nodes = 0.5 * (sumS.nodes - sumA.nodes);
    Ores.gammas = 0.5 * (sumS.gammas - sumA.gammas);
    double Ex = op_->b(t2 - s, u) + op_->extend(t2 - s, Ores);
    double Ox = op_->extend(s, Eres);
    return Ex + Ox;
}

double eval_delta_k(const LrdModel& model, const ArCoefficient& ar, int k, double u, double v,
                    double t, const QuadratureConfig& q, QmcEstimate* qmcInfo) {
    if (k < 1) throw std::invalid_argument("eval_delta_k: k must be >= 1");
    if (k > kMaxDeltaDepth)
        throw std::invalid_argument("eval_delta_k: unsupported depth k=" + std::to_string(k) +
                                    " (max " + std::to_string(kMaxDeltaDepth) + ")");
    if (!(t > 0.0) || u < 0.0 || v < 0.0)
        throw std::invalid_argument("eval_delta_k: need t > 0 and u, v >= 0");
    auto beta = [&](double x) { return eval_beta(model, ar, x, q); };
    if (k == 1) return beta(t + v + u);
    if (k <= 3) {
        const GradedRule& r = graded_rule(20, 10);
        if (k == 2)
            return integrate_half_line([&](double w) { return beta(t + v + w) * beta(t + w + u); },
                                       t, r);
        return integrate_half_line(
            [&](double w2) {
                double inner = integrate_half_line(
                    [&](double w1) { return beta(t + w2 + w1) * beta(t + w1 + u); }, t, r);
                return beta(t + v + w2) * inner;
            },
            t, r);
    }
    // k >= 4: quasi-Monte Carlo on the (k-1)-fold chain, 8 shifted replicates
    const int dim = k - 1;
    const std::uint64_t pointsPerShift = 1u << 13;
    const int shifts = 8;
    std::vector<double> shiftMeans(shifts, 0.0);
    std::vector<double> xs(dim), ws(dim);
    for (int sft = 0; sft < shifts; ++sft) {
        HaltonSequence seq(dim, 0x5eedULL + 977ULL * (sft + 1) + k);
        double acc = 0.0;
        for (std::uint64_t i = 0; i < pointsPerShift; ++i) {
            seq.point(i, xs.data());
            double jac = 1.0, val = 1.0;
            for (int d0 = 0; d0 < dim; ++d0) {
                double om = 1.0 - xs[d0];
                ws[d0] = t * xs[d0] / om;
                jac *= t / (om * om);
            }
            val = beta(t + v + ws[dim - 1]);
            for (int l = dim - 1; l >= 1; --l) val *= beta(t + ws[l] + ws[l - 1]);
            val *= beta(t + ws[0] + u);
            acc += val * jac;
        }
        shiftMeans[sft] = acc / static_cast<double>(pointsPerShift);
    }
    double mean = 0.0;
    for (double m : shiftMeans) mean += m;
    mean /= shifts;
    double var = 0.0;
    for (double m : shiftMeans) var += (m - mean) * (m - mean);
    double se = std::sqrt(var / (shifts * (shifts - 1.0)));
    if (qmcInfo) *qmcInfo = {mean, se};
    return mean;
}

double eval_B_k(const LrdModel& model, const ArCoefficient& ar, int k, double t, double s,
                double t2, const QuadratureConfig& q) {
    if (k < 2) throw std::invalid_argument("eval_B_k: k must be >= 2");
    if (k > kMaxDeltaDepth)
        throw std::invalid_argument("eval_B_k: unsupported depth k=" + std::to_string(k));
    if (!(t > 0.0) || !(s >= 0.0)) throw std::invalid_argument("eval_B_k: bad arguments");
    if (s == 0.0) return 0.0;
    const GradedRule& ru = graded_rule(22, 10);
    auto inner = [&](double v) {
        return integrate_half_line(
            [&](double u) { return ar.a(t + u) * eval_delta_k(model, ar, k - 1, u, v, t2, q); },
            std::max(t, t2), ru);
    };
    // int_0^s dv c(s-v) inner(v) = int_0^s dv' c(v') inner(s-v')
    return integrate_c_weighted(model, [&](double v) { return inner(s - v); }, s, q);
}

}  // namespace lrd
