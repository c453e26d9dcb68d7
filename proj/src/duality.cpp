#include "lrd/duality.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "lrd/parallel.hpp"

namespace lrd {

namespace {

using cplx = std::complex<double>;

/// Stieltjes transform of the two-index density, int_0^inf f(s)/(z+s) ds,
/// valid off the cut (-inf, 0].  Three zones: Gauss-Jacobi rules absorb the
/// known power exponents of f at both ends (s^{1/2-H} at 0, s^{1/2-H0} at
/// infinity, the latter via w = 1/s), and the middle runs on a log-uniform
/// composite rule.  On the Talbot contour |z+s| >= |Im z| ~ |z| sin(arg z),
/// so no interior near-singularity arises for the arguments used here; a
/// breakpoint at -Re z covers mildly spiky cases anyway.
cplx stieltjes_two_index(const LrdModel& m, cplx z) {
    const double H = m.hurst(), H0 = m.localIndex(), K = m.scaleK();
    const double az = std::abs(z);
    const double s1 = std::min(az, 1.0);
    const double s2 = std::max(100.0 * az, 100.0);
    cplx total{0.0, 0.0};

    // zone A: (0, s1], weight s^{1/2-H}
    {
        static thread_local std::map<double, GaussJacobiRule> cacheA;
        auto it = cacheA.find(H);
        if (it == cacheA.end()) it = cacheA.emplace(H, gauss_jacobi(0.5 - H, 32)).first;
        const GaussJacobiRule& gj = it->second;
        cplx acc{0.0, 0.0};
        for (std::size_t i = 0; i < gj.x.size(); ++i) {
            double sv = s1 * gj.x[i];
            acc += gj.w[i] * std::pow(1.0 + sv, H - H0) / (z + sv);
        }
        total += K * std::pow(s1, 1.5 - H) * acc;
    }
    // zone B: [s1, s2], log-uniform composite Gauss-Legendre, split at -Re z
    {
        static thread_local std::vector<double> gx, gw;
        if (gx.empty()) gauss_legendre(16, gx, gw);
        double l1 = std::log(s1), l2 = std::log(s2);
        std::vector<double> edges;
        edges.push_back(l1);
        double lc = std::real(z) < 0.0 ? std::log(-std::real(z)) : l1;
        int nseg = std::max(2, static_cast<int>(std::ceil((l2 - l1) / std::log(10.0) * 2.0)));
        for (int k = 1; k < nseg; ++k) edges.push_back(l1 + (l2 - l1) * k / nseg);
        edges.push_back(l2);
        if (lc > l1 && lc < l2) edges.push_back(lc);
        std::sort(edges.begin(), edges.end());
        for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
            double mid = 0.5 * (edges[e] + edges[e + 1]);
            double half = 0.5 * (edges[e + 1] - edges[e]);
            if (half <= 0.0) continue;
            for (std::size_t i = 0; i < gx.size(); ++i) {
                double sv = std::exp(mid + half * gx[i]);
                total += gw[i] * half * sv * m.density(sv) / (z + sv);
            }
        }
    }
    // zone C: [s2, inf) via w = 1/s: int_0^{1/s2} K w^{H0-3/2} (1+w)^{H-H0} / (1+z w) dw
    {
        static thread_local std::map<double, GaussJacobiRule> cacheC;
        auto it = cacheC.find(H0);
        if (it == cacheC.end()) it = cacheC.emplace(H0, gauss_jacobi(H0 - 1.5, 32)).first;
        const GaussJacobiRule& gj = it->second;
        cplx acc{0.0, 0.0};
        for (std::size_t i = 0; i < gj.x.size(); ++i) {
            double wv = gj.x[i] / s2;
            acc += gj.w[i] * std::pow(1.0 + wv, H - H0) / (1.0 + z * wv);
        }
        total += K * std::pow(1.0 / s2, H0 - 0.5) * acc;
    }
    return total;
}

cplx c_hat_complex(const LrdModel& m, cplx z) {
    if (m.kind() == ModelKind::FbmClosedForm) {
        double d = m.hurst() - 0.5;
        return std::pow(z, cplx(-d, 0.0));
    }
    return stieltjes_two_index(m, z);
}

struct TalbotResult {
    double alpha;
    double a;
};

/// Fixed-Talbot inversion at one t, returning alpha(t) and a(t) = -alpha'(t)
/// (derivative taken by multiplying the integrand by z; the contour integral
/// is contour-independent so no parameter-variation term appears).
TalbotResult talbot_invert(const LrdModel& m, double t, int M) {
    const double r = 2.0 * M / (5.0 * t);
    auto F = [&](cplx z) { return 1.0 / (z * c_hat_complex(m, z)); };
    cplx F0 = F(cplx(r, 0.0));
    double expo = std::exp(r * t);
    double sumAlpha = 0.5 * std::real(F0) * expo;
    double sumA = 0.5 * r * std::real(F0) * expo;
    for (int k = 1; k < M; ++k) {
        double th = k * M_PI / M;
        double cot = std::cos(th) / std::sin(th);
        cplx z(r * th * cot, r * th);
        if (std::real(z) * t < -40.0) break;  // term below eps of the r-node term
        double sig = th + (th * cot - 1.0) * cot;
        cplx w = std::exp(z * t) * cplx(1.0, sig);
        cplx Fv = F(z);
        sumAlpha += std::real(w * Fv);
        sumA += std::real(w * z * Fv);
    }
    return {r / M * sumAlpha, -r / M * sumA};
}

}  // namespace

double c_hat(const LrdModel& model, double y, const QuadratureConfig& q) {
    if (!(y > 0.0)) throw std::invalid_argument("c_hat: y must be positive");
    if (model.kind() == ModelKind::FbmClosedForm)
        return std::pow(y, 0.5 - model.hurst());
    (void)q;
    return std::real(stieltjes_two_index(model, cplx(y, 0.0)));
}

std::complex<double> c_hat(const LrdModel& model, std::complex<double> z,
                           const QuadratureConfig& q) {
    (void)q;
    return c_hat_complex(model, z);
}

double alpha_hat(const LrdModel& model, double y, const QuadratureConfig& q) {
    if (!(y > 0.0)) throw std::invalid_argument("alpha_hat: y must be positive");
    return 1.0 / (y * c_hat(model, y, q));
}

ArCoefficient ArCoefficient::closed_form(const LrdModel& model) {
    if (model.kind() != ModelKind::FbmClosedForm)
        throw std::invalid_argument("ArCoefficient::closed_form requires the fBm model");
    return ArCoefficient(model, ArMethod::ClosedForm);
}

ArCoefficient ArCoefficient::numeric_inversion(const LrdModel& model,
                                               const QuadratureConfig& q,
                                               int inversionNodes) {
    if (inversionNodes < 8)
        throw std::invalid_argument("numeric_inversion: need at least 8 contour nodes");
    ArCoefficient ar(model, ArMethod::NumericInversion);
    ar.inversionNodes_ = inversionNodes;

    const int perDec = 64;
    const double lo = 1e-6, hi = 1e6;
    const int n = static_cast<int>(std::round(std::log10(hi / lo) * perDec)) + 1;
    std::vector<double> ts(n), av(n), alv(n);
    for (int i = 0; i < n; ++i)
        ts[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1));
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        TalbotResult tr = talbot_invert(model, ts[i], inversionNodes);
        alv[i] = tr.alpha;
        av[i] = tr.a;
    });

    // positivity / monotonicity of a on the evaluated grid (Eq. 3.3)
    std::ostringstream bad;
    int badCount = 0;
    for (int i = 0; i < n; ++i) {
        bool ok = av[i] > 0.0 && alv[i] > 0.0;
        if (ok && i > 0) ok = av[i] <= av[i - 1] * (1.0 + 1e2 * q.relTol);
        if (!ok) {
            if (badCount < 8) bad << (badCount ? ", " : "") << "t=" << ts[i];
            ++badCount;
        }
    }
    if (badCount > 0)
        throw NumericError("numeric inversion unstable: a(t) not positive-nonincreasing at " +
                               std::to_string(badCount) + " node(s): " + bad.str(),
                           static_cast<double>(badCount));

    double d = model.hurst() - 0.5;
    double d0 = model.localIndex() - 0.5;
    ar.alphaTable_ = std::make_shared<detail::LogLogTable>(ts, alv, -d0, d);
    ar.aTable_ = std::make_shared<detail::LogLogTable>(ts, av, -(d0 + 1.0), d + 1.0);
    return ar;
}

double ArCoefficient::a(double t) const {
    if (!(t > 0.0)) throw std::invalid_argument("a(t): t must be positive");
    if (method_ == ArMethod::ClosedForm) {
        double H = model_.hurst();
        return (H - 0.5) * std::pow(t, -(H + 0.5)) / boost::math::tgamma(1.5 - H);
    }
    return (*aTable_)(t);
}

double ArCoefficient::alpha(double t) const {
    if (!(t > 0.0)) throw std::invalid_argument("alpha(t): t must be positive");
    if (method_ == ArMethod::ClosedForm) {
        double H = model_.hurst();
        return std::pow(t, 0.5 - H) / boost::math::tgamma(1.5 - H);
    }
    return (*alphaTable_)(t);
}

double eval_a(const ArCoefficient& ar, double t) { return ar.a(t); }
double eval_alpha(const ArCoefficient& ar, double t) { return ar.alpha(t); }

double eval_beta(const LrdModel& model, const ArCoefficient& ar, double t,
                 const QuadratureConfig& q) {
    if (!(t > 0.0)) throw std::invalid_argument("eval_beta: t must be positive");
    if (model.kind() == ModelKind::FbmClosedForm && ar.method() == ArMethod::ClosedForm) {
        double d = model.hurst() - 0.5;
        return std::sin(M_PI * d) / (M_PI * t);
    }
    // int_0^inf c(v) a(t+v) dv: Gauss-Jacobi on the c-singularity, graded rest
    double vc = std::min(1.0, t) * q.singularitySplit;
    double alphaExp = model.localIndex() - 1.5;
    GaussJacobiRule gj = gauss_jacobi(alphaExp, 24);
    double head = 0.0;
    for (std::size_t i = 0; i < gj.x.size(); ++i) {
        double v = vc * gj.x[i];
        double phi = model.c_fast(v) * std::pow(v, -alphaExp);
        head += gj.w[i] * phi * ar.a(t + v);
    }
    head *= std::pow(vc, alphaExp + 1.0);
    const GradedRule& r = graded_rule(24, 10);
    double rest = integrate_half_line(
        [&](double u) { return model.c_fast(vc + u) * ar.a(t + vc + u); }, std::max(t, vc), r);
    return head + rest;
}

double gaver_stehfest_alpha(const LrdModel& model, double t, const QuadratureConfig& q,
                            int order) {
    if (order % 2 != 0) throw std::invalid_argument("gaver_stehfest: order must be even");
    const int n = order, nh = n / 2;
    const double ln2t = std::log(2.0) / t;
    auto lfact = [](int k) { return std::lgamma(k + 1.0); };
    double acc = 0.0;
    for (int k = 1; k <= n; ++k) {
        double zeta = 0.0;
        for (int j = (k + 1) / 2; j <= std::min(k, nh); ++j) {
            double lg = nh * std::log(static_cast<double>(j)) + lfact(2 * j) - lfact(nh - j) -
                        lfact(j) - lfact(j - 1) - lfact(k - j) - lfact(2 * j - k);
            zeta += std::exp(lg);
        }
        if ((k + nh) % 2 != 0) zeta = -zeta;
        acc += zeta * alpha_hat(model, k * ln2t, q) ;
    }
    return ln2t * acc;
}

}  // namespace lrd
