#include "lrd/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <Eigen/Dense>

namespace lrd {

void QuadratureConfig::validate() const {
    if (!(relTol > 0.0) || !(absTol > 0.0))
        throw std::invalid_argument("QuadratureConfig: relTol and absTol must be positive");
    if (!(truncationRadius > 0.0))
        throw std::invalid_argument("QuadratureConfig: truncationRadius must be positive");
    if (!(singularitySplit > 0.0) || singularitySplit >= truncationRadius)
        throw std::invalid_argument("QuadratureConfig: singularitySplit must be in (0, truncationRadius)");
    if (maxSubdivisions < 1)
        throw std::invalid_argument("QuadratureConfig: maxSubdivisions must be >= 1");
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Newton from the Chebyshev-based initial guess
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

const GradedRule& graded_rule(int nOct, int glOrder) {
    static std::mutex mtx;
    static std::map<std::pair<int, int>, GradedRule> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(nOct, glOrder);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    std::vector<double> gx, gw;
    gauss_legendre(glOrder, gx, gw);
    std::vector<double> edges;
    edges.push_back(0.0);
    for (int k = nOct; k >= 2; --k) edges.push_back(std::ldexp(1.0, -k));
    edges.push_back(0.5);
    for (int k = 2; k <= nOct; ++k) edges.push_back(1.0 - std::ldexp(1.0, -k));
    edges.push_back(1.0);

    GradedRule r;
    r.x.reserve((edges.size() - 1) * glOrder);
    r.w.reserve((edges.size() - 1) * glOrder);
    for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
        double mid = 0.5 * (edges[s] + edges[s + 1]);
        double half = 0.5 * (edges[s + 1] - edges[s]);
        for (int j = 0; j < glOrder; ++j) {
            r.x.push_back(mid + half * gx[j]);
            r.w.push_back(half * gw[j]);
        }
    }
    return cache.emplace(key, std::move(r)).first->second;
}

GaussJacobiRule gauss_jacobi(double alpha, int n) {
    if (!(alpha > -1.0)) throw std::invalid_argument("gauss_jacobi: alpha must exceed -1");
    // Jacobi weight (1+xi)^alpha on [-1,1]  (a=0, b=alpha), then map to [0,1].
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    const double b = alpha;
    J(0, 0) = b / (b + 2.0);
    for (int k = 1; k < n; ++k) {
        double s = 2.0 * k + b;
        J(k, k) = b * b / (s * (s + 2.0));
        double bk2;
        if (k == 1)
            bk2 = 4.0 * (1.0 + b) / ((2.0 + b) * (2.0 + b) * (3.0 + b));
        else {
            double num = 2.0 * k * (k + b) / s;
            bk2 = num * num / ((s + 1.0) * (s - 1.0));
        }
        J(k, k - 1) = J(k - 1, k) = std::sqrt(bk2);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    const double mu0 = std::pow(2.0, b + 1.0) / (b + 1.0);
    GaussJacobiRule rule;
    rule.alpha = alpha;
    rule.x.resize(n);
    rule.w.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.x[i] = 0.5 * (1.0 + es.eigenvalues()(i));
        double v0 = es.eigenvectors()(0, i);
        // the [0,1] map contributes 2^{-alpha-1}
        rule.w[i] = mu0 * v0 * v0 * std::pow(2.0, -alpha - 1.0);
    }
    return rule;
}

double integrate01(const std::function<double(double)>& f, const GradedRule& r) {
    double acc = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i) acc += r.w[i] * f(r.x[i]);
    return acc;
}

double integrate_graded(const std::function<double(double)>& f, double a, double b,
                        const GradedRule& r) {
    const double len = b - a;
    double acc = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i) acc += r.w[i] * f(a + len * r.x[i]);
    return acc * len;
}

double integrate_half_line(const std::function<double(double)>& f, double scale,
                           const GradedRule& r) {
    double acc = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
        double om = 1.0 - r.x[i];
        double u = scale * r.x[i] / om;
        acc += r.w[i] * f(u) * scale / (om * om);
    }
    return acc;
}

double integrate_from(const std::function<double(double)>& f, double a, double scale,
                      const GradedRule& r) {
    return integrate_half_line([&](double u) { return f(a + u); }, scale, r);
}

namespace {
// nested adaptive integrals must not share one integrator instance: a small
// per-thread pool indexed by recursion depth
boost::math::quadrature::tanh_sinh<double>& ts_integrator(int depth) {
    thread_local std::vector<std::unique_ptr<boost::math::quadrature::tanh_sinh<double>>> pool;
    while (static_cast<int>(pool.size()) <= depth)
        pool.emplace_back(std::make_unique<boost::math::quadrature::tanh_sinh<double>>(15));
    return *pool[depth];
}
struct DepthGuard {
    static int& depth() {
        thread_local int d = 0;
        return d;
    }
    DepthGuard() { ++depth(); }
    ~DepthGuard() { --depth(); }
};
}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const QuadratureConfig& q) {
    if (a == b) return 0.0;
    // keep evaluations strictly inside (a,b): integrable endpoint
    // singularities stay finite at the nearest representable point
    const double lo = std::nextafter(a, b), hi = std::nextafter(b, a);
    auto g = [&](double x) { return f(std::min(std::max(x, lo), hi)); };
    DepthGuard guard;
    double err = 0.0, l1 = 0.0;
    double v = ts_integrator(DepthGuard::depth()).integrate(g, a, b, q.relTol, &err, &l1);
    // the estimate is conservative near kinks and boundary layers; flag only
    // genuine non-convergence (NaN or percent-level residual), not tolerance
    // shortfalls of a few decades -- oracle tests guard actual accuracy
    double scale = std::max(std::abs(v), l1);
    double bound = std::max(100.0 * q.absTol, std::max(1e4 * q.relTol, 5e-3) * scale);
    if (!(std::isfinite(v)) || (err > bound && err > q.absTol))
        throw NumericError("integrate_adaptive: tolerance not reached on [" +
                               std::to_string(a) + "," + std::to_string(b) + "]",
                           err);
    return v;
}

double integrate_adaptive_half_line(const std::function<double(double)>& f, double a,
                                    double scale, const QuadratureConfig& q) {
    double cut = a + std::max(scale, 1e-300);
    double head = integrate_adaptive(f, a, cut, q);
    // sequential divisions so that underflowing w*w cannot produce 0/0;
    // w below 1e-300 maps past any representable decay scale
    double tail = integrate_adaptive(
        [&](double w) { return w < 1e-300 ? 0.0 : f(1.0 / w) / w / w; }, 0.0, 1.0 / cut, q);
    return head + tail;
}

namespace {
constexpr int kHaltonPrimes[8] = {2, 3, 5, 7, 11, 13, 17, 19};
double radical_inverse(std::uint64_t i, int base) {
    double inv = 1.0 / base, f = inv, r = 0.0;
    while (i > 0) {
        r += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return r;
}
}  // namespace

HaltonSequence::HaltonSequence(int dim, std::uint64_t shiftSeed) : dim_(dim) {
    if (dim < 1 || dim > 8) throw std::invalid_argument("HaltonSequence: dim must be in [1,8]");
    shift_.assign(dim, 0.0);
    if (shiftSeed != 0) {
        std::uint64_t s = shiftSeed;
        for (int k = 0; k < dim; ++k)
            shift_[k] = static_cast<double>(splitmix64(s) >> 11) * 0x1p-53;
    }
}

void HaltonSequence::point(std::uint64_t i, double* out) const {
    for (int k = 0; k < dim_; ++k) {
        double v = radical_inverse(i + 1, kHaltonPrimes[k]) + shift_[k];
        v -= std::floor(v);
        // keep strictly inside (0,1) for the x/(1-x) maps downstream
        out[k] = std::min(std::max(v, 0x1p-53), 1.0 - 0x1p-53);
    }
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    std::uint64_t a = splitmix64(s);
    (void)splitmix64(s);
    return a ^ splitmix64(s);
}

namespace detail {

LogLogTable::LogLogTable(std::vector<double> x, const std::vector<double>& y, double pLo,
                         double pHi)
    : pLo_(pLo), pHi_(pHi) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 4) throw std::invalid_argument("LogLogTable: need >= 4 nodes");
    lx_.resize(n);
    ly_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw std::invalid_argument("LogLogTable: nodes must be positive");
        lx_[i] = std::log(x[i]);
        ly_[i] = std::log(y[i]);
    }
    // clamped cubic spline: end slopes prescribed so the spline joins the
    // power-law extensions C^1 (front slope = pLo; back slope from a
    // one-sided 3-point difference)
    double sFront = pLo;
    double sBack;
    {
        double h1 = lx_[n - 2] - lx_[n - 3], h2 = lx_[n - 1] - lx_[n - 2];
        sBack = ly_[n - 3] * h2 / (h1 * (h1 + h2)) - ly_[n - 2] * (h1 + h2) / (h1 * h2) +
                ly_[n - 1] * (2.0 * h2 + h1) / (h2 * (h1 + h2));
    }
    std::vector<double> h(n - 1), rhs(n, 0.0), diag(n, 0.0), m2(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = lx_[i + 1] - lx_[i];
    diag[0] = 2.0 * h[0];
    rhs[0] = 6.0 * ((ly_[1] - ly_[0]) / h[0] - sFront);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        diag[i] = 2.0 * (h[i - 1] + h[i]);
        rhs[i] = 6.0 * ((ly_[i + 1] - ly_[i]) / h[i] - (ly_[i] - ly_[i - 1]) / h[i - 1]);
    }
    diag[n - 1] = 2.0 * h[n - 2];
    rhs[n - 1] = 6.0 * (sBack - (ly_[n - 1] - ly_[n - 2]) / h[n - 2]);
    // Thomas solve (sub/super diagonals are h[i-1] / h[i])
    for (std::size_t i = 1; i < n; ++i) {
        double m = h[i - 1] / diag[i - 1];
        diag[i] -= m * h[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    m2[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i >= 1; --i) {
        m2[i - 1] = (rhs[i - 1] - h[i - 1] * m2[i]) / diag[i - 1];
    }
    m_.resize(n);
    for (std::size_t i = 0; i + 1 < n; ++i)
        m_[i] = (ly_[i + 1] - ly_[i]) / h[i] - h[i] * (2.0 * m2[i] + m2[i + 1]) / 6.0;
    m_[n - 1] = sBack;

    // upper tail: y = (A + B ln t) t^{-p}, matched C^1 to the spline at the
    // last node: value w_N = y t^p and log-slope m_N = -p + B/w_N there.
    const double xN = lx_[n - 1];
    const double wN = std::exp(ly_[n - 1] + pHi * xN);
    tailB_ = wN * (m_[n - 1] + pHi);
    tailA_ = wN - tailB_ * xN;
}

double LogLogTable::xmin() const { return std::exp(lx_.front()); }
double LogLogTable::xmax() const { return std::exp(lx_.back()); }

double LogLogTable::operator()(double x) const {
    if (!(x > 0.0)) throw std::domain_error("LogLogTable: argument must be positive");
    if (x > 1e300) return pHi_ > 0.0 ? 0.0 : std::exp(ly_.back());
    double lx = std::log(x);
    if (lx <= lx_.front()) return std::exp(ly_.front() + pLo_ * (lx - lx_.front()));
    if (lx >= lx_.back()) {
        double lin = tailA_ + tailB_ * lx;
        if (lin <= 0.0)  // fitted log-correction crossed zero; pure power fallback
            return std::exp(ly_.back() - pHi_ * (lx - lx_.back()));
        return lin * std::exp(-pHi_ * lx);
    }
    auto it = std::upper_bound(lx_.begin(), lx_.end(), lx);
    std::size_t i = static_cast<std::size_t>(it - lx_.begin()) - 1;
    double h = lx_[i + 1] - lx_[i];
    double t = (lx - lx_[i]) / h;
    double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
    double h10 = t * (1.0 - t) * (1.0 - t);
    double h01 = t * t * (3.0 - 2.0 * t);
    double h11 = t * t * (t - 1.0);
    double ly = h00 * ly_[i] + h10 * h * m_[i] + h01 * ly_[i + 1] + h11 * h * m_[i + 1];
    return std::exp(ly);
}

}  // namespace detail

}  // namespace lrd
