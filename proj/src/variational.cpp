#include "hilbert16/variational.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <unordered_map>

namespace hilbert16 {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// FFTW plans cached per transform length. Plan creation is serialized; the
// new-array execute interface keeps execution reentrant.
class FftEngine {
public:
    static FftEngine& instance() {
        static FftEngine e;
        return e;
    }

    // spectrum of real data: K/2+1 complex bins
    void forward(const std::vector<double>& in, std::vector<std::complex<double>>& out) {
        const int k = (int)in.size();
        const Plans& p = plans(k);
        std::vector<double> buf(in);
        out.assign(k / 2 + 1, {});
        fftw_execute_dft_r2c(p.fwd, buf.data(), reinterpret_cast<fftw_complex*>(out.data()));
    }

    void inverse(std::vector<std::complex<double>>& spec, std::vector<double>& out, int k) {
        const Plans& p = plans(k);
        out.assign(k, 0.0);
        fftw_execute_dft_c2r(p.inv, reinterpret_cast<fftw_complex*>(spec.data()), out.data());
        const double s = 1.0 / k;
        for (double& v : out) v *= s;
    }

private:
    struct Plans {
        fftw_plan fwd = nullptr;
        fftw_plan inv = nullptr;
    };

    const Plans& plans(int k) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(k);
        if (it != cache_.end()) return it->second;
        std::vector<double> real(k);
        std::vector<std::complex<double>> cplx(k / 2 + 1);
        Plans p;
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        p.fwd = fftw_plan_dft_r2c_1d(k, real.data(),
                                     reinterpret_cast<fftw_complex*>(cplx.data()), flags);
        p.inv = fftw_plan_dft_c2r_1d(k, reinterpret_cast<fftw_complex*>(cplx.data()), real.data(),
                                     flags);
        return cache_.emplace(k, p).first->second;
    }

    std::mutex mu_;
    std::unordered_map<int, Plans> cache_;
};

void check_even_k(int k) {
    if (k < 16 || k % 2 != 0)
        throw Error(errc::usage, "paths need K >= 16 samples with K even");
}

std::vector<double> poly_on_path(const BivariatePoly& p, const DiscretizedPath& u) {
    const int k = u.K();
    std::vector<double> out(k);
    for (int i = 0; i < k; ++i) out[i] = p.eval(u.x[i], u.y[i]);
    return out;
}

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double t : v) s += t;
    return s / v.size();
}

struct SysDerivs {
    BivariatePoly px, py, qx, qy;
    explicit SysDerivs(const PlanarSystem& s)
        : px(s.P.derivative(Var::X)),
          py(s.P.derivative(Var::Y)),
          qx(s.Q.derivative(Var::X)),
          qy(s.Q.derivative(Var::Y)) {}
};

}  // namespace

DiscretizedPath::DiscretizedPath(std::vector<double> xs, std::vector<double> ys)
    : x(std::move(xs)), y(std::move(ys)) {
    if (x.size() != y.size()) throw Error(errc::usage, "x and y sample counts differ");
    check_even_k((int)x.size());
}

DiscretizedPath DiscretizedPath::circle(int K, double radius, Vec2 center) {
    check_even_k(K);
    std::vector<double> xs(K), ys(K);
    for (int k = 0; k < K; ++k) {
        const double t = kTwoPi * k / K;
        xs[k] = center.x + radius * std::cos(t);
        ys[k] = center.y + radius * std::sin(t);
    }
    return DiscretizedPath(std::move(xs), std::move(ys));
}

DiscretizedPath DiscretizedPath::constant(int K, Vec2 p) {
    check_even_k(K);
    return DiscretizedPath(std::vector<double>(K, p.x), std::vector<double>(K, p.y));
}

std::vector<double> spectral_derivative(const std::vector<double>& samples, int order) {
    if (order != 1 && order != 2 && order != 4)
        throw Error(errc::usage, "derivative order must be 1, 2 or 4");
    const int k = (int)samples.size();
    auto& fft = FftEngine::instance();
    std::vector<std::complex<double>> spec;
    fft.forward(samples, spec);
    for (int m = 0; m <= k / 2; ++m) {
        const std::complex<double> iw(0.0, kTwoPi * m);
        std::complex<double> mult = 1.0;
        for (int o = 0; o < order; ++o) mult *= iw;
        if (order % 2 == 1 && m == k / 2) mult = 0.0;  // Nyquist has no sign
        spec[m] *= mult;
    }
    std::vector<double> out;
    fft.inverse(spec, out, k);
    return out;
}

DiscretizedPath derivative(const DiscretizedPath& path, int order) {
    return DiscretizedPath(spectral_derivative(path.x, order), spectral_derivative(path.y, order));
}

DiscretizedPath resample(const DiscretizedPath& path, int K2) {
    check_even_k(K2);
    const int k = path.K();
    auto& fft = FftEngine::instance();
    auto one = [&](const std::vector<double>& in) {
        std::vector<std::complex<double>> spec;
        fft.forward(in, spec);
        std::vector<std::complex<double>> spec2(K2 / 2 + 1, 0.0);
        const int keep = std::min(k / 2, K2 / 2);
        const double scale = double(K2) / k;
        for (int m = 0; m <= keep; ++m) spec2[m] = spec[m] * scale;
        if (keep == k / 2 && K2 > k) spec2[keep] *= 0.5;  // split the old Nyquist bin
        if (K2 < k) spec2[K2 / 2] = spec2[K2 / 2].real();  // new Nyquist must be real
        std::vector<double> out;
        fft.inverse(spec2, out, K2);
        return out;
    };
    return DiscretizedPath(one(path.x), one(path.y));
}

DiscretizedPath reverse_time(const DiscretizedPath& path) {
    const int k = path.K();
    std::vector<double> xs(k), ys(k);
    for (int i = 0; i < k; ++i) {
        xs[i] = path.x[(k - i) % k];
        ys[i] = path.y[(k - i) % k];
    }
    return DiscretizedPath(std::move(xs), std::move(ys));
}

double energy_E0(const DiscretizedPath& path, const PlanarSystem& sys) {
    const int k = path.K();
    const DiscretizedPath d1 = derivative(path, 1);
    const std::vector<double> pv = poly_on_path(sys.P, path);
    const std::vector<double> qv = poly_on_path(sys.Q, path);
    double acc = 0.0;
    for (int i = 0; i < k; ++i) {
        const double z = pv[i] * d1.y[i] - qv[i] * d1.x[i];
        acc += 0.5 * z * z;
    }
    return acc / k;
}

double h2_inner(const DiscretizedPath& a, const DiscretizedPath& b) {
    if (a.K() != b.K()) throw Error(errc::usage, "paths have different K");
    const int k = a.K();
    const DiscretizedPath a1 = derivative(a, 1), a2 = derivative(a, 2);
    const DiscretizedPath b1 = derivative(b, 1), b2 = derivative(b, 2);
    double acc = 0.0;
    for (int i = 0; i < k; ++i) {
        acc += a.x[i] * b.x[i] + a.y[i] * b.y[i];
        acc += a1.x[i] * b1.x[i] + a1.y[i] * b1.y[i];
        acc += a2.x[i] * b2.x[i] + a2.y[i] * b2.y[i];
    }
    return acc / k;
}

double h2_norm_sq(const DiscretizedPath& path) { return h2_inner(path, path); }

double energy_Eeps(const DiscretizedPath& path, const PlanarSystem& sys,
                   const EnergyConfig& cfg) {
    double e = energy_E0(path, sys);
    if (cfg.epsilon == 0.0 && cfg.v_eps.K() == 0) return e;
    if (cfg.epsilon <= 0.0) throw Error(errc::usage, "energy_Eeps requires epsilon > 0");
    e += 0.5 * cfg.epsilon * h2_norm_sq(path);
    if (cfg.v_eps.K() != 0) {
        if (cfg.v_eps.K() != path.K())
            throw Error(errc::usage, "v_eps must share the path's K");
        e += h2_inner(path, cfg.v_eps);
        e += 0.5 / cfg.epsilon * h2_norm_sq(cfg.v_eps);
    }
    return e;
}

std::vector<double> gradient_E0(const DiscretizedPath& path, const PlanarSystem& sys) {
    const int k = path.K();
    const SysDerivs d(sys);
    const DiscretizedPath d1 = derivative(path, 1);
    const std::vector<double> pv = poly_on_path(sys.P, path);
    const std::vector<double> qv = poly_on_path(sys.Q, path);
    const std::vector<double> pxv = poly_on_path(d.px, path);
    const std::vector<double> pyv = poly_on_path(d.py, path);
    const std::vector<double> qxv = poly_on_path(d.qx, path);
    const std::vector<double> qyv = poly_on_path(d.qy, path);

    std::vector<double> z(k), zq(k), zp(k);
    for (int i = 0; i < k; ++i) {
        z[i] = pv[i] * d1.y[i] - qv[i] * d1.x[i];
        zq[i] = z[i] * qv[i];
        zp[i] = z[i] * pv[i];
    }
    // adjoint of the first-order spectral operator is its negative
    const std::vector<double> dzq = spectral_derivative(zq, 1);
    const std::vector<double> dzp = spectral_derivative(zp, 1);

    std::vector<double> g(2 * k);
    for (int i = 0; i < k; ++i) {
        g[i] = (z[i] * (pxv[i] * d1.y[i] - qxv[i] * d1.x[i]) + dzq[i]) / k;
        g[k + i] = (z[i] * (pyv[i] * d1.y[i] - qyv[i] * d1.x[i]) - dzp[i]) / k;
    }
    return g;
}

std::vector<double> gradient_Eeps(const DiscretizedPath& path, const PlanarSystem& sys,
                                  const EnergyConfig& cfg) {
    std::vector<double> g = gradient_E0(path, sys);
    if (cfg.epsilon == 0.0 && cfg.v_eps.K() == 0) return g;
    if (cfg.epsilon <= 0.0) throw Error(errc::usage, "gradient_Eeps requires epsilon > 0");
    const int k = path.K();
    auto add_h2_gradient = [k, &g](const DiscretizedPath& w, double factor) {
        const std::vector<double> wx2 = spectral_derivative(w.x, 2);
        const std::vector<double> wy2 = spectral_derivative(w.y, 2);
        const std::vector<double> wx4 = spectral_derivative(w.x, 4);
        const std::vector<double> wy4 = spectral_derivative(w.y, 4);
        for (int i = 0; i < k; ++i) {
            g[i] += factor * (w.x[i] - wx2[i] + wx4[i]) / k;
            g[k + i] += factor * (w.y[i] - wy2[i] + wy4[i]) / k;
        }
    };
    add_h2_gradient(path, cfg.epsilon);
    if (cfg.v_eps.K() != 0) {
        if (cfg.v_eps.K() != path.K()) throw Error(errc::usage, "v_eps must share the path's K");
        add_h2_gradient(cfg.v_eps, 1.0);
    }
    return g;
}

WindingInfo winding_number(const DiscretizedPath& path, double reg_tol) {
    const DiscretizedPath d1 = derivative(path, 1);
    const int k = path.K();
    double min_speed = std::numeric_limits<double>::infinity();
    double max_speed = 0.0;
    for (int i = 0; i < k; ++i) {
        const double s = std::hypot(d1.x[i], d1.y[i]);
        min_speed = std::min(min_speed, s);
        max_speed = std::max(max_speed, s);
    }
    // regularity is scale-free: the slowest sample must not collapse
    // relative to the fastest one
    WindingInfo info{min_speed > reg_tol * max_speed, 0, min_speed};
    if (!info.regular) return info;
    double total = 0.0;
    double prev = std::atan2(d1.y[0], d1.x[0]);
    for (int i = 1; i <= k; ++i) {
        const int j = i % k;
        const double ang = std::atan2(d1.y[j], d1.x[j]);
        double delta = ang - prev;
        while (delta > std::numbers::pi) delta -= kTwoPi;
        while (delta <= -std::numbers::pi) delta += kTwoPi;
        total += delta;
        prev = ang;
    }
    info.value = (int)std::lround(total / kTwoPi);
    return info;
}

namespace {

// mode-wise division by 1 + (2 pi m)^2 + (2 pi m)^4
std::vector<double> h2_precondition(const std::vector<double>& samples) {
    const int k = (int)samples.size();
    auto& fft = FftEngine::instance();
    std::vector<std::complex<double>> spec;
    fft.forward(samples, spec);
    for (int m = 0; m <= k / 2; ++m) {
        const double w = kTwoPi * m;
        spec[m] /= 1.0 + w * w + w * w * w * w;
    }
    std::vector<double> out;
    fft.inverse(spec, out, k);
    return out;
}

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double t : v) s += t * t;
    return std::sqrt(s);
}

}  // namespace

DescendResult descend(const DiscretizedPath& start, const PlanarSystem& sys,
                      const EnergyConfig& cfg, const DescendOptions& opts) {
    const WindingInfo w0 = winding_number(start);
    if (!w0.regular || w0.value != 1)
        throw Error(errc::winding_broken,
                    "descend requires a regular start path with winding number +1");

    const bool eps_mode = cfg.epsilon > 0.0;
    auto objective = [&](const DiscretizedPath& u) {
        return eps_mode ? energy_Eeps(u, sys, cfg) : energy_E0(u, sys);
    };
    auto grad = [&](const DiscretizedPath& u) {
        return eps_mode ? gradient_Eeps(u, sys, cfg) : gradient_E0(u, sys);
    };

    const int k = start.K();
    DiscretizedPath path = start;
    double f = objective(path);
    if (!std::isfinite(f)) throw Error(errc::non_finite, "energy non-finite at the start path");
    std::vector<double> g = grad(path);
    double gn = norm2(g);

    DescendResult res;
    res.trace.push_back(TracePoint{0, f, gn, 1});
    if (gn <= opts.grad_tol) {
        res.path = path;
        res.reason = StopReason::Converged;
        res.energy = f;
        res.grad_norm = gn;
        return res;
    }

    double step = opts.initial_step;
    StopReason reason = StopReason::MaxIters;

    auto direction = [&](const std::vector<double>& grad_vec) {
        std::vector<double> dir = grad_vec;
        if (opts.h2_precondition) {
            std::vector<double> dx(grad_vec.begin(), grad_vec.begin() + k);
            std::vector<double> dy(grad_vec.begin() + k, grad_vec.end());
            dx = h2_precondition(dx);
            dy = h2_precondition(dy);
            std::copy(dx.begin(), dx.end(), dir.begin());
            std::copy(dy.begin(), dy.end(), dir.begin() + k);
        }
        return dir;
    };

    std::vector<double> dir = direction(g);
    std::vector<double> prev_dir;
    double prev_alpha = 0.0;

    for (int iter = 1; iter <= opts.max_iters; ++iter) {
        double slope = 0.0;
        for (int i = 0; i < 2 * k; ++i) slope += g[i] * dir[i];

        // Barzilai-Borwein initial step from the previous accepted move,
        // safeguarded by the Armijo backtracking below
        double alpha = step;
        if (!prev_dir.empty()) {
            double ss = 0.0, sy = 0.0;
            for (int i = 0; i < 2 * k; ++i) {
                const double s = -prev_alpha * prev_dir[i];
                ss += s * s;
                sy += s * (dir[i] - prev_dir[i]);
            }
            if (sy > 0.0 && ss > 0.0) {
                const double bb = ss / sy;
                alpha = std::clamp(bb, step / 1024.0, step * 1024.0);
            }
        }
        bool accepted = false;
        bool winding_blocked = false;
        DiscretizedPath cand;
        double fc = 0.0;
        while (alpha >= opts.min_step) {
            cand = path;
            for (int i = 0; i < k; ++i) {
                cand.x[i] -= alpha * dir[i];
                cand.y[i] -= alpha * dir[k + i];
            }
            const WindingInfo wc = winding_number(cand);
            if (!wc.regular || wc.value != 1) {
                winding_blocked = true;
                alpha *= 0.5;
                continue;
            }
            winding_blocked = false;
            fc = objective(cand);
            if (std::isfinite(fc) && fc <= f - opts.armijo_c * alpha * slope) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            if (winding_blocked)
                throw Error(errc::winding_broken,
                            "no winding-preserving step above the minimal step size");
            reason = StopReason::StepFloor;
            break;
        }

        path = std::move(cand);
        f = fc;
        if (!std::isfinite(f)) throw Error(errc::non_finite, "energy became non-finite");
        g = grad(path);
        gn = norm2(g);
        prev_dir = std::move(dir);
        prev_alpha = alpha;
        dir = direction(g);
        step = alpha * 2.0;
        if (iter % opts.trace_stride == 0 || gn <= opts.grad_tol)
            res.trace.push_back(TracePoint{iter, f, gn, 1});
        if (gn <= opts.grad_tol) {
            reason = StopReason::Converged;
            break;
        }
    }

    res.path = std::move(path);
    res.reason = reason;
    res.energy = f;
    res.grad_norm = gn;
    return res;
}

double el_residual(const DiscretizedPath& path, const PlanarSystem& sys,
                   const EnergyConfig& cfg) {
    const int k = path.K();
    const SysDerivs d(sys);
    const DiscretizedPath d1 = derivative(path, 1);
    const std::vector<double> pv = poly_on_path(sys.P, path);
    const std::vector<double> qv = poly_on_path(sys.Q, path);
    const std::vector<double> pxv = poly_on_path(d.px, path);
    const std::vector<double> pyv = poly_on_path(d.py, path);
    const std::vector<double> qxv = poly_on_path(d.qx, path);
    const std::vector<double> qyv = poly_on_path(d.qy, path);

    std::vector<double> z(k), gx(k), gy(k);
    for (int i = 0; i < k; ++i) {
        z[i] = pv[i] * d1.y[i] - qv[i] * d1.x[i];
        gx[i] = -z[i] * qv[i];  // Z * F_perp, F_perp = (-Q, P)
        gy[i] = z[i] * pv[i];
    }
    const std::vector<double> dgx = spectral_derivative(gx, 1);
    const std::vector<double> dgy = spectral_derivative(gy, 1);

    std::vector<double> rx(k, 0.0), ry(k, 0.0);
    if (cfg.epsilon > 0.0) {
        const DiscretizedPath u2 = derivative(path, 2), u4 = derivative(path, 4);
        for (int i = 0; i < k; ++i) {
            rx[i] += cfg.epsilon * (u4.x[i] - u2.x[i] + path.x[i]);
            ry[i] += cfg.epsilon * (u4.y[i] - u2.y[i] + path.y[i]);
        }
    }
    for (int i = 0; i < k; ++i) {
        rx[i] += -dgx[i] + z[i] * (d1.x[i] * -qxv[i] + d1.y[i] * pxv[i]);
        ry[i] += -dgy[i] + z[i] * (d1.x[i] * -qyv[i] + d1.y[i] * pyv[i]);
    }
    if (cfg.v_eps.K() != 0) {
        if (cfg.v_eps.K() != k) throw Error(errc::usage, "v_eps must share the path's K");
        const DiscretizedPath v2 = derivative(cfg.v_eps, 2), v4 = derivative(cfg.v_eps, 4);
        for (int i = 0; i < k; ++i) {
            rx[i] += v4.x[i] - v2.x[i] + cfg.v_eps.x[i];
            ry[i] += v4.y[i] - v2.y[i] + cfg.v_eps.y[i];
        }
    }
    double acc = 0.0;
    for (int i = 0; i < k; ++i) acc += rx[i] * rx[i] + ry[i] * ry[i];
    return std::sqrt(acc / k);
}

ZProfile z_profile(const DiscretizedPath& path, const PlanarSystem& sys) {
    const int k = path.K();
    const DiscretizedPath d1 = derivative(path, 1);
    const std::vector<double> pv = poly_on_path(sys.P, path);
    const std::vector<double> qv = poly_on_path(sys.Q, path);
    ZProfile zp;
    zp.z.resize(k);
    for (int i = 0; i < k; ++i) zp.z[i] = pv[i] * d1.y[i] - qv[i] * d1.x[i];
    std::vector<double> z2(k);
    for (int i = 0; i < k; ++i) z2[i] = zp.z[i] * zp.z[i];
    zp.z2_mean = mean(z2);
    double var = 0.0;
    for (double v : z2) var += (v - zp.z2_mean) * (v - zp.z2_mean);
    zp.z2_var = var / k;
    zp.div_along = poly_on_path(divergence(sys), path);
    return zp;
}

namespace {

Eigen::MatrixXd assemble_hessian(const DiscretizedPath& path, const PlanarSystem& sys,
                                 const EnergyConfig& cfg, double fd_step) {
    const int k = path.K();
    const int n = 2 * k;
    Eigen::MatrixXd h(n, n);
    DiscretizedPath probe = path;
    auto coord = [&probe, k](int j) -> double& {
        return j < k ? probe.x[j] : probe.y[j - k];
    };
    for (int j = 0; j < n; ++j) {
        const double saved = coord(j);
        coord(j) = saved + fd_step;
        const std::vector<double> gp = gradient_Eeps(probe, sys, cfg);
        coord(j) = saved - fd_step;
        const std::vector<double> gm = gradient_Eeps(probe, sys, cfg);
        coord(j) = saved;
        for (int i = 0; i < n; ++i) h(i, j) = (gp[i] - gm[i]) / (2.0 * fd_step);
    }
    return h;
}

}  // namespace

std::vector<double> hessian_spectrum(const DiscretizedPath& path, const PlanarSystem& sys,
                                     const EnergyConfig& cfg, int m) {
    const int n = 2 * path.K();
    if (m < 1 || m > n) throw Error(errc::usage, "requested eigenvalue count out of range");
    Eigen::MatrixXd h = assemble_hessian(path, sys, cfg, 1e-5);
    if (!h.allFinite()) throw Error(errc::non_finite, "Hessian contains non-finite entries");
    const Eigen::MatrixXd sym = 0.5 * (h + h.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    std::vector<double> lo(es.eigenvalues().data(), es.eigenvalues().data() + m);
    return lo;  // Eigen returns eigenvalues in increasing order
}

int morse_index(const DiscretizedPath& path, const PlanarSystem& sys, const EnergyConfig& cfg,
                double grad_tol) {
    const std::vector<double> g = gradient_Eeps(path, sys, cfg);
    if (norm2(g) > 10.0 * grad_tol)
        throw Error(errc::not_critical, "gradient norm " + std::to_string(norm2(g)) +
                                            " too large for an index computation");
    const int n = 2 * path.K();
    Eigen::MatrixXd h = assemble_hessian(path, sys, cfg, 1e-5);
    if (!h.allFinite()) throw Error(errc::non_finite, "Hessian contains non-finite entries");
    const Eigen::MatrixXd sym = 0.5 * (h + h.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    const double lambda_max = es.eigenvalues()(n - 1);
    const double index_tol = 1e-6 * (1.0 + std::abs(lambda_max));
    int idx = 0;
    for (int i = 0; i < n; ++i)
        if (es.eigenvalues()(i) < -index_tol) ++idx;
    return idx;
}

MorseCensus morse_census(const std::vector<int>& indices) {
    MorseCensus c{{}, 0, false};
    for (int i : indices) {
        if (i < 0) throw Error(errc::usage, "Morse indices are nonnegative");
        c.counts[i]++;
    }
    for (const auto& [k, m] : c.counts) c.alternating_sum += (k % 2 == 0 ? 1ll : -1ll) * m;
    c.valley_identity = c.alternating_sum == 1;
    return c;
}

DiscretizedPath make_v_eps(double epsilon, int K, double amplitude_factor) {
    if (epsilon <= 0.0) throw Error(errc::usage, "make_v_eps requires epsilon > 0");
    check_even_k(K);
    const double w2 = kTwoPi * kTwoPi;
    const double unit_norm = std::sqrt(1.0 + w2 + w2 * w2);  // ||(cos,sin)||_{H^2}
    const double c = amplitude_factor / unit_norm;
    return DiscretizedPath::circle(K, c * epsilon);
}

}  // namespace hilbert16
