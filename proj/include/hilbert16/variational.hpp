#pragma once

#include <map>
#include <vector>

#include "hilbert16/poly.hpp"

namespace hilbert16 {

// K uniform samples u(t_k), t_k = k/K, of a 1-periodic plane curve. K must be
// even and >= 16; periodicity is index arithmetic, no duplicated endpoint.
struct DiscretizedPath {
    std::vector<double> x;
    std::vector<double> y;

    DiscretizedPath() = default;
    DiscretizedPath(std::vector<double> xs, std::vector<double> ys);

    int K() const { return (int)x.size(); }

    static DiscretizedPath circle(int K, double radius, Vec2 center = {0.0, 0.0});
    static DiscretizedPath constant(int K, Vec2 p);
    static DiscretizedPath zero(int K) { return constant(K, {0.0, 0.0}); }
};

// Spectral differentiation: Fourier mode m is multiplied by (2*pi*i*m)^order,
// the Nyquist mode zeroed for odd orders. Exact for trigonometric polynomials
// of degree < K/2. order in {1, 2, 4}.
DiscretizedPath derivative(const DiscretizedPath& path, int order);
std::vector<double> spectral_derivative(const std::vector<double>& samples, int order);

// Trigonometric interpolation onto K2 samples (zero-padding / truncation).
DiscretizedPath resample(const DiscretizedPath& path, int K2);

// Time reflection t -> -t; flips the winding number, preserves E0. Useful to
// bring clockwise orbits into the winding +1 class before descending.
DiscretizedPath reverse_time(const DiscretizedPath& path);

struct EnergyConfig {
    double epsilon = 0.0;
    DiscretizedPath v_eps;  // empty means the zero path
};

double energy_E0(const DiscretizedPath& path, const PlanarSystem& sys);
double h2_norm_sq(const DiscretizedPath& path);
double h2_inner(const DiscretizedPath& a, const DiscretizedPath& b);
double energy_Eeps(const DiscretizedPath& path, const PlanarSystem& sys, const EnergyConfig& cfg);

// Exact gradient of the discrete objective with respect to the 2K sample
// coordinates, laid out [x_0..x_{K-1}, y_0..y_{K-1}].
std::vector<double> gradient_E0(const DiscretizedPath& path, const PlanarSystem& sys);
std::vector<double> gradient_Eeps(const DiscretizedPath& path, const PlanarSystem& sys,
                                  const EnergyConfig& cfg);

struct WindingInfo {
    bool regular;
    int value;         // valid only when regular
    double min_speed;  // min_k |u'(t_k)|
    int require() const {
        if (!regular) throw Error(errc::irregular_path, "path has a vanishing tangent sample");
        return value;
    }
};

WindingInfo winding_number(const DiscretizedPath& path, double reg_tol = 1e-8);

struct DescendOptions {
    int max_iters = 50000;
    double grad_tol = 1e-8;
    double initial_step = 1e-2;
    double armijo_c = 1e-4;
    double min_step = 1e-18;
    bool h2_precondition = false;
    int trace_stride = 1;  // record every n-th iterate in the trace
};

struct TracePoint {
    int iter;
    double energy;
    double grad_norm;
    int winding;
};

enum class StopReason { Converged, MaxIters, StepFloor };

struct DescendResult {
    DiscretizedPath path;
    std::vector<TracePoint> trace;
    StopReason reason;
    double energy;
    double grad_norm;
};

// Backtracking steepest descent on E_eps (E_0 when cfg.epsilon == 0),
// restricted to the winding-number +1 class: steps that break the winding are
// halved away, and the path stays regular along the whole accepted sequence.
DescendResult descend(const DiscretizedPath& start, const PlanarSystem& sys,
                      const EnergyConfig& cfg, const DescendOptions& opts = {});

// L2 norm of the Euler-Lagrange defect
//   eps(u''''-u''+u) - d/dt[(F^perp(u).u') F^perp(u)]
//   + (F^perp(u).u') (u')^T DF^perp(u) + v'''' - v'' + v
// with spectral time derivatives.
double el_residual(const DiscretizedPath& path, const PlanarSystem& sys, const EnergyConfig& cfg);

struct ZProfile {
    std::vector<double> z;          // Z(t_k) = P y' - Q x'
    double z2_mean;
    double z2_var;
    std::vector<double> div_along;  // Div(u(t_k))
};

ZProfile z_profile(const DiscretizedPath& path, const PlanarSystem& sys);

// m smallest eigenvalues of the symmetrized finite-difference Hessian of the
// discrete energy (central differences of the analytic gradient, step 1e-5).
std::vector<double> hessian_spectrum(const DiscretizedPath& path, const PlanarSystem& sys,
                                     const EnergyConfig& cfg, int m);

// Count of eigenvalues below -index_tol, index_tol = 1e-6 (1 + |lambda_max|).
// Requires the path to be approximately critical: |grad| <= 10 * grad_tol.
int morse_index(const DiscretizedPath& path, const PlanarSystem& sys, const EnergyConfig& cfg,
                double grad_tol = 1e-8);

struct MorseCensus {
    std::map<int, int> counts;      // index k -> M_k
    long long alternating_sum;      // sum (-1)^k M_k
    bool valley_identity;           // alternating_sum == 1
};

MorseCensus morse_census(const std::vector<int>& indices);

// v_eps = c * eps * (cos 2 pi t, sin 2 pi t) with c chosen so that
// ||v_eps||_{H^2} = amplitude_factor * eps; smooth, one-to-one, winding +1.
DiscretizedPath make_v_eps(double epsilon, int K, double amplitude_factor);

}  // namespace hilbert16
