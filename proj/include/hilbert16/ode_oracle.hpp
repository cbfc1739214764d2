#pragma once

#include <optional>
#include <vector>

#include "hilbert16/poly.hpp"
#include "hilbert16/variational.hpp"

namespace hilbert16 {

struct Orbit {
    std::vector<Vec2> points;
    std::vector<double> times;
    std::optional<double> period;
    std::optional<double> return_map_derivative;
};

// Fixed-step RK4 trajectory of x' = P, y' = Q. Throws Blowup if the state
// norm exceeds 1e12.
Orbit integrate(const PlanarSystem& sys, Vec2 x0, double t_end, double h);

// Directed Poincare section: crossings of normal.(u - point) = 0 from the
// negative to the positive side.
struct Section {
    Vec2 point;
    Vec2 normal;
};

struct CycleOptions {
    double h = 1e-3;
    double time_cap = 200.0;
    int max_returns = 60;
    int K_out = 256;  // samples of the returned closed orbit
};

// Locates a limit cycle as a fixed point of the first-return map (secant
// iteration on the section coordinate). The returned orbit covers one period
// at K_out uniform time fractions, ready to feed descend. Flags center-like
// families (return-map derivative within 1e-3 of 1) as NonIsolated.
Orbit find_limit_cycle(const PlanarSystem& sys, const Section& section, Vec2 x0, double tol,
                       const CycleOptions& opts = {});

// Resamples the orbit to K uniform time fractions and evaluates the discrete
// E_0; near-zero values certify the orbit is (a reparametrized) true cycle.
double cycle_energy_check(const PlanarSystem& sys, const Orbit& orbit, int K);

// Uniform-time resampling of a periodic orbit into a DiscretizedPath.
DiscretizedPath orbit_to_path(const Orbit& orbit, int K);

}  // namespace hilbert16
