#pragma once

// Relative periodic orbit and relative equilibrium detection on trajectories,
// the vortex-pair drift law, the 2n-vortex street family, and winding-angle
// diagnostics.

#include <complex>
#include <optional>
#include <vector>

#include "cylvort/cylinder.hpp"
#include "cylvort/dynamics.hpp"

namespace cylvort {

struct RelativePeriodReport {
    double period = 0.0;              // 0 with continuous_closure set for relative equilibria
    bool continuous_closure = false;
    std::complex<double> drift;       // translation accumulated over one period (unwrapped)
    double residual = 0.0;            // shape_distance at closure
    std::optional<double> winding;    // total change of arg zeta, when supplied by the caller
};

// Smallest T with shape_distance(config(T), config(0)) < tol: coarse scan of
// the stored samples, then golden-section refinement on the continuous flow
// (re-integrating short spans with the supplied integrator settings).
// A trajectory whose shape never leaves the tol-ball is reported as a
// continuous closure with the T = 0 sentinel. Empty optional when no closure
// exists within the horizon.
std::optional<RelativePeriodReport> detect_relative_period(const Trajectory& traj,
                                                           double tol,
                                                           const IntegratorConfig& icfg = {});

// Sum of wrapped angle increments of a series avoiding 0; each increment is
// assumed below pi in magnitude, which the caller's sampling density must
// guarantee. Throws when a sample is too close to 0 to carry an angle.
double winding_angle(const std::vector<std::complex<double>>& zeta_series);

struct PairDrift {
    Velocity v;              // common velocity of both vortices (exact by antisymmetry)
    double slope = 0.0;      // -sin((x2-x1)/r) / sinh((y2-y1)/r)
    bool vertical = false;   // y2 == y1 with sin != 0: infinite slope
};

// Drift of the pair (G at z1, -G at z2).
PairDrift vortex_pair_drift(const CylPoint& z1, const CylPoint& z2, double gamma,
                            const Cylinder& cyl);

// 2n vortices: +G row at heights b, x = 2 pi r l / n, and -G row at heights
// -b, x = a + 2 pi r l / n (l = 0..n-1). A relative equilibrium.
Configuration vortex_street_family(int n, double a, double b, double gamma,
                                   const Cylinder& cyl);

struct RelEqCheck {
    bool is_relative_equilibrium = false;
    Velocity common_velocity;
    double max_deviation = 0.0;      // max_k |v_k - mean|
    bool consistent = true;          // nonzero total vorticity forces |common| < tol
};

// True iff every vortex moves with the common mean velocity within tol.
// When the total vorticity is nonzero a passing check must have common
// velocity below tol as well; `consistent` records that cross-check.
RelEqCheck verify_relative_equilibrium(const Configuration& config, double tol);

} // namespace cylvort
