#pragma once

// Hamiltonian and velocity field of N point vortices on the cylinder,
// adaptive time integration with conserved-quantity recording, and the
// center-of-vorticity first integral for zero-total-vorticity partitions.
//
// With s = (x_k - x_l)/r, t = (y_k - y_l)/r and
// D = sin^2(s/2) + sinh^2(t/2):
//
//   H       = -(1/4pi) sum_{k<l} G_k G_l log D_kl
//   dx_k/dt = -(1/8pi r) sum_{l != k} G_l sinh(t) / D_kl
//   dy_k/dt = +(1/8pi r) sum_{l != k} G_l sin(s)  / D_kl

#include <complex>
#include <cstddef>
#include <vector>

#include "cylvort/cylinder.hpp"

namespace cylvort {

struct Velocity {
    double vx = 0.0;
    double vy = 0.0;
};

enum class Scheme {
    rk4_fixed,
    dopri45, // adaptive embedded Dormand-Prince 5(4)
};

struct IntegratorConfig {
    Scheme scheme = Scheme::dopri45;
    double rtol = 1e-10;
    double atol = 1e-12;
    double fixed_step = 1e-3;          // rk4_fixed only
    double initial_step = 1e-3;
    double min_step_factor = 1e-14;    // h_min = factor * max(1, t_final)
    double collision_guard = 1e-6;     // abort below guard * radius
    double max_move_fraction = 0.25;   // per-step displacement cap, fraction of pi*r
    double sample_stride = 0.0;        // > 0: land exactly on multiples of this
};

enum class StopReason {
    completed,
    collision,
    step_underflow,
};

struct Trajectory {
    Cylinder cylinder;
    std::vector<double> vorticities;
    std::vector<double> times;
    std::vector<std::vector<CylPoint>> positions; // canonical (wrapped) samples
    std::vector<UnwrappedPath> unwrapped;         // lifted abscissae per sample
    std::vector<double> energy;                   // H at each sample
    std::vector<std::complex<double>> momentum;   // sum G_k z_k, unwrapped chart
    StopReason stop_reason = StopReason::completed;
    double stop_time = 0.0;                       // time of early halt, if any
    std::size_t collision_pair[2] = {0, 0};       // offending indices on collision

    std::size_t samples() const { return times.size(); }
    Configuration configuration_at(std::size_t i) const;
    // Lifted complex positions x_unwrapped + i y at sample i.
    std::vector<std::complex<double>> lifted_positions(std::size_t i) const;
};

double hamiltonian(const Configuration& config);

Velocity velocity(const Configuration& config, std::size_t k);
std::vector<Velocity> velocities(const Configuration& config);

// Passive-tracer velocity at p induced by every vortex. Throws when p sits
// within the singular guard of a vortex.
Velocity induced_velocity_at(const Configuration& config, const CylPoint& p);

// Integrate to t_final > 0 from the configuration, recording every accepted
// step (plus exact landings on sample_stride multiples when set). Halts
// early, with the partial trajectory, when a pairwise quotient distance
// falls below the collision guard or the step size underflows.
Trajectory integrate(const Configuration& config, double t_final,
                     const IntegratorConfig& icfg = {});

// Local momentum map P = sum G_k z_k on the unwrapped chart.
std::complex<double> momentum_of(const Trajectory& traj, std::size_t sample);
// Chart fixed by the canonical representatives.
std::complex<double> momentum_of(const Configuration& config);

// Disjoint index groups covering 0..N-1, each with nonzero vorticity sum.
struct Partition {
    std::vector<std::size_t> first;
    std::vector<std::size_t> second;
};

// (sum G'z'/sum G') - (sum G''z''/sum G''); requires total vorticity zero.
// A first integral of the flow on any chart.
std::complex<double> center_vector(const Configuration& config, const Partition& part);
std::complex<double> center_vector(const Trajectory& traj, std::size_t sample,
                                   const Partition& part);

} // namespace cylvort
