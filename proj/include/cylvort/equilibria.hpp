#pragma once

// Equilibrium finding and certification: the unique ring equilibrium per
// cyclic ordering for same-sign vorticities, a Gershgorin-type spectral
// certificate for its restricted Hessian, and 3-vortex equilibria built
// from stagnation points of a 2-vortex field plus a completing vorticity.

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cylvort/cylinder.hpp"
#include "cylvort/dynamics.hpp"

namespace cylvort {

// Order of vortex indices around the circle, canonicalized to start at
// index 0 with the orientation that lists index 1 before index N-1.
class CyclicOrder {
public:
    explicit CyclicOrder(std::vector<std::size_t> perm);
    static CyclicOrder natural(std::size_t n);
    const std::vector<std::size_t>& order() const { return perm_; }
    std::size_t size() const { return perm_.size(); }

private:
    std::vector<std::size_t> perm_;
};

struct EquilibriumResult {
    Configuration configuration;
    double residual = 0.0;                // max vortex speed, full 2D field
    std::vector<double> hessian_spectrum; // ascending, includes the zero mode
    bool certified = false;               // zero simple eigenvalue, rest > 0, residual small
    int iterations = 0;
};

struct RingOptions {
    std::optional<std::vector<double>> initial_x; // circle positions in cyclic order, x of first vortex pinned to 0
    double grad_tol = 1e-12;
    double residual_tol = 1e-9;
    int max_iterations = 400;
};

// Minimize H restricted to the horizontal circle y = 0 over positions in the
// given cyclic order, gauge x_{first} = 0. All vorticities must share a sign.
// Damped Newton; the energy blows up when neighbor gaps close, and the line
// search rejects steps that leave the ordering's connected component.
EquilibriumResult ring_equilibrium(const std::vector<double>& vorticities,
                                   const CyclicOrder& order, const Cylinder& cyl,
                                   const RingOptions& opts = {});

// Hessian of H restricted to the circle coordinates (x_1..x_N, y frozen)
// at a configuration with every vortex on one horizontal line.
Eigen::MatrixXd ring_hessian(const Configuration& config);

struct CertificateResult {
    bool certified = false;
    std::string reason;                // violated hypothesis when not certified
    std::vector<double> eigenvalues;   // ascending, for cross-validation
};

// Hypotheses: A symmetric, off-diagonal entries < 0, diagonal > 0, zero row
// sums. Conclusion: 0 is a simple eigenvalue and all others are positive.
CertificateResult gershgorin_certificate(const Eigen::MatrixXd& A);

// The two points where the field induced by (z1, G1), (z2, G2), both
// vorticities positive, vanishes. Grid-seeded Newton with the analytic
// Jacobian; residual speed below 1e-10. Throws on non-convergence.
std::array<CylPoint, 2> stagnation_points(const CylPoint& z1, const CylPoint& z2,
                                          double g1, double g2, const Cylinder& cyl);

// Vorticity G3 at z3 (a stagnation point of the (z1, z2) field) that
// immobilizes z1; z2 is then immobile automatically, which is verified.
double completing_vorticity(const CylPoint& z1, const CylPoint& z2,
                            double g1, double g2, const CylPoint& z3,
                            const Cylinder& cyl);

// (max_k |velocity_k| < tol, the residual itself).
std::pair<bool, double> is_equilibrium(const Configuration& config, double tol);

} // namespace cylvort
