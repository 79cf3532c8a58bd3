#pragma once

// Reduced Hamiltonians for the split of a vortex pair into 3 or 4 vortices,
// embeddings back to full configurations, the relative-equilibrium saddle
// ordinate eta_re with its small-asymmetry expansion, the critical
// leapfrogging threshold rho, regime classification, and level-set grids.
//
// Everything here works at radius r = 1; denormalization is dimensional
// (lengths scale by r, vorticities fixed, times by r^2).

#include <complex>
#include <cstddef>
#include <vector>

#include "cylvort/cylinder.hpp"
#include "cylvort/dynamics.hpp"

namespace cylvort {

// 3-vortex split of the pair at c, -c: vorticities G, G', -G-G' at
//   c + 2G'/(G+G') zeta,  c - 2G/(G+G') zeta,  -c.
struct Split3 {
    std::complex<double> c;
    double gamma = 1.0;
    double gamma_prime = 1.0;
    std::complex<double> zeta;

    Split3(std::complex<double> c_, double gamma_, double gamma_prime_,
           std::complex<double> zeta_);
};

// 4-vortex split of the pair at ib, -ib: vorticities G, G', -G', -G at
//   ib + 2G'/(G+G') zeta,   ib - 2G/(G+G') zeta,
//   -ib - 2G/(G+G') conj(zeta),  -ib + 2G'/(G+G') conj(zeta).
// zeta = xi + i eta lives on C/piZ; construction canonicalizes xi into
// (-pi/2, pi/2] and rejects eta on the singular circles
// eta = -b(1+G/G')/2 and eta = b(1+G'/G)/2.
struct Split4 {
    double b = 1.0;
    double gamma = 1.0;
    double gamma_prime = 1.0;
    std::complex<double> zeta;

    Split4(double b_, double gamma_, double gamma_prime_, std::complex<double> zeta_);
};

// H with the pair's translation symmetry quotiented out. Equals the full
// Hamiltonian of the embedded configuration exactly (offset zero). Throws
// when zeta sits on a singular locus.
double reduced_h3(const Split3& s);
double reduced_h4(const Split4& s);

// Same evaluations without validation or throwing; singular loci come back
// as +/-inf or NaN. Used for grid sweeps.
double reduced_h3_raw(std::complex<double> c, double gamma, double gamma_prime,
                      std::complex<double> zeta);
double reduced_h4_raw(double b, double gamma, double gamma_prime,
                      double xi, double eta);

// Full configurations on the r = 1 cylinder.
Configuration embed3(const Split3& s);
Configuration embed4(const Split4& s);

// zeta(t) recovered from a 4-vortex trajectory in embed4 vortex order:
// zeta = (z_1 - z_2)/2 on the lifted chart.
std::vector<std::complex<double>> split4_zeta_series(const Trajectory& traj);

// Saddle ordinate on the line xi = pi/2: the unique root of
//   (G+G') tanh(eta) + (G-G') tanh(b - (G-G')/(G+G') eta)
//   - G coth(b + 2 eta/(1+G/G')) + G' coth(b - 2 eta/(1+G'/G)) = 0
// in the strip between the singular circles. Equal vorticities give 0.
// Requires b > 0.
double eta_re(double b, double gamma, double gamma_prime);

// Returns tanh(b) sech^2(b) (eps/2 - (1 + sech^4(b)/2) eps^2/4), a
// second-order approximation of eta_re for G/G' = 1 + eps.
// Caution: expanding the saddle equation itself gives the quadratic term
//   -tanh(b) sech^2(b) eps^2/4,
// so this formula agrees with eta_re only to O(eps^2), not O(eps^3).
double eta_re_perturbative(double b, double eps);

struct SeparatrixResult {
    std::complex<double> zeta_re; // saddle, xi_re = +pi/2
    double rho = 0.0;             // distance from zeta = 0 to the nearest separatrix crossing of the eta-axis
    double h_saddle = 0.0;
};

// Equal vorticities: rho solves sqrt(2) tanh(rho) = tanh(b) in closed form.
// Otherwise rho is the first eta-axis crossing of the level H = H(saddle),
// taken on both sides of the origin, nearest crossing wins. Requires b > 0.
SeparatrixResult rho_critical(double b, double gamma, double gamma_prime);

enum class Regime {
    leapfrog,
    pair_escape,
    near_separatrix,
};

// Compares H(zeta(0)) against the saddle level. Band for near_separatrix:
// |H - H_saddle| < 1e-6 * max(1, |H_saddle|).
Regime classify_regime(const Split4& s);

enum class SplitKind {
    split3,
    split4,
};

struct SplitParams {
    double gamma = 1.0;
    double gamma_prime = 1.0;
    std::complex<double> c = {0.0, 1.0}; // split3 only
    double b = 1.0;                      // split4 only
};

struct GridWindow {
    double xi_min, xi_max;
    double eta_min, eta_max;
};

// Rectangular sampling of a reduced Hamiltonian. Rows are stored with eta
// ascending (index 0 = eta_min); the text exporter emits eta descending.
struct LevelGrid {
    GridWindow window{};
    std::size_t nxi = 0;
    std::size_t neta = 0;
    std::vector<double> values;       // row-major [i_eta * nxi + j_xi], NaN when masked
    std::vector<unsigned char> mask;  // 1 = singular or clipped
    double divergence_cap = 0.0;      // |H| above this is masked

    double xi_at(std::size_t j) const;
    double eta_at(std::size_t i) const;
    double value(std::size_t i, std::size_t j) const { return values[i * nxi + j]; }
    bool masked(std::size_t i, std::size_t j) const { return mask[i * nxi + j] != 0; }
};

// Evaluate the reduced H over the window with nxi x neta samples. Cells with
// non-finite H or |H| > 50 |G G'| / 2pi are masked. Cell evaluation runs in
// parallel (see parallel.hpp).
LevelGrid level_grid(SplitKind kind, const SplitParams& params,
                     const GridWindow& window, std::size_t nxi, std::size_t neta);

} // namespace cylvort
