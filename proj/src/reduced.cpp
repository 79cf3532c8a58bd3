#include "cylvort/reduced.hpp"

#include "cylvort/parallel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace cylvort {

namespace {

constexpr double kPi = std::numbers::pi;

void check_strengths(double g, double gp) {
    if (!std::isfinite(g) || !std::isfinite(gp) || g * gp <= 0.0) {
        throw std::invalid_argument("split vorticities must be finite, nonzero, same sign");
    }
}

double log_abs_sin(const std::complex<double>& w) {
    // |sin(u+iv)|^2 = sin(u)^2 + sinh(v)^2, stable for small arguments.
    const double su = std::sin(w.real());
    const double sv = std::sinh(w.imag());
    return 0.5 * std::log(su * su + sv * sv);
}

// Circle ordinates where a like-signed vortex meets its opposite partner;
// the strip between them is the trunk containing zeta = 0.
double circle_low(double b, double g, double gp) { return -0.5 * b * (1.0 + g / gp); }
double circle_high(double b, double g, double gp) { return 0.5 * b * (1.0 + gp / g); }

} // namespace

Split3::Split3(std::complex<double> c_, double gamma_, double gamma_prime_,
               std::complex<double> zeta_)
    : c(c_), gamma(gamma_), gamma_prime(gamma_prime_), zeta(zeta_) {
    check_strengths(gamma, gamma_prime);
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()) ||
        !std::isfinite(zeta.real()) || !std::isfinite(zeta.imag())) {
        throw std::invalid_argument("split parameters must be finite");
    }
    if (std::abs(std::sin(c)) == 0.0) {
        throw std::invalid_argument("base pair positions c, -c must be distinct");
    }
}

Split4::Split4(double b_, double gamma_, double gamma_prime_, std::complex<double> zeta_)
    : b(b_), gamma(gamma_), gamma_prime(gamma_prime_), zeta(zeta_) {
    check_strengths(gamma, gamma_prime);
    if (!std::isfinite(b) || b <= 0.0) {
        throw std::invalid_argument("pair height b must be positive");
    }
    if (!std::isfinite(zeta.real()) || !std::isfinite(zeta.imag())) {
        throw std::invalid_argument("zeta must be finite");
    }
    const double xi = std::remainder(zeta.real(), kPi);
    zeta = {xi <= -kPi / 2.0 ? xi + kPi : xi, zeta.imag()};

    const double eta = zeta.imag();
    const double tol = 1e-12 * std::max(1.0, b);
    if (std::abs(eta - circle_low(b, gamma, gamma_prime)) < tol ||
        std::abs(eta - circle_high(b, gamma, gamma_prime)) < tol) {
        throw std::invalid_argument("zeta lies on a singular circle");
    }
}

double reduced_h3_raw(std::complex<double> c, double gamma, double gamma_prime,
                      std::complex<double> zeta) {
    const double sum = gamma + gamma_prime;
    const double t1 = (1.0 + gamma / gamma_prime) * log_abs_sin(c + zeta * (gamma_prime / sum));
    const double t2 = (1.0 + gamma_prime / gamma) * log_abs_sin(c - zeta * (gamma / sum));
    const double t3 = log_abs_sin(zeta);
    return gamma * gamma_prime / (2.0 * kPi) * ((t1 + t2) - t3);
}

double reduced_h3(const Split3& s) {
    const double H = reduced_h3_raw(s.c, s.gamma, s.gamma_prime, s.zeta);
    if (!std::isfinite(H)) {
        throw std::domain_error("reduced energy is singular at this zeta");
    }
    return H;
}

double reduced_h4_raw(double b, double gamma, double gamma_prime, double xi, double eta) {
    const double sum = gamma + gamma_prime;
    // The grouping below is mirror-symmetric: swapping the two strengths
    // while flipping eta permutes the summands without changing rounding.
    const double v = b - eta * (gamma - gamma_prime) / sum;
    const double ha = b + 2.0 * eta * gamma_prime / sum;
    const double hb = b - 2.0 * eta * gamma / sum;
    const double sx = std::sin(xi);
    const double sx2 = sx * sx;
    const double se = std::sinh(eta);
    const double sv = std::sinh(v);
    const double t1 = std::log(sx2 + sv * sv) - std::log(sx2 + se * se);
    const double t3 = (gamma / gamma_prime) * std::log(std::abs(std::sinh(ha)));
    const double t4 = (gamma_prime / gamma) * std::log(std::abs(std::sinh(hb)));
    return gamma * gamma_prime / (2.0 * kPi) * (t1 + (t3 + t4));
}

double reduced_h4(const Split4& s) {
    const double H = reduced_h4_raw(s.b, s.gamma, s.gamma_prime, s.zeta.real(), s.zeta.imag());
    if (!std::isfinite(H)) {
        throw std::domain_error("reduced energy is singular at this zeta");
    }
    return H;
}

Configuration embed3(const Split3& s) {
    const double sum = s.gamma + s.gamma_prime;
    const std::complex<double> z1 = s.c + 2.0 * s.gamma_prime / sum * s.zeta;
    const std::complex<double> z2 = s.c - 2.0 * s.gamma / sum * s.zeta;
    const std::complex<double> z3 = -s.c;
    return Configuration(Cylinder(1.0),
                         {{z1.real(), z1.imag()}, {z2.real(), z2.imag()}, {z3.real(), z3.imag()}},
                         {s.gamma, s.gamma_prime, -s.gamma - s.gamma_prime});
}

Configuration embed4(const Split4& s) {
    const double sum = s.gamma + s.gamma_prime;
    const std::complex<double> ib{0.0, s.b};
    const std::complex<double> zc = std::conj(s.zeta);
    const std::complex<double> z1 = ib + 2.0 * s.gamma_prime / sum * s.zeta;
    const std::complex<double> z2 = ib - 2.0 * s.gamma / sum * s.zeta;
    const std::complex<double> z3 = -ib - 2.0 * s.gamma / sum * zc;
    const std::complex<double> z4 = -ib + 2.0 * s.gamma_prime / sum * zc;
    return Configuration(Cylinder(1.0),
                         {{z1.real(), z1.imag()},
                          {z2.real(), z2.imag()},
                          {z3.real(), z3.imag()},
                          {z4.real(), z4.imag()}},
                         {s.gamma, s.gamma_prime, -s.gamma_prime, -s.gamma});
}

std::vector<std::complex<double>> split4_zeta_series(const Trajectory& traj) {
    if (traj.vorticities.size() != 4) {
        throw std::invalid_argument("split variable needs the four-vortex embedding order");
    }
    std::vector<std::complex<double>> zeta(traj.times.size());
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto z = traj.lifted_positions(i);
        zeta[i] = 0.5 * (z[0] - z[1]);
    }
    return zeta;
}

namespace {

// Stationarity along the eta-axis at xi = pi/2, up to a constant factor.
double saddle_equation(double b, double g, double gp, double eta) {
    const double sum = g + gp;
    const double v = b - eta * (g - gp) / sum;
    const double ha = b + 2.0 * eta * gp / sum;
    const double hb = b - 2.0 * eta * g / sum;
    return sum * std::tanh(eta) + (g - gp) * std::tanh(v) - g / std::tanh(ha) +
           gp / std::tanh(hb);
}

} // namespace

double eta_re(double b, double gamma, double gamma_prime) {
    check_strengths(gamma, gamma_prime);
    if (!std::isfinite(b) || b <= 0.0) {
        throw std::invalid_argument("pair height b must be positive");
    }
    if (gamma == gamma_prime) {
        return 0.0;
    }
    const double lo = circle_low(b, gamma, gamma_prime);
    const double hi = circle_high(b, gamma, gamma_prime);
    const double pad = 1e-13 * (hi - lo);
    double a = lo + pad;
    double c = hi - pad;
    double fa = saddle_equation(b, gamma, gamma_prime, a);
    double fc = saddle_equation(b, gamma, gamma_prime, c);
    if (!(fa < 0.0) || !(fc > 0.0)) {
        throw std::runtime_error("saddle equation does not bracket a root");
    }
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + c);
        const double fm = saddle_equation(b, gamma, gamma_prime, m);
        if (fm == 0.0) {
            return m;
        }
        if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
        } else {
            c = m;
        }
    }
    return 0.5 * (a + c);
}

double eta_re_perturbative(double b, double eps) {
    const double t = std::tanh(b);
    const double s2 = 1.0 / (std::cosh(b) * std::cosh(b));
    return t * s2 * (eps / 2.0 - (1.0 + s2 * s2 / 2.0) * eps * eps / 4.0);
}

SeparatrixResult rho_critical(double b, double gamma, double gamma_prime) {
    check_strengths(gamma, gamma_prime);
    if (!std::isfinite(b) || b <= 0.0) {
        throw std::invalid_argument("pair height b must be positive");
    }
    SeparatrixResult out;
    const double er = eta_re(b, gamma, gamma_prime);
    out.zeta_re = {kPi / 2.0, er};
    out.h_saddle = reduced_h4_raw(b, gamma, gamma_prime, kPi / 2.0, er);

    // First crossing of the saddle level along each half of the eta-axis,
    // bracketed away from the collision point and the singular circles.
    const double guard = 1e-6;
    auto first_crossing = [&](double limit) -> double {
        const double span = std::abs(limit) - 2.0 * guard;
        if (span <= 0.0) {
            return std::numeric_limits<double>::infinity();
        }
        const int steps = 4096;
        const double sign = limit > 0.0 ? 1.0 : -1.0;
        double prev = guard;
        double fprev =
            reduced_h4_raw(b, gamma, gamma_prime, 0.0, sign * prev) - out.h_saddle;
        for (int i = 1; i <= steps; ++i) {
            const double cur = guard + span * static_cast<double>(i) / steps;
            const double fcur =
                reduced_h4_raw(b, gamma, gamma_prime, 0.0, sign * cur) - out.h_saddle;
            if ((fprev > 0.0) != (fcur > 0.0)) {
                double a = prev, c = cur, fa = fprev;
                for (int it = 0; it < 200; ++it) {
                    const double m = 0.5 * (a + c);
                    const double fm =
                        reduced_h4_raw(b, gamma, gamma_prime, 0.0, sign * m) - out.h_saddle;
                    if (fm == 0.0) {
                        return m;
                    }
                    if ((fm > 0.0) == (fa > 0.0)) {
                        a = m;
                        fa = fm;
                    } else {
                        c = m;
                    }
                }
                return 0.5 * (a + c);
            }
            prev = cur;
            fprev = fcur;
        }
        return std::numeric_limits<double>::infinity();
    };

    const double up = first_crossing(circle_high(b, gamma, gamma_prime));
    const double down = first_crossing(circle_low(b, gamma, gamma_prime));
    out.rho = std::min(up, down);
    if (!std::isfinite(out.rho)) {
        throw std::runtime_error("no separatrix crossing on the eta axis");
    }
    return out;
}

Regime classify_regime(const Split4& s) {
    const double H = reduced_h4(s);
    const double hs = rho_critical(s.b, s.gamma, s.gamma_prime).h_saddle;
    const double band = 1e-6 * std::max(1.0, std::abs(hs));
    if (std::abs(H - hs) < band) {
        return Regime::near_separatrix;
    }
    return H > hs ? Regime::leapfrog : Regime::pair_escape;
}

double LevelGrid::xi_at(std::size_t j) const {
    return window.xi_min +
           (window.xi_max - window.xi_min) * static_cast<double>(j) /
               static_cast<double>(nxi - 1);
}

double LevelGrid::eta_at(std::size_t i) const {
    return window.eta_min +
           (window.eta_max - window.eta_min) * static_cast<double>(i) /
               static_cast<double>(neta - 1);
}

LevelGrid level_grid(SplitKind kind, const SplitParams& params, const GridWindow& window,
                     std::size_t nxi, std::size_t neta) {
    check_strengths(params.gamma, params.gamma_prime);
    if (nxi < 2 || neta < 2) {
        throw std::invalid_argument("grid needs at least 2 samples per axis");
    }
    if (!(window.xi_min < window.xi_max) || !(window.eta_min < window.eta_max)) {
        throw std::invalid_argument("grid window must be ordered");
    }
    LevelGrid grid;
    grid.window = window;
    grid.nxi = nxi;
    grid.neta = neta;
    grid.values.assign(nxi * neta, 0.0);
    grid.mask.assign(nxi * neta, 0);
    grid.divergence_cap =
        50.0 * std::abs(params.gamma * params.gamma_prime) / (2.0 * kPi);

    parallel_for(neta, [&](std::size_t i) {
        const double eta = grid.eta_at(i);
        for (std::size_t j = 0; j < nxi; ++j) {
            const double xi = grid.xi_at(j);
            double H;
            if (kind == SplitKind::split3) {
                H = reduced_h3_raw(params.c, params.gamma, params.gamma_prime, {xi, eta});
            } else {
                H = reduced_h4_raw(params.b, params.gamma, params.gamma_prime, xi, eta);
            }
            const std::size_t idx = i * nxi + j;
            if (!std::isfinite(H) || std::abs(H) > grid.divergence_cap) {
                grid.values[idx] = std::numeric_limits<double>::quiet_NaN();
                grid.mask[idx] = 1;
            } else {
                grid.values[idx] = H;
            }
        }
    });
    return grid;
}

} // namespace cylvort
