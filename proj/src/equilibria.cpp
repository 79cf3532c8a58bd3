#include "cylvort/equilibria.hpp"

#include "cylvort/dynamics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace cylvort {

namespace {

constexpr double kPi = std::numbers::pi;

} // namespace

CyclicOrder::CyclicOrder(std::vector<std::size_t> perm) : perm_(std::move(perm)) {
    const std::size_t N = perm_.size();
    if (N == 0) {
        throw std::invalid_argument("cyclic order must be non-empty");
    }
    std::vector<char> seen(N, 0);
    for (std::size_t k : perm_) {
        if (k >= N || seen[k]) {
            throw std::invalid_argument("cyclic order must be a permutation of 0..N-1");
        }
        seen[k] = 1;
    }
    // Canonical representative: start at vortex 0, orient so that the
    // successor of 0 has the smaller index of the two neighbours.
    const auto at0 = std::find(perm_.begin(), perm_.end(), std::size_t{0});
    std::rotate(perm_.begin(), at0, perm_.end());
    if (N > 2 && perm_[1] > perm_[N - 1]) {
        std::reverse(perm_.begin() + 1, perm_.end());
    }
}

CyclicOrder CyclicOrder::natural(std::size_t n) {
    std::vector<std::size_t> order(n);
    for (std::size_t k = 0; k < n; ++k) {
        order[k] = k;
    }
    return CyclicOrder(std::move(order));
}

namespace {

// Gradient of the aligned-ring interaction energy with respect to the
// angular positions, one entry per vortex.
std::vector<double> ring_gradient(const std::vector<double>& x, const std::vector<double>& gam,
                                  double r) {
    const std::size_t N = x.size();
    std::vector<double> g(N, 0.0);
    const double coef = 1.0 / (4.0 * kPi * r);
    for (std::size_t k = 0; k < N; ++k) {
        for (std::size_t l = k + 1; l < N; ++l) {
            const double c = std::tan((x[k] - x[l]) / (2.0 * r));
            const double cot = 1.0 / c;
            g[k] -= coef * gam[k] * gam[l] * cot;
            g[l] += coef * gam[k] * gam[l] * cot;
        }
    }
    return g;
}

Eigen::MatrixXd ring_hessian_raw(const std::vector<double>& x, const std::vector<double>& gam,
                                 double r) {
    const std::size_t N = x.size();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(N),
                                              static_cast<Eigen::Index>(N));
    const double coef = 1.0 / (8.0 * kPi * r * r);
    for (std::size_t k = 0; k < N; ++k) {
        for (std::size_t l = 0; l < N; ++l) {
            if (l == k) {
                continue;
            }
            const double s = std::sin((x[k] - x[l]) / (2.0 * r));
            const double w = coef * gam[k] * gam[l] / (s * s);
            M(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = -w;
            M(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) += w;
        }
    }
    return M;
}

double ring_energy(const std::vector<double>& x, const std::vector<double>& gam, double r) {
    double H = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        for (std::size_t l = k + 1; l < x.size(); ++l) {
            const double s = std::sin((x[k] - x[l]) / (2.0 * r));
            H += gam[k] * gam[l] * std::log(s * s);
        }
    }
    return -H / (4.0 * kPi);
}

} // namespace

Eigen::MatrixXd ring_hessian(const Configuration& config) {
    const std::size_t N = config.size();
    const double r = config.cylinder().radius;
    for (std::size_t k = 1; k < N; ++k) {
        if (std::abs(config.points()[k].y - config.points()[0].y) > 1e-9 * r) {
            throw std::invalid_argument("ring hessian requires an aligned configuration");
        }
    }
    std::vector<double> x(N);
    for (std::size_t k = 0; k < N; ++k) {
        x[k] = config.points()[k].x;
    }
    return ring_hessian_raw(x, config.vorticities(), r);
}

CertificateResult gershgorin_certificate(const Eigen::MatrixXd& M) {
    CertificateResult out;
    out.certified = false;
    const Eigen::Index N = M.rows();
    if (N == 0 || M.cols() != N) {
        out.reason = "matrix must be square and non-empty";
        return out;
    }
    double scale = M.cwiseAbs().maxCoeff();
    if (scale == 0.0) {
        scale = 1.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (M + M.transpose()));
    out.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + N);

    if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        out.reason = "matrix is not symmetric";
        return out;
    }
    for (Eigen::Index k = 0; k < N; ++k) {
        if (M(k, k) <= 0.0) {
            out.reason = "diagonal entries must be positive";
            return out;
        }
        double row = 0.0;
        for (Eigen::Index l = 0; l < N; ++l) {
            if (l != k && M(k, l) >= 0.0) {
                out.reason = "off-diagonal entries must be negative";
                return out;
            }
            row += M(k, l);
        }
        if (std::abs(row) > 1e-10 * scale) {
            out.reason = "row sums must vanish";
            return out;
        }
    }
    // Discs sit in [0, 2*diag]; the all-ones kernel vector accounts for the
    // zero eigenvalue and negative couplings make it simple.
    out.certified = true;
    out.reason = "zero eigenvalue is simple, remaining spectrum positive";
    return out;
}

EquilibriumResult ring_equilibrium(const std::vector<double>& vorticities,
                                   const CyclicOrder& order, const Cylinder& cyl,
                                   const RingOptions& opts) {
    const std::size_t N = vorticities.size();
    if (N == 0) {
        throw std::invalid_argument("need at least one vorticity");
    }
    if (order.size() != N) {
        throw std::invalid_argument("cyclic order size must match vorticity count");
    }
    for (double g : vorticities) {
        if (!std::isfinite(g) || g == 0.0) {
            throw std::invalid_argument("vorticities must be finite and nonzero");
        }
        if (g * vorticities[0] < 0.0) {
            throw std::invalid_argument("ring equilibria require same-sign vorticities");
        }
    }

    const double r = cyl.radius;
    const double L = cyl.circumference();
    const std::vector<std::size_t>& chain = order.order();

    // Chain coordinates u_j = x_{chain[j]}, gauge u_0 = 0, strictly
    // increasing inside (0, L) so the prescribed cyclic order is kept.
    std::vector<double> u(N);
    if (opts.initial_x) {
        if (opts.initial_x->size() != N) {
            throw std::invalid_argument("initial positions size must match vorticity count");
        }
        const double base = (*opts.initial_x)[chain[0]];
        for (std::size_t j = 0; j < N; ++j) {
            double v = wrap((*opts.initial_x)[chain[j]] - base, cyl);
            u[j] = v;
        }
        for (std::size_t j = 1; j < N; ++j) {
            if (u[j] <= u[j - 1]) {
                throw std::invalid_argument(
                    "initial positions do not realize the requested cyclic order");
            }
        }
    } else {
        for (std::size_t j = 0; j < N; ++j) {
            u[j] = static_cast<double>(j) * L / static_cast<double>(N);
        }
    }

    auto chain_to_x = [&](const std::vector<double>& uc) {
        std::vector<double> x(N);
        for (std::size_t j = 0; j < N; ++j) {
            x[chain[j]] = uc[j];
        }
        return x;
    };
    auto feasible = [&](const std::vector<double>& uc) {
        if (uc[0] != 0.0) {
            return false;
        }
        for (std::size_t j = 1; j < N; ++j) {
            if (uc[j] <= uc[j - 1] + 1e-14 * L) {
                return false;
            }
        }
        return uc[N - 1] < L - 1e-14 * L;
    };

    int iterations = 0;
    if (N > 1) {
        const Eigen::Index m = static_cast<Eigen::Index>(N - 1);
        std::vector<double> x = chain_to_x(u);
        double energy = ring_energy(x, vorticities, r);
        for (; iterations < opts.max_iterations; ++iterations) {
            const std::vector<double> grad = ring_gradient(x, vorticities, r);
            double gmax = 0.0;
            for (double g : grad) {
                gmax = std::max(gmax, std::abs(g));
            }
            if (gmax < opts.grad_tol) {
                break;
            }

            const Eigen::MatrixXd M = ring_hessian_raw(x, vorticities, r);
            Eigen::MatrixXd Mr(m, m);
            Eigen::VectorXd gr(m);
            for (std::size_t j = 1; j < N; ++j) {
                gr(static_cast<Eigen::Index>(j - 1)) = grad[chain[j]];
                for (std::size_t l = 1; l < N; ++l) {
                    Mr(static_cast<Eigen::Index>(j - 1), static_cast<Eigen::Index>(l - 1)) =
                        M(static_cast<Eigen::Index>(chain[j]),
                          static_cast<Eigen::Index>(chain[l]));
                }
            }
            Eigen::VectorXd du = Mr.ldlt().solve(-gr);

            double step = 1.0;
            bool moved = false;
            std::vector<double> trial(N);
            while (step > 1e-14) {
                trial[0] = 0.0;
                for (std::size_t j = 1; j < N; ++j) {
                    trial[j] = u[j] + step * du(static_cast<Eigen::Index>(j - 1));
                }
                if (feasible(trial)) {
                    const std::vector<double> xt = chain_to_x(trial);
                    const double et = ring_energy(xt, vorticities, r);
                    if (et < energy + 1e-14 * std::abs(energy)) {
                        u = trial;
                        x = xt;
                        energy = et;
                        moved = true;
                        break;
                    }
                }
                step *= 0.5;
            }
            if (!moved) {
                break;
            }
        }
    }

    std::vector<CylPoint> pts(N);
    const std::vector<double> x = chain_to_x(u);
    for (std::size_t k = 0; k < N; ++k) {
        pts[k] = {wrap(x[k], cyl), 0.0};
    }
    EquilibriumResult out{Configuration(cyl, pts, vorticities), 0.0, {}, false, iterations};

    const auto [ok, residual] = is_equilibrium(out.configuration, opts.residual_tol);
    out.residual = residual;
    if (N > 1) {
        const Eigen::MatrixXd M = ring_hessian(out.configuration);
        const CertificateResult cert = gershgorin_certificate(M);
        out.hessian_spectrum = cert.eigenvalues;
        out.certified = cert.certified && ok;
    } else {
        out.hessian_spectrum = {0.0};
        out.certified = false;
    }
    return out;
}

namespace {

struct TracerField {
    CylPoint z1, z2;
    double g1, g2, r;

    Velocity value(const CylPoint& p) const {
        const double coef = 1.0 / (8.0 * kPi * r);
        Velocity v{0.0, 0.0};
        const CylPoint zs[2] = {z1, z2};
        const double gs[2] = {g1, g2};
        for (int i = 0; i < 2; ++i) {
            const double dx = p.x - zs[i].x;
            const double dy = p.y - zs[i].y;
            const double su = std::sin(dx / (2.0 * r));
            const double sv = std::sinh(dy / (2.0 * r));
            const double D = su * su + sv * sv;
            v.vx -= coef * gs[i] * std::sinh(dy / r) / D;
            v.vy += coef * gs[i] * std::sin(dx / r) / D;
        }
        return v;
    }

    // Analytic Jacobian of the tracer velocity; traceless and symmetric.
    void jacobian(const CylPoint& p, double J[2][2]) const {
        J[0][0] = J[0][1] = J[1][0] = J[1][1] = 0.0;
        const double coef = 1.0 / (16.0 * kPi * r * r);
        const CylPoint zs[2] = {z1, z2};
        const double gs[2] = {g1, g2};
        for (int i = 0; i < 2; ++i) {
            const double s = (p.x - zs[i].x) / r;
            const double t = (p.y - zs[i].y) / r;
            const double su = std::sin(s / 2.0);
            const double sv = std::sinh(t / 2.0);
            const double D = su * su + sv * sv;
            const double D2 = D * D;
            const double a = coef * gs[i] * std::sinh(t) * std::sin(s) / D2;
            const double b = coef * gs[i] * (std::cos(s) * std::cosh(t) - 1.0) / D2;
            J[0][0] += a;
            J[0][1] += b;
            J[1][0] += b;
            J[1][1] -= a;
        }
    }
};

} // namespace

std::array<CylPoint, 2> stagnation_points(const CylPoint& z1, const CylPoint& z2, double g1,
                                          double g2, const Cylinder& cyl) {
    if (!std::isfinite(g1) || !std::isfinite(g2) || g1 == 0.0 || g2 == 0.0) {
        throw std::invalid_argument("vorticities must be finite and nonzero");
    }
    const double r = cyl.radius;
    const double L = cyl.circumference();
    const TracerField field{{wrap(z1.x, cyl), z1.y}, {wrap(z2.x, cyl), z2.y}, g1, g2, r};
    if (quotient_distance(field.z1, field.z2, cyl) < Configuration::kCollisionFactor * r) {
        throw std::domain_error("vortices collide");
    }

    const double ylo = std::min(z1.y, z2.y) - 3.0 * r;
    const double yhi = std::max(z1.y, z2.y) + 3.0 * r;
    const double vscale = (std::abs(g1) + std::abs(g2)) / (8.0 * kPi * r);

    auto solve_from = [&](CylPoint p) -> std::optional<CylPoint> {
        for (int it = 0; it < 80; ++it) {
            const Velocity v = field.value(p);
            if (std::hypot(v.vx, v.vy) < 1e-13 * vscale) {
                return CylPoint{wrap(p.x, cyl), p.y};
            }
            double J[2][2];
            field.jacobian(p, J);
            const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
            if (std::abs(det) < 1e-300) {
                return std::nullopt;
            }
            double dx = (-v.vx * J[1][1] + v.vy * J[0][1]) / det;
            double dy = (-v.vy * J[0][0] + v.vx * J[1][0]) / det;
            const double step = std::hypot(dx, dy);
            if (step > 0.5 * r) {
                dx *= 0.5 * r / step;
                dy *= 0.5 * r / step;
            }
            p.x += dx;
            p.y += dy;
            if (p.y < ylo - r || p.y > yhi + r) {
                return std::nullopt;
            }
        }
        return std::nullopt;
    };

    std::vector<CylPoint> roots;
    auto attempt = [&](CylPoint seed) {
        const auto root = solve_from(seed);
        if (!root) {
            return;
        }
        for (const CylPoint& q : roots) {
            if (quotient_distance(*root, q, cyl) < 1e-5 * r) {
                return;
            }
        }
        roots.push_back(*root);
    };

    auto search = [&](int nx, int ny, bool prefilter) {
        for (int i = 0; i < nx; ++i) {
            for (int j = 0; j <= ny; ++j) {
                CylPoint p{(static_cast<double>(i) + 0.5) * L / nx,
                           ylo + (yhi - ylo) * static_cast<double>(j) / ny};
                if (quotient_distance(p, field.z1, cyl) < 0.05 * r ||
                    quotient_distance(p, field.z2, cyl) < 0.05 * r) {
                    continue;
                }
                if (prefilter) {
                    const Velocity v = field.value(p);
                    if (std::hypot(v.vx, v.vy) > 2.0 * vscale) {
                        continue;
                    }
                }
                attempt(p);
            }
        }
    };

    // The root pinched between a tight pair has a slow-speed basin smaller
    // than any reasonable grid spacing, so the shortest-arc midpoint and
    // its antipode are tried before the grid sweeps.
    const double mid_x = field.z1.x + 0.5 * std::remainder(field.z2.x - field.z1.x, L);
    const double mid_y = 0.5 * (field.z1.y + field.z2.y);
    attempt({mid_x, mid_y});
    attempt({mid_x + 0.5 * L, mid_y});
    if (roots.size() != 2) {
        search(48, 48, true);
    }
    if (roots.size() != 2) {
        search(128, 96, false);
    }
    if (roots.size() != 2) {
        throw std::runtime_error("expected exactly two stagnation points");
    }
    std::sort(roots.begin(), roots.end(), [](const CylPoint& a, const CylPoint& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    return {roots[0], roots[1]};
}

double completing_vorticity(const CylPoint& z1, const CylPoint& z2, double g1, double g2,
                            const CylPoint& z3, const Cylinder& cyl) {
    const double r = cyl.radius;
    using C = std::complex<double>;
    const C w12 = C(z1.x - z2.x, z1.y - z2.y) / (2.0 * r);
    const C w13 = C(z1.x - z3.x, z1.y - z3.y) / (2.0 * r);
    const C w21 = -w12;
    const C w23 = C(z2.x - z3.x, z2.y - z3.y) / (2.0 * r);
    auto cot = [](const C& w) { return std::cos(w) / std::sin(w); };

    const C c13 = cot(w13);
    const C c23 = cot(w23);
    if (std::abs(c13) < 1e-12 || std::abs(c23) < 1e-12) {
        throw std::domain_error("no finite vorticity completes this point");
    }
    // Stationarity of the first vortex fixes the strength; the second
    // vortex must then come out stationary as well, which we verify.
    const C cand1 = -g2 * cot(w12) / c13;
    const C cand2 = -g1 * cot(w21) / c23;
    const double scale = std::abs(cand1) + std::abs(cand2) + std::abs(g1) + std::abs(g2);
    if (std::abs(cand1.imag()) > 1e-9 * scale || std::abs(cand2.imag()) > 1e-9 * scale) {
        throw std::domain_error("completing vorticity is not real at this point");
    }
    if (std::abs(cand1 - cand2) > 1e-8 * scale) {
        throw std::domain_error("completion leaves the second vortex moving");
    }
    const double g3 = cand1.real();

    if (std::abs(g3) > 1e-12 * scale) {
        const Configuration full(cyl, {z1, z2, z3}, {g1, g2, g3});
        const auto [ok, residual] = is_equilibrium(full, 1e-8 * std::max(1.0, scale) / r);
        if (!ok) {
            throw std::runtime_error("completed configuration is not an equilibrium, residual " +
                                     std::to_string(residual));
        }
    }
    return g3;
}

std::pair<bool, double> is_equilibrium(const Configuration& config, double tol) {
    double worst = 0.0;
    for (const Velocity& v : velocities(config)) {
        worst = std::max(worst, std::hypot(v.vx, v.vy));
    }
    return {worst < tol, worst};
}

} // namespace cylvort
