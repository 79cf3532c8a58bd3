#include "cylvort/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cylvort {

namespace {

constexpr double kPi = std::numbers::pi;

// Interaction kernel denominator, accurate for small separations:
// D = sin^2(dx/2r) + sinh^2(dy/2r).
inline double pair_denominator(double dx, double dy, double r) {
    const double su = std::sin(dx / (2.0 * r));
    const double sv = std::sinh(dy / (2.0 * r));
    return su * su + sv * sv;
}

void check_pair_separation(const Configuration& config) {
    const double guard = Configuration::kCollisionFactor * config.cylinder().radius;
    const std::size_t N = config.size();
    for (std::size_t k = 0; k < N; ++k) {
        for (std::size_t l = k + 1; l < N; ++l) {
            if (quotient_distance(config.points()[k], config.points()[l], config.cylinder()) <
                guard) {
                throw std::domain_error("singular configuration: vortices too close");
            }
        }
    }
}

// H and velocities evaluated on raw coordinate arrays; the kernel is
// periodic, so lifted abscissae are as good as canonical ones.
double hamiltonian_raw(const double* xs, const double* ys, const double* gam,
                       std::size_t N, double r) {
    double H = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
        for (std::size_t l = k + 1; l < N; ++l) {
            const double D = pair_denominator(xs[k] - xs[l], ys[k] - ys[l], r);
            H += gam[k] * gam[l] * std::log(D);
        }
    }
    return -H / (4.0 * kPi);
}

// state layout: [x0, y0, x1, y1, ...]; out receives the velocities.
void rhs(const double* state, double* out, const double* gam, std::size_t N, double r) {
    const double coef = 1.0 / (8.0 * kPi * r);
    std::fill(out, out + 2 * N, 0.0);
    for (std::size_t k = 0; k < N; ++k) {
        for (std::size_t l = k + 1; l < N; ++l) {
            const double dx = state[2 * k] - state[2 * l];
            const double dy = state[2 * k + 1] - state[2 * l + 1];
            const double D = pair_denominator(dx, dy, r);
            const double sh = std::sinh(dy / r) / D;
            const double sn = std::sin(dx / r) / D;
            out[2 * k] -= coef * gam[l] * sh;
            out[2 * k + 1] += coef * gam[l] * sn;
            out[2 * l] += coef * gam[k] * sh; // odd kernel: flipped signs for the partner
            out[2 * l + 1] -= coef * gam[k] * sn;
        }
    }
}

} // namespace

double hamiltonian(const Configuration& config) {
    check_pair_separation(config);
    const std::size_t N = config.size();
    std::vector<double> xs(N), ys(N);
    for (std::size_t k = 0; k < N; ++k) {
        xs[k] = config.points()[k].x;
        ys[k] = config.points()[k].y;
    }
    return hamiltonian_raw(xs.data(), ys.data(), config.vorticities().data(), N,
                           config.cylinder().radius);
}

std::vector<Velocity> velocities(const Configuration& config) {
    check_pair_separation(config);
    const std::size_t N = config.size();
    std::vector<double> state(2 * N), out(2 * N);
    for (std::size_t k = 0; k < N; ++k) {
        state[2 * k] = config.points()[k].x;
        state[2 * k + 1] = config.points()[k].y;
    }
    rhs(state.data(), out.data(), config.vorticities().data(), N, config.cylinder().radius);
    std::vector<Velocity> v(N);
    for (std::size_t k = 0; k < N; ++k) {
        v[k] = {out[2 * k], out[2 * k + 1]};
    }
    return v;
}

Velocity velocity(const Configuration& config, std::size_t k) {
    if (k >= config.size()) {
        throw std::out_of_range("vortex index out of range");
    }
    return velocities(config)[k];
}

Velocity induced_velocity_at(const Configuration& config, const CylPoint& p) {
    const double r = config.cylinder().radius;
    const double guard = Configuration::kCollisionFactor * r;
    const double coef = 1.0 / (8.0 * kPi * r);
    Velocity v{0.0, 0.0};
    for (std::size_t l = 0; l < config.size(); ++l) {
        if (quotient_distance(p, config.points()[l], config.cylinder()) < guard) {
            throw std::domain_error("tracer evaluation at a vortex");
        }
        const double dx = p.x - config.points()[l].x;
        const double dy = p.y - config.points()[l].y;
        const double D = pair_denominator(dx, dy, r);
        v.vx -= coef * config.vorticities()[l] * std::sinh(dy / r) / D;
        v.vy += coef * config.vorticities()[l] * std::sin(dx / r) / D;
    }
    return v;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
// 5th-order minus embedded 4th-order weights.
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;

struct Recorder {
    Trajectory& traj;
    const std::vector<double>& gam;
    double L;

    void sample(double t, const std::vector<double>& state) {
        const std::size_t N = gam.size();
        std::vector<CylPoint> pts(N);
        UnwrappedPath up;
        up.x.resize(N);
        up.winding.resize(N);
        std::complex<double> P{0.0, 0.0};
        for (std::size_t k = 0; k < N; ++k) {
            const double lifted = state[2 * k];
            const double y = state[2 * k + 1];
            const double canon = wrap(lifted, traj.cylinder);
            pts[k] = {canon, y};
            up.x[k] = lifted;
            up.winding[k] = static_cast<int>(std::lround((lifted - canon) / L));
            P += gam[k] * std::complex<double>(lifted, y);
        }
        std::vector<double> xs(N), ys(N);
        for (std::size_t k = 0; k < N; ++k) {
            xs[k] = state[2 * k];
            ys[k] = state[2 * k + 1];
        }
        traj.times.push_back(t);
        traj.positions.push_back(std::move(pts));
        traj.unwrapped.push_back(std::move(up));
        traj.energy.push_back(
            hamiltonian_raw(xs.data(), ys.data(), gam.data(), N, traj.cylinder.radius));
        traj.momentum.push_back(P);
    }
};

double min_pair_distance(const std::vector<double>& state, std::size_t N, double L,
                         std::size_t* pk, std::size_t* pl) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < N; ++k) {
        for (std::size_t l = k + 1; l < N; ++l) {
            const double dx = std::remainder(state[2 * k] - state[2 * l], L);
            const double dy = state[2 * k + 1] - state[2 * l + 1];
            const double d = std::hypot(dx, dy);
            if (d < best) {
                best = d;
                *pk = k;
                *pl = l;
            }
        }
    }
    return best;
}

double max_displacement(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); i += 2) {
        worst = std::max(worst, std::hypot(b[i] - a[i], b[i + 1] - a[i + 1]));
    }
    return worst;
}

double max_speed(const std::vector<double>& v) {
    double worst = 0.0;
    for (std::size_t i = 0; i < v.size(); i += 2) {
        worst = std::max(worst, std::hypot(v[i], v[i + 1]));
    }
    return worst;
}

} // namespace

Trajectory integrate(const Configuration& config, double t_final, const IntegratorConfig& icfg) {
    if (!std::isfinite(t_final) || t_final <= 0.0) {
        throw std::invalid_argument("integration horizon must be positive");
    }
    if (icfg.rtol <= 0.0 || icfg.atol <= 0.0 || icfg.fixed_step <= 0.0 ||
        icfg.initial_step <= 0.0 || icfg.collision_guard <= 0.0 ||
        icfg.max_move_fraction <= 0.0) {
        throw std::invalid_argument("integrator settings must be positive");
    }

    const std::size_t N = config.size();
    const double r = config.cylinder().radius;
    const double L = config.cylinder().circumference();
    const double move_cap = icfg.max_move_fraction * kPi * r;
    const double guard = icfg.collision_guard * r;
    const double h_min = icfg.min_step_factor * std::max(1.0, t_final);
    const std::vector<double> gam = config.vorticities();

    Trajectory traj;
    traj.cylinder = config.cylinder();
    traj.vorticities = gam;
    Recorder rec{traj, gam, L};

    const std::size_t n = 2 * N;
    std::vector<double> y(n);
    for (std::size_t k = 0; k < N; ++k) {
        y[2 * k] = config.points()[k].x;
        y[2 * k + 1] = config.points()[k].y;
    }

    auto f = [&](const std::vector<double>& s, std::vector<double>& out) {
        rhs(s.data(), out.data(), gam.data(), N, r);
    };

    double t = 0.0;
    rec.sample(t, y);

    // Exact landings: t_final plus every multiple of sample_stride. The
    // upcoming stride mark is tracked by an integer counter: recomputing
    // the index from t stalls whenever the product m * stride rounds
    // below the true multiple, which would clip the next step to zero.
    long long mark = 1;
    auto next_due = [&]() {
        double due = t_final;
        if (icfg.sample_stride > 0.0) {
            const double m = static_cast<double>(mark) * icfg.sample_stride;
            if (m < due) {
                due = m;
            }
        }
        return due;
    };

    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    std::vector<double> ytmp(n), ynew(n);
    f(y, k1);
    double h = std::min(icfg.initial_step, t_final);

    const double tiny = 1e-14 * t_final;
    while (t < t_final - tiny) {
        const double due = next_due();

        // Step attempt: the stored proposal, capped by the per-step
        // displacement ceiling and clipped to land exactly on due times.
        double ha = icfg.scheme == Scheme::rk4_fixed ? icfg.fixed_step : h;
        const double vmax = max_speed(k1);
        if (vmax > 0.0) {
            ha = std::min(ha, move_cap / vmax);
        }
        const bool land = ha >= due - t;
        if (land) {
            ha = due - t;
        }
        if (ha < h_min) {
            traj.stop_reason = StopReason::step_underflow;
            traj.stop_time = t;
            return traj;
        }

        if (icfg.scheme == Scheme::rk4_fixed) {
            for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + ha * 0.5 * k1[i];
            f(ytmp, k2);
            for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + ha * 0.5 * k2[i];
            f(ytmp, k3);
            for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + ha * k3[i];
            f(ytmp, k4);
            for (std::size_t i = 0; i < n; ++i) {
                ynew[i] = y[i] + ha / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + ha * A21 * k1[i];
            f(ytmp, k2);
            for (std::size_t i = 0; i < n; ++i)
                ytmp[i] = y[i] + ha * (A31 * k1[i] + A32 * k2[i]);
            f(ytmp, k3);
            for (std::size_t i = 0; i < n; ++i)
                ytmp[i] = y[i] + ha * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
            f(ytmp, k4);
            for (std::size_t i = 0; i < n; ++i)
                ytmp[i] = y[i] + ha * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
            f(ytmp, k5);
            for (std::size_t i = 0; i < n; ++i)
                ytmp[i] = y[i] +
                          ha * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] +
                                A65 * k5[i]);
            f(ytmp, k6);
            for (std::size_t i = 0; i < n; ++i)
                ynew[i] = y[i] +
                          ha * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
            f(ynew, k7); // FSAL stage, reused as k1 on acceptance

            double err_sq = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double e = ha * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] +
                                       E6 * k6[i] + E7 * k7[i]);
                const double scale =
                    icfg.atol + icfg.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                err_sq += (e / scale) * (e / scale);
            }
            const double err = std::sqrt(err_sq / static_cast<double>(n));

            if (err <= 1.0 && max_displacement(y, ynew) <= move_cap) {
                const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
                h = ha * std::clamp(grow, 0.2, 5.0);
            } else {
                const double shrink =
                    err > 1.0 ? std::max(0.9 * std::pow(err, -0.2), 0.1) : 0.5;
                h = ha * shrink;
                continue;
            }
        }

        t = land ? due : t + ha;
        if (land && icfg.sample_stride > 0.0 &&
            due == static_cast<double>(mark) * icfg.sample_stride) {
            ++mark;
        }
        y.swap(ynew);
        if (icfg.scheme == Scheme::rk4_fixed) {
            f(y, k1);
        } else {
            k1.swap(k7);
        }

        std::size_t ck = 0, cl = 0;
        if (N > 1 && min_pair_distance(y, N, L, &ck, &cl) < guard) {
            traj.stop_reason = StopReason::collision;
            traj.stop_time = t;
            traj.collision_pair[0] = ck;
            traj.collision_pair[1] = cl;
            return traj;
        }
        rec.sample(t, y);
    }
    traj.stop_reason = StopReason::completed;
    traj.stop_time = t;
    return traj;
}

Configuration Trajectory::configuration_at(std::size_t i) const {
    return Configuration(cylinder, positions.at(i), vorticities);
}

std::vector<std::complex<double>> Trajectory::lifted_positions(std::size_t i) const {
    const UnwrappedPath& up = unwrapped.at(i);
    std::vector<std::complex<double>> z(up.x.size());
    for (std::size_t k = 0; k < z.size(); ++k) {
        z[k] = {up.x[k], positions.at(i)[k].y};
    }
    return z;
}

std::complex<double> momentum_of(const Trajectory& traj, std::size_t sample) {
    return traj.momentum.at(sample);
}

std::complex<double> momentum_of(const Configuration& config) {
    std::complex<double> P{0.0, 0.0};
    for (std::size_t k = 0; k < config.size(); ++k) {
        P += config.vorticities()[k] *
             std::complex<double>(config.points()[k].x, config.points()[k].y);
    }
    return P;
}

namespace {

std::complex<double> group_center(const std::vector<std::complex<double>>& z,
                                  const std::vector<double>& gam,
                                  const std::vector<std::size_t>& idx, double scale) {
    std::complex<double> num{0.0, 0.0};
    double den = 0.0;
    for (std::size_t k : idx) {
        if (k >= z.size()) {
            throw std::out_of_range("partition index out of range");
        }
        num += gam[k] * z[k];
        den += gam[k];
    }
    if (std::abs(den) <= 1e-12 * scale) {
        throw std::invalid_argument("partition group has zero vorticity sum");
    }
    return num / den;
}

std::complex<double> center_vector_impl(const std::vector<std::complex<double>>& z,
                                        const std::vector<double>& gam, const Partition& part) {
    if (part.first.empty() || part.second.empty() ||
        part.first.size() + part.second.size() != z.size()) {
        throw std::invalid_argument("partition must cover all vortices in two groups");
    }
    std::vector<char> seen(z.size(), 0);
    for (std::size_t k : part.first) seen.at(k) += 1;
    for (std::size_t k : part.second) seen.at(k) += 1;
    for (char c : seen) {
        if (c != 1) {
            throw std::invalid_argument("partition groups must be disjoint and cover 1..N");
        }
    }
    double scale = 0.0, total = 0.0;
    for (double g : gam) {
        scale += std::abs(g);
        total += g;
    }
    if (std::abs(total) > 1e-12 * scale) {
        throw std::invalid_argument("center vector requires zero total vorticity");
    }
    return group_center(z, gam, part.first, scale) - group_center(z, gam, part.second, scale);
}

} // namespace

std::complex<double> center_vector(const Configuration& config, const Partition& part) {
    std::vector<std::complex<double>> z(config.size());
    for (std::size_t k = 0; k < config.size(); ++k) {
        z[k] = {config.points()[k].x, config.points()[k].y};
    }
    return center_vector_impl(z, config.vorticities(), part);
}

std::complex<double> center_vector(const Trajectory& traj, std::size_t sample,
                                   const Partition& part) {
    return center_vector_impl(traj.lifted_positions(sample), traj.vorticities, part);
}

} // namespace cylvort
