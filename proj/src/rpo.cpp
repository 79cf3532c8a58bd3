#include "cylvort/rpo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cylvort {

namespace {

constexpr double kPi = std::numbers::pi;

// Configuration at time T on the continuous flow, with the total lifted
// displacement of every vortex since the trajectory start. Times at stored
// samples are served from the record; anything else re-integrates the short
// span from the nearest earlier sample.
struct FlowPoint {
    Configuration config;
    std::vector<std::complex<double>> lifted_shift;
};

FlowPoint flow_at(const Trajectory& traj, double T, const IntegratorConfig& icfg) {
    const std::vector<double>& ts = traj.times;
    auto it = std::upper_bound(ts.begin(), ts.end(), T);
    std::size_t j = static_cast<std::size_t>(it - ts.begin());
    j = j == 0 ? 0 : j - 1;

    const std::size_t N = traj.vorticities.size();
    std::vector<std::complex<double>> shift(N);
    const auto base = traj.lifted_positions(j);
    const auto origin = traj.lifted_positions(0);
    for (std::size_t k = 0; k < N; ++k) {
        shift[k] = base[k] - origin[k];
    }

    const double span = T - ts[j];
    if (span <= 1e-15 * std::max(1.0, T)) {
        return {traj.configuration_at(j), std::move(shift)};
    }

    IntegratorConfig local = icfg;
    local.sample_stride = 0.0;
    local.initial_step = std::min(local.initial_step, span);
    const Trajectory leg = integrate(traj.configuration_at(j), span, local);
    const std::size_t last = leg.times.size() - 1;
    const auto from = leg.lifted_positions(0);
    const auto to = leg.lifted_positions(last);
    for (std::size_t k = 0; k < N; ++k) {
        shift[k] += to[k] - from[k];
    }
    return {leg.configuration_at(last), std::move(shift)};
}

std::complex<double> mean_shift(const std::vector<std::complex<double>>& shift) {
    std::complex<double> m{0.0, 0.0};
    for (const auto& s : shift) {
        m += s;
    }
    return m / static_cast<double>(shift.size());
}

} // namespace

std::optional<RelativePeriodReport> detect_relative_period(const Trajectory& traj, double tol,
                                                           const IntegratorConfig& icfg) {
    if (!(tol > 0.0)) {
        throw std::invalid_argument("tolerance must be positive");
    }
    const std::size_t M = traj.times.size();
    if (M < 2) {
        return std::nullopt;
    }
    const Configuration ref = traj.configuration_at(0);

    std::vector<double> dist(M, 0.0);
    for (std::size_t i = 1; i < M; ++i) {
        dist[i] = shape_distance(traj.configuration_at(i), ref);
    }

    // The shape leaves the tol-ball and comes back; a run that never leaves
    // is a relative equilibrium up to tol, reported with the T = 0 sentinel.
    std::size_t depart = 0;
    for (std::size_t i = 1; i < M; ++i) {
        if (dist[i] >= tol) {
            depart = i;
            break;
        }
    }
    if (depart == 0) {
        RelativePeriodReport report;
        report.period = 0.0;
        report.continuous_closure = true;
        const FlowPoint end = flow_at(traj, traj.times.back(), icfg);
        report.drift = mean_shift(end.lifted_shift);
        report.residual = *std::max_element(dist.begin() + 1, dist.end());
        return report;
    }

    auto f = [&](double T) { return shape_distance(flow_at(traj, T, icfg).config, ref); };

    // Each grid local minimum after the departure is refined on the
    // continuous flow; sampled values rarely dip below tol on their own,
    // so the tol test applies to the refined closure, in time order.
    for (std::size_t i = depart + 1; i < M; ++i) {
        const bool left_ok = dist[i] <= dist[i - 1];
        const bool right_ok = i + 1 >= M || dist[i] <= dist[i + 1];
        if (!left_ok || !right_ok) {
            continue;
        }

        double lo = traj.times[i - 1];
        double hi = i + 1 < M ? traj.times[i + 1] : traj.times[i];

        // Golden-section refinement of the closure time inside the bracket.
        const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = hi - gr * (hi - lo);
        double x2 = lo + gr * (hi - lo);
        double f1 = f(x1);
        double f2 = f(x2);
        for (int it = 0; it < 80 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
            if (f1 < f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = f(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = f(x2);
            }
        }
        const double T = f1 < f2 ? x1 : x2;

        const FlowPoint closure = flow_at(traj, T, icfg);
        const double residual = shape_distance(closure.config, ref);
        if (residual >= tol) {
            continue;
        }

        RelativePeriodReport report;
        report.period = T;
        report.continuous_closure = false;
        report.drift = mean_shift(closure.lifted_shift);
        report.residual = residual;
        return report;
    }
    return std::nullopt;
}

double winding_angle(const std::vector<std::complex<double>>& zeta_series) {
    if (zeta_series.size() < 2) {
        return 0.0;
    }
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < zeta_series.size(); ++i) {
        const std::complex<double>&a = zeta_series[i], &b = zeta_series[i + 1];
        if (std::abs(a) < 1e-12 || std::abs(b) < 1e-12) {
            throw std::domain_error("winding angle undefined through the origin");
        }
        total += std::arg(b / a);
    }
    return total;
}

PairDrift vortex_pair_drift(const CylPoint& z1, const CylPoint& z2, double gamma,
                            const Cylinder& cyl) {
    if (!std::isfinite(gamma) || gamma == 0.0) {
        throw std::invalid_argument("vorticity must be finite and nonzero");
    }
    const double r = cyl.radius;
    const double dx = z2.x - z1.x;
    const double dy = z2.y - z1.y;
    const double su = std::sin(dx / (2.0 * r));
    const double sv = std::sinh(dy / (2.0 * r));
    const double D = su * su + sv * sv;
    if (D == 0.0) {
        throw std::domain_error("pair vortices collide");
    }
    const double sh = std::sinh(dy / r);
    const double sn = std::sin(dx / r);
    PairDrift out;
    out.v.vx = -gamma / (8.0 * kPi * r) * sh / D;
    out.v.vy = gamma / (8.0 * kPi * r) * sn / D;
    out.slope = -sn / sh;
    out.vertical = sh == 0.0 && sn != 0.0;
    return out;
}

Configuration vortex_street_family(int n, double a, double b, double gamma,
                                   const Cylinder& cyl) {
    if (n < 1) {
        throw std::invalid_argument("street needs at least one vortex per row");
    }
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(gamma) || gamma == 0.0) {
        throw std::invalid_argument("street parameters must be finite, vorticity nonzero");
    }
    const double L = cyl.circumference();
    std::vector<CylPoint> pts;
    std::vector<double> gam;
    pts.reserve(2 * static_cast<std::size_t>(n));
    gam.reserve(2 * static_cast<std::size_t>(n));
    for (int l = 0; l < n; ++l) {
        pts.push_back({L * static_cast<double>(l) / n, b});
        gam.push_back(gamma);
    }
    for (int l = 0; l < n; ++l) {
        pts.push_back({a + L * static_cast<double>(l) / n, -b});
        gam.push_back(-gamma);
    }
    return Configuration(cyl, pts, gam);
}

RelEqCheck verify_relative_equilibrium(const Configuration& config, double tol) {
    if (!(tol > 0.0)) {
        throw std::invalid_argument("tolerance must be positive");
    }
    const std::vector<Velocity> v = velocities(config);
    RelEqCheck out;
    double sx = 0.0, sy = 0.0;
    for (const Velocity& w : v) {
        sx += w.vx;
        sy += w.vy;
    }
    out.common_velocity = {sx / static_cast<double>(v.size()),
                           sy / static_cast<double>(v.size())};
    for (const Velocity& w : v) {
        out.max_deviation = std::max(out.max_deviation,
                                     std::hypot(w.vx - out.common_velocity.vx,
                                                w.vy - out.common_velocity.vy));
    }
    out.is_relative_equilibrium = out.max_deviation < tol;

    double total = 0.0, scale = 0.0;
    for (double g : config.vorticities()) {
        total += g;
        scale += std::abs(g);
    }
    // Conservation of the weighted centroid forbids a drifting rigid motion
    // when the strengths do not cancel.
    if (out.is_relative_equilibrium && std::abs(total) > 1e-12 * scale &&
        std::hypot(out.common_velocity.vx, out.common_velocity.vy) >= tol) {
        out.consistent = false;
    }
    return out;
}

} // namespace cylvort
