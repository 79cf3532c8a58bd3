#include "cylvort/cylinder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cylvort {

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string(what) + " must be finite");
    }
}

} // namespace

Cylinder::Cylinder(double r) : radius(r) {
    if (!std::isfinite(r) || r <= 0.0) {
        throw std::invalid_argument("cylinder radius must be finite and positive");
    }
}

double Cylinder::circumference() const {
    return 2.0 * std::numbers::pi * radius;
}

double wrap(double x_raw, const Cylinder& cyl) {
    require_finite(x_raw, "wrap input");
    const double L = cyl.circumference();
    double m = std::fmod(x_raw, L);
    if (m < 0.0) {
        m += L;
    }
    if (m >= L) { // fmod is exact but the correction above can round up to L
        m = 0.0;
    }
    return m;
}

double quotient_distance(const CylPoint& p, const CylPoint& q, const Cylinder& cyl) {
    require_finite(p.x, "point");
    require_finite(p.y, "point");
    require_finite(q.x, "point");
    require_finite(q.y, "point");
    const double dx = std::remainder(p.x - q.x, cyl.circumference());
    return std::hypot(dx, p.y - q.y);
}

double unwrap_step(double prev_unwrapped, double new_wrapped, const Cylinder& cyl) {
    require_finite(prev_unwrapped, "unwrap input");
    require_finite(new_wrapped, "unwrap input");
    const double L = cyl.circumference();
    const double delta = std::remainder(new_wrapped - prev_unwrapped, L);
    if (std::abs(std::abs(delta) - 0.5 * L) < 1e-12 * L) {
        throw std::domain_error("unwrap_step: nearest lift is ambiguous (half-period jump)");
    }
    return prev_unwrapped + delta;
}

Configuration::Configuration(Cylinder cyl, std::vector<CylPoint> points,
                             std::vector<double> vorticities)
    : cyl_(cyl), points_(std::move(points)), vorticities_(std::move(vorticities)) {
    if (points_.empty()) {
        throw std::invalid_argument("configuration needs at least one vortex");
    }
    if (points_.size() != vorticities_.size()) {
        throw std::invalid_argument("positions and vorticities differ in length");
    }
    for (std::size_t k = 0; k < points_.size(); ++k) {
        require_finite(points_[k].y, "vortex position");
        points_[k].x = wrap(points_[k].x, cyl_);
        if (!std::isfinite(vorticities_[k]) || vorticities_[k] == 0.0) {
            throw std::invalid_argument("vorticity " + std::to_string(k + 1) +
                                        " must be finite and nonzero");
        }
    }
    const double threshold = kCollisionFactor * cyl_.radius;
    for (std::size_t k = 0; k < points_.size(); ++k) {
        for (std::size_t l = k + 1; l < points_.size(); ++l) {
            if (quotient_distance(points_[k], points_[l], cyl_) < threshold) {
                throw std::invalid_argument("vortices " + std::to_string(k + 1) + " and " +
                                            std::to_string(l + 1) + " collide");
            }
        }
    }
}

double Configuration::total_vorticity() const {
    double s = 0.0;
    for (double g : vorticities_) {
        s += g;
    }
    return s;
}

Configuration nfold_copy(const Configuration& config, int n) {
    if (n < 1) {
        throw std::invalid_argument("nfold_copy needs n >= 1");
    }
    const double L = config.cylinder().circumference();
    const std::size_t N = config.size();
    std::vector<CylPoint> pts;
    std::vector<double> gam;
    pts.reserve(N * static_cast<std::size_t>(n));
    gam.reserve(N * static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
        for (std::size_t k = 0; k < N; ++k) {
            pts.push_back({config.points()[k].x + L * m, config.points()[k].y});
            gam.push_back(config.vorticities()[k]);
        }
    }
    return Configuration(Cylinder(config.cylinder().radius * n), std::move(pts),
                         std::move(gam));
}

namespace {

double alignment_cost(const Configuration& a, const Configuration& b, double tx, double ty) {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const CylPoint moved{a.points()[k].x + tx, a.points()[k].y + ty};
        worst = std::max(worst, quotient_distance(moved, b.points()[k], a.cylinder()));
    }
    return worst;
}

} // namespace

ShapeAlignment shape_align(const Configuration& a, const Configuration& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("shape comparison needs equal vortex counts");
    }
    if (a.cylinder().radius != b.cylinder().radius) {
        throw std::invalid_argument("shape comparison needs equal cylinder radii");
    }
    if (a.vorticities() != b.vorticities()) {
        throw std::invalid_argument("shape comparison needs identical vorticity lists");
    }
    const std::size_t N = a.size();
    const double L = a.cylinder().circumference();

    // Exact vertical alignment of unweighted centroids.
    double ty0 = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
        ty0 += b.points()[k].y - a.points()[k].y;
    }
    ty0 /= static_cast<double>(N);

    // One x-candidate per vortex pairing, plus the identity.
    std::vector<double> candidates{0.0};
    for (std::size_t k = 0; k < N; ++k) {
        candidates.push_back(std::remainder(b.points()[k].x - a.points()[k].x, L));
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end(),
                                 [L](double u, double v) { return std::abs(u - v) < 1e-13 * L; }),
                     candidates.end());

    // The per-pairing offsets can all sit in the wrong basin when no single
    // vortex pairing dominates the max, so add the best point of a coarse
    // sweep as one more refinement seed.
    {
        double grid_tx = 0.0;
        double grid_cost = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 64; ++i) {
            const double tx = L * i / 64.0;
            const double c = alignment_cost(a, b, tx, ty0);
            if (c < grid_cost) {
                grid_cost = c;
                grid_tx = tx;
            }
        }
        candidates.push_back(grid_tx);
    }

    ShapeAlignment best{0.0, ty0, alignment_cost(a, b, 0.0, ty0)};
    for (double tx : candidates) {
        const double c = alignment_cost(a, b, tx, ty0);
        if (c < best.distance) {
            best = {tx, ty0, c};
        }
    }

    // Compass refinement around every candidate; the max-of-distances
    // objective is piecewise smooth, so shrinking steps in 8 directions
    // settle well below the tolerances used by callers.
    static constexpr int kDirs[8][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                                        {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};
    for (double tx : candidates) {
        double cx = tx;
        double cy = ty0;
        double cost = alignment_cost(a, b, cx, cy);
        for (double step = L / 8.0; step > 1e-13 * std::max(1.0, L);) {
            bool improved = false;
            for (const auto& d : kDirs) {
                const double nx = cx + d[0] * step;
                const double ny = cy + d[1] * step;
                const double c = alignment_cost(a, b, nx, ny);
                if (c < cost) {
                    cx = nx;
                    cy = ny;
                    cost = c;
                    improved = true;
                }
            }
            if (!improved) {
                step *= 0.5;
            }
        }
        if (cost < best.distance) {
            best = {cx, cy, cost};
        }
    }
    best.tx = std::remainder(best.tx, L);
    return best;
}

double shape_distance(const Configuration& a, const Configuration& b) {
    return shape_align(a, b).distance;
}

} // namespace cylvort
