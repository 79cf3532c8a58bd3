#pragma once

// Geometry of the periodic strip C/2πrZ: coordinate wrapping, quotient
// distances, continuity-based unwrapping, n-fold covering copies, and a
// translation-invariant shape metric between configurations.

#include <cstddef>
#include <vector>

namespace cylvort {

struct Cylinder {
    double radius = 1.0;

    Cylinder() = default;
    explicit Cylinder(double r);

    double circumference() const;
};

// Canonical representative has x in [0, 2*pi*r); y is unconstrained.
struct CylPoint {
    double x = 0.0;
    double y = 0.0;
};

// Reduce x_raw to the canonical window [0, 2*pi*r). Rejects non-finite input.
double wrap(double x_raw, const Cylinder& cyl);

// Euclidean distance on the quotient: min over integer winding of
// |dx + 2*pi*r*n + i*dy|. Symmetric; zero iff the points coincide mod 2*pi*r.
double quotient_distance(const CylPoint& p, const CylPoint& q, const Cylinder& cyl);

// Lift new_wrapped to the representative nearest to prev_unwrapped.
// Guarantees |result - prev_unwrapped| <= pi*r. Throws when the nearest lift
// is ambiguous (distance equal to pi*r within tolerance); callers keep steps
// under pi*r so the lift is unique.
double unwrap_step(double prev_unwrapped, double new_wrapped, const Cylinder& cyl);

// One time-sample of lifted abscissae. x[k] = canonical x + 2*pi*r*winding[k].
struct UnwrappedPath {
    std::vector<double> x;
    std::vector<int> winding;
};

// Immutable N-vortex state. Construction canonicalizes every x and rejects
// empty systems, zero vorticities, mismatched list lengths, non-finite
// entries, and pairs closer than kCollisionFactor * radius in the quotient.
class Configuration {
public:
    static constexpr double kCollisionFactor = 1e-9;

    Configuration(Cylinder cyl, std::vector<CylPoint> points, std::vector<double> vorticities);

    const Cylinder& cylinder() const { return cyl_; }
    std::size_t size() const { return points_.size(); }
    const std::vector<CylPoint>& points() const { return points_; }
    const std::vector<double>& vorticities() const { return vorticities_; }
    double total_vorticity() const;

private:
    Cylinder cyl_;
    std::vector<CylPoint> points_;
    std::vector<double> vorticities_;
};

// n-fold covering: nN vortices at z_k + 2*pi*r*m (m = 0..n-1), copy-major
// order, with copied vorticities, on a cylinder of radius n*r. The wide
// system's dynamics covers the base system's.
Configuration nfold_copy(const Configuration& config, int n);

struct ShapeAlignment {
    double tx = 0.0;       // translation applied to `a`, x part (mod 2*pi*r)
    double ty = 0.0;       // translation applied to `a`, y part
    double distance = 0.0; // max_k quotient_distance(a_k + t, b_k) at optimum
};

// min over translations t of max_k quotient_distance(a_k + t, b_k).
// y-alignment is exact (unweighted centroids); x-alignment scans the
// candidate offsets b_k.x - a_k.x and refines by pattern search.
// Requires equal N, equal vorticity lists, equal radius.
ShapeAlignment shape_align(const Configuration& a, const Configuration& b);
double shape_distance(const Configuration& a, const Configuration& b);

} // namespace cylvort
