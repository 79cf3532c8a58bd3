#pragma once

// Run configuration files, CSV/grid output, and the command-line dispatcher.
//
// Config format, strict line-oriented key=value:
//
//   radius = 1.0
//   horizon = 20
//   rtol = 1e-10
//   [vortices]
//   0.0  1.0  1.0
//   0.0 -1.0 -1.0
//
// Unknown keys are errors. The [vortices] section holds one `x y gamma`
// triple per line. '#' starts a comment.
//
// Trajectory CSV header: t,x1,y1,...,xN,yN,H,Px,Py with wrapped abscissae;
// a companion file (suffix .unwrapped.csv) carries the lifted ones.
// All floating-point output uses 17 significant digits.

#include <complex>
#include <string>
#include <vector>

#include "cylvort/cylinder.hpp"
#include "cylvort/dynamics.hpp"
#include "cylvort/reduced.hpp"

namespace cylvort {

struct RunConfig {
    double radius = 0.0;              // required in files
    std::vector<CylPoint> points;
    std::vector<double> vorticities;
    IntegratorConfig integrator;
    double horizon = 10.0;

    Configuration configuration() const;
};

RunConfig read_config(const std::string& path);
void write_config(const RunConfig& cfg, const std::string& path);

std::string format_g17(double v);

// Writes `path` and the companion `.unwrapped.csv`. Partial files are
// removed when writing fails midway.
void write_trajectory_csv(const Trajectory& traj, const std::string& path);
std::string unwrapped_companion_path(const std::string& path);

// Rebuild a trajectory from a CSV pair; cylinder and vorticities come from
// the run configuration that produced it.
Trajectory read_trajectory_csv(const std::string& path, const RunConfig& cfg);

// Plain-text matrix, rows = eta descending, columns = xi ascending, `nan`
// for masked cells, plus a `.meta` sidecar with window and resolution.
void write_level_grid(const LevelGrid& grid, const std::string& path);

// Subcommands: simulate, equilibrium, complete3, reduce3, reduce4, contour,
// separatrix, street, rpo, selftest. Returns the process exit status;
// failures print a one-line diagnostic to stderr and remove partial outputs.
int cli_dispatch(int argc, const char* const* argv);

} // namespace cylvort
