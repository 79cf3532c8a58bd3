#include "cylvort/io.hpp"

#include "cylvort/equilibria.hpp"
#include "cylvort/rpo.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cylvort {

namespace {

std::string trim(const std::string& s) {
    const std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) {
        return "";
    }
    const std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void config_error(const std::string& path, int line, const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& path, int line, const std::string& text) {
    const std::string t = trim(text);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size()) {
        config_error(path, line, "bad number '" + t + "'");
    }
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

// Removes the listed files on destruction unless committed; keeps failed
// writes from leaving partial output behind.
class OutputGuard {
public:
    void add(const std::string& path) { paths_.push_back(path); }
    void commit() { committed_ = true; }
    ~OutputGuard() {
        if (!committed_) {
            for (const std::string& p : paths_) {
                std::remove(p.c_str());
            }
        }
    }

private:
    std::vector<std::string> paths_;
    bool committed_ = false;
};

} // namespace

Configuration RunConfig::configuration() const {
    return Configuration(Cylinder(radius), points, vorticities);
}

RunConfig read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file: " + path);
    }
    RunConfig cfg;
    bool have_radius = false;
    bool in_vortices = false;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) {
            raw.erase(hash);
        }
        const std::string line = trim(raw);
        if (line.empty()) {
            continue;
        }
        if (line == "[vortices]") {
            in_vortices = true;
            continue;
        }
        if (line.front() == '[') {
            config_error(path, line_no, "unknown section '" + line + "'");
        }
        if (in_vortices) {
            std::istringstream iss(line);
            double x, y, g;
            if (!(iss >> x >> y >> g)) {
                config_error(path, line_no, "expected 'x y gamma'");
            }
            std::string extra;
            if (iss >> extra) {
                config_error(path, line_no, "trailing data '" + extra + "'");
            }
            cfg.points.push_back({x, y});
            cfg.vorticities.push_back(g);
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            config_error(path, line_no, "expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "radius") {
            cfg.radius = parse_number(path, line_no, value);
            have_radius = true;
        } else if (key == "horizon") {
            cfg.horizon = parse_number(path, line_no, value);
        } else if (key == "rtol") {
            cfg.integrator.rtol = parse_number(path, line_no, value);
        } else if (key == "atol") {
            cfg.integrator.atol = parse_number(path, line_no, value);
        } else if (key == "fixed_step") {
            cfg.integrator.fixed_step = parse_number(path, line_no, value);
        } else if (key == "initial_step") {
            cfg.integrator.initial_step = parse_number(path, line_no, value);
        } else if (key == "collision_guard") {
            cfg.integrator.collision_guard = parse_number(path, line_no, value);
        } else if (key == "max_move_fraction") {
            cfg.integrator.max_move_fraction = parse_number(path, line_no, value);
        } else if (key == "sample_stride") {
            cfg.integrator.sample_stride = parse_number(path, line_no, value);
        } else if (key == "scheme") {
            if (value == "dopri45") {
                cfg.integrator.scheme = Scheme::dopri45;
            } else if (value == "rk4_fixed") {
                cfg.integrator.scheme = Scheme::rk4_fixed;
            } else {
                config_error(path, line_no, "unknown scheme '" + value + "'");
            }
        } else {
            config_error(path, line_no, "unknown key '" + key + "'");
        }
    }
    if (!have_radius) {
        throw std::runtime_error(path + ": missing radius");
    }
    return cfg;
}

void write_config(const RunConfig& cfg, const std::string& path) {
    OutputGuard guard;
    guard.add(path);
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write config file: " + path);
    }
    out << "radius = " << format_g17(cfg.radius) << "\n";
    out << "horizon = " << format_g17(cfg.horizon) << "\n";
    out << "scheme = " << (cfg.integrator.scheme == Scheme::dopri45 ? "dopri45" : "rk4_fixed")
        << "\n";
    out << "rtol = " << format_g17(cfg.integrator.rtol) << "\n";
    out << "atol = " << format_g17(cfg.integrator.atol) << "\n";
    out << "fixed_step = " << format_g17(cfg.integrator.fixed_step) << "\n";
    out << "initial_step = " << format_g17(cfg.integrator.initial_step) << "\n";
    out << "collision_guard = " << format_g17(cfg.integrator.collision_guard) << "\n";
    out << "max_move_fraction = " << format_g17(cfg.integrator.max_move_fraction) << "\n";
    out << "sample_stride = " << format_g17(cfg.integrator.sample_stride) << "\n";
    out << "[vortices]\n";
    for (std::size_t k = 0; k < cfg.points.size(); ++k) {
        out << format_g17(cfg.points[k].x) << " " << format_g17(cfg.points[k].y) << " "
            << format_g17(cfg.vorticities[k]) << "\n";
    }
    out.flush();
    if (!out) {
        throw std::runtime_error("write failed: " + path);
    }
    guard.commit();
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string unwrapped_companion_path(const std::string& path) {
    const std::string suffix = ".csv";
    if (path.size() > suffix.size() &&
        path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0) {
        return path.substr(0, path.size() - suffix.size()) + ".unwrapped.csv";
    }
    return path + ".unwrapped.csv";
}

namespace {

std::string csv_header(std::size_t N) {
    std::string h = "t";
    for (std::size_t k = 1; k <= N; ++k) {
        h += ",x" + std::to_string(k) + ",y" + std::to_string(k);
    }
    h += ",H,Px,Py";
    return h;
}

void write_rows(std::ofstream& out, const Trajectory& traj, bool lifted) {
    const std::size_t N = traj.vorticities.size();
    out << csv_header(N) << "\n";
    for (std::size_t i = 0; i < traj.samples(); ++i) {
        out << format_g17(traj.times[i]);
        for (std::size_t k = 0; k < N; ++k) {
            const double x = lifted ? traj.unwrapped[i].x[k] : traj.positions[i][k].x;
            out << "," << format_g17(x) << "," << format_g17(traj.positions[i][k].y);
        }
        out << "," << format_g17(traj.energy[i]) << "," << format_g17(traj.momentum[i].real())
            << "," << format_g17(traj.momentum[i].imag()) << "\n";
    }
}

} // namespace

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    const std::string companion = unwrapped_companion_path(path);
    OutputGuard guard;
    guard.add(path);
    guard.add(companion);

    std::ofstream main_out(path);
    if (!main_out) {
        throw std::runtime_error("cannot write trajectory file: " + path);
    }
    write_rows(main_out, traj, false);
    main_out.flush();
    if (!main_out) {
        throw std::runtime_error("write failed: " + path);
    }

    std::ofstream lifted_out(companion);
    if (!lifted_out) {
        throw std::runtime_error("cannot write trajectory file: " + companion);
    }
    write_rows(lifted_out, traj, true);
    lifted_out.flush();
    if (!lifted_out) {
        throw std::runtime_error("write failed: " + companion);
    }
    guard.commit();
}

namespace {

struct CsvTable {
    std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::string& path, std::size_t N) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open trajectory file: " + path);
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error(path + ": empty file");
    }
    if (trim(line) != csv_header(N)) {
        throw std::runtime_error(path + ": header does not match the configuration");
    }
    CsvTable table;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const std::vector<std::string> cells = split(line, ',');
        if (cells.size() != 2 * N + 4) {
            config_error(path, line_no, "wrong column count");
        }
        std::vector<double> row(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            row[c] = parse_number(path, line_no, cells[c]);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace

Trajectory read_trajectory_csv(const std::string& path, const RunConfig& cfg) {
    const std::size_t N = cfg.vorticities.size();
    if (N == 0) {
        throw std::invalid_argument("run configuration has no vortices");
    }
    const CsvTable main_table = read_csv(path, N);
    const CsvTable lifted_table = read_csv(unwrapped_companion_path(path), N);
    if (main_table.rows.size() != lifted_table.rows.size()) {
        throw std::runtime_error(path + ": companion row count differs");
    }

    Trajectory traj;
    traj.cylinder = Cylinder(cfg.radius);
    traj.vorticities = cfg.vorticities;
    const double L = traj.cylinder.circumference();
    for (std::size_t i = 0; i < main_table.rows.size(); ++i) {
        const std::vector<double>& row = main_table.rows[i];
        const std::vector<double>& lifted = lifted_table.rows[i];
        if (lifted[0] != row[0]) {
            throw std::runtime_error(path + ": companion time axis differs");
        }
        traj.times.push_back(row[0]);
        std::vector<CylPoint> pts(N);
        UnwrappedPath up;
        up.x.resize(N);
        up.winding.resize(N);
        for (std::size_t k = 0; k < N; ++k) {
            pts[k] = {row[1 + 2 * k], row[2 + 2 * k]};
            up.x[k] = lifted[1 + 2 * k];
            up.winding[k] = static_cast<int>(std::lround((up.x[k] - pts[k].x) / L));
        }
        traj.positions.push_back(std::move(pts));
        traj.unwrapped.push_back(std::move(up));
        traj.energy.push_back(row[2 * N + 1]);
        traj.momentum.push_back({row[2 * N + 2], row[2 * N + 3]});
    }
    traj.stop_reason = StopReason::completed;
    traj.stop_time = traj.times.empty() ? 0.0 : traj.times.back();
    return traj;
}

void write_level_grid(const LevelGrid& grid, const std::string& path) {
    OutputGuard guard;
    const std::string meta = path + ".meta";
    guard.add(path);
    guard.add(meta);

    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write grid file: " + path);
    }
    for (std::size_t ii = grid.neta; ii-- > 0;) {
        for (std::size_t j = 0; j < grid.nxi; ++j) {
            if (j > 0) {
                out << " ";
            }
            out << (grid.masked(ii, j) ? "nan" : format_g17(grid.value(ii, j)));
        }
        out << "\n";
    }
    out.flush();
    if (!out) {
        throw std::runtime_error("write failed: " + path);
    }

    std::ofstream mout(meta);
    if (!mout) {
        throw std::runtime_error("cannot write grid file: " + meta);
    }
    mout << "nxi = " << grid.nxi << "\n";
    mout << "neta = " << grid.neta << "\n";
    mout << "xi_min = " << format_g17(grid.window.xi_min) << "\n";
    mout << "xi_max = " << format_g17(grid.window.xi_max) << "\n";
    mout << "eta_min = " << format_g17(grid.window.eta_min) << "\n";
    mout << "eta_max = " << format_g17(grid.window.eta_max) << "\n";
    mout << "divergence_cap = " << format_g17(grid.divergence_cap) << "\n";
    mout.flush();
    if (!mout) {
        throw std::runtime_error("write failed: " + meta);
    }
    guard.commit();
}

namespace {

const char* stop_name(StopReason reason) {
    switch (reason) {
    case StopReason::completed:
        return "completed";
    case StopReason::collision:
        return "collision";
    case StopReason::step_underflow:
        return "step_underflow";
    }
    return "unknown";
}

int run_simulate(const std::string& config_path, const std::string& out_path, double horizon,
                 double stride) {
    RunConfig cfg = read_config(config_path);
    if (horizon > 0.0) {
        cfg.horizon = horizon;
    }
    if (stride >= 0.0) {
        cfg.integrator.sample_stride = stride;
    }
    const Trajectory traj = integrate(cfg.configuration(), cfg.horizon, cfg.integrator);
    write_trajectory_csv(traj, out_path);
    std::cout << "samples=" << traj.samples() << " stop=" << stop_name(traj.stop_reason)
              << " t_end=" << format_g17(traj.stop_time);
    if (traj.stop_reason == StopReason::collision) {
        std::cout << " pair=" << traj.collision_pair[0] + 1 << "," << traj.collision_pair[1] + 1;
    }
    if (traj.samples() > 1) {
        std::cout << " dH=" << format_g17(std::abs(traj.energy.back() - traj.energy.front()))
                  << " dP="
                  << format_g17(std::abs(traj.momentum.back() - traj.momentum.front()));
    }
    std::cout << "\n";
    return 0;
}

int run_equilibrium(const std::vector<double>& gammas, const std::vector<std::size_t>& order,
                    double radius, const std::string& out_path) {
    const CyclicOrder cyc =
        order.empty() ? CyclicOrder::natural(gammas.size()) : CyclicOrder(order);
    const EquilibriumResult res = ring_equilibrium(gammas, cyc, Cylinder(radius));
    for (std::size_t k = 0; k < res.configuration.size(); ++k) {
        std::cout << "vortex " << k + 1 << ": x=" << format_g17(res.configuration.points()[k].x)
                  << " gamma=" << format_g17(gammas[k]) << "\n";
    }
    std::cout << "residual=" << format_g17(res.residual) << " iterations=" << res.iterations
              << " certified=" << (res.certified ? "yes" : "no") << "\n";
    std::cout << "spectrum=";
    for (std::size_t i = 0; i < res.hessian_spectrum.size(); ++i) {
        std::cout << (i ? "," : "") << format_g17(res.hessian_spectrum[i]);
    }
    std::cout << "\n";
    if (!out_path.empty()) {
        RunConfig cfg;
        cfg.radius = radius;
        cfg.points = res.configuration.points();
        cfg.vorticities = gammas;
        write_config(cfg, out_path);
    }
    return res.certified ? 0 : 2;
}

int run_complete3(const std::vector<double>& z1v, const std::vector<double>& z2v, double g1,
                  double g2, double radius) {
    const Cylinder cyl(radius);
    const CylPoint z1{z1v[0], z1v[1]}, z2{z2v[0], z2v[1]};
    const auto points = stagnation_points(z1, z2, g1, g2, cyl);
    for (const CylPoint& p : points) {
        std::cout << "stagnation: x=" << format_g17(p.x) << " y=" << format_g17(p.y);
        try {
            const double g3 = completing_vorticity(z1, z2, g1, g2, p, cyl);
            std::cout << " gamma3=" << format_g17(g3);
            if (g3 != 0.0) {
                const auto [ok, residual] =
                    is_equilibrium(Configuration(cyl, {z1, z2, p}, {g1, g2, g3}), 1e-9);
                std::cout << " residual=" << format_g17(residual)
                          << " equilibrium=" << (ok ? "yes" : "no");
            } else {
                std::cout << " (pair already stationary)";
            }
        } catch (const std::exception& e) {
            std::cout << " no completion: " << e.what();
        }
        std::cout << "\n";
    }
    return 0;
}

int run_reduce3(const std::vector<double>& cv, double g, double gp,
                const std::vector<double>& zv) {
    const Split3 s({cv[0], cv[1]}, g, gp, {zv[0], zv[1]});
    const double hr = reduced_h3(s);
    const double hf = hamiltonian(embed3(s));
    std::cout << "H_reduced=" << format_g17(hr) << " H_full=" << format_g17(hf)
              << " difference=" << format_g17(std::abs(hr - hf)) << "\n";
    return 0;
}

int run_reduce4(double b, double g, double gp, const std::vector<double>& zv) {
    const Split4 s(b, g, gp, {zv[0], zv[1]});
    const double hr = reduced_h4(s);
    const double hf = hamiltonian(embed4(s));
    const Regime regime = classify_regime(s);
    const char* name = regime == Regime::leapfrog        ? "leapfrog"
                       : regime == Regime::pair_escape   ? "pair_escape"
                                                         : "near_separatrix";
    std::cout << "H_reduced=" << format_g17(hr) << " H_full=" << format_g17(hf)
              << " difference=" << format_g17(std::abs(hr - hf)) << " regime=" << name << "\n";
    return 0;
}

int run_contour(int kind, double g, double gp, const std::vector<double>& cv, double b,
                const GridWindow& window, std::size_t nxi, std::size_t neta,
                const std::string& out_path) {
    SplitParams params;
    params.gamma = g;
    params.gamma_prime = gp;
    params.c = {cv[0], cv[1]};
    params.b = b;
    const LevelGrid grid = level_grid(kind == 3 ? SplitKind::split3 : SplitKind::split4,
                                      params, window, nxi, neta);
    write_level_grid(grid, out_path);
    std::size_t masked = 0;
    for (unsigned char m : grid.mask) {
        masked += m;
    }
    std::cout << "grid " << nxi << "x" << neta << " written to " << out_path << " (" << masked
              << " masked cells)\n";
    return 0;
}

int run_separatrix(double b, double g, double gp, double eps) {
    const SeparatrixResult res = rho_critical(b, g, gp);
    std::cout << "eta_re=" << format_g17(res.zeta_re.imag()) << " rho=" << format_g17(res.rho)
              << " h_saddle=" << format_g17(res.h_saddle) << "\n";
    if (eps != 0.0) {
        const double exact = eta_re(b, 1.0 + eps, 1.0);
        const double approx = eta_re_perturbative(b, eps);
        const double rho_eq = rho_critical(b, 1.0, 1.0).rho;
        const double rho_eps = rho_critical(b, 1.0 + eps, 1.0).rho;
        const double t = std::tanh(b);
        const double s2 = 1.0 / (std::cosh(b) * std::cosh(b));
        const double rho_pred =
            rho_eq - t * s2 / (1.0 + std::cosh(b) * std::cosh(b)) * eps * eps /
                         (4.0 * std::sqrt(2.0));
        std::cout << "eta_re(1+eps)=" << format_g17(exact)
                  << " expansion=" << format_g17(approx)
                  << " difference=" << format_g17(std::abs(exact - approx)) << "\n";
        std::cout << "rho(1+eps)=" << format_g17(rho_eps)
                  << " expansion=" << format_g17(rho_pred)
                  << " difference=" << format_g17(std::abs(rho_eps - rho_pred)) << "\n";
    }
    return 0;
}

int run_street(int n, double a, double b, double gamma, double radius,
               const std::string& out_path) {
    const Cylinder cyl(radius);
    const Configuration street = vortex_street_family(n, a, b, gamma, cyl);
    const RelEqCheck check = verify_relative_equilibrium(street, 1e-10);
    std::cout << "vortices=" << street.size()
              << " common_velocity=" << format_g17(check.common_velocity.vx) << ","
              << format_g17(check.common_velocity.vy)
              << " max_deviation=" << format_g17(check.max_deviation)
              << " relative_equilibrium=" << (check.is_relative_equilibrium ? "yes" : "no")
              << "\n";
    if (!out_path.empty()) {
        RunConfig cfg;
        cfg.radius = radius;
        cfg.points = street.points();
        cfg.vorticities = street.vorticities();
        write_config(cfg, out_path);
    }
    return check.is_relative_equilibrium ? 0 : 2;
}

int run_rpo(const std::string& config_path, const std::string& traj_path, double tol) {
    const RunConfig cfg = read_config(config_path);
    const Trajectory traj = read_trajectory_csv(traj_path, cfg);
    const double use_tol = tol > 0.0 ? tol : 1e-6 * cfg.radius;
    const auto report = detect_relative_period(traj, use_tol, cfg.integrator);
    if (!report) {
        std::cerr << "no shape closure within the stored horizon\n";
        return 3;
    }
    std::string winding = "nan";
    if (cfg.vorticities.size() >= 2) {
        try {
            const auto zeta = split4_zeta_series(traj);
            std::vector<std::complex<double>> within;
            for (std::size_t i = 0; i < traj.times.size(); ++i) {
                if (report->continuous_closure ||
                    traj.times[i] <= report->period * (1.0 + 1e-12)) {
                    within.push_back(zeta[i]);
                }
            }
            winding = format_g17(winding_angle(within));
        } catch (const std::exception&) {
            // leave nan: the separation series crossed the origin
        }
    }
    std::cout << "T,drift_x,drift_y,residual,winding\n";
    std::cout << format_g17(report->period) << "," << format_g17(report->drift.real()) << ","
              << format_g17(report->drift.imag()) << "," << format_g17(report->residual) << ","
              << winding << "\n";
    if (report->continuous_closure) {
        std::cout << "continuous closure: the shape never leaves the tolerance ball\n";
    }
    return 0;
}

int run_selftest() {
    bool all_ok = true;
    auto report = [&](const std::string& name, bool ok, double value) {
        all_ok = all_ok && ok;
        std::cout << (ok ? "PASS" : "FAIL") << " " << name << " (" << format_g17(value)
                  << ")\n";
    };

    // Averaging the cotangent over the n-fold covering reproduces it.
    {
        double worst = 0.0;
        for (int n : {2, 3, 5}) {
            for (int i = 0; i < 40; ++i) {
                const std::complex<double> z(0.13 + 0.151 * i, -1.3 + 0.071 * i);
                std::complex<double> sum = 0.0;
                for (int l = 1; l <= n; ++l) {
                    const std::complex<double> w =
                        (z + std::numbers::pi * static_cast<double>(l)) /
                        static_cast<double>(n);
                    sum += std::cos(w) / std::sin(w);
                }
                sum /= static_cast<double>(n);
                const std::complex<double> direct = std::cos(z) / std::sin(z);
                worst = std::max(worst, std::abs(sum - direct));
            }
        }
        report("cotangent covering identity", worst < 1e-12, worst);
    }

    // Energy and momentum drift over a leapfrog run.
    {
        const Configuration config = embed4(Split4(1.0, 1.0, 1.0, {0.0, 0.3}));
        const Trajectory traj = integrate(config, 5.0);
        const double dh = std::abs(traj.energy.back() - traj.energy.front());
        const double dp = std::abs(traj.momentum.back() - traj.momentum.front());
        report("energy conservation", dh < 1e-8, dh);
        report("momentum conservation", dp < 1e-8, dp);
    }

    // A doubled copy on the doubled cylinder shadows the base system.
    {
        const Configuration base(Cylinder(1.0), {{0.5, 0.4}, {2.5, -0.3}, {4.2, 0.1}},
                                 {1.0, 0.8, -0.5});
        const Configuration wide = nfold_copy(base, 2);
        const Trajectory tb = integrate(base, 2.0);
        const Trajectory tw = integrate(wide, 2.0);
        const auto zb = tb.lifted_positions(tb.samples() - 1);
        const auto zw = tw.lifted_positions(tw.samples() - 1);
        double worst = 0.0;
        for (std::size_t k = 0; k < zb.size(); ++k) {
            worst = std::max(worst, std::abs(zw[k] - zb[k]));
        }
        report("covering projection", worst < 1e-6, worst);
    }

    return all_ok ? 0 : 1;
}

} // namespace

int cli_dispatch(int argc, const char* const* argv) {
    CLI::App app{"point-vortex dynamics on a periodic strip"};
    app.require_subcommand(1);
    int rc = 0;

    auto guard = [&rc](auto&& fn) {
        return [&rc, fn]() {
            try {
                rc = fn();
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                rc = 1;
            }
        };
    };

    // simulate
    auto* sim = app.add_subcommand("simulate", "integrate a run config, write trajectory CSV");
    std::string sim_config, sim_out;
    double sim_horizon = 0.0, sim_stride = -1.0;
    sim->add_option("--config", sim_config, "run configuration file")->required();
    sim->add_option("--out", sim_out, "output CSV path")->required();
    sim->add_option("--horizon", sim_horizon, "override the config horizon");
    sim->add_option("--stride", sim_stride, "override the sampling stride");
    sim->callback(guard([&]() { return run_simulate(sim_config, sim_out, sim_horizon, sim_stride); }));

    // equilibrium
    auto* eq = app.add_subcommand("equilibrium", "solve a same-sign ring equilibrium");
    std::vector<double> eq_gammas;
    std::vector<std::size_t> eq_order;
    double eq_radius = 1.0;
    std::string eq_out;
    eq->add_option("--gamma", eq_gammas, "vorticities")->required()->expected(-1);
    eq->add_option("--order", eq_order, "cyclic order of vortex indices (0-based)")
        ->expected(-1);
    eq->add_option("--radius", eq_radius, "cylinder radius");
    eq->add_option("--out", eq_out, "write the solution as a run config");
    eq->callback(guard([&]() { return run_equilibrium(eq_gammas, eq_order, eq_radius, eq_out); }));

    // complete3
    auto* c3 = app.add_subcommand("complete3", "stagnation points and completing vorticity");
    std::vector<double> c3_z1, c3_z2;
    double c3_g1 = 1.0, c3_g2 = 1.0, c3_radius = 1.0;
    c3->add_option("--z1", c3_z1, "first vortex x y")->required()->expected(2);
    c3->add_option("--z2", c3_z2, "second vortex x y")->required()->expected(2);
    c3->add_option("--g1", c3_g1, "first vorticity")->required();
    c3->add_option("--g2", c3_g2, "second vorticity")->required();
    c3->add_option("--radius", c3_radius, "cylinder radius");
    c3->callback(guard([&]() { return run_complete3(c3_z1, c3_z2, c3_g1, c3_g2, c3_radius); }));

    // reduce3
    auto* r3 = app.add_subcommand("reduce3", "reduced energy of the 3-vortex split");
    std::vector<double> r3_c, r3_zeta;
    double r3_g = 1.0, r3_gp = 1.0;
    r3->add_option("--c", r3_c, "base pair position x y")->required()->expected(2);
    r3->add_option("--gamma", r3_g, "first strength")->required();
    r3->add_option("--gamma-prime", r3_gp, "second strength")->required();
    r3->add_option("--zeta", r3_zeta, "split coordinate x y")->required()->expected(2);
    r3->callback(guard([&]() { return run_reduce3(r3_c, r3_g, r3_gp, r3_zeta); }));

    // reduce4
    auto* r4 = app.add_subcommand("reduce4", "reduced energy of the 4-vortex split");
    std::vector<double> r4_zeta;
    double r4_b = 1.0, r4_g = 1.0, r4_gp = 1.0;
    r4->add_option("--b", r4_b, "pair height")->required();
    r4->add_option("--gamma", r4_g, "first strength")->required();
    r4->add_option("--gamma-prime", r4_gp, "second strength")->required();
    r4->add_option("--zeta", r4_zeta, "split coordinate x y")->required()->expected(2);
    r4->callback(guard([&]() { return run_reduce4(r4_b, r4_g, r4_gp, r4_zeta); }));

    // contour
    auto* ct = app.add_subcommand("contour", "sample a reduced energy on a grid");
    int ct_kind = 4;
    double ct_g = 1.0, ct_gp = 1.0, ct_b = 1.0;
    std::vector<double> ct_c{0.0, 1.0};
    GridWindow ct_window{-1.5, 1.5, -1.5, 1.5};
    std::size_t ct_nxi = 201, ct_neta = 201;
    std::string ct_out;
    ct->add_option("--kind", ct_kind, "3 or 4")->required()->check(CLI::IsMember({3, 4}));
    ct->add_option("--gamma", ct_g, "first strength");
    ct->add_option("--gamma-prime", ct_gp, "second strength");
    ct->add_option("--c", ct_c, "base pair position x y (kind 3)")->expected(2);
    ct->add_option("--b", ct_b, "pair height (kind 4)");
    ct->add_option("--xi-min", ct_window.xi_min, "window");
    ct->add_option("--xi-max", ct_window.xi_max, "window");
    ct->add_option("--eta-min", ct_window.eta_min, "window");
    ct->add_option("--eta-max", ct_window.eta_max, "window");
    ct->add_option("--nxi", ct_nxi, "samples along xi");
    ct->add_option("--neta", ct_neta, "samples along eta");
    ct->add_option("--out", ct_out, "grid output path")->required();
    ct->callback(guard([&]() {
        return run_contour(ct_kind, ct_g, ct_gp, ct_c, ct_b, ct_window, ct_nxi, ct_neta, ct_out);
    }));

    // separatrix
    auto* sx = app.add_subcommand("separatrix", "saddle level and critical radius");
    double sx_b = 1.0, sx_g = 1.0, sx_gp = 1.0, sx_eps = 0.0;
    sx->add_option("--b", sx_b, "pair height")->required();
    sx->add_option("--gamma", sx_g, "first strength");
    sx->add_option("--gamma-prime", sx_gp, "second strength");
    sx->add_option("--eps", sx_eps, "also compare the small-asymmetry expansions at ratio 1+eps");
    sx->callback(guard([&]() { return run_separatrix(sx_b, sx_g, sx_gp, sx_eps); }));

    // street
    auto* st = app.add_subcommand("street", "staggered double row of vortices");
    int st_n = 1;
    double st_a = 0.0, st_b = 1.0, st_g = 1.0, st_radius = 1.0;
    std::string st_out;
    st->add_option("--n", st_n, "vortices per row")->required();
    st->add_option("--a", st_a, "horizontal stagger of the lower row")->required();
    st->add_option("--b", st_b, "half the vertical separation")->required();
    st->add_option("--gamma", st_g, "upper-row strength")->required();
    st->add_option("--radius", st_radius, "cylinder radius");
    st->add_option("--out", st_out, "write the family as a run config");
    st->callback(guard([&]() { return run_street(st_n, st_a, st_b, st_g, st_radius, st_out); }));

    // rpo
    auto* rp = app.add_subcommand("rpo", "relative period detection on a trajectory file");
    std::string rp_config, rp_traj;
    double rp_tol = 0.0;
    rp->add_option("--config", rp_config, "run configuration file")->required();
    rp->add_option("--traj", rp_traj, "trajectory CSV written by simulate")->required();
    rp->add_option("--tol", rp_tol, "shape distance tolerance (default 1e-6 * radius)");
    rp->callback(guard([&]() { return run_rpo(rp_config, rp_traj, rp_tol); }));

    // selftest
    auto* self = app.add_subcommand("selftest", "identity and conservation checks");
    self->callback(guard([&]() { return run_selftest(); }));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    return rc;
}

} // namespace cylvort
