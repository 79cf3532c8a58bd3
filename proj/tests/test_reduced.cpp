#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cylvort/cylinder.hpp>
#include <cylvort/dynamics.hpp>
#include <cylvort/reduced.hpp>
#include <cylvort/rpo.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

using namespace cylvort;

namespace {

constexpr double kPi = std::numbers::pi;
using C = std::complex<double>;

std::mt19937_64 rng_for(const char* tag) {
    std::seed_seq seq(tag, tag + std::char_traits<char>::length(tag));
    return std::mt19937_64(seq);
}

} // namespace

TEST_CASE("three-vortex reduced energy diverges as the split closes") {
    const C c(0.0, 1.0);
    const double h3 = reduced_h3(Split3(c, 1.0, 1.0, C(1e-3, 1e-3)));
    const double h6 = reduced_h3(Split3(c, 1.0, 1.0, C(1e-6, 1e-6)));
    const double h1 = reduced_h3(Split3(c, 1.0, 1.0, C(0.3, 0.2)));
    CHECK(h3 > h1);
    CHECK(h6 > h3);

    CHECK_THROWS_AS(Split3(C(0.0, 0.0), 1.0, 1.0, C(0.1, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(Split3(c, 1.0, -1.0, C(0.1, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(reduced_h3(Split3(c, 1.0, 1.0, C(0.0, 0.0))), std::domain_error);
}

TEST_CASE("embed3 realizes the split identities") {
    auto rng = rng_for("embed3-identities");
    std::uniform_real_distribution<double> ug(0.4, 2.0);
    std::uniform_real_distribution<double> uz(-0.4, 0.4);
    for (int i = 0; i < 20; ++i) {
        const double g = ug(rng), gp = ug(rng);
        const C c(uz(rng), 1.0 + uz(rng));
        const C zeta(uz(rng), uz(rng));
        if (std::abs(zeta) < 0.05) continue;

        Split3 s(c, g, gp, zeta);
        Configuration conf = embed3(s);
        REQUIRE(conf.size() == 3);

        CHECK(conf.vorticities()[0] == g);
        CHECK(conf.vorticities()[1] == gp);
        CHECK(conf.vorticities()[2] == -g - gp);
        CHECK(conf.total_vorticity() == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));

        // The weighted center of the split pair is exactly c, and the
        // separation of the two fragments is 2 zeta.
        const C z1(s.c + 2.0 * gp / (g + gp) * zeta);
        const C z2(s.c - 2.0 * g / (g + gp) * zeta);
        const C center = (g * z1 + gp * z2) / (g + gp);
        CHECK(std::abs(center - c) < 1e-14);
        CHECK(std::abs((z1 - z2) - 2.0 * zeta) < 1e-14);

        // Embedded points match the construction on the quotient.
        Cylinder cyl(1.0);
        CHECK(quotient_distance(conf.points()[0], {z1.real(), z1.imag()}, cyl) < 1e-13);
        CHECK(quotient_distance(conf.points()[1], {z2.real(), z2.imag()}, cyl) < 1e-13);
        CHECK(quotient_distance(conf.points()[2], {-c.real(), -c.imag()}, cyl) < 1e-13);
    }
}

TEST_CASE("three-vortex reduction equals the full energy exactly") {
    auto rng = rng_for("h3-offset");
    std::uniform_real_distribution<double> ug(0.4, 2.0);
    std::uniform_real_distribution<double> uz(-0.4, 0.4);
    const double g = ug(rng), gp = ug(rng);
    const C c(0.2, 0.9);

    std::vector<double> offsets;
    for (int i = 0; i < 20; ++i) {
        const C zeta(uz(rng), uz(rng));
        if (std::abs(zeta) < 0.05) continue;
        Split3 s(c, g, gp, zeta);
        offsets.push_back(reduced_h3(s) - hamiltonian(embed3(s)));
    }
    REQUIRE(offsets.size() >= 10);
    double mean = 0.0;
    for (double o : offsets) mean += o;
    mean /= static_cast<double>(offsets.size());
    double var = 0.0;
    for (double o : offsets) var += (o - mean) * (o - mean);
    var /= static_cast<double>(offsets.size());
    CHECK(var < 1e-10);
    // The construction makes the offset zero, not merely constant.
    CHECK(std::abs(mean) < 1e-12);
}

TEST_CASE("equal-strength three-vortex splits are symmetric in zeta") {
    const C c(0.0, 1.0);
    auto rng = rng_for("h3-symmetry");
    std::uniform_real_distribution<double> uz(-0.5, 0.5);
    for (int i = 0; i < 20; ++i) {
        const C zeta(uz(rng), uz(rng));
        if (std::abs(zeta) < 0.05) continue;
        const double hp = reduced_h3(Split3(c, 1.3, 1.3, zeta));
        const double hm = reduced_h3(Split3(c, 1.3, 1.3, -zeta));
        CHECK(hp == hm);
    }
}

TEST_CASE("four-vortex reduced energy matches the equal-strength closed form") {
    const double b = 1.0;
    const double G = 1.0;
    // At eta = 0: exp(2 pi H / G^2) = (sin^2 xi + sinh^2 b)/sin^2 xi * sinh^2 b.
    for (double xi : {0.3, 0.7, 1.2, 1.5}) {
        Split4 s(b, G, G, C(xi, 0.0));
        const double lhs = std::exp(2.0 * kPi * reduced_h4(s) / (G * G));
        const double sx = std::sin(xi), sb = std::sinh(b);
        const double rhs = (sx * sx + sb * sb) / (sx * sx) * (sb * sb);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("four-vortex reduction equals the full energy exactly") {
    auto rng = rng_for("h4-offset");
    std::uniform_real_distribution<double> ug(0.5, 2.0);
    std::uniform_real_distribution<double> uxi(-1.4, 1.4);
    std::uniform_real_distribution<double> ueta(-0.3, 0.3);

    for (int i = 0; i < 20; ++i) {
        const double g = ug(rng), gp = ug(rng);
        const double b = 1.0;
        const C zeta(uxi(rng), ueta(rng));
        if (std::abs(zeta.real()) < 0.05) continue;
        Split4 s(b, g, gp, zeta);
        const double diff = reduced_h4(s) - hamiltonian(embed4(s));
        CHECK(std::abs(diff) < 1e-12);
    }
}

TEST_CASE("embed4 realizes the reflective construction") {
    const double b = 1.0, g = 1.4, gp = 0.7;
    const C zeta(0.6, 0.2);
    Split4 s(b, g, gp, zeta);
    Configuration conf = embed4(s);
    REQUIRE(conf.size() == 4);

    CHECK(conf.vorticities()[0] == g);
    CHECK(conf.vorticities()[1] == gp);
    CHECK(conf.vorticities()[2] == -gp);
    CHECK(conf.vorticities()[3] == -g);
    CHECK(std::abs(conf.total_vorticity()) < 1e-15);

    // Reflection symmetry: conjugating positions and negating vorticities
    // maps vortex k to vortex 3-k.
    Cylinder cyl(1.0);
    for (std::size_t k = 0; k < 4; ++k) {
        const CylPoint& p = conf.points()[k];
        const CylPoint& q = conf.points()[3 - k];
        CHECK(quotient_distance({p.x, -p.y}, q, cyl) < 1e-13);
        CHECK(conf.vorticities()[k] == -conf.vorticities()[3 - k]);
    }

    // The center vector between the positive and negative groups is 2ib.
    Partition split{{0, 1}, {2, 3}};
    const C v = center_vector(conf, split);
    CHECK(std::abs(v - C(0.0, 2.0 * b)) < 1e-13);
}

TEST_CASE("split4 canonicalizes xi and rejects singular circles") {
    const double b = 1.0;
    Split4 wrapped(b, 1.0, 1.0, C(kPi / 2.0 + 0.3, 0.1));
    CHECK(wrapped.zeta.real() == doctest::Approx(-kPi / 2.0 + 0.3).epsilon(1e-13));
    CHECK(wrapped.zeta.imag() == 0.1);

    // Singular circles for G/G' = 2: eta = -b(1+2)/2 and eta = b(1+0.5)/2.
    CHECK_THROWS_AS(Split4(b, 2.0, 1.0, C(0.3, 0.75)), std::invalid_argument);
    CHECK_THROWS_AS(Split4(b, 2.0, 1.0, C(0.3, -1.5)), std::invalid_argument);
    CHECK_NOTHROW(Split4(b, 2.0, 1.0, C(0.3, 0.70)));

    CHECK_THROWS_AS(Split4(0.0, 1.0, 1.0, C(0.3, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(Split4(b, 1.0, -1.0, C(0.3, 0.0)), std::invalid_argument);
}

TEST_CASE("reduced energies along an integrated trajectory stay constant") {
    // Consistency of the reduction: zeta extracted from the integrated
    // full system keeps the reduced energy constant.
    Split4 s(1.0, 1.0, 1.0, C(0.0, 0.3));
    Configuration conf = embed4(s);
    Trajectory traj = integrate(conf, 5.0);
    REQUIRE(traj.stop_reason == StopReason::completed);

    const auto zetas = split4_zeta_series(traj);
    REQUIRE(zetas.size() == traj.samples());
    const double h0 = reduced_h4_raw(1.0, 1.0, 1.0, zetas.front().real(),
                                     zetas.front().imag());
    for (std::size_t i = 0; i < zetas.size(); ++i) {
        const double h = reduced_h4_raw(1.0, 1.0, 1.0, zetas[i].real(), zetas[i].imag());
        CHECK(std::abs(h - h0) < 1e-7);
    }
}

TEST_CASE("eta_re solves the saddle equation") {
    CHECK(eta_re(1.0, 1.0, 1.0) == 0.0);
    CHECK(eta_re(0.7, 2.0, 2.0) == 0.0);

    auto rng = rng_for("eta-re");
    std::uniform_real_distribution<double> ub(0.5, 1.5);
    std::uniform_real_distribution<double> uratio(1.1, 2.5);
    for (int i = 0; i < 10; ++i) {
        const double b = ub(rng);
        const double g = uratio(rng), gp = 1.0;
        const double eta = eta_re(b, g, gp);
        // The stronger pair sits higher.
        CHECK(eta > 0.0);
        // Swapping strengths mirrors the saddle.
        CHECK(eta_re(b, gp, g) == doctest::Approx(-eta).epsilon(1e-10));

        // The saddle is a relative equilibrium of the full system.
        Split4 s(b, g, gp, C(kPi / 2.0, eta));
        auto ver = verify_relative_equilibrium(embed4(s), 1e-9);
        CHECK(ver.is_relative_equilibrium);
        CHECK(ver.max_deviation < 1e-9);
    }
}

TEST_CASE("eta_re follows the saddle equation's own expansion") {
    // Expanding the saddle equation at G/G' = 1 + eps gives
    //   eta = a eps - (a/2) eps^2 + O(eps^3),  a = tanh(b) sech^2(b) / 2.
    for (double b : {0.6, 1.0, 1.7}) {
        const double sech = 1.0 / std::cosh(b);
        const double a = std::tanh(b) * sech * sech / 2.0;

        std::vector<double> eps{0.01, 0.02, 0.04};
        std::vector<double> err;
        for (double e : eps) {
            const double series = a * e - 0.5 * a * e * e;
            err.push_back(std::abs(eta_re(b, 1.0 + e, 1.0) - series));
        }
        // O(eps^3) remainder: each doubling of eps grows the error ~8x.
        CHECK(err[1] / err[0] > 7.0);
        CHECK(err[1] / err[0] < 9.0);
        CHECK(err[2] / err[1] > 7.0);
        CHECK(err[2] / err[1] < 9.0);

        // The quadratic coefficient of the root, extracted by a symmetric
        // second difference, is -a/2.
        const double h = 1e-3;
        const double c2 = (eta_re(b, 1.0 + h, 1.0) + eta_re(b, 1.0 - h, 1.0)) /
                          (2.0 * h * h);
        CHECK(c2 == doctest::Approx(-a / 2.0).epsilon(1e-5));
    }
}

TEST_CASE("eta_re_perturbative evaluates its documented formula") {
    CHECK(eta_re_perturbative(1.0, 0.0) == 0.0);

    auto rng = rng_for("eta-re-perturbative");
    std::uniform_real_distribution<double> ub(0.3, 2.0);
    std::uniform_real_distribution<double> ue(-0.1, 0.1);
    for (int i = 0; i < 20; ++i) {
        const double b = ub(rng), e = ue(rng);
        const double sech = 1.0 / std::cosh(b);
        const double s2 = sech * sech;
        const double literal =
            std::tanh(b) * s2 * (e / 2.0 - (1.0 + s2 * s2 / 2.0) * e * e / 4.0);
        CHECK(eta_re_perturbative(b, e) == doctest::Approx(literal).epsilon(1e-15));
    }

    // Its quadratic term deviates from the saddle equation's expansion by
    // a sech^4(b)/4 per eps^2, so the gap to the root is quadratic, not
    // cubic (see the header note).
    const double b = 1.0;
    const double sech = 1.0 / std::cosh(b);
    const double a = std::tanh(b) * sech * sech / 2.0;
    const double gap_coef = a * std::pow(sech, 4) / 4.0;
    std::vector<double> eps{0.01, 0.02, 0.04};
    std::vector<double> err;
    for (double e : eps) {
        err.push_back(std::abs(eta_re(b, 1.0 + e, 1.0) - eta_re_perturbative(b, e)));
    }
    CHECK(err[0] / (eps[0] * eps[0]) == doctest::Approx(gap_coef).epsilon(0.1));
    CHECK(err[1] / err[0] > 3.5);
    CHECK(err[1] / err[0] < 5.5);
    CHECK(err[2] / err[1] > 3.5);
    CHECK(err[2] / err[1] < 5.5);
}

TEST_CASE("rho_critical reproduces the equal-strength closed form") {
    for (double b : {0.5, 1.0, 2.0}) {
        SeparatrixResult res = rho_critical(b, 1.0, 1.0);
        const double closed = std::atanh(std::tanh(b) / std::sqrt(2.0));
        CHECK(res.rho == doctest::Approx(closed).epsilon(1e-12));
        CHECK(res.zeta_re.real() == doctest::Approx(kPi / 2.0).epsilon(1e-14));
        CHECK(res.zeta_re.imag() == 0.0);

        // Saddle level: 2 pi H = log(cosh^2 b sinh^2 b) at (pi/2, 0).
        const double hs = std::log(std::cosh(b) * std::cosh(b) * std::sinh(b) * std::sinh(b)) /
                          (2.0 * kPi);
        CHECK(res.h_saddle == doctest::Approx(hs).epsilon(1e-12));
    }
}

TEST_CASE("rho_critical approaches the planar limit on a wide cylinder") {
    // Dimensional transcription of r = 10^3: lengths shrink by 1/r inside
    // the normalized module, so rho(b/r) * r -> b / sqrt(2).
    const double r = 1e3;
    const double b = 1.0;
    SeparatrixResult res = rho_critical(b / r, 1.0, 1.0);
    CHECK(res.rho * r == doctest::Approx(b / std::sqrt(2.0)).epsilon(1e-5));
}

TEST_CASE("rho_critical shrinks linearly under small strength asymmetry") {
    const double b = 1.0;
    const double rho0 = rho_critical(b, 1.0, 1.0).rho;

    // The separatrix crossing nearer the origin moves in by ~0.0285|eps|
    // at b = 1: the two axis crossings split linearly and the minimum
    // follows the shrinking one, whichever pair is stronger.
    for (double e : {1e-3, 2e-3, 4e-3}) {
        const double plus = rho_critical(b, 1.0 + e, 1.0).rho;
        const double minus = rho_critical(b, 1.0 - e, 1.0).rho;
        CHECK(plus < rho0);
        CHECK(minus < rho0);
        CHECK((rho0 - plus) / e == doctest::Approx(0.02851).epsilon(2e-3));
        CHECK((rho0 - minus) / e == doctest::Approx(0.02851).epsilon(2e-3));
    }

    // Swapping the pair strengths mirrors the level structure in eta and
    // leaves the nearest crossing unchanged.
    for (double e : {0.01, 0.05, 0.2}) {
        const double swapped = rho_critical(b, 1.0, 1.0 + e).rho;
        CHECK(rho_critical(b, 1.0 + e, 1.0).rho ==
              doctest::Approx(swapped).epsilon(1e-12));
    }
}

namespace {

// Independent threshold oracle: bisect the full four-vortex energy along
// the eta axis for the saddle level, taking the crossing nearer zero over
// both signs. Uses only embed4 and hamiltonian.
double rho_oracle(double b, double g, double gp) {
    const double saddle_eta = eta_re(b, g, gp);
    const double h_saddle = hamiltonian(embed4(Split4(b, g, gp, C(kPi / 2.0, saddle_eta))));
    const double circle_hi = b * (g + gp) / (2.0 * g);
    const double circle_lo = b * (g + gp) / (2.0 * gp);
    auto crossing = [&](double lo, double hi) {
        auto f = [&](double eta) {
            return hamiltonian(embed4(Split4(b, g, gp, C(0.0, eta)))) - h_saddle;
        };
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (f(mid) > 0.0) { lo = mid; } else { hi = mid; }
        }
        return 0.5 * (lo + hi);
    };
    const double plus = crossing(1e-9, circle_hi - 1e-9);
    const double minus = crossing(-1e-9, -(circle_lo - 1e-9));
    return std::min(std::abs(plus), std::abs(minus));
}

}  // namespace

TEST_CASE("rho_critical agrees with a full-energy bisection oracle") {
    auto rng = rng_for("rho-oracle");
    std::uniform_real_distribution<double> ub(0.6, 1.6);
    std::uniform_real_distribution<double> uratio(0.8, 1.25);
    for (int i = 0; i < 8; ++i) {
        const double b = ub(rng);
        const double g = uratio(rng), gp = 1.0;
        const double got = rho_critical(b, g, gp).rho;
        CHECK(got == doctest::Approx(rho_oracle(b, g, gp)).epsilon(1e-9));
    }
}

TEST_CASE("classify_regime separates leapfrog from escape at the threshold") {
    const double b = 1.0;
    const double rho = rho_critical(b, 1.0, 1.0).rho;

    CHECK(classify_regime(Split4(b, 1.0, 1.0, C(0.0, 0.9 * rho))) == Regime::leapfrog);
    CHECK(classify_regime(Split4(b, 1.0, 1.0, C(0.0, 1.1 * rho))) == Regime::pair_escape);
    CHECK(classify_regime(Split4(b, 1.0, 1.0, C(0.0, rho))) == Regime::near_separatrix);
}

TEST_CASE("level grids mask singular cells and match closed forms") {
    SplitParams params;
    params.gamma = 1.0;
    params.gamma_prime = 1.0;
    params.b = 1.0;
    // The eta rows land exactly on the singular circles at +-1 and the
    // middle xi column sits at the origin, so both singular loci mask.
    GridWindow window{-kPi / 2.0, kPi / 2.0, -1.25, 1.25};
    LevelGrid grid = level_grid(SplitKind::split4, params, window, 41, 11);

    REQUIRE(grid.nxi == 41);
    REQUIRE(grid.neta == 11);
    REQUIRE(grid.values.size() == 41 * 11);

    // Window endpoints are inclusive.
    CHECK(grid.xi_at(0) == doctest::Approx(window.xi_min).epsilon(1e-14));
    CHECK(grid.xi_at(40) == doctest::Approx(window.xi_max).epsilon(1e-14));
    CHECK(grid.eta_at(0) == doctest::Approx(window.eta_min).epsilon(1e-14));
    CHECK(grid.eta_at(10) == doctest::Approx(window.eta_max).epsilon(1e-14));

    // The middle row is eta = 0: values match the closed form, and the
    // xi -> 0 cell diverges toward +inf, hence masks.
    const std::size_t mid = 5;
    CHECK(grid.eta_at(mid) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    for (std::size_t j = 0; j < grid.nxi; ++j) {
        if (grid.masked(mid, j)) continue;
        const double xi = grid.xi_at(j);
        const double sx = std::sin(xi), sb = std::sinh(1.0);
        const double expect = std::log((sx * sx + sb * sb) / (sx * sx) * (sb * sb)) /
                              (2.0 * kPi);
        CHECK(grid.value(mid, j) == doctest::Approx(expect).epsilon(1e-12));
    }

    // Unmasked cells are finite and below the cap; masked cells are NaN.
    std::size_t masked_count = 0;
    for (std::size_t i = 0; i < grid.neta; ++i) {
        for (std::size_t j = 0; j < grid.nxi; ++j) {
            if (grid.masked(i, j)) {
                ++masked_count;
                CHECK(std::isnan(grid.value(i, j)));
            } else {
                CHECK(std::isfinite(grid.value(i, j)));
                CHECK(std::abs(grid.value(i, j)) <= grid.divergence_cap);
            }
        }
    }
    CHECK(masked_count > 0);
    CHECK(masked_count < grid.values.size() / 4);

    // Rows on the singular circles mask wholesale.
    for (std::size_t j = 0; j < grid.nxi; ++j) {
        CHECK(grid.masked(1, j));
        CHECK(grid.masked(9, j));
    }
}

TEST_CASE("equal-ratio grids asymptote to the pair energy at large eta") {
    // Beyond the singular circles the reduced energy flattens toward
    // log(sin^2 xi + sinh^2 b) / 2pi.
    const double b = 1.0;
    for (double xi : {0.4, 1.0, 1.5}) {
        const double h = reduced_h4_raw(b, 1.0, 1.0, xi, 10.0);
        const double sx = std::sin(xi), sb = std::sinh(b);
        const double expect = std::log(sx * sx + sb * sb) / (2.0 * kPi);
        CHECK(h == doctest::Approx(expect).epsilon(1e-6));
    }
}

TEST_CASE("reciprocal strength ratios give eta-mirrored grids") {
    SplitParams a;
    a.gamma = 1.5;
    a.gamma_prime = 1.0;
    a.b = 1.0;
    SplitParams m;
    m.gamma = 1.0;
    m.gamma_prime = 1.5;
    m.b = 1.0;

    // Symmetric eta window so mirroring maps the grid onto itself.
    GridWindow window{0.1, 1.5, -0.8, 0.8};
    LevelGrid ga = level_grid(SplitKind::split4, a, window, 31, 25);
    LevelGrid gm = level_grid(SplitKind::split4, m, window, 31, 25);

    for (std::size_t i = 0; i < ga.neta; ++i) {
        const std::size_t flip = ga.neta - 1 - i;
        for (std::size_t j = 0; j < ga.nxi; ++j) {
            REQUIRE(ga.masked(i, j) == gm.masked(flip, j));
            if (ga.masked(i, j)) continue;
            CHECK(ga.value(i, j) == doctest::Approx(gm.value(flip, j)).epsilon(1e-12));
        }
    }
}

TEST_CASE("saddles of the reduced energy are genuine critical points") {
    const double b = 1.0, g = 1.5, gp = 1.0;
    const double eta = eta_re(b, g, gp);
    const double fd = 1e-6;

    auto h = [&](double xi, double et) { return reduced_h4_raw(b, g, gp, xi, et); };

    // Central-difference gradient at (pi/2, eta_re) vanishes.
    const double dxi = (h(kPi / 2.0 - 2.0 * fd, eta) - h(kPi / 2.0, eta)) / (2.0 * fd);
    const double deta = (h(kPi / 2.0 - fd, eta + fd) - h(kPi / 2.0 - fd, eta - fd)) /
                        (2.0 * fd);
    // xi = pi/2 is a reflection axis, so the xi-derivative vanishes by
    // symmetry; check the numeric value anyway.
    CHECK(std::abs(dxi) < 1e-6);
    CHECK(std::abs(deta) < 1e-6);

    // Hessian signature (+,-): a saddle, not an extremum.
    auto hxx = (h(kPi / 2.0 - 2.0 * fd, eta) - 2.0 * h(kPi / 2.0, eta) +
                h(kPi / 2.0 + 2.0 * fd, eta)) /
               (4.0 * fd * fd);
    auto hee = (h(kPi / 2.0, eta + fd) - 2.0 * h(kPi / 2.0, eta) + h(kPi / 2.0, eta - fd)) /
               (fd * fd);
    CHECK(hxx * hee < 0.0);
}

TEST_CASE("singular loci diverge in the documented directions") {
    // zeta -> 0: +inf (the split pair rejoins). The growth is
    // logarithmic, two units of 1/2pi per decade for unit strengths.
    const double ln10 = std::log(10.0);
    const double at6 = reduced_h4_raw(1.0, 1.0, 1.0, 1e-6, 0.0);
    const double at8 = reduced_h4_raw(1.0, 1.0, 1.0, 1e-8, 0.0);
    const double at12 = reduced_h4_raw(1.0, 1.0, 1.0, 1e-12, 0.0);
    CHECK(at6 > 4.0);
    CHECK(at8 > at6);
    CHECK(at12 > at8);
    CHECK((at12 - at8) / 4.0 == doctest::Approx(2.0 * ln10 / (2.0 * kPi)).epsilon(1e-3));

    // The singular circles send H to -inf (vortices of opposite sign
    // meet); the decade slope carries the strength ratio of the pair
    // that collides there.
    const double b = 1.0, g = 2.0, gp = 1.0;
    const double circle_lo = -b * (1.0 + g / gp) / 2.0;
    const double circle_hi = b * (1.0 + gp / g) / 2.0;

    const double lo9 = reduced_h4_raw(b, g, gp, 0.7, circle_lo + 1e-9);
    const double lo12 = reduced_h4_raw(b, g, gp, 0.7, circle_lo + 1e-12);
    CHECK(lo9 < -10.0);
    CHECK(lo12 < lo9);
    CHECK((lo9 - lo12) / 3.0 ==
          doctest::Approx(g * gp * (g / gp) * ln10 / (2.0 * kPi)).epsilon(1e-3));

    const double hi9 = reduced_h4_raw(b, g, gp, 0.7, circle_hi - 1e-9);
    const double hi12 = reduced_h4_raw(b, g, gp, 0.7, circle_hi - 1e-12);
    CHECK(hi9 < -2.0);
    CHECK(hi12 < hi9);
    CHECK((hi9 - hi12) / 3.0 ==
          doctest::Approx(g * gp * (gp / g) * ln10 / (2.0 * kPi)).epsilon(1e-3));

    const double on_circle = reduced_h4_raw(b, g, gp, 0.7, circle_hi);
    CHECK((std::isinf(on_circle) || std::isnan(on_circle)));
}
