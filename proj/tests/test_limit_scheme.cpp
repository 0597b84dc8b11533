// Limit scheme (S0): hand cases, structural identities, AP consistency.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kinhj/ap_scheme.hpp"
#include "kinhj/limit_scheme.hpp"
#include "kinhj/presets.hpp"
#include "test_support.hpp"

using namespace kinhj;
using kinhj::testing::default_grid;
using kinhj::testing::random_lipschitz_data;

namespace {

// velocities {-1, 0, 1}, dt = 0.4 <= dv^2/2
GridSpec three_velocity_grid() { return build_grid(2, 1.5, 4, 3, 0.4, 2.0); }

}  // namespace

TEST_CASE("init_limit basics") {
    GridSpec g = default_grid(1.5);
    LimitScheme sch(g);
    LimitState eq = sch.initial_state([](double, double v) { return 0.5 * v * v; });
    for (double m : eq.mu) CHECK(m == 0.0);

    LimitState bench = sch.initial_state(make_initial_data("paper-init", g));
    CHECK(all_finite(bench.phi));
    LimitState dirac = sch.initial_state(make_initial_data("dirac", g));
    CHECK(all_finite(dirac.phi));
}

TEST_CASE("hand-enumerated step on the three-velocity grid") {
    GridSpec g = three_velocity_grid();
    LimitScheme sch(g);
    // x-independent rows phi0 = (2, 1, 3) on v = (-1, 0, 1)
    LimitState s = sch.initial_state([](double, double v) {
        if (v < -0.5) return 2.0;
        if (v > 0.5) return 3.0;
        return 1.0;
    });
    LimitState next;
    sch.step(s, next);
    for (int i = 0; i < g.nx; ++i) {
        CHECK(next.mu[i] == doctest::Approx(1.0));
        CHECK(next.phi(i, 0) == doctest::Approx(1.5));
        CHECK(next.phi(i, 1) == doctest::Approx(1.0));
        CHECK(next.phi(i, 2) == doctest::Approx(1.5));
    }
}

TEST_CASE("equilibrium is a bit-exact fixed point of the limit scheme") {
    GridSpec g = default_grid(1.5);
    LimitScheme sch(g);
    LimitState s = sch.initial_state([](double, double v) { return 0.5 * v * v; });
    PhaseField q = s.phi;
    sch.run(s, 100);
    CHECK(sup_diff(s.phi, q) == 0.0);
}

TEST_CASE("step_limit commutes with constants") {
    GridSpec g = three_velocity_grid();
    LimitScheme sch(g);
    const double K = 1.7;
    std::mt19937_64 rng(5);
    auto base = random_lipschitz_data(rng, 1.0, 1.0, g.x_star);
    LimitState a = sch.initial_state(base);
    LimitState b = sch.initial_state([&](double x, double v) { return base(x, v) + K; });
    LimitState a2, b2;
    sch.step(a, a2);
    sch.step(b, b2);
    for (std::size_t k = 0; k < a2.phi.data().size(); ++k)
        CHECK(b2.phi.data()[k] - a2.phi.data()[k] == doctest::Approx(K).epsilon(1e-14));
}

TEST_CASE("variational residual vanishes on produced steps") {
    GridSpec g = default_grid(1.5);
    LimitScheme sch(g);
    LimitState s = sch.initial_state(make_initial_data("paper-init", g)), next;
    for (int n = 0; n < 10; ++n) {
        sch.step(s, next);
        PhaseField r = variational_residual(s, next, g, g.dt);
        CHECK(sup_norm(r) <= 1e-10);
        std::swap(s, next);
    }
}

TEST_CASE("variational residual detects a perturbed entry") {
    GridSpec g = three_velocity_grid();
    LimitScheme sch(g);
    LimitState s = sch.initial_state(make_initial_data("paper-init", g)), next;
    sch.step(s, next);
    const double delta = 1e-3;
    next.phi(1, 2) += delta;
    PhaseField r = variational_residual(s, next, g, g.dt);
    double expected = delta * std::max(1.0 / g.dt, 1.0);
    CHECK(r(1, 2) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("variational residual is zero on the equilibrium") {
    GridSpec g = three_velocity_grid();
    LimitScheme sch(g);
    LimitState s = sch.initial_state([](double, double v) { return 0.5 * v * v; }), next;
    sch.step(s, next);
    PhaseField r = variational_residual(s, next, g, g.dt);
    CHECK(sup_norm(r) <= 1e-12);
}

TEST_CASE("check_min_link") {
    GridSpec g = default_grid(1.5);
    LimitScheme sch(g);
    LimitState s = sch.initial_state(make_initial_data("paper-init", g)), next;

    CHECK_THROWS_AS(check_min_link(s), std::invalid_argument);  // n = 0 rejected

    for (int n = 0; n < 12; ++n) {
        sch.step(s, next);
        std::swap(s, next);
        MinLinkCheck c = check_min_link(s);
        CHECK(c.ok);
        CHECK(c.max_dev <= 1e-12);
    }
    s.mu[3] += 1e-6;
    CHECK_FALSE(check_min_link(s).ok);
}

TEST_CASE("mu decays along (S0) under dt <= dv^2/2") {
    GridSpec g = default_grid(1.5);
    REQUIRE(g.dt <= 0.5 * g.dv * g.dv);
    LimitScheme sch(g);
    LimitState s = sch.initial_state(make_initial_data("paper-init", g)), next;
    std::vector<SpatialField> mu_hist;
    for (int n = 0; n < g.nt; ++n) {
        sch.step(s, next);
        std::swap(s, next);
        mu_hist.push_back(s.mu);  // history from n = 1 on
    }
    CHECK(check_mu_decay(mu_hist));
}

TEST_CASE("constant-in-time equilibrium satisfies decay with equality") {
    GridSpec g = three_velocity_grid();
    LimitScheme sch(g);
    LimitState s = sch.initial_state([](double, double v) { return 0.5 * v * v; }), next;
    std::vector<SpatialField> mu_hist;
    for (int n = 0; n < 5; ++n) {
        sch.step(s, next);
        std::swap(s, next);
        mu_hist.push_back(s.mu);
    }
    CHECK(check_mu_decay(mu_hist, 0.0));
    for (const auto& mu : mu_hist)
        for (double m : mu) CHECK(m == 0.0);
}

TEST_CASE("the eps = 1 minimum can increase (decay is an eps -> 0 property)") {
    GridSpec g = default_grid(1.5);
    ApScheme sch(g, 1.0);
    ApState s = sch.initial_state(make_initial_data("paper-init", g)), next;
    std::vector<SpatialField> mu_hist;
    for (int n = 0; n < g.nt; ++n) {
        sch.step(s, next);
        std::swap(s, next);
        mu_hist.push_back(s.mu);
    }
    CHECK_FALSE(check_mu_decay(mu_hist));
}

TEST_CASE("limit trajectories preserve ordering and the maximum principle") {
    GridSpec g = default_grid(1.0);
    LimitScheme sch(g);
    std::mt19937_64 rng(42);
    const double M = 5.0;
    auto f1 = random_lipschitz_data(rng, M, 3.0, g.x_star);
    auto f2 = random_lipschitz_data(rng, M, 3.0, g.x_star);
    LimitState lo = sch.initial_state(
        [&](double x, double v) { return std::min(f1(x, v), f2(x, v)); });
    LimitState hi = sch.initial_state(
        [&](double x, double v) { return std::max(f1(x, v), f2(x, v)); });
    LimitState lo2, hi2;
    for (int n = 0; n < g.nt; ++n) {
        sch.step(lo, lo2);
        sch.step(hi, hi2);
        std::swap(lo, lo2);
        std::swap(hi, hi2);
        for (std::size_t k = 0; k < lo.phi.data().size(); ++k)
            CHECK(lo.phi.data()[k] <= hi.phi.data()[k] + 1e-12);
        for (int j = 0; j < g.nv; ++j) {
            double q = 0.5 * g.v[j] * g.v[j];
            for (int i = 0; i < g.nx; ++i) {
                CHECK(std::abs(lo.phi(i, j) - q) <= M + 1e-10);
                CHECK(std::abs(hi.phi(i, j) - q) <= M + 1e-10);
            }
        }
        for (int i = 0; i < g.nx; ++i) CHECK(std::abs(lo.mu[i]) <= M + 1e-10);
    }
}

TEST_CASE("AP consistency: eps = 1e-6 tracks the limit run to 1e-4") {
    GridSpec g = default_grid(1.5);
    auto init = make_initial_data("paper-init", g);
    ApScheme ap(g, 1e-6);
    LimitScheme lim(g);
    ApState a = ap.initial_state(init);
    LimitState l = lim.initial_state(init);
    ap.run_to_final(a);
    lim.run_to_final(l);
    CHECK(sup_diff(a.phi, l.phi) <= 1e-4);
}

TEST_CASE("one-cell translation equivariance of the limit scheme") {
    GridSpec g = three_velocity_grid();
    LimitScheme sch(g);
    std::mt19937_64 rng(99);
    auto data = random_lipschitz_data(rng, 2.0, 2.0, g.x_star);
    LimitState a = sch.initial_state(data);
    LimitState b = a;
    for (int j = 0; j < g.nv; ++j)
        for (int i = 0; i < g.nx; ++i) b.phi(i, j) = a.phi((i - 1 + g.nx) % g.nx, j);
    {
        PhaseField shifted;
        transport_field(b.phi, transport_stencil(g), shifted);
        b.mu = transported_min(shifted);
    }
    sch.run(a, 5);
    sch.run(b, 5);
    for (int j = 0; j < g.nv; ++j)
        for (int i = 0; i < g.nx; ++i)
            CHECK(b.phi(i, j) == a.phi((i - 1 + g.nx) % g.nx, j));
}

TEST_CASE("init_limit rejects non-finite data") {
    GridSpec g = three_velocity_grid();
    LimitScheme sch(g);
    CHECK_THROWS_AS(
        sch.initial_state([](double, double) { return std::nan(""); }),
        std::invalid_argument);
}
