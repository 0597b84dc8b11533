// Asymptotic-preserving scheme: operation examples and stability invariants.
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

GridSpec small_grid(double t_final = 1.0) {
    double dv = 6.0 / 9.0;
    return build_grid(3, 3, 12, 9, 0.45 * dv * dv, t_final);
}

}  // namespace

TEST_CASE("init_ap on the equilibrium gives mu = 0 exactly") {
    GridSpec g = default_grid(1.5);
    ApScheme sch(g, 1.0);
    ApState s = sch.initial_state([](double, double v) { return 0.5 * v * v; });
    for (double m : s.mu) CHECK(m == 0.0);
}

TEST_CASE("init_ap matches direct evaluation of the two-well data") {
    GridSpec g = small_grid();
    ApScheme sch(g, 0.5);
    ApState s = sch.initial_state(make_initial_data("paper-init", g));
    for (int j = 0; j < g.nv; ++j)
        for (int i = 0; i < g.nx; ++i)
            CHECK(s.phi(i, j) == two_well_data(g.x[i], g.v[j], g.x_star, g.v_star));
    CHECK(all_finite(s.phi));
}

TEST_CASE("init_ap on a Dirac surrogate has mu = 0 near the support") {
    GridSpec g = default_grid(1.5);
    ApScheme sch(g, 1.0);
    ApState s = sch.initial_state(make_initial_data("dirac", g));
    CHECK(s.mu[g.nx / 2] == 0.0);
    CHECK(s.mu[0] == 100.0);
}

TEST_CASE("init_ap rejects non-finite data") {
    GridSpec g = small_grid();
    ApScheme sch(g, 1.0);
    CHECK_THROWS_AS(
        sch.initial_state([](double, double) { return std::numeric_limits<double>::infinity(); }),
        std::invalid_argument);
}

TEST_CASE("eps outside (0,1] is rejected") {
    GridSpec g = small_grid();
    CHECK_THROWS_AS(ApScheme(g, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ApScheme(g, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(ApScheme(g, 1.5), std::invalid_argument);
}

TEST_CASE("transported_min") {
    PhaseField c(5, 3, 4.25);
    auto m = transported_min(c);
    for (double v : m) CHECK(v == 4.25);

    GridSpec g = small_grid();
    PhaseField q(g.nx, g.nv);
    for (int j = 0; j < g.nv; ++j)
        for (int i = 0; i < g.nx; ++i) q(i, j) = 0.5 * g.v[j] * g.v[j];
    auto mq = transported_min(q);
    for (double v : mq) CHECK(v == 0.0);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2, 2);
    PhaseField r(6, 5);
    for (auto& x : r.data()) x = u(rng);
    auto mr = transported_min(r);
    for (int i = 0; i < 6; ++i) {
        double best = r(i, 0);  // independent column scan
        for (int j = 1; j < 5; ++j)
            if (r(i, j) < best) best = r(i, j);
        CHECK(mr[i] == best);
    }
}

TEST_CASE("update_mu on the equilibrium equals -eps ln(c) bitwise") {
    GridSpec g = default_grid(1.5);
    for (double eps : {1.0, 0.1, 1e-3}) {
        PhaseField q(g.nx, g.nv);
        for (int j = 0; j < g.nv; ++j)
            for (int i = 0; i < g.nx; ++i) q(i, j) = 0.5 * g.v[j] * g.v[j];
        auto m = transported_min(q);
        auto mu = update_mu(q, m, eps, g);
        double expected = -(eps * std::log(gaussian_norm_const(eps, g)));
        for (double v : mu) CHECK(v == expected);
    }
}

TEST_CASE("update_mu with a single active entry gives m - eps ln(dv)") {
    GridSpec g = small_grid();
    double eps = 0.3, m_val = 1.7;
    PhaseField f(g.nx, g.nv, m_val + 80.0 * eps);
    for (int i = 0; i < g.nx; ++i) f(i, 2) = m_val;
    auto m = transported_min(f);
    auto mu = update_mu(f, m, eps, g);
    for (double v : mu)
        CHECK(v == doctest::Approx(m_val - eps * std::log(g.dv)).epsilon(1e-12));
}

TEST_CASE("update_mu collapses to the min as eps -> 0") {
    GridSpec g = small_grid();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 3);
    PhaseField f(g.nx, g.nv);
    for (auto& x : f.data()) x = u(rng);
    auto m = transported_min(f);
    auto mu = update_mu(f, m, 1e-8, g);
    for (int i = 0; i < g.nx; ++i) CHECK(std::abs(mu[i] - m[i]) < 1e-6);
}

TEST_CASE("exponent_shift") {
    GridSpec g = small_grid();
    double dt = g.dt;

    SUBCASE("equilibrium inputs") {
        double eps = 0.7;
        PhaseField q(g.nx, g.nv);
        for (int j = 0; j < g.nv; ++j)
            for (int i = 0; i < g.nx; ++i) q(i, j) = 0.5 * g.v[j] * g.v[j];
        double mu_eq = -eps * std::log(gaussian_norm_const(eps, g));
        SpatialField mu(g.nx, mu_eq);
        PhaseField m = exponent_shift(q, mu, g, dt);
        for (int j = 0; j < g.nv; ++j)
            for (int i = 0; i < g.nx; ++i)
                CHECK(m(i, j) ==
                      doctest::Approx(0.5 * g.v[j] * g.v[j] + std::min(dt, mu_eq)).epsilon(1e-15));
    }
    SUBCASE("dt = 0 and random fields against a direct min") {
        std::mt19937_64 rng(13);
        std::uniform_real_distribution<double> u(-1, 4);
        PhaseField f(g.nx, g.nv);
        for (auto& x : f.data()) x = u(rng);
        SpatialField mu(g.nx);
        for (auto& x : mu) x = u(rng);
        PhaseField m0 = exponent_shift(f, mu, g, 0.0);
        PhaseField m1 = exponent_shift(f, mu, g, dt);
        for (int j = 0; j < g.nv; ++j)
            for (int i = 0; i < g.nx; ++i) {
                double q = 0.5 * g.v[j] * g.v[j];
                CHECK(m0(i, j) == std::min(f(i, j), q + mu[i]));
                CHECK(m1(i, j) == std::min(f(i, j) + dt, q + mu[i]));
                CHECK(m1(i, j) <= f(i, j) + dt);       // exponents fed to exp are <= 0
                CHECK(m1(i, j) <= q + mu[i]);
            }
    }
}

TEST_CASE("equilibrium is a bit-exact fixed point of step_ap") {
    GridSpec g = default_grid(1.5);
    for (double eps : {1.0, 0.1, 1e-3}) {
        ApScheme sch(g, eps);
        ApState s = sch.initial_state([](double, double v) { return 0.5 * v * v; });
        PhaseField q = s.phi;
        sch.run(s, 100);
        CHECK(sup_diff(s.phi, q) == 0.0);
        CHECK(s.n == 100);
    }
}

TEST_CASE("step_ap commutes with constants") {
    GridSpec g = small_grid();
    const double K = 1.7;
    for (double eps : {1.0, 1e-3}) {
        ApScheme sch(g, eps);
        auto base = make_initial_data("paper-init", g);
        ApState a = sch.initial_state(base);
        ApState b = sch.initial_state(
            [&](double x, double v) { return base(x, v) + K; });
        ApState a2, b2;
        sch.step(a, a2);
        sch.step(b, b2);
        for (std::size_t k = 0; k < a2.phi.data().size(); ++k)
            CHECK(b2.phi.data()[k] - a2.phi.data()[k] == doctest::Approx(K).epsilon(1e-13));
        for (int i = 0; i < g.nx; ++i)
            CHECK(b2.mu[i] - a2.mu[i] == doctest::Approx(K).epsilon(1e-13));
    }
}

TEST_CASE("one step at eps = 1e-8 matches one limit step to 1e-5") {
    GridSpec g = small_grid();
    ApScheme ap(g, 1e-8);
    LimitScheme lim(g);
    auto init = make_initial_data("paper-init", g);
    ApState a = ap.initial_state(init), a2;
    LimitState l = lim.initial_state(init), l2;
    ap.step(a, a2);
    lim.step(l, l2);
    CHECK(sup_diff(a2.phi, l2.phi) < 1e-5);
}

TEST_CASE("run_ap with zero steps is the identity") {
    GridSpec g = small_grid();
    ApScheme sch(g, 0.5);
    ApState s = sch.initial_state(make_initial_data("paper-init", g));
    PhaseField before = s.phi;
    sch.run(s, 0);
    CHECK(sup_diff(s.phi, before) == 0.0);
    CHECK_THROWS_AS(sch.run(s, -1), std::invalid_argument);
}

TEST_CASE("comparison monotonicity along whole trajectories") {
    GridSpec g = small_grid();
    std::mt19937_64 rng(101);
    for (double eps : {1.0, 0.05}) {
        ApScheme sch(g, eps);
        auto f1 = random_lipschitz_data(rng, 2.0, 2.0, g.x_star);
        auto f2 = random_lipschitz_data(rng, 2.0, 2.0, g.x_star);
        ApState lo = sch.initial_state(
            [&](double x, double v) { return std::min(f1(x, v), f2(x, v)); });
        ApState hi = sch.initial_state(
            [&](double x, double v) { return std::max(f1(x, v), f2(x, v)); });
        ApState lo2, hi2;
        for (int n = 0; n < 20; ++n) {
            sch.step(lo, lo2);
            sch.step(hi, hi2);
            std::swap(lo, lo2);
            std::swap(hi, hi2);
            for (std::size_t k = 0; k < lo.phi.data().size(); ++k)
                CHECK(lo.phi.data()[k] <= hi.phi.data()[k] + 1e-12);
            for (int i = 0; i < g.nx; ++i) CHECK(lo.mu[i] <= hi.mu[i] + 1e-12);
        }
    }
}

TEST_CASE("maximum principle and Lipschitz propagation") {
    GridSpec g = default_grid(1.0);
    std::mt19937_64 rng(303);
    const double M = 5.0, L = 3.0;
    for (double eps : {1.0, 0.01}) {
        ApScheme sch(g, eps);
        double eps_ln_c = eps * std::log(sch.norm_const());
        auto data = random_lipschitz_data(rng, M, L, g.x_star);
        ApState s = sch.initial_state(data), next;

        auto lip = [&](const PhaseField& f) {
            double m = 0.0;
            for (int j = 0; j < g.nv; ++j) {
                double q = 0.5 * g.v[j] * g.v[j];
                for (int i = 0; i < g.nx; ++i) {
                    int ir = (i + 1) % g.nx;
                    m = std::max(m, std::abs((f(ir, j) - q) - (f(i, j) - q)) / g.dx);
                }
            }
            return m;
        };
        double lip0 = lip(s.phi);

        for (int n = 0; n < g.nt; ++n) {
            sch.step(s, next);
            std::swap(s, next);
            for (int j = 0; j < g.nv; ++j) {
                double q = 0.5 * g.v[j] * g.v[j];
                for (int i = 0; i < g.nx; ++i)
                    CHECK(std::abs(s.phi(i, j) - q) <= M + 1e-10);
            }
            for (int i = 0; i < g.nx; ++i)
                CHECK(std::abs(s.mu[i] + eps_ln_c) <= M + 1e-10);
            CHECK(lip(s.phi) <= lip0 + 1e-10);
        }
    }
}

TEST_CASE("mass-form consistency of mu with the transported field") {
    GridSpec g = small_grid();
    double eps = 0.5;
    ApScheme sch(g, eps);
    std::mt19937_64 rng(77);
    ApState s = sch.initial_state(random_lipschitz_data(rng, 1.5, 1.0, g.x_star)), next;
    for (int n = 0; n < 5; ++n) {
        PhaseField shifted;
        transport_field(s.phi, transport_stencil(g), shifted);
        sch.step(s, next);
        std::swap(s, next);
        // e^{-mu/eps} against the direct quadrature of e^{-phibar/eps}
        std::vector<double> row(g.nv);
        for (int i = 0; i < g.nx; ++i) {
            for (int j = 0; j < g.nv; ++j) row[j] = std::exp(-shifted(i, j) / eps);
            double direct = velocity_quadrature(row, g.dv);
            double from_mu = std::exp(-s.mu[i] / eps);
            CHECK(std::abs(from_mu - direct) <= 1e-10 * direct);
        }
    }
}

TEST_CASE("argmin of the transported field stays in the 2 sqrt(M) window") {
    GridSpec g = default_grid(1.0);
    const double M = 5.0;
    std::mt19937_64 rng(505);
    for (double eps : {1.0, 0.01}) {
        ApScheme sch(g, eps);
        ApState s = sch.initial_state(random_lipschitz_data(rng, M, 3.0, g.x_star)), next;
        for (int n = 0; n < 10; ++n) {
            PhaseField shifted;
            transport_field(s.phi, transport_stencil(g), shifted);
            for (int i = 0; i < g.nx; ++i) {
                int jbest = 0;
                for (int j = 1; j < g.nv; ++j)
                    if (shifted(i, j) < shifted(i, jbest)) jbest = j;
                CHECK(std::abs(g.v[jbest]) <= 2.0 * std::sqrt(M) + 1e-9);
            }
            sch.step(s, next);
            std::swap(s, next);
        }
    }
}

TEST_CASE("one-cell translation of the data translates every output") {
    GridSpec g = small_grid();
    ApScheme sch(g, 0.2);
    std::mt19937_64 rng(909);
    auto data = random_lipschitz_data(rng, 2.0, 2.0, g.x_star);
    ApState a = sch.initial_state(data);
    ApState b = a;
    for (int j = 0; j < g.nv; ++j)
        for (int i = 0; i < g.nx; ++i) b.phi(i, j) = a.phi((i - 1 + g.nx) % g.nx, j);
    {
        PhaseField shifted;
        transport_field(b.phi, transport_stencil(g), shifted);
        b.mu = transported_min(shifted);
    }
    ApState a2, b2;
    sch.run(a, 7);
    sch.run(b, 7);
    for (int j = 0; j < g.nv; ++j)
        for (int i = 0; i < g.nx; ++i)
            CHECK(b.phi(i, j) == a.phi((i - 1 + g.nx) % g.nx, j));
    for (int i = 0; i < g.nx; ++i) CHECK(b.mu[i] == a.mu[(i - 1 + g.nx) % g.nx]);
}

TEST_CASE("shortened final step still reaches T and stays stable") {
    GridSpec g = build_grid(3, 3, 12, 9, 0.3, 1.0);  // 3 full steps + 0.1
    REQUIRE(g.dt_last < g.dt);
    ApScheme sch(g, 0.5);
    ApState s = sch.initial_state(make_initial_data("paper-init", g));
    sch.run_to_final(s);
    CHECK(s.time == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(all_finite(s.phi));
}
