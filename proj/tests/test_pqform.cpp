#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "logrs/pqform.hpp"
#include "oracles.hpp"

using logrs::approximant;
using logrs::CPoly;
using logrs::cxd;
using logrs::pq_derivatives;
using logrs::pq_eval;
using logrs::PQForm;

namespace {

PQForm identity_form() {  // F(z) = z
    return PQForm{CPoly{}, CPoly::constant(cxd{1, 0}), cxd{0, 0}, cxd{0, 0}};
}

PQForm exp_form() {  // F(z) = e^z
    return PQForm{CPoly{{cxd{0, 0}, cxd{1, 0}}}, CPoly::constant(cxd{1, 0}), cxd{0, 0}, cxd{1, 0}};
}

PQForm gauss_form() {  // F(z) = integral of exp(-t^2)
    return PQForm{CPoly{{cxd{0, 0}, cxd{0, 0}, cxd{-1, 0}}}, CPoly::constant(cxd{1, 0}),
                  cxd{0, 0}, cxd{0, 0}};
}

PQForm square_form() {  // F(z) = z^2
    return PQForm{CPoly{}, CPoly{{cxd{0, 0}, cxd{2, 0}}}, cxd{0, 0}, cxd{0, 0}};
}

std::mt19937_64 seeded(unsigned s) { return std::mt19937_64(s); }

}  // namespace

TEST_CASE("pq_eval of the identity chart") {
    cxd v = pq_eval(identity_form(), cxd{3, 4});
    REQUIRE(std::abs(v - cxd{3, 4}) < 1e-10);
}

TEST_CASE("pq_eval reproduces e") {
    cxd v = pq_eval(exp_form(), cxd{1, 0});
    cxd e = oracles::exp_series(cxd{1, 0});
    REQUIRE(std::abs(v - e) < 1e-9);
    REQUIRE(std::abs(v - cxd{2.718281828459045, 0}) < 1e-9);
}

TEST_CASE("pq_eval reproduces the Gaussian integral on [0,1]") {
    cxd v = pq_eval(gauss_form(), cxd{1, 0});
    cxd expected = oracles::segment_integral(
        [](cxd t) { return std::exp(-t * t); }, cxd{0, 0}, cxd{1, 0}, 1e-13);
    REQUIRE(std::abs(v - expected) < 1e-9);
    REQUIRE(std::abs(v - cxd{0.746824132812427, 0}) < 1e-9);
}

TEST_CASE("pq_eval is path independent") {
    std::mt19937_64 rng = seeded(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 15; ++trial) {
        int degp = static_cast<int>(rng() % 4);
        std::vector<cxd> pc;
        // Keep |P| moderate over |z| <= 5 so the integral stays at desk scale.
        for (int k = 0; k <= degp; ++k) {
            double damp = std::pow(4.0, -k);
            pc.emplace_back(u(rng) * damp, u(rng) * damp);
        }
        PQForm f{CPoly{pc}, CPoly{{cxd{u(rng), u(rng)}, cxd{1, 0}}}, cxd{0, 0}, cxd{0, 0}};
        cxd z{4.0 * u(rng), 4.0 * u(rng)};
        cxd detour = 0.5 * (f.base_point + z) + cxd{0.0, 1.5};
        cxd straight = pq_eval(f, z);
        cxd dog_leg = pq_eval(f, z, {f.base_point, detour, z});
        REQUIRE(std::abs(straight - dog_leg) <= 1e-9);
    }
}

TEST_CASE("pq_eval rejects a path that misses the endpoints") {
    REQUIRE_THROWS_AS(pq_eval(identity_form(), cxd{1, 0}, {cxd{1, 0}, cxd{2, 0}}), logrs::Error);
}

TEST_CASE("pq_eval reports exp overflow as QuadratureFailure") {
    PQForm f{CPoly{{cxd{0, 0}, cxd{1000, 0}}}, CPoly::constant(cxd{1, 0}), cxd{0, 0}, cxd{0, 0}};
    REQUIRE_THROWS_AS(pq_eval(f, cxd{1, 0}), logrs::QuadratureFailure);
}

TEST_CASE("pq_derivatives on the reference charts") {
    auto [f1, f2] = pq_derivatives(identity_form(), cxd{5, 0});
    REQUIRE(std::abs(f1 - cxd{1, 0}) < 1e-14);
    REQUIRE(std::abs(f2) < 1e-14);

    auto [g1, g2] = pq_derivatives(exp_form(), cxd{0, 0});
    REQUIRE(std::abs(g1 - cxd{1, 0}) < 1e-14);
    REQUIRE(std::abs(g2 - cxd{1, 0}) < 1e-14);

    auto [h1, h2] = pq_derivatives(square_form(), cxd{3, 0});
    REQUIRE(std::abs(h1 - cxd{6, 0}) < 1e-14);
    REQUIRE(std::abs(h2 - cxd{2, 0}) < 1e-14);
}

TEST_CASE("finite differences of pq_eval match the symbolic derivative") {
    std::mt19937_64 rng = seeded(23);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    for (int trial = 0; trial < 10; ++trial) {
        PQForm f{CPoly{{cxd{u(rng), u(rng)}, cxd{u(rng), u(rng)}}},
                 CPoly{{cxd{u(rng) + 1.5, 0}, cxd{u(rng), u(rng)}}}, cxd{0, 0}, cxd{0, 0}};
        cxd z{u(rng), u(rng)};
        const double h = 1e-5;
        cxd fd = (pq_eval(f, z + h) - pq_eval(f, z - h)) / (2.0 * h);
        cxd sym = pq_derivatives(f, z).first;
        REQUIRE(std::abs(fd - sym) <= 1e-6 * (1.0 + std::abs(sym)));
    }
}

TEST_CASE("approximant small cases") {
    PQForm f = exp_form();
    f.base_value = cxd{0, 0};  // so F_n(0) = 0

    CPoly f1 = approximant(f, 1);
    REQUIRE(f1.degree() == 2);
    REQUIRE(std::abs(f1.coeff(1) - cxd{1, 0}) < 1e-15);
    REQUIRE(std::abs(f1.coeff(2) - cxd{0.5, 0}) < 1e-15);

    CPoly f2 = approximant(f, 2);
    REQUIRE(f2.degree() == 3);
    REQUIRE(std::abs(f2.coeff(1) - cxd{1, 0}) < 1e-15);
    REQUIRE(std::abs(f2.coeff(2) - cxd{0.5, 0}) < 1e-15);
    REQUIRE(std::abs(f2.coeff(3) - cxd{1.0 / 12.0, 0}) < 1e-15);

    CPoly sq = approximant(square_form(), 17);
    REQUIRE(sq.degree() == 2);
    REQUIRE(std::abs(sq.coeff(2) - cxd{1, 0}) < 1e-15);
}

TEST_CASE("approximant derivative identity") {
    std::mt19937_64 rng = seeded(31);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int n : {1, 4, 16, 64}) {
        PQForm f{CPoly{{cxd{u(rng), u(rng)}, cxd{u(rng), u(rng)}}},
                 CPoly{{cxd{u(rng), u(rng)}, cxd{1, 0}}}, cxd{0, 0}, cxd{0, 0}};
        CPoly fn = approximant(f, n);
        CPoly dfn = fn.derivative();
        for (int k = 0; k < 8; ++k) {
            cxd z{3.0 * u(rng), 3.0 * u(rng)};
            cxd lhs = dfn.eval(z);
            cxd rhs = f.Q.eval(z) * std::pow(cxd{1, 0} + f.P.eval(z) / static_cast<double>(n),
                                             static_cast<double>(n));
            REQUIRE(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(rhs)));
        }
    }
}

TEST_CASE("approximant guards against coefficient overflow") {
    PQForm f{CPoly{{cxd{0, 0}, cxd{1e200, 0}}}, CPoly::constant(cxd{1, 0}), cxd{0, 0}, cxd{0, 0}};
    REQUIRE_THROWS_AS(approximant(f, 8), logrs::OverflowGuard);
}

TEST_CASE("taylor stepping agrees with quadrature increments") {
    std::mt19937_64 rng = seeded(47);
    std::uniform_real_distribution<double> u(-0.7, 0.7);
    for (int trial = 0; trial < 10; ++trial) {
        PQForm f{CPoly{{cxd{u(rng), u(rng)}, cxd{u(rng), u(rng)}, cxd{u(rng), u(rng)}}},
                 CPoly{{cxd{u(rng) + 1.2, 0}, cxd{u(rng), u(rng)}}}, cxd{0, 0}, cxd{0, 0}};
        logrs::PQTaylor taylor(f);
        cxd w{u(rng), u(rng)};
        cxd delta{0.3 * u(rng), 0.3 * u(rng)};
        auto inc = taylor.increment(w, delta);
        REQUIRE(inc.has_value());
        cxd ref = logrs::pq_integrate_segment(f, w, w + delta, {1e-13, 10000});
        REQUIRE(std::abs(*inc - ref) <= 1e-11 * (1.0 + std::abs(ref)));
    }
}

TEST_CASE("asymptotic values of the exponential and Gaussian charts") {
    auto ev = logrs::asymptotic_values(exp_form());
    REQUIRE(ev.size() == 1);
    REQUIRE(std::abs(ev[0].value) < 1e-9);

    auto gv = logrs::asymptotic_values(gauss_form());
    REQUIRE(gv.size() == 2);
    const double half_sqrt_pi = 0.8862269254527580;
    // directions sorted: theta = 0 first (value +sqrt(pi)/2), then pi.
    REQUIRE(std::abs(gv[0].value - cxd{half_sqrt_pi, 0}) < 1e-8);
    REQUIRE(std::abs(gv[1].value - cxd{-half_sqrt_pi, 0}) < 1e-8);
    REQUIRE(gv[0].tail_bound < 1e-8);
}

TEST_CASE("critical points of z^2") {
    auto cps = logrs::critical_points(square_form());
    REQUIRE(cps.size() == 1);
    REQUIRE(std::abs(cps[0].location) < 1e-12);
    REQUIRE(cps[0].multiplicity == 1);
    REQUIRE(std::abs(cps[0].value) < 1e-10);
}
