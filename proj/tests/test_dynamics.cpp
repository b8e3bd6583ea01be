#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "kse/dynamics.hpp"
#include "kse/spectral.hpp"

using namespace kse;

namespace {

SpectralField single_mode(const Grid& g, int k, std::complex<double> coeff) {
    SpectralField F(g);
    F.c[k] = coeff;
    F.c[g.N - k] = std::conj(coeff);
    return F;
}

double max_coeff_diff(const SpectralField& a, const SpectralField& b) {
    double m = 0.0;
    for (size_t j = 0; j < a.c.size(); j++) m = std::max(m, std::abs(a.c[j] - b.c[j]));
    return m;
}

} // namespace

TEST_CASE("unknown_indices lists flagged terms ascending and one-based") {
    ModelCoefficients mc;
    mc.unknown = {true, false, true, false, true};
    CHECK(mc.unknown_indices() == std::vector<int>{1, 3, 5});
    mc.unknown = {false, false, false, false, false};
    CHECK(mc.unknown_indices().empty());
    mc.unknown = {false, true, false, true, false};
    CHECK(mc.unknown_indices() == std::vector<int>{2, 4});
}

TEST_CASE("linear term operators are plain spectral derivatives") {
    Grid g(2.0, 64);
    SpectralField F(g);
    for (int j = 1; j < 8; j++) {
        F.c[j] = {0.3 / j, -0.1 * j};
        F.c[g.N - j] = std::conj(F.c[j]);
    }
    for (int k = 1; k <= 4; k++)
        CHECK(max_coeff_diff(term_operator(k, F), spectral_derivative(F, k)) == 0.0);
    CHECK_THROWS_AS(term_operator(0, F), std::invalid_argument);
    CHECK_THROWS_AS(term_operator(6, F), std::invalid_argument);
}

TEST_CASE("advection term of a single sine is the doubled mode") {
    // u = A sin(x/L)  =>  u u_x = A^2/(2L) sin(2x/L)
    Grid g(2.0, 32);
    const double A = 1.3;
    RealField u(g);
    for (int j = 0; j < g.N; j++) u.v[j] = A * std::sin(g.x[j] / g.L);
    SpectralField G5 = term_operator(5, transform(u));

    const double amp = A * A / (2.0 * g.L);  // sin -> coefficient -i*amp/2 at k=2
    CHECK(G5.c[2].real() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(G5.c[2].imag() == doctest::Approx(-amp / 2.0).epsilon(1e-14));
    CHECK(G5.c[g.N - 2].imag() == doctest::Approx(amp / 2.0).epsilon(1e-14));
    double rest = 0.0;
    for (int j = 0; j < g.N; j++)
        if (j != 2 && j != g.N - 2) rest = std::max(rest, std::abs(G5.c[j]));
    CHECK(rest < 1e-14);
}

TEST_CASE("linear symbol matches each coefficient's contribution") {
    Grid g(2.0, 16);
    ModelCoefficients mc;

    mc.lambda = {1.0, 0.0, 0.0, 0.0, 0.0};
    auto s1 = linear_symbol(mc, g);
    mc.lambda = {0.0, 1.0, 0.0, 0.0, 0.0};
    auto s2 = linear_symbol(mc, g);
    mc.lambda = {0.0, 0.0, 1.0, 0.0, 0.0};
    auto s3 = linear_symbol(mc, g);
    mc.lambda = {0.0, 0.0, 0.0, 1.0, 0.0};
    auto s4 = linear_symbol(mc, g);
    mc.lambda = {0.0, 0.0, 0.0, 0.0, 7.0};  // nonlinear coefficient never enters
    auto s5 = linear_symbol(mc, g);

    for (int j = 0; j < g.N; j++) {
        const double q = g.q[j];
        if (j != g.N / 2) CHECK(s1[j].imag() == doctest::Approx(-q).epsilon(1e-15));
        CHECK(s1[j].real() == 0.0);
        CHECK(s2[j].real() == doctest::Approx(q * q).epsilon(1e-15));
        CHECK(s2[j].imag() == 0.0);
        if (j != g.N / 2) CHECK(s3[j].imag() == doctest::Approx(q * q * q).epsilon(1e-15));
        CHECK(s4[j].real() == doctest::Approx(-q * q * q * q).epsilon(1e-15));
        CHECK(s5[j] == std::complex<double>(0.0, 0.0));
    }
    // odd-derivative content vanishes on the Nyquist slot
    CHECK(s1[g.N / 2].imag() == 0.0);
    CHECK(s3[g.N / 2].imag() == 0.0);
}

TEST_CASE("additive scheme tableau satisfies the fourth-order conditions") {
    const ImexScheme& s = ark436l2sa();
    REQUIRE(s.stages == 6);
    CHECK(s.order == 4);

    // both tables share b and c; row sums must equal the abscissae
    for (int i = 0; i < s.stages; i++) {
        double ri = 0.0, re = 0.0;
        for (int j = 0; j < s.stages; j++) {
            ri += s.a_im[i][j];
            re += s.a_ex[i][j];
        }
        CHECK(ri == doctest::Approx(s.c[i]).epsilon(1e-14));
        CHECK(re == doctest::Approx(s.c[i]).epsilon(1e-14));
    }

    double b0 = 0.0, b1 = 0.0, b2 = 0.0, b3 = 0.0;
    for (int i = 0; i < s.stages; i++) {
        b0 += s.b[i];
        b1 += s.b[i] * s.c[i];
        b2 += s.b[i] * s.c[i] * s.c[i];
        b3 += s.b[i] * s.c[i] * s.c[i] * s.c[i];
    }
    CHECK(b0 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(b1 == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(b2 == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(b3 == doctest::Approx(0.25).epsilon(1e-14));

    // stiffly accurate: the last implicit row is b itself
    for (int j = 0; j < s.stages; j++)
        CHECK(s.a_im[s.stages - 1][j] == doctest::Approx(s.b[j]).epsilon(1e-15));
    CHECK(s.b[1] == 0.0);
    for (int i = 1; i < s.stages; i++) CHECK(s.a_im[i][i] == 0.25);
}

TEST_CASE("zero coefficients and no forcing leave the state unchanged") {
    Grid g(2.0, 32);
    ModelCoefficients mc;
    mc.lambda = {0.0, 0.0, 0.0, 0.0, 0.0};
    SpectralField v = single_mode(g, 3, {0.4, -0.2});
    SpectralField out = imex_step(v, mc, Forcing{}, 0.1);
    CHECK(max_coeff_diff(out, v) < 1e-16);
}

TEST_CASE("constant forcing alone integrates exactly") {
    Grid g(2.0, 32);
    ModelCoefficients mc;
    mc.lambda = {0.0, 0.0, 0.0, 0.0, 0.0};
    Forcing f;
    f.f = single_mode(g, 1, {0.3, 0.1});
    SpectralField v(g);
    const double dt = 0.05;
    for (int j = 0; j < 10; j++) v = imex_step(v, mc, f, dt);
    // du/dt = f  =>  u(T) = T f, and an RK method is exact on constants
    CHECK(std::abs(v.c[1] - std::complex<double>(0.15, 0.05)) < 1e-15);
}

TEST_CASE("time stepper is fourth order on a linear dispersive-dissipative mode") {
    Grid g(2.0, 32);
    ModelCoefficients mc;
    mc.lambda = {0.3, 1.0, 0.2, 1.0, 0.0};  // nonlinearity off: exact solution available
    const std::complex<double> c0{0.4, -0.1};
    const double q = 1.0 / g.L;
    const std::complex<double> sigma{mc.lambda[1] * q * q - mc.lambda[3] * q * q * q * q,
                                     -mc.lambda[0] * q + mc.lambda[2] * q * q * q};
    const double T = 1.0;
    const std::complex<double> exact = std::exp(sigma * T) * c0;

    std::vector<double> errs;
    for (int n : {5, 10, 20}) {
        SpectralField v = single_mode(g, 1, c0);
        const double dt = T / n;
        for (int j = 0; j < n; j++) v = imex_step(v, mc, Forcing{}, dt);
        errs.push_back(std::abs(v.c[1] - exact));
    }
    REQUIRE(errs[0] > 1e-13);  // errors must sit above roundoff for the ratios to mean anything
    const double p1 = std::log2(errs[0] / errs[1]);
    const double p2 = std::log2(errs[1] / errs[2]);
    CHECK(p1 == doctest::Approx(4.0).epsilon(0.1));
    CHECK(p2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("time stepper is fourth order on the full nonlinear equation") {
    Grid g(2.0, 32);
    ModelCoefficients mc;  // defaults: lambda = (0, 1, 0, 1, 1)
    RealField u0(g);
    for (int j = 0; j < g.N; j++) u0.v[j] = 0.5 * std::cos(g.x[j] / g.L);
    const SpectralField start = transform(u0);
    const double T = 1.0;

    auto integrate = [&](int n) {
        SpectralField v = start;
        const double dt = T / n;
        for (int j = 0; j < n; j++) v = imex_step(v, mc, Forcing{}, dt);
        return v;
    };

    SpectralField ref = integrate(640);
    std::vector<double> errs;
    for (int n : {20, 40, 80}) errs.push_back(max_coeff_diff(integrate(n), ref));

    REQUIRE(errs[0] > 1e-12);
    const double p1 = std::log2(errs[0] / errs[1]);
    const double p2 = std::log2(errs[1] / errs[2]);
    // the explicit half of the splitting can shave a little off the formal order
    CHECK(p1 > 3.4);
    CHECK(p1 < 4.6);
    CHECK(p2 > 3.4);
    CHECK(p2 < 4.6);
}

TEST_CASE("non-finite states surface as a blow-up error") {
    Grid g(2.0, 32);
    ModelCoefficients mc;
    SpectralField v = single_mode(g, 1, {1e200, 0.0});
    CHECK_THROWS_AS(imex_step(v, mc, Forcing{}, 0.1), BlowupError);
}

TEST_CASE("initial profile has the pinned point value and zero mean") {
    Grid g(16.0, 128);
    SpectralField U0 = initial_profile(g);
    CHECK(std::abs(U0.c[0]) < 1e-15);
    RealField u0 = inverse_transform(U0);
    CHECK(u0.v[0] == doctest::Approx(-0.85).epsilon(1e-13));

    // band-limited combination: only modes {1, 3, 6, 13, 15, 18} are populated
    const double expect_abs[19] = {0, 0.05, 0, 0.1, 0, 0, 0.5, 0, 0, 0,
                                   0, 0, 0, 0.5, 0, 0.025, 0, 0, 0.35};
    for (int k = 1; k <= 18; k++)
        CHECK(std::abs(U0.c[k]) == doctest::Approx(expect_abs[k]).epsilon(1e-13));
    double rest = 0.0;
    for (int j = 19; j <= g.N - 19; j++) rest = std::max(rest, std::abs(U0.c[j]));
    CHECK(rest < 1e-15);
}

TEST_CASE("warmup is deterministic and insensitive to halving the step") {
    Grid g(16.0, 128);
    ModelCoefficients mc;
    SpectralField a = warmup_truth(g, mc, 2e-3, 1.0);
    SpectralField b = warmup_truth(g, mc, 2e-3, 1.0);
    CHECK(max_coeff_diff(a, b) == 0.0);  // bitwise repeatable

    SpectralField fine = warmup_truth(g, mc, 1e-3, 1.0);
    CHECK(max_coeff_diff(a, fine) < 1e-8);
    CHECK(max_coeff_diff(a, fine) > 0.0);
}
