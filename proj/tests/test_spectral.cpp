#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "kse/spectral.hpp"

using namespace kse;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

RealField sampled(const Grid& g, double (*fn)(double)) {
    RealField f(g);
    for (int j = 0; j < g.N; j++) f.v[j] = fn(g.x[j]);
    return f;
}

} // namespace

TEST_CASE("grid stores the standard mode layout") {
    Grid g(2.0, 16);
    REQUIRE((int)g.x.size() == 16);
    REQUIRE((int)g.k.size() == 16);
    REQUIRE((int)g.q.size() == 16);

    const double dx = 2.0 * kPi * g.L / g.N;
    for (int j = 0; j < g.N; j++) CHECK(g.x[j] == doctest::Approx(j * dx).epsilon(1e-15));

    // 0, 1, ..., N/2, then the negative half
    for (int j = 0; j <= g.N / 2; j++) CHECK(g.k[j] == j);
    for (int j = g.N / 2 + 1; j < g.N; j++) CHECK(g.k[j] == j - g.N);
    CHECK(g.k[8] == 8);   // Nyquist slot counted as +N/2
    CHECK(g.k[9] == -7);
    CHECK(g.k[15] == -1);

    for (int j = 0; j < g.N; j++) CHECK(g.q[j] == doctest::Approx(g.k[j] / g.L).epsilon(1e-15));
}

TEST_CASE("grid constructor rejects bad sizes") {
    CHECK_THROWS_AS(Grid(1.0, 7), std::invalid_argument);
    CHECK_THROWS_AS(Grid(1.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(Grid(0.0, 16), std::invalid_argument);
    CHECK_THROWS_AS(Grid(-3.0, 16), std::invalid_argument);
}

TEST_CASE("transform and inverse are a round trip") {
    Grid g(16.0, 128);
    RealField f = sampled(g, [](double x) { return std::sin(0.3 * x) + 0.25 * std::cos(1.1 * x); });
    // not band-limited relative to the grid period, but any grid samples must round-trip
    RealField back = inverse_transform(transform(f));
    double max_err = 0.0, max_abs = 0.0;
    for (int j = 0; j < g.N; j++) {
        max_err = std::max(max_err, std::fabs(back.v[j] - f.v[j]));
        max_abs = std::max(max_abs, std::fabs(f.v[j]));
    }
    CHECK(max_err <= 100.0 * std::numeric_limits<double>::epsilon() * max_abs);
}

TEST_CASE("single cosine lands on the expected coefficient pair") {
    Grid g(2.0, 64);
    RealField f(g);
    for (int j = 0; j < g.N; j++) f.v[j] = std::cos(3.0 * g.x[j] / g.L);
    SpectralField F = transform(f);
    // cos(q x) = (e^{iqx} + e^{-iqx})/2 with the mean-normalized forward transform
    CHECK(F.c[3].real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(F.c[3].imag() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(F.c[g.N - 3].real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(F.c[g.N - 3].imag() == doctest::Approx(0.0).epsilon(1e-14));
    double rest = 0.0;
    for (int j = 0; j < g.N; j++)
        if (j != 3 && j != g.N - 3) rest = std::max(rest, std::abs(F.c[j]));
    CHECK(rest < 1e-14);
}

TEST_CASE("single sine lands on an odd coefficient pair") {
    Grid g(2.0, 64);
    RealField f(g);
    for (int j = 0; j < g.N; j++) f.v[j] = std::sin(2.0 * g.x[j] / g.L);
    SpectralField F = transform(f);
    CHECK(F.c[2].real() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(F.c[2].imag() == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(F.c[g.N - 2].imag() == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("spectral inner product agrees with collocation quadrature") {
    Grid g(5.0, 96);
    RealField f = sampled(g, [](double x) { return std::exp(std::sin(x / 5.0)); });
    RealField h = sampled(g, [](double x) { return std::cos(2.0 * x / 5.0) + 0.1; });
    // Parseval: (2 pi L / N) sum_j f_j h_j == 2 pi L sum_k Re(F_k conj(H_k))
    double quad = 0.0;
    for (int j = 0; j < g.N; j++) quad += f.v[j] * h.v[j];
    quad *= 2.0 * kPi * g.L / g.N;
    const double spec = l2_inner_product(transform(f), transform(h));
    CHECK(spec == doctest::Approx(quad).epsilon(1e-12));
}

TEST_CASE("l2 norm of a pure mode matches the closed form") {
    // ||cos(qx)||^2 over [0, 2 pi L) = pi L
    Grid g(16.0, 256);
    RealField f(g);
    for (int j = 0; j < g.N; j++) f.v[j] = std::cos(4.0 * g.x[j] / g.L);
    CHECK(l2_norm(transform(f)) == doctest::Approx(std::sqrt(kPi * g.L)).epsilon(1e-13));
}

TEST_CASE("derivatives of single modes are exact to roundoff") {
    Grid g(2.0, 64);
    const int mode = 5;
    const double q = mode / g.L;
    // exact coefficients of cos(q x), with no sampling noise in other modes
    SpectralField F(g);
    F.c[mode] = {0.5, 0.0};
    F.c[g.N - mode] = {0.5, 0.0};

    struct Expect {
        int order;
        double amp;     // coefficient of the expected trig function
        bool is_sine;   // derivative flips cos <-> sin on odd orders
    };
    // d/dx cos(qx) = -q sin, d2 = -q^2 cos, d3 = q^3 sin, d4 = q^4 cos
    const Expect cases[] = {{1, -q, true}, {2, -q * q, false}, {3, q * q * q, true},
                            {4, q * q * q * q, false}};
    for (const auto& e : cases) {
        RealField d = inverse_transform(spectral_derivative(F, e.order));
        double max_err = 0.0;
        for (int j = 0; j < g.N; j++) {
            const double want =
                e.amp * (e.is_sine ? std::sin(q * g.x[j]) : std::cos(q * g.x[j]));
            max_err = std::max(max_err, std::fabs(d.v[j] - want));
        }
        CHECK(max_err < 1e-12 * std::max(1.0, std::fabs(e.amp)));
    }
}

TEST_CASE("derivative of a smooth non-polynomial field matches its analytic form") {
    Grid g(2.0, 128);
    // f = exp(sin(x/L)); its Fourier tail decays factorially, so the spectral
    // derivative should hit the analytic one at machine level on this grid.
    RealField f = sampled(g, [](double x) { return std::exp(std::sin(x / 2.0)); });
    RealField d1 = inverse_transform(spectral_derivative(transform(f), 1));
    double max_err = 0.0;
    for (int j = 0; j < g.N; j++) {
        const double want = std::cos(g.x[j] / g.L) / g.L * std::exp(std::sin(g.x[j] / g.L));
        max_err = std::max(max_err, std::fabs(d1.v[j] - want));
    }
    CHECK(max_err < 1e-13);
}

TEST_CASE("odd-order derivatives zero the Nyquist slot") {
    Grid g(1.0, 16);
    SpectralField F(g);
    F.c[g.N / 2] = {0.7, 0.0};  // real Nyquist content is conjugate-symmetric
    SpectralField d1 = spectral_derivative(F, 1);
    SpectralField d3 = spectral_derivative(F, 3);
    CHECK(std::abs(d1.c[g.N / 2]) == 0.0);
    CHECK(std::abs(d3.c[g.N / 2]) == 0.0);
    // even orders keep it, with a real multiplier
    SpectralField d2 = spectral_derivative(F, 2);
    const double q = g.q[g.N / 2];
    CHECK(d2.c[g.N / 2].real() == doctest::Approx(-q * q * 0.7).epsilon(1e-15));
    CHECK(d2.c[g.N / 2].imag() == 0.0);
}

TEST_CASE("derivative rejects unsupported orders") {
    Grid g(1.0, 16);
    SpectralField F(g);
    CHECK_THROWS_AS(spectral_derivative(F, 0), std::invalid_argument);
    CHECK_THROWS_AS(spectral_derivative(F, 5), std::invalid_argument);
}

TEST_CASE("two-thirds dealiasing zeroes exactly the high modes") {
    Grid g(1.0, 32);  // cutoff N/3 = 10.67: |k| <= 10 kept, |k| >= 11 zeroed
    SpectralField F(g);
    for (int j = 0; j < g.N; j++) F.c[j] = {1.0, 0.5};
    SpectralField out = dealias_two_thirds(F);
    for (int j = 0; j < g.N; j++) {
        if (std::abs(g.k[j]) <= 10) {
            CHECK(out.c[j] == F.c[j]);
        } else {
            CHECK(std::abs(out.c[j]) == 0.0);
        }
    }
    CHECK(std::abs(out.c[11]) == 0.0);
    CHECK(std::abs(out.c[10]) > 0.0);
    CHECK(std::abs(out.c[g.N / 2]) == 0.0);
}

TEST_CASE("inner product refuses mismatched grids") {
    Grid a(1.0, 16), b(1.0, 32), c(2.0, 16);
    CHECK_THROWS_AS(l2_inner_product(SpectralField(a), SpectralField(b)), std::invalid_argument);
    CHECK_THROWS_AS(l2_inner_product(SpectralField(a), SpectralField(c)), std::invalid_argument);
    CHECK_NOTHROW(l2_inner_product(SpectralField(a), SpectralField(a)));
}

TEST_CASE("inverse transform rejects non-conjugate-symmetric input") {
    Grid g(1.0, 16);
    SpectralField F(g);
    F.c[1] = {1.0, 0.0};  // missing the mirror coefficient at N-1
    CHECK_THROWS_AS(inverse_transform(F), std::runtime_error);
    F.c[g.N - 1] = {1.0, 0.0};  // restore symmetry: cos mode, fine now
    CHECK_NOTHROW(inverse_transform(F));
}
