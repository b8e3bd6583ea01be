#include "kse/dynamics.hpp"

#include <cmath>

namespace kse {

SpectralField term_operator(int k, const SpectralField& v) {
    if (k >= 1 && k <= 4) return spectral_derivative(v, k);
    if (k != 5) throw std::invalid_argument("term_operator: k must be in 1..5");
    RealField u = inverse_transform(v);
    RealField ux = inverse_transform(spectral_derivative(v, 1));
    RealField prod(*v.grid);
    for (int j = 0; j < v.grid->N; j++) prod.v[j] = u.v[j] * ux.v[j];
    return dealias_two_thirds(transform(prod));
}

std::vector<std::complex<double>> linear_symbol(const ModelCoefficients& coeffs, const Grid& g) {
    std::vector<std::complex<double>> sig(g.N);
    const auto& l = coeffs.lambda;
    for (int j = 0; j < g.N; j++) {
        const double q = g.q[j];
        double re = l[1] * q * q - l[3] * q * q * q * q;   // -(l2*(iq)^2 + l4*(iq)^4)
        double im = -l[0] * q + l[2] * q * q * q;          // -(l1*(iq) + l3*(iq)^3)
        if (j == g.N / 2) im = 0.0;
        sig[j] = {re, im};
    }
    return sig;
}

const ImexScheme& ark436l2sa() {
    static const ImexScheme s = [] {
        ImexScheme t{};
        t.stages = 6;
        t.order = 4;
        const double g = 0.25;
        t.c = {0.0, 0.5, 83.0 / 250.0, 31.0 / 50.0, 17.0 / 20.0, 1.0};
        t.b = {82889.0 / 524892.0, 0.0, 15625.0 / 83664.0, 69875.0 / 102672.0,
               -2260.0 / 8211.0, 0.25};
        t.a_im[1] = {g, g, 0, 0, 0, 0};
        t.a_im[2] = {8611.0 / 62500.0, -1743.0 / 31250.0, g, 0, 0, 0};
        t.a_im[3] = {5012029.0 / 34652500.0, -654441.0 / 2922500.0, 174375.0 / 388108.0, g, 0, 0};
        t.a_im[4] = {15267082809.0 / 155376265600.0, -71443401.0 / 120774400.0,
                     730878875.0 / 902184768.0, 2285395.0 / 8070912.0, g, 0};
        t.a_im[5] = {t.b[0], t.b[1], t.b[2], t.b[3], t.b[4], t.b[5]};  // stiffly accurate
        t.a_ex[1] = {0.5, 0, 0, 0, 0, 0};
        t.a_ex[2] = {13861.0 / 62500.0, 6889.0 / 62500.0, 0, 0, 0, 0};
        t.a_ex[3] = {-116923316275.0 / 2393684061468.0, -2731218467317.0 / 15368042101831.0,
                     9408046702089.0 / 11113171139209.0, 0, 0, 0};
        t.a_ex[4] = {-451086348788.0 / 2902428689909.0, -2682348792572.0 / 7519795681897.0,
                     12662868775082.0 / 11960479115383.0, 3355817975965.0 / 11060851509271.0, 0, 0};
        t.a_ex[5] = {647845179188.0 / 3216320057751.0, 73281519250.0 / 8382639484533.0,
                     552539513391.0 / 3454668386233.0, 3354512671639.0 / 8306763924573.0,
                     4040.0 / 17871.0, 0};
        return t;
    }();
    return s;
}

namespace {

SpectralField explicit_part(const SpectralField& z, double l5, const Forcing& f) {
    const Grid& g = *z.grid;
    SpectralField out(g);
    if (l5 != 0.0) {
        out = term_operator(5, z);
        for (auto& c : out.c) c *= -l5;
    }
    if (f.f) {
        for (int j = 0; j < g.N; j++) out.c[j] += f.f->c[j];
    }
    return out;
}

} // namespace

SpectralField imex_step(const SpectralField& v, const ModelCoefficients& coeffs,
                        const Forcing& f, double dt, const ImexScheme& scheme) {
    const Grid& g = *v.grid;
    const auto sig = linear_symbol(coeffs, g);
    const int s = scheme.stages;
    const double l5 = coeffs.lambda[4];

    std::vector<SpectralField> k_im(s), k_ex(s);
    k_im[0] = SpectralField(g);
    for (int j = 0; j < g.N; j++) k_im[0].c[j] = sig[j] * v.c[j];
    k_ex[0] = explicit_part(v, l5, f);

    SpectralField z(g);
    for (int i = 1; i < s; i++) {
        z.c = v.c;
        for (int jj = 0; jj < i; jj++) {
            const double ai = scheme.a_im[i][jj], ae = scheme.a_ex[i][jj];
            for (int j = 0; j < g.N; j++)
                z.c[j] += dt * (ai * k_im[jj].c[j] + ae * k_ex[jj].c[j]);
        }
        const double d = dt * scheme.a_im[i][i];
        for (int j = 0; j < g.N; j++) z.c[j] /= (1.0 - d * sig[j]);
        k_im[i] = SpectralField(g);
        for (int j = 0; j < g.N; j++) k_im[i].c[j] = sig[j] * z.c[j];
        k_ex[i] = explicit_part(z, l5, f);
    }

    SpectralField out(g);
    out.c = v.c;
    for (int i = 0; i < s; i++) {
        const double bi = scheme.b[i];
        if (bi == 0.0) continue;
        for (int j = 0; j < g.N; j++)
            out.c[j] += dt * bi * (k_im[i].c[j] + k_ex[i].c[j]);
    }
    out = dealias_two_thirds(out);
    for (const auto& c : out.c)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw BlowupError("imex_step: non-finite state (numerical blow-up)");
    return out;
}

SpectralField initial_profile(const Grid& g) {
    RealField u0(g);
    const double L = g.L;
    for (int j = 0; j < g.N; j++) {
        const double x = g.x[j];
        u0.v[j] = std::sin(6.0 * x / L) + 0.1 * std::cos(x / L) - 0.2 * std::sin(3.0 * x / L)
                + 0.05 * std::cos(15.0 * x / L) + 0.7 * std::sin(18.0 * x / L)
                - std::cos(13.0 * x / L);
    }
    return transform(u0);
}

SpectralField warmup_truth(const Grid& g, const ModelCoefficients& coeffs, double dt,
                           double warmup_time) {
    SpectralField u = initial_profile(g);
    const long n = std::lround(warmup_time / dt);
    Forcing none;
    for (long j = 0; j < n; j++) {
        try {
            u = imex_step(u, coeffs, none, dt);
        } catch (const BlowupError&) {
            throw BlowupError("warmup_truth: blow-up at step " + std::to_string(j) +
                              " (t = " + std::to_string(j * dt) + ")");
        }
    }
    return u;
}

} // namespace kse
