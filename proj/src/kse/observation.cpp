#include "kse/observation.hpp"

#include <cmath>
#include <stdexcept>

namespace kse {

std::vector<double> solve_cyclic_tridiagonal(double off, double diag,
                                             const std::vector<double>& rhs) {
    const int m = (int)rhs.size();
    if (m < 3) throw std::invalid_argument("solve_cyclic_tridiagonal: need m >= 3");
    // A = T + u v^T with gamma = -diag absorbing the corner entries
    const double gamma = -diag;
    std::vector<double> dvec(m, diag);
    dvec[0] = diag - gamma;
    dvec[m - 1] = diag - off * off / gamma;

    auto thomas = [&](std::vector<double> d, std::vector<double> r) {
        std::vector<double> c(m, 0.0);
        for (int i = 1; i < m; i++) {
            const double w = off / d[i - 1];
            d[i] -= w * off;
            r[i] -= w * r[i - 1];
        }
        c[m - 1] = r[m - 1] / d[m - 1];
        for (int i = m - 2; i >= 0; i--) c[i] = (r[i] - off * c[i + 1]) / d[i];
        return c;
    };

    std::vector<double> u(m, 0.0);
    u[0] = gamma;
    u[m - 1] = off;
    std::vector<double> y = thomas(dvec, rhs);
    std::vector<double> z = thomas(dvec, u);
    const double frac = (y[0] + (off / gamma) * y[m - 1]) /
                        (1.0 + z[0] + (off / gamma) * z[m - 1]);
    for (int i = 0; i < m; i++) y[i] -= frac * z[i];
    return y;
}

std::vector<double> sample_at_observation_points(const SpectralField& F, int m) {
    const Grid& g = *F.grid;
    std::vector<std::complex<double>> folded(m, {0.0, 0.0});
    for (int j = 0; j < g.N; j++) {
        const int r = ((g.k[j] % m) + m) % m;
        folded[r] += F.c[j];
    }
    std::vector<double> out(m);
    const double w = 2.0 * M_PI / m;
    for (int i = 0; i < m; i++) {
        std::complex<double> s{0.0, 0.0};
        for (int r = 0; r < m; r++)
            s += folded[r] * std::complex<double>{std::cos(w * r * i), std::sin(w * r * i)};
        out[i] = s.real();
    }
    return out;
}

namespace {

std::vector<double> linear_on_grid(const Grid& g, const std::vector<double>& y) {
    const int m = (int)y.size();
    std::vector<double> out(g.N);
    for (int j = 0; j < g.N; j++) {
        // grid point j sits at fraction u = j*m/N of the observation spacing;
        // exact in doubles for power-of-two N
        const double u = (double)j * m / g.N;
        const int i0 = (int)std::floor(u);
        const double tau = u - i0;
        out[j] = y[i0 % m] * (1.0 - tau) + y[(i0 + 1) % m] * tau;
    }
    return out;
}

std::vector<double> cubic_on_grid(const Grid& g, const std::vector<double>& y) {
    const int m = (int)y.size();
    const double h = 2.0 * M_PI * g.L / m;
    // second derivatives M: M[i-1] + 4 M[i] + M[i+1] = 6 (y[i-1] - 2 y[i] + y[i+1]) / h^2
    std::vector<double> rhs(m);
    for (int i = 0; i < m; i++) {
        const double d2 = y[(i + m - 1) % m] - 2.0 * y[i] + y[(i + 1) % m];
        rhs[i] = 6.0 * d2 / (h * h);
    }
    std::vector<double> M = solve_cyclic_tridiagonal(1.0, 4.0, rhs);
    std::vector<double> out(g.N);
    for (int j = 0; j < g.N; j++) {
        const double u = (double)j * m / g.N;
        const int i0 = (int)std::floor(u);
        const double tau = u - i0;
        const int a = i0 % m, b = (i0 + 1) % m;
        const double omt = 1.0 - tau;
        out[j] = y[a] * omt + y[b] * tau +
                 (h * h / 6.0) * ((omt * omt * omt - omt) * M[a] + (tau * tau * tau - tau) * M[b]);
    }
    return out;
}

std::vector<double> quadratic_on_grid(const Grid& g, const std::vector<double>& y) {
    const int m = (int)y.size();
    // uniform quadratic B-spline with knots at sample midpoints:
    // s(x_i) = c[i-1]/8 + 3 c[i]/4 + c[i+1]/8 = y[i]
    std::vector<double> c = solve_cyclic_tridiagonal(1.0 / 8.0, 3.0 / 4.0, y);
    std::vector<double> out(g.N);
    for (int j = 0; j < g.N; j++) {
        const double u = (double)j * m / g.N;
        const int j0 = (int)std::floor(u + 0.5);
        const double t = u - j0;  // in [-1/2, 1/2)
        const int a = ((j0 - 1) % m + m) % m, b = ((j0 % m) + m) % m, d = (j0 + 1) % m;
        out[j] = c[a] * 0.5 * (0.5 - t) * (0.5 - t) + c[b] * (0.75 - t * t) +
                 c[d] * 0.5 * (0.5 + t) * (0.5 + t);
    }
    return out;
}

} // namespace

std::vector<double> periodic_interpolant_on_grid(const Grid& g, const std::vector<double>& y,
                                                 InterpOrder order) {
    if ((int)y.size() < (int)order + 1)
        throw std::invalid_argument("periodic_interpolant_on_grid: need m >= order + 1");
    switch (order) {
        case InterpOrder::linear: return linear_on_grid(g, y);
        case InterpOrder::quadratic: return quadratic_on_grid(g, y);
        default: return cubic_on_grid(g, y);
    }
}

SpectralField observe(const ObservationOperator& op, const SpectralField& f) {
    const Grid& g = *f.grid;
    if (op.kind == ObservationOperator::Kind::fourier_truncation) {
        SpectralField out = f;
        for (int j = 0; j < g.N; j++)
            if (std::abs(g.k[j]) > op.K) out.c[j] = 0.0;
        return out;
    }
    std::vector<double> y = sample_at_observation_points(f, op.m);
    RealField vals(g);
    vals.v = periodic_interpolant_on_grid(g, y, op.interp_order);
    return transform(vals);
}

SpectralField observed_error(const ObservationOperator& op, const SpectralField& u_obs,
                             const SpectralField& v) {
    if (!(*u_obs.grid == *v.grid))
        throw std::invalid_argument("observed_error: grid mismatch");
    SpectralField iv = observe(op, v);
    SpectralField out = u_obs;
    for (int j = 0; j < out.grid->N; j++) out.c[j] -= iv.c[j];
    return out;
}

} // namespace kse
