#include "kse/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

namespace kse {

namespace {

// One pair of c2c plans per grid size, created once under a lock. Plans are
// built with FFTW_ESTIMATE (deterministic, no timing-based tuning) and
// FFTW_UNALIGNED so they can execute on arbitrary caller buffers via the
// new-array interface.
struct PlanPair {
    fftw_plan fwd;
    fftw_plan bwd;
};

PlanPair plans_for(int N) {
    static std::mutex mtx;
    static std::map<int, PlanPair> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(N);
    if (it != cache.end()) return it->second;
    std::vector<std::complex<double>> scratch(N);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    PlanPair pp;
    pp.fwd = fftw_plan_dft_1d(N, p, p, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    pp.bwd = fftw_plan_dft_1d(N, p, p, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!pp.fwd || !pp.bwd) throw std::runtime_error("fftw plan creation failed");
    cache[N] = pp;
    return pp;
}

} // namespace

SpectralField transform(const RealField& f) {
    if (!f.grid || (int)f.v.size() != f.grid->N)
        throw std::invalid_argument("transform: field/grid size mismatch");
    const Grid& g = *f.grid;
    SpectralField F(g);
    for (int j = 0; j < g.N; j++) F.c[j] = {f.v[j], 0.0};
    auto* p = reinterpret_cast<fftw_complex*>(F.c.data());
    fftw_execute_dft(plans_for(g.N).fwd, p, p);
    const double inv_n = 1.0 / g.N;
    for (auto& z : F.c) z *= inv_n;
    // the input is real, so the exact result is conjugate-symmetric; the
    // complex transform breaks that at round-off level, and in a long time
    // integration those eps-size defects would compound.  Re-impose the
    // symmetry so it holds bitwise, as a half-spectrum transform would.
    F.c[0] = {F.c[0].real(), 0.0};
    if (g.N % 2 == 0) F.c[g.N / 2] = {F.c[g.N / 2].real(), 0.0};
    for (int k = 1; k < (g.N + 1) / 2; k++) {
        const std::complex<double> avg =
            0.5 * (F.c[k] + std::conj(F.c[g.N - k]));
        F.c[k] = avg;
        F.c[g.N - k] = std::conj(avg);
    }
    return F;
}

RealField inverse_transform(const SpectralField& F) {
    if (!F.grid || (int)F.c.size() != F.grid->N)
        throw std::invalid_argument("inverse_transform: field/grid size mismatch");
    const Grid& g = *F.grid;
    std::vector<std::complex<double>> buf = F.c;
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_execute_dft(plans_for(g.N).bwd, p, p);
    // forward divided by N, so the unnormalized backward sum restores f as-is
    double max_imag = 0.0;
    for (const auto& z : buf) max_imag = std::max(max_imag, std::fabs(z.imag()));
    double norm2 = 0.0;
    for (const auto& z : F.c) norm2 += std::norm(z);
    const double fnorm = std::sqrt(2.0 * M_PI * g.L * norm2);
    const double eps = std::numeric_limits<double>::epsilon();
    // genuine symmetry violations produce residues on the order of the field
    // itself; FFT round-off stays a couple of orders below this bound
    if (max_imag > 100.0 * eps * fnorm)
        throw std::runtime_error("inverse_transform: imaginary residue exceeds tolerance "
                                 "(input not conjugate-symmetric)");
    RealField f(g);
    for (int j = 0; j < g.N; j++) f.v[j] = buf[j].real();
    return f;
}

SpectralField spectral_derivative(const SpectralField& F, int order) {
    if (order < 1 || order > 4)
        throw std::invalid_argument("spectral_derivative: order must be in {1,2,3,4}");
    const Grid& g = *F.grid;
    SpectralField out(g);
    for (int j = 0; j < g.N; j++) {
        const double q = g.q[j];
        std::complex<double> m;
        switch (order) {  // (i*q)^order, expanded to keep pure-real/imag exact
            case 1: m = {0.0, q}; break;
            case 2: m = {-q * q, 0.0}; break;
            case 3: m = {0.0, -q * q * q}; break;
            default: m = {q * q * q * q, 0.0}; break;
        }
        out.c[j] = m * F.c[j];
    }
    if (order % 2 == 1) out.c[g.N / 2] = 0.0;
    return out;
}

SpectralField dealias_two_thirds(const SpectralField& F) {
    const Grid& g = *F.grid;
    SpectralField out = F;
    const double cut = g.N / 3.0;
    for (int j = 0; j < g.N; j++)
        if (std::abs(g.k[j]) > cut) out.c[j] = 0.0;
    return out;
}

double l2_inner_product(const SpectralField& F, const SpectralField& G) {
    if (!F.grid || !G.grid || !(*F.grid == *G.grid))
        throw std::invalid_argument("l2_inner_product: grid mismatch");
    double s = 0.0;
    const int N = F.grid->N;
    for (int j = 0; j < N; j++)
        s += F.c[j].real() * G.c[j].real() + F.c[j].imag() * G.c[j].imag();
    return 2.0 * M_PI * F.grid->L * s;
}

double l2_norm(const SpectralField& F) {
    return std::sqrt(std::max(l2_inner_product(F, F), 0.0));
}

} // namespace kse
