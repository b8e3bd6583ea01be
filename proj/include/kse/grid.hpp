#ifndef KSE_GRID_HPP
#define KSE_GRID_HPP

#include <complex>
#include <vector>

namespace kse {

// Periodic domain [0, 2*pi*L) sampled at N evenly spaced collocation points.
// Spectral data uses the standard DFT mode layout 0, 1, ..., N/2, -N/2+1, ..., -1
// (the Nyquist slot N/2 is counted as +N/2), with wavenumber q_k = k/L.
struct Grid {
    double L;
    int N;
    std::vector<double> x;  // collocation points x_j = 2*pi*L*j/N
    std::vector<int> k;     // integer mode index per spectral slot
    std::vector<double> q;  // q_k = k/L

    Grid(double L_, int N_);

    bool operator==(const Grid& o) const { return N == o.N && L == o.L; }
};

// Real samples on the collocation grid.
struct RealField {
    const Grid* grid = nullptr;
    std::vector<double> v;

    RealField() = default;
    explicit RealField(const Grid& g) : grid(&g), v(g.N, 0.0) {}
};

// Complex Fourier coefficients of a real periodic field. Mode 0 carries the
// spatial mean (the forward transform divides by N). All fields in this
// library represent real functions, so coeffs(-k) = conj(coeffs(k)).
struct SpectralField {
    const Grid* grid = nullptr;
    std::vector<std::complex<double>> c;

    SpectralField() = default;
    explicit SpectralField(const Grid& g) : grid(&g), c(g.N, {0.0, 0.0}) {}
};

} // namespace kse

#endif
