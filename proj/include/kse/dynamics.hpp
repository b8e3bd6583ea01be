#ifndef KSE_DYNAMICS_HPP
#define KSE_DYNAMICS_HPP

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

#include "kse/grid.hpp"
#include "kse/spectral.hpp"

namespace kse {

// Generalized Kuramoto-Sivashinsky equation
//   u_t + l1*u_x + l2*u_xx + l3*u_xxx + l4*u_xxxx + l5*u*u_x = 0.
// The classical KSE is lambda = (0, 1, 0, 1, 1).
struct ModelCoefficients {
    std::array<double, 5> lambda{0.0, 1.0, 0.0, 1.0, 1.0};
    std::array<bool, 5> unknown{false, false, false, false, false};

    // 1-based indices of coefficients marked unknown, ascending
    std::vector<int> unknown_indices() const {
        std::vector<int> out;
        for (int k = 1; k <= 5; k++)
            if (unknown[k - 1]) out.push_back(k);
        return out;
    }
};

// Optional forcing f on the right-hand side; absent means identically zero.
struct Forcing {
    std::optional<SpectralField> f;
};

// Thrown when a time step produces non-finite coefficients.
struct BlowupError : std::runtime_error {
    explicit BlowupError(const std::string& msg) : std::runtime_error(msg) {}
};

// G_k(v): the k-th term of the equation with no coefficient applied.
// k in {1,2,3,4} is the k-th spectral derivative; k = 5 is the dealiased
// transform of v * v_x formed pointwise on the collocation grid.
SpectralField term_operator(int k, const SpectralField& v);

// Per-mode multiplier of the linear part:
//   sigma_k = -(l1*(i q) + l2*(i q)^2 + l3*(i q)^3 + l4*(i q)^4).
// Odd-order contributions are dropped at the Nyquist mode (same rule as
// spectral_derivative) so the symbol preserves conjugate symmetry.
std::vector<std::complex<double>> linear_symbol(const ModelCoefficients& coeffs, const Grid& g);

// Additive Runge-Kutta tableau: implicit (ESDIRK) and explicit parts sharing
// the abscissae c and weights b. Exposed as data so schemes can be swapped.
struct ImexScheme {
    int stages;
    int order;
    std::array<std::array<double, 6>, 6> a_im;
    std::array<std::array<double, 6>, 6> a_ex;
    std::array<double, 6> b;
    std::array<double, 6> c;
};

// Kennedy-Carpenter ARK4(3)6L[2]SA: six stages, formally fourth order,
// stiffly accurate, diagonally implicit with gamma = 1/4.
const ImexScheme& ark436l2sa();

// One IMEX step of size dt: the linear symbol is treated implicitly (each
// implicit stage is a per-mode scalar division), the nonlinear term
// -l5*G5(v) plus forcing explicitly. The result is dealiased. Throws
// BlowupError if the result is non-finite.
SpectralField imex_step(const SpectralField& v, const ModelCoefficients& coeffs,
                        const Forcing& f, double dt,
                        const ImexScheme& scheme = ark436l2sa());

// The fixed six-mode initial profile used for truth generation:
//   u0(x) = sin(6x/L) + 0.1 cos(x/L) - 0.2 sin(3x/L)
//         + 0.05 cos(15x/L) + 0.7 sin(18x/L) - cos(13x/L),
// zero-mean and periodic on [0, 2*pi*L); u0(0) = -0.85.
SpectralField initial_profile(const Grid& g);

// Integrate the truth model from u0 to the stated warmup time (default 10)
// and return the state there; the assimilating system starts from this point.
SpectralField warmup_truth(const Grid& g, const ModelCoefficients& coeffs, double dt,
                           double warmup_time = 10.0);

} // namespace kse

#endif
