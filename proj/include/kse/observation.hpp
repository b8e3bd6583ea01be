#ifndef KSE_OBSERVATION_HPP
#define KSE_OBSERVATION_HPP

#include "kse/grid.hpp"
#include "kse/spectral.hpp"

namespace kse {

enum class InterpOrder { linear = 1, quadratic = 2, cubic = 3 };

// Linear idempotent projector I_h onto observed scales. Two kinds:
//  - FourierTruncation: zero every mode with |k| > K.
//  - PointwiseInterpolation: sample at m evenly spaced points starting at
//    x = 0, build the periodic interpolant of the given order, evaluate it on
//    the full collocation grid, and transform back. The returned field is the
//    band-limited representation of the interpolant; because a piecewise
//    polynomial is not band-limited, repeated application agrees only up to
//    the representation error of the interpolant on the grid (exact when the
//    observation points coincide with grid points, i.e. m divides N).
struct ObservationOperator {
    enum class Kind { fourier_truncation, pointwise_interpolation };
    Kind kind = Kind::fourier_truncation;
    int K = 21;
    int m = 40;
    InterpOrder interp_order = InterpOrder::cubic;

    static ObservationOperator fourier(int K) {
        ObservationOperator op;
        op.kind = Kind::fourier_truncation;
        op.K = K;
        return op;
    }
    static ObservationOperator points(int m, InterpOrder order) {
        ObservationOperator op;
        op.kind = Kind::pointwise_interpolation;
        op.m = m;
        op.interp_order = order;
        return op;
    }
};

SpectralField observe(const ObservationOperator& op, const SpectralField& f);

// I_h(w) = u_obs - I_h(v), where u_obs is already an observation of the truth.
SpectralField observed_error(const ObservationOperator& op, const SpectralField& u_obs,
                             const SpectralField& v);

// Exact evaluation of the band-limited field at the m observation points
// x_i = 2*pi*L*i/m. Uses the mode-folding identity: exp(i*k*x_i/L) depends
// only on k mod m, so the samples are an m-point inverse DFT of the folded
// coefficients (no generic off-grid approximation involved).
std::vector<double> sample_at_observation_points(const SpectralField& F, int m);

// Values of the periodic interpolant through (x_i, y_i) on the full grid.
std::vector<double> periodic_interpolant_on_grid(const Grid& g, const std::vector<double>& y,
                                                 InterpOrder order);

// Solve the cyclic constant-coefficient tridiagonal system
//   diag*x[i] + off*(x[i-1] + x[i+1]) = rhs[i]  (indices mod m, m >= 3)
// by the Sherman-Morrison rank-one correction of the open Thomas solve.
std::vector<double> solve_cyclic_tridiagonal(double off, double diag, const std::vector<double>& rhs);

} // namespace kse

#endif
