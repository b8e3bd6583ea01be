#ifndef KSE_SPECTRAL_HPP
#define KSE_SPECTRAL_HPP

#include "kse/grid.hpp"

namespace kse {

// Forward DFT, normalized so that mode 0 equals the spatial mean of f.
SpectralField transform(const RealField& f);

// Inverse DFT. The input must be conjugate-symmetric; an imaginary residue
// above 100*eps*||F|| throws (it signals symmetry corruption upstream).
RealField inverse_transform(const SpectralField& F);

// Multiply mode k by (i*q_k)^order, order in {1,2,3,4}. Odd orders zero the
// Nyquist mode to keep the result conjugate-symmetric.
SpectralField spectral_derivative(const SpectralField& F, int order);

// 2/3 rule: zero every mode with |k| > N/3.
SpectralField dealias_two_thirds(const SpectralField& F);

// <f,g> over [0, 2*pi*L) computed via Parseval: 2*pi*L * sum Re(F_k conj(G_k)).
// Equals the physical-space integral of f*g. Throws on grid mismatch.
double l2_inner_product(const SpectralField& F, const SpectralField& G);

double l2_norm(const SpectralField& F);

} // namespace kse

#endif
