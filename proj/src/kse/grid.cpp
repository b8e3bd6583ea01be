#include "kse/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace kse {

Grid::Grid(double L_, int N_) : L(L_), N(N_) {
    if (N < 4 || N % 2 != 0) throw std::invalid_argument("Grid: N must be even and >= 4");
    if (L <= 0.0) throw std::invalid_argument("Grid: L must be positive");
    x.resize(N);
    k.resize(N);
    q.resize(N);
    const double dx = 2.0 * M_PI * L / N;
    for (int j = 0; j < N; j++) x[j] = dx * j;
    for (int j = 0; j < N; j++) {
        k[j] = (j <= N / 2) ? j : j - N;  // Nyquist slot holds +N/2
        q[j] = k[j] / L;
    }
}

} // namespace kse
