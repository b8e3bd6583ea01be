#ifndef KSE_ESTIMATOR_HPP
#define KSE_ESTIMATOR_HPP

#include <deque>
#include <optional>
#include <vector>

#include "kse/dynamics.hpp"
#include "kse/observation.hpp"

namespace kse {

struct EstimatorConfig {
    double mu = 1800.0;   // nudging strength; keep mu*dt < 2
    double alpha = 1.0;   // relaxation rate; 0 applies point estimates directly
    int p = 3;            // BDF order in {1,2,3}
    // Relative pivot threshold for the n x n solve and MGS. Multi-parameter
    // runs occasionally pass through states where the observed term vectors
    // are nearly dependent; a solve whose pivot ratio is below ~1e-6 can
    // return point estimates of magnitude 1e4 or more, and even one such
    // value reaching lambda_hat destabilizes the assimilating equation.
    // Suspending the update on those steps costs nothing measurable.
    double sigma_min = 1e-6;
    double e1_min = 1e-13;  // suspend updates when ||e1|| < e1_min * ||u_obs||
};

// Ring buffer of the last p+1 observed projections with their times.
struct ObservationHistory {
    int capacity = 4;
    std::deque<double> times;
    std::deque<SpectralField> fields;

    void push(double t, SpectralField f) {
        times.push_back(t);
        fields.push_back(std::move(f));
        while ((int)fields.size() > capacity) {
            times.pop_front();
            fields.pop_front();
        }
    }
    int size() const { return (int)fields.size(); }
};

struct EstimatorState {
    std::array<double, 5> lambda_hat{};    // current smoothed estimates (full vector)
    std::array<double, 5> lambda_tilde{};  // latest point-in-time estimates
    SpectralField v;                       // assimilated state
    ObservationHistory history;
    bool suspended = false;  // true when the last step skipped the parameter update
};

// BDF-p derivative of the newest entry from the last p+1 history entries.
SpectralField bdf_derivative(const ObservationHistory& history, int p, double dt);

struct BasisSet {
    std::vector<SpectralField> e;
    bool degenerate = false;  // MGS hit a pivot below sigma_min * first pivot
};

// e1 = I_h(w), then one I_h(G_k(v)) per unknown *linear* k in ascending k
// until n vectors are collected (the nonlinear term never supplies a basis
// vector), orthonormalized by modified Gram-Schmidt.
BasisSet build_basis(const SpectralField& e1, const SpectralField& v,
                     const std::vector<int>& unknown_terms, const ObservationOperator& op,
                     double sigma_min);

struct LinearSystem {
    int n = 0;
    std::array<std::array<double, 5>, 5> A{};
    std::array<double, 5> b{};
};

// A[i][k] = <e_i, I_h(G_k(v))> over unknown k (ascending);
// b[i] = <e_i, I_h(f) - u_dot_obs - I_h(F(v))> with F(v) the known part.
LinearSystem assemble_system(const BasisSet& basis, const SpectralField& v,
                             const SpectralField& u_dot_obs, const Forcing& f,
                             const ModelCoefficients& model, const ObservationOperator& op);

// Gaussian elimination with partial pivoting; returns nullopt when the
// smallest pivot falls below sigma_min times the largest (degenerate or
// near-degenerate system). Throws on non-finite entries.
std::optional<std::vector<double>> solve_point_estimates(const LinearSystem& sys,
                                                         double sigma_min);

// Trapezoidal step of d(lambda_hat)/dt = -alpha (lambda_hat - lambda_tilde):
//   lambda_hat <- [(1 - alpha dt/2) lambda_hat + alpha dt lambda_tilde] / (1 + alpha dt/2)
std::vector<double> relax_update(const std::vector<double>& lambda_hat,
                                 const std::vector<double>& lambda_tilde, double alpha,
                                 double dt);

// One full loop body: push the observation, estimate the derivative (lower
// BDF order while the history warms up), build the basis, solve for the
// point estimates, relax, then advance v with the current lambda_hat and add
// the forward-Euler nudging increment mu*dt*(u_obs - I_h(v)) computed from
// the pre-step v. Degenerate or near-synchronized steps skip only the
// parameter update. With alpha == 0 the point estimates are applied directly
// (smoothing disabled).
void assimilation_step(EstimatorState& state, const SpectralField& u_obs,
                       const ModelCoefficients& model, const EstimatorConfig& cfg,
                       const ObservationOperator& op, const Forcing& f, double t, double dt);

} // namespace kse

#endif
