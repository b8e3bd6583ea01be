#include "kse/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kse {

SpectralField bdf_derivative(const ObservationHistory& history, int p, double dt) {
    if (p < 1 || p > 3) throw std::invalid_argument("bdf_derivative: p must be in {1,2,3}");
    if (history.size() < p + 1)
        throw std::invalid_argument("bdf_derivative: history holds fewer than p+1 entries");
    // coefficients on f_j, f_{j-1}, ... over a common denominator
    static const std::vector<std::vector<double>> num = {
        {1.0, -1.0},
        {3.0, -4.0, 1.0},
        {11.0, -18.0, 9.0, -2.0},
    };
    static const std::vector<double> den = {1.0, 2.0, 6.0};
    const auto& c = num[p - 1];
    const int newest = history.size() - 1;
    const Grid& g = *history.fields[newest].grid;
    SpectralField out(g);
    for (int i = 0; i <= p; i++) {
        const auto& f = history.fields[newest - i];
        const double w = c[i] / (den[p - 1] * dt);
        for (int j = 0; j < g.N; j++) out.c[j] += w * f.c[j];
    }
    return out;
}

BasisSet build_basis(const SpectralField& e1, const SpectralField& v,
                     const std::vector<int>& unknown_terms, const ObservationOperator& op,
                     double sigma_min) {
    const int n = (int)unknown_terms.size();
    BasisSet out;
    std::vector<SpectralField> raw;
    raw.push_back(e1);
    for (int k : unknown_terms) {
        if ((int)raw.size() >= n) break;
        if (k == 5) continue;  // the nonlinear term never enters the basis
        raw.push_back(observe(op, term_operator(k, v)));
    }
    if ((int)raw.size() < n)
        throw std::invalid_argument("build_basis: not enough linear terms for the basis");

    double first_pivot = 0.0;
    for (int i = 0; i < n; i++) {
        SpectralField w = raw[i];
        for (const auto& e : out.e) {
            const double proj = l2_inner_product(w, e);
            for (int j = 0; j < w.grid->N; j++) w.c[j] -= proj * e.c[j];
        }
        const double nw = l2_norm(w);
        if (i == 0) first_pivot = nw;
        if (nw < sigma_min * first_pivot) {
            out.degenerate = true;
            return out;
        }
        for (auto& c : w.c) c /= nw;
        out.e.push_back(std::move(w));
    }
    return out;
}

LinearSystem assemble_system(const BasisSet& basis, const SpectralField& v,
                             const SpectralField& u_dot_obs, const Forcing& f,
                             const ModelCoefficients& model, const ObservationOperator& op) {
    const Grid& g = *v.grid;
    const std::vector<int> unknowns = model.unknown_indices();
    const int n = (int)unknowns.size();
    LinearSystem sys;
    sys.n = n;

    // known part F(v) = sum over known k of lambda_k G_k(v)
    SpectralField Fv(g);
    for (int k = 1; k <= 5; k++) {
        if (model.unknown[k - 1]) continue;
        const double lk = model.lambda[k - 1];
        if (lk == 0.0) continue;
        SpectralField gk = term_operator(k, v);
        for (int j = 0; j < g.N; j++) Fv.c[j] += lk * gk.c[j];
    }
    SpectralField rhs = observe(op, Fv);
    for (int j = 0; j < g.N; j++) rhs.c[j] = -u_dot_obs.c[j] - rhs.c[j];
    if (f.f) {
        SpectralField fo = observe(op, *f.f);
        for (int j = 0; j < g.N; j++) rhs.c[j] += fo.c[j];
    }

    std::vector<SpectralField> cols;
    cols.reserve(n);
    for (int k : unknowns) cols.push_back(observe(op, term_operator(k, v)));

    for (int i = 0; i < n; i++) {
        for (int kk = 0; kk < n; kk++) sys.A[i][kk] = l2_inner_product(basis.e[i], cols[kk]);
        sys.b[i] = l2_inner_product(basis.e[i], rhs);
    }
    return sys;
}

std::optional<std::vector<double>> solve_point_estimates(const LinearSystem& sys,
                                                         double sigma_min) {
    const int n = sys.n;
    std::array<std::array<double, 5>, 5> a = sys.A;
    std::array<double, 5> b = sys.b;
    for (int i = 0; i < n; i++) {
        for (int j = 0; j < n; j++)
            if (!std::isfinite(a[i][j]))
                throw std::runtime_error("solve_point_estimates: non-finite matrix entry");
        if (!std::isfinite(b[i]))
            throw std::runtime_error("solve_point_estimates: non-finite rhs entry");
    }
    // Condition estimate: smallest/largest pivot ratio over the elimination.
    // A near-dependent column produces a tiny late pivot; rejecting the solve
    // there (rather than returning a wild estimate) is what keeps occasional
    // degenerate steps from derailing the whole run.
    double piv_min = 0.0, piv_max = 0.0;
    for (int col = 0; col < n; col++) {
        int piv = col;
        for (int r = col + 1; r < n; r++)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        if (piv != col) {
            std::swap(a[piv], a[col]);
            std::swap(b[piv], b[col]);
        }
        const double d = std::fabs(a[col][col]);
        if (d == 0.0) return std::nullopt;
        piv_min = (col == 0) ? d : std::min(piv_min, d);
        piv_max = std::max(piv_max, d);
        for (int r = col + 1; r < n; r++) {
            const double w = a[r][col] / a[col][col];
            for (int j = col; j < n; j++) a[r][j] -= w * a[col][j];
            b[r] -= w * b[col];
        }
    }
    if (piv_min < sigma_min * piv_max) return std::nullopt;
    std::vector<double> x(n);
    for (int i = n - 1; i >= 0; i--) {
        double s = b[i];
        for (int j = i + 1; j < n; j++) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

std::vector<double> relax_update(const std::vector<double>& lambda_hat,
                                 const std::vector<double>& lambda_tilde, double alpha,
                                 double dt) {
    if (lambda_hat.size() != lambda_tilde.size())
        throw std::invalid_argument("relax_update: size mismatch");
    const double ad = alpha * dt;
    const double den = 1.0 + 0.5 * ad;
    std::vector<double> out(lambda_hat.size());
    for (size_t i = 0; i < out.size(); i++)
        out[i] = ((1.0 - 0.5 * ad) * lambda_hat[i] + ad * lambda_tilde[i]) / den;
    return out;
}

void assimilation_step(EstimatorState& state, const SpectralField& u_obs,
                       const ModelCoefficients& model, const EstimatorConfig& cfg,
                       const ObservationOperator& op, const Forcing& f, double t, double dt) {
    state.history.capacity = cfg.p + 1;
    state.history.push(t, u_obs);

    const SpectralField e1 = observed_error(op, u_obs, state.v);
    const std::vector<int> unknowns = model.unknown_indices();
    const int order = std::min(state.history.size() - 1, cfg.p);

    state.suspended = true;
    if (!unknowns.empty() && order >= 1 &&
        l2_norm(e1) >= cfg.e1_min * l2_norm(u_obs)) {
        BasisSet basis = build_basis(e1, state.v, unknowns, op, cfg.sigma_min);
        if (!basis.degenerate) {
            SpectralField u_dot = bdf_derivative(state.history, order, dt);
            LinearSystem sys = assemble_system(basis, state.v, u_dot, f, model, op);
            auto tilde = solve_point_estimates(sys, cfg.sigma_min);
            if (tilde) {
                std::vector<double> hat(unknowns.size());
                for (size_t i = 0; i < unknowns.size(); i++)
                    hat[i] = state.lambda_hat[unknowns[i] - 1];
                std::vector<double> next =
                    cfg.alpha == 0.0 ? *tilde : relax_update(hat, *tilde, cfg.alpha, dt);
                for (size_t i = 0; i < unknowns.size(); i++) {
                    state.lambda_tilde[unknowns[i] - 1] = (*tilde)[i];
                    state.lambda_hat[unknowns[i] - 1] = next[i];
                }
                state.suspended = false;
            }
        }
    }

    ModelCoefficients stepping = model;
    stepping.lambda = state.lambda_hat;
    SpectralField v_next = imex_step(state.v, stepping, f, dt);
    const double md = cfg.mu * dt;
    for (int j = 0; j < state.v.grid->N; j++) v_next.c[j] += md * e1.c[j];
    state.v = std::move(v_next);
}

} // namespace kse
