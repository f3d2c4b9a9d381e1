// Receiver-side sparse reconstruction and quality metrics.
//
// solve_bpdn() approximately minimizes lambda*||s||_1 + 1/2*||y - A s||^2
// with A = Phi * Psi^T, using an accelerated proximal-gradient iteration.
// The step size is 1/L with L estimated by 50 power-iteration steps on A;
// momentum restarts whenever the objective would increase, which keeps the
// accepted objective sequence non-increasing. A is densified once per solve
// so the per-iteration cost is three matrix-vector products.
#ifndef CSSEAL_RECONSTRUCT_HPP
#define CSSEAL_RECONSTRUCT_HPP

#include <cmath>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "csseal/cs_codec.hpp"

namespace csseal::recon {

enum class BasisKind { Identity, Dct };

// Orthonormal synthesis/analysis pair: x = Psi^T s, s = Psi x. The DCT
// variant caches its dense N x N analysis matrix; instances are immutable
// and cheap to copy, so build one per dimension and share it across solves.
class SparseBasis {
public:
    SparseBasis(BasisKind kind, int n) : kind_(kind), n_(n) {
        if (n <= 0) throw std::invalid_argument("basis dimension must be positive");
        if (kind_ == BasisKind::Dct) {
            auto m = std::make_shared<std::vector<double>>(size_t(n) * n);
            const double norm0 = std::sqrt(1.0 / n), norm = std::sqrt(2.0 / n);
            for (int k = 0; k < n; ++k) {
                double w = k == 0 ? norm0 : norm;
                for (int i = 0; i < n; ++i)
                    (*m)[size_t(k) * n + i] = w * std::cos(M_PI * (2.0 * i + 1.0) * k / (2.0 * n));
            }
            dct_ = std::move(m);
        }
    }

    BasisKind kind() const { return kind_; }
    int dim() const { return n_; }

    std::vector<double> analyze(std::span<const double> x) const {
        check(x.size());
        if (kind_ == BasisKind::Identity) return {x.begin(), x.end()};
        std::vector<double> s(n_);
        for (int k = 0; k < n_; ++k) {
            const double* row = dct_->data() + size_t(k) * n_;
            double acc = 0;
            for (int i = 0; i < n_; ++i) acc += row[i] * x[i];
            s[k] = acc;
        }
        return s;
    }

    std::vector<double> synthesize(std::span<const double> s) const {
        check(s.size());
        if (kind_ == BasisKind::Identity) return {s.begin(), s.end()};
        std::vector<double> x(n_, 0.0);
        for (int k = 0; k < n_; ++k) {
            const double* row = dct_->data() + size_t(k) * n_;
            double sk = s[k];
            if (sk == 0.0) continue;
            for (int i = 0; i < n_; ++i) x[i] += row[i] * sk;
        }
        return x;
    }

private:
    void check(size_t len) const {
        if (int(len) != n_) throw std::invalid_argument("vector length does not match basis");
    }

    BasisKind kind_;
    int n_;
    std::shared_ptr<const std::vector<double>> dct_;
};

struct SolverConfig {
    double lambda = 0.0; // <= 0 selects 0.01 * ||A^T y||_inf
    int max_iter = 500;
    double tol = 1e-6;
    bool restart_on_increase = true;
    int power_iters = 50;

    bool operator==(const SolverConfig&) const = default;
};

struct ReconstructionResult {
    std::vector<double> x_hat;
    std::vector<double> coeffs;
    int iterations = 0;
    double objective = 0.0;
    bool converged = false;
    std::vector<double> objective_trace; // accepted objective per iteration
};

namespace detail {

struct DenseOp {
    int m, n;
    std::vector<double> a; // row-major m x n

    std::vector<double> forward(std::span<const double> s) const {
        std::vector<double> y(m, 0.0);
        for (int j = 0; j < m; ++j) {
            const double* row = a.data() + size_t(j) * n;
            double acc = 0;
            for (int i = 0; i < n; ++i) acc += row[i] * s[i];
            y[j] = acc;
        }
        return y;
    }

    std::vector<double> adjoint(std::span<const double> r) const {
        std::vector<double> g(n, 0.0);
        for (int j = 0; j < m; ++j) {
            const double* row = a.data() + size_t(j) * n;
            double rj = r[j];
            if (rj == 0.0) continue;
            for (int i = 0; i < n; ++i) g[i] += row[i] * rj;
        }
        return g;
    }
};

inline DenseOp densify(const codec::SensingMatrix& phi, const SparseBasis& psi) {
    DenseOp op;
    op.m = phi.rows;
    op.n = phi.cols;
    op.a.resize(size_t(op.m) * op.n);
    std::vector<double> row(op.n);
    for (int j = 0; j < op.m; ++j) {
        for (int i = 0; i < op.n; ++i) row[i] = phi.value(j, i);
        std::vector<double> arow =
            psi.kind() == BasisKind::Identity ? row : psi.analyze(row);
        std::copy(arow.begin(), arow.end(), op.a.begin() + size_t(j) * op.n);
    }
    return op;
}

inline double objective_of(const DenseOp& op, std::span<const double> s,
                           std::span<const double> y, double lambda) {
    std::vector<double> as = op.forward(s);
    double quad = 0, l1 = 0;
    for (int j = 0; j < op.m; ++j) {
        double d = as[j] - y[j];
        quad += d * d;
    }
    for (double v : s) l1 += std::abs(v);
    return lambda * l1 + 0.5 * quad;
}

} // namespace detail

inline ReconstructionResult solve_bpdn(std::span<const double> y,
                                       const codec::SensingMatrix& phi_eff,
                                       const SparseBasis& psi, const SolverConfig& cfg = {},
                                       std::span<const double> warm_start = {}) {
    if (int(y.size()) != phi_eff.rows)
        throw std::invalid_argument("measurement length does not match matrix rows");
    if (psi.dim() != phi_eff.cols)
        throw std::invalid_argument("basis dimension does not match matrix columns");
    for (double v : y)
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite measurement");

    const int n = phi_eff.cols;
    detail::DenseOp op = detail::densify(phi_eff, psi);

    std::vector<double> aty = op.adjoint(y);
    double aty_inf = 0;
    for (double v : aty) aty_inf = std::max(aty_inf, std::abs(v));

    ReconstructionResult res;
    res.coeffs.assign(n, 0.0);
    if (aty_inf == 0.0) {
        // y carries nothing; the l1 term pins the solution at zero
        res.x_hat.assign(n, 0.0);
        res.converged = true;
        return res;
    }
    double lambda = cfg.lambda > 0 ? cfg.lambda : 0.01 * aty_inf;

    // Lipschitz constant of the gradient: ||A||^2 via power iteration
    std::vector<double> v(n, 1.0 / std::sqrt(double(n)));
    for (int it = 0; it < cfg.power_iters; ++it) {
        std::vector<double> w = op.adjoint(op.forward(v));
        double nrm = 0;
        for (double x : w) nrm += x * x;
        nrm = std::sqrt(nrm);
        if (nrm == 0) break;
        for (int i = 0; i < n; ++i) v[i] = w[i] / nrm;
    }
    std::vector<double> av = op.forward(v);
    double lip = 0;
    for (double x : av) lip += x * x;
    if (lip <= 0) lip = 1.0;
    const double step = 1.0 / lip;

    std::vector<double> s(n, 0.0);
    if (!warm_start.empty()) {
        if (int(warm_start.size()) != n)
            throw std::invalid_argument("warm start length does not match basis");
        s.assign(warm_start.begin(), warm_start.end());
    }
    std::vector<double> z = s;
    double t = 1.0;
    double f_prev = detail::objective_of(op, s, y, lambda);

    auto prox_step = [&](const std::vector<double>& at) {
        std::vector<double> az = op.forward(at);
        for (int j = 0; j < op.m; ++j) az[j] -= y[j];
        std::vector<double> g = op.adjoint(az);
        std::vector<double> out(n);
        const double thr = lambda * step;
        for (int i = 0; i < n; ++i) {
            double u = at[i] - step * g[i];
            out[i] = u > thr ? u - thr : (u < -thr ? u + thr : 0.0);
        }
        return out;
    };

    for (int it = 1; it <= cfg.max_iter; ++it) {
        std::vector<double> s_new = prox_step(z);
        double f_new = detail::objective_of(op, s_new, y, lambda);
        if (cfg.restart_on_increase && f_new > f_prev) {
            // momentum overshot: restart from the last accepted point
            z = s;
            t = 1.0;
            s_new = prox_step(z);
            f_new = detail::objective_of(op, s_new, y, lambda);
        }
        double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        double beta = (t - 1.0) / t_new;
        z.resize(n);
        for (int i = 0; i < n; ++i) z[i] = s_new[i] + beta * (s_new[i] - s[i]);

        double rel = std::abs(f_prev - f_new) / std::max(f_prev, 1e-300);
        s = std::move(s_new);
        f_prev = f_new;
        t = t_new;
        res.objective_trace.push_back(f_new);
        res.iterations = it;
        if (rel < cfg.tol) {
            res.converged = true;
            break;
        }
    }

    res.coeffs = s;
    res.x_hat = psi.synthesize(s);
    res.objective = f_prev;
    return res;
}

// Pearson correlation in the N-scaled sum arrangement; result clamped to
// [-1, 1] against rounding.
inline double pearson_rho(std::span<const double> x, std::span<const double> x_hat) {
    if (x.size() != x_hat.size() || x.size() < 2)
        throw std::invalid_argument("pearson_rho needs two equal-length vectors, N >= 2");
    const double n = double(x.size());
    double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += x_hat[i];
        sxy += x[i] * x_hat[i];
        sxx += x[i] * x[i];
        syy += x_hat[i] * x_hat[i];
    }
    double vx = n * sxx - sx * sx;
    double vy = n * syy - sy * sy;
    if (vx <= 0 || vy <= 0) throw std::domain_error("correlation undefined for constant input");
    double rho = (n * sxy - sx * sy) / (std::sqrt(vx) * std::sqrt(vy));
    return std::clamp(rho, -1.0, 1.0);
}

// 20*log10(peak / rmse) with peak = max(x) - min(x); +infinity when exact.
inline double psnr(std::span<const double> x, std::span<const double> x_hat) {
    if (x.size() != x_hat.size() || x.size() < 2)
        throw std::invalid_argument("psnr needs two equal-length vectors, N >= 2");
    double lo = x[0], hi = x[0], se = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        lo = std::min(lo, x[i]);
        hi = std::max(hi, x[i]);
        double d = x[i] - x_hat[i];
        se += d * d;
    }
    if (hi <= lo) throw std::domain_error("psnr undefined for constant input");
    double rmse = std::sqrt(se / double(x.size()));
    if (rmse == 0.0) return std::numeric_limits<double>::infinity();
    return 20.0 * std::log10((hi - lo) / rmse);
}

} // namespace csseal::recon

#endif
