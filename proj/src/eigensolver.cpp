#include "glocal/eigensolver.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <random>

namespace glocal {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) {
    return std::sqrt(dot(a, a));
}

void axpy(std::vector<double>& y, double a, const std::vector<double>& x) {
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] += a * x[i];
}

/// QL with implicit shifts on a symmetric tridiagonal matrix.
/// d[0..m) diagonal, e[0..m-1) subdiagonal (both clobbered; eigenvalues land
/// in d). The accompanying rotations are applied to the columns of z, a
/// zrows x m row-major matrix. With z = I the columns become eigenvectors of
/// T; with z = e_{m-1}^T (a single row) the row collects each eigenvector's
/// bottom component, which is all a Lanczos residual bound needs.
void tridiag_ql(std::vector<double>& d, std::vector<double>& e,
                std::vector<double>& z, int m, int zrows) {
    if (m == 1)
        return;
    e.resize(m, 0.0);
    e[m - 1] = 0.0;
    for (int l = 0; l < m; ++l) {
        int iter = 0;
        int mm;
        do {
            for (mm = l; mm < m - 1; ++mm) {
                double dd = std::abs(d[mm]) + std::abs(d[mm + 1]);
                if (std::abs(e[mm]) <= DBL_EPSILON * dd)
                    break;
            }
            if (mm != l) {
                if (iter++ == 64)
                    throw NumericError("tridiagonal QL failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[mm] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (int i = mm - 1; i >= l; --i) {
                    double f = s * e[i];
                    double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[mm] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (int k = 0; k < zrows; ++k) {
                        double* row = z.data() + static_cast<std::size_t>(k) * m;
                        f = row[i + 1];
                        row[i + 1] = s * row[i] + c * f;
                        row[i] = c * row[i] - s * f;
                    }
                }
                if (underflow)
                    continue;
                d[l] -= p;
                e[l] = g;
                e[mm] = 0.0;
            }
        } while (mm != l);
    }
}

double random_unit_double(std::mt19937_64& rng) {
    // 53 uniform bits in [0,1); avoids implementation-defined distributions.
    return static_cast<double>(rng() >> 11) * 0x1p-53;
}

/// One contiguous Lanczos run; a new block starts after each breakdown.
struct Block {
    std::size_t start = 0;
    std::vector<double> alpha;
    std::vector<double> beta; // beta[i] couples vector i and i+1 of the block
    bool closed = false;
    double close_beta = 0.0;
};

struct RitzPair {
    double value = 0.0;
    double bound = 0.0;
    int block = 0;
    int col = 0;
};

// block tridiagonal data -> copies suitable for tridiag_ql
void block_tridiag(const Block& b, std::vector<double>& d, std::vector<double>& e) {
    d = b.alpha;
    const std::size_t dim = b.alpha.size();
    e.assign(dim, 0.0);
    for (std::size_t i = 0; i + 1 < dim; ++i)
        e[i] = b.beta[i];
}

double block_residual_beta(const Block& b) {
    if (b.closed)
        return b.close_beta;
    // open block: beta.size() == alpha.size() right after a step, and the
    // last entry is the coupling to the not-yet-processed basis vector
    return b.beta.size() >= b.alpha.size() ? b.beta[b.alpha.size() - 1] : 0.0;
}

} // namespace

void canonicalize_eigenpairs(EigenPairs& eigs) {
    const int k = eigs.k();
    std::vector<int> order(k);
    for (int i = 0; i < k; ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        double ma = std::abs(eigs.values[a]), mb = std::abs(eigs.values[b]);
        if (ma != mb)
            return ma > mb;
        return eigs.values[a] > eigs.values[b];
    });

    EigenPairs sorted;
    sorted.values.reserve(k);
    sorted.vectors.reserve(k);
    sorted.residuals.reserve(k);
    for (int i : order) {
        sorted.values.push_back(eigs.values[i]);
        sorted.vectors.push_back(std::move(eigs.vectors[i]));
        sorted.residuals.push_back(eigs.residuals.empty() ? 0.0 : eigs.residuals[i]);
    }
    eigs = std::move(sorted);

    // Two eigensolvers computing |lambda| and |-lambda| independently land
    // ~1e-12 apart, so an exact-equality tie-break would order them by
    // noise. Re-sort runs of near-equal magnitude by algebraic value.
    const double scale = eigs.values.empty() ? 1.0 : std::max(1.0, std::abs(eigs.values[0]));
    const double tie_eps = 1e-7 * scale;
    int i = 0;
    while (i < k) {
        int j = i;
        while (j + 1 < k &&
               std::abs(std::abs(eigs.values[j]) - std::abs(eigs.values[j + 1])) <= tie_eps)
            ++j;
        if (j > i) {
            std::vector<int> run(static_cast<std::size_t>(j - i + 1));
            for (std::size_t t = 0; t < run.size(); ++t)
                run[t] = i + static_cast<int>(t);
            std::stable_sort(run.begin(), run.end(),
                             [&](int a, int b) { return eigs.values[a] > eigs.values[b]; });
            EigenPairs tmp;
            for (int idx : run) {
                tmp.values.push_back(eigs.values[idx]);
                tmp.vectors.push_back(std::move(eigs.vectors[idx]));
                tmp.residuals.push_back(eigs.residuals[idx]);
            }
            for (std::size_t t = 0; t < run.size(); ++t) {
                eigs.values[i + static_cast<int>(t)] = tmp.values[t];
                eigs.vectors[i + static_cast<int>(t)] = std::move(tmp.vectors[t]);
                eigs.residuals[i + static_cast<int>(t)] = tmp.residuals[t];
            }
        }
        i = j + 1;
    }

    for (auto& vec : eigs.vectors) {
        std::size_t arg = 0;
        for (std::size_t t = 1; t < vec.size(); ++t)
            if (std::abs(vec[t]) > std::abs(vec[arg]))
                arg = t;
        if (!vec.empty() && vec[arg] < 0.0)
            for (double& x : vec)
                x = -x;
    }
}

EigenPairs top_eigenpairs(const SparseGraph& g, int K, double tol, int max_iter) {
    const VertexId n = g.num_vertices();
    if (n == 0)
        throw InputError("top_eigenpairs: graph has no vertices");
    if (K < 1)
        throw InputError("top_eigenpairs: K must be >= 1");
    if (!(tol > 0.0))
        throw InputError("top_eigenpairs: tol must be > 0");
    int k_eff = K;
    if (static_cast<EdgeCount>(K) > n) {
        std::cerr << "warning: requested K=" << K << " eigenpairs but graph has n=" << n
                  << " vertices; clamping K to " << n << "\n";
        k_eff = static_cast<int>(n);
    }
    if (max_iter < 0)
        max_iter = 20 * k_eff + 100;

    VertexId max_deg = 0;
    for (VertexId v = 0; v < n; ++v)
        max_deg = std::max(max_deg, g.degree(v));
    const double norm_bound = std::max(1.0, static_cast<double>(max_deg)); // >= ||A||_2
    const double breakdown_tol = 64.0 * DBL_EPSILON * norm_bound;

    std::mt19937_64 rng(0x676c6f63616cULL ^ (static_cast<std::uint64_t>(n) * 0x9E3779B97F4A7C15ULL));

    std::vector<std::vector<double>> basis;
    std::vector<Block> blocks;

    auto reorthogonalize = [&](std::vector<double>& w) {
        double before = norm2(w);
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& u : basis)
                axpy(w, -dot(w, u), u);
            double after = norm2(w);
            if (after >= 0.5 * before)
                break;
            before = after;
        }
    };

    auto start_block = [&]() -> bool {
        std::vector<double> q(n);
        for (int attempt = 0; attempt < 16; ++attempt) {
            for (double& x : q)
                x = 2.0 * random_unit_double(rng) - 1.0;
            reorthogonalize(q);
            double nrm = norm2(q);
            if (nrm > 1e-4) {
                for (double& x : q)
                    x /= nrm;
                blocks.push_back(Block{basis.size(), {}, {}, false, 0.0});
                basis.push_back(std::move(q));
                return true;
            }
        }
        return false;
    };

    if (!start_block())
        throw NumericError("top_eigenpairs: could not seed a starting vector");

    auto pool_ritz_pairs = [&]() {
        std::vector<RitzPair> pool;
        std::vector<double> d, e, z;
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            const int dim = static_cast<int>(blocks[b].alpha.size());
            if (dim == 0)
                continue;
            block_tridiag(blocks[b], d, e);
            z.assign(dim, 0.0);
            z[dim - 1] = 1.0;
            tridiag_ql(d, e, z, dim, 1);
            const double beta_res = block_residual_beta(blocks[b]);
            for (int c = 0; c < dim; ++c)
                pool.push_back({d[c], std::abs(beta_res * z[c]), static_cast<int>(b), c});
        }
        std::sort(pool.begin(), pool.end(), [](const RitzPair& a, const RitzPair& b) {
            double ma = std::abs(a.value), mb = std::abs(b.value);
            if (ma != mb)
                return ma > mb;
            return a.value > b.value;
        });
        return pool;
    };

    auto form_candidate = [&](const std::vector<RitzPair>& pool, int take) {
        // full tridiagonal eigenvectors, computed once per block involved
        std::vector<std::vector<double>> block_z(blocks.size());
        for (int i = 0; i < take; ++i) {
            int b = pool[i].block;
            if (block_z[b].empty()) {
                const int dim = static_cast<int>(blocks[b].alpha.size());
                std::vector<double> d, e;
                block_tridiag(blocks[b], d, e);
                std::vector<double> z(static_cast<std::size_t>(dim) * dim, 0.0);
                for (int r = 0; r < dim; ++r)
                    z[static_cast<std::size_t>(r) * dim + r] = 1.0;
                tridiag_ql(d, e, z, dim, dim);
                block_z[b] = std::move(z);
            }
        }
        EigenPairs out;
        for (int i = 0; i < take; ++i) {
            const RitzPair& rp = pool[i];
            const Block& blk = blocks[rp.block];
            const int dim = static_cast<int>(blk.alpha.size());
            // tridiag_ql is deterministic and its rotations do not depend on
            // z, so column rp.col of this run matches the pooling run.
            const std::vector<double>& z = block_z[rp.block];

            std::vector<double> x(n, 0.0);
            for (int r = 0; r < dim; ++r)
                axpy(x, z[static_cast<std::size_t>(r) * dim + rp.col], basis[blk.start + r]);
            double nrm = norm2(x);
            if (nrm > 0.0)
                for (double& t : x)
                    t /= nrm;
            out.values.push_back(rp.value);
            out.vectors.push_back(std::move(x));
        }
        out.residuals.resize(take, 0.0);
        for (int i = 0; i < take; ++i) {
            std::vector<double> r = g.matvec(out.vectors[i]);
            axpy(r, -out.values[i], out.vectors[i]);
            out.residuals[i] = norm2(r);
        }
        canonicalize_eigenpairs(out);
        return out;
    };

    int steps = 0;
    int steps_at_last_check = 0;
    bool probing = false;
    EigenPairs accepted; // converged candidate held while the complement is probed

    while (true) {
        Block& blk = blocks.back();
        const std::vector<double>& v = basis.back();
        std::vector<double> w = g.matvec(v);
        if (!blk.alpha.empty())
            axpy(w, -blk.beta.back(), basis[basis.size() - 2]);
        const double alpha = dot(w, v);
        axpy(w, -alpha, v);
        reorthogonalize(w);
        double beta = norm2(w);
        blk.alpha.push_back(alpha);
        ++steps;

        const bool breakdown = beta <= breakdown_tol || basis.size() == n;
        if (breakdown) {
            blk.closed = true;
            blk.close_beta = beta;
        } else {
            blk.beta.push_back(beta);
            for (double& x : w)
                x /= beta;
            basis.push_back(std::move(w));
        }

        const bool budget_exhausted = steps >= max_iter;
        const bool space_exhausted = breakdown && basis.size() >= n;
        const int total_pairs = steps; // one alpha per step
        const int check_interval = std::max(1, total_pairs / 25);
        const bool check_due = breakdown || budget_exhausted || space_exhausted ||
                               (total_pairs >= k_eff &&
                                steps - steps_at_last_check >= check_interval);

        if (check_due && total_pairs >= std::min<int>(k_eff, static_cast<int>(n))) {
            steps_at_last_check = steps;
            std::vector<RitzPair> pool = pool_ritz_pairs();
            const int take = std::min<int>(k_eff, static_cast<int>(pool.size()));
            const double theta_max = pool.empty() ? 0.0 : std::abs(pool[0].value);
            const double conv_tol = 0.1 * tol * std::max(1.0, theta_max);

            if (space_exhausted || budget_exhausted) {
                EigenPairs cand = form_candidate(pool, take);
                const double res_tol =
                    tol * std::max(1.0, cand.values.empty() ? 0.0 : std::abs(cand.values[0]));
                int converged = 0;
                for (double r : cand.residuals)
                    if (r <= res_tol)
                        ++converged;
                if (converged == k_eff && take == k_eff)
                    return cand;
                throw NumericError("top_eigenpairs: converged " + std::to_string(converged) +
                                   " of " + std::to_string(k_eff) + " requested pairs after " +
                                   std::to_string(steps) + " Lanczos steps");
            }

            if (probing) {
                // The accepted pairs are fixed; the probe block only has to
                // show that the complement holds nothing that would displace
                // them. Its own top Ritz pair is settled when its bound is
                // converged or provably short of the accepted K-th magnitude.
                const int probe_idx = static_cast<int>(blocks.size()) - 1;
                double probe_theta = 0.0, probe_bound = 0.0;
                bool probe_seen = false;
                for (const RitzPair& rp : pool) {
                    if (rp.block == probe_idx) { // pool is magnitude-sorted
                        probe_theta = rp.value;
                        probe_bound = rp.bound;
                        probe_seen = true;
                        break;
                    }
                }
                const double target = std::abs(accepted.values[k_eff - 1]);
                const bool probe_done =
                    blocks[probe_idx].closed ||
                    (probe_seen && (probe_bound <= conv_tol ||
                                    std::abs(probe_theta) + probe_bound < target - conv_tol));
                if (probe_done) {
                    bool competitive = false;
                    for (int i = 0; i < take && !competitive; ++i)
                        competitive = pool[i].block == probe_idx;
                    if (!competitive)
                        return accepted;
                    // The probe surfaced a repeated eigenvalue the earlier
                    // blocks could not see; it becomes a regular block.
                    probing = false;
                }
            } else {
                bool bounds_ok = take == k_eff;
                for (int i = 0; i < take && bounds_ok; ++i)
                    bounds_ok = pool[i].bound <= conv_tol;
                if (bounds_ok) {
                    EigenPairs cand = form_candidate(pool, take);
                    const double res_tol =
                        tol * std::max(1.0, cand.values.empty() ? 0.0 : std::abs(cand.values[0]));
                    bool residuals_ok = true;
                    for (double r : cand.residuals)
                        residuals_ok = residuals_ok && r <= res_tol;
                    if (residuals_ok) {
                        // A single Krylov sequence holds at most one direction
                        // per eigenvalue, so multiplicities hide in the
                        // orthogonal complement. Probe it before accepting.
                        if (basis.size() >= n)
                            return cand;
                        if (!blk.closed) {
                            blk.closed = true;
                            blk.close_beta = blk.beta.empty() ? 0.0 : blk.beta.back();
                        }
                        if (!start_block())
                            return cand; // complement is numerically empty
                        accepted = std::move(cand);
                        probing = true;
                    }
                }
            }
        }

        if (blocks.back().closed) {
            if (basis.size() >= n)
                throw NumericError("top_eigenpairs: basis exhausted with " +
                                   std::to_string(k_eff) + " pairs still unconverged");
            if (!start_block())
                throw NumericError("top_eigenpairs: failed to restart after breakdown");
        }
    }
}

} // namespace glocal
