#include "glocal/invariants.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace glocal {

namespace {

double elapsed_seconds(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// |N(u) ∩ N(v)| on sorted adjacency rows
std::size_t intersection_size(std::span<const VertexId> a, std::span<const VertexId> b) {
    std::size_t count = 0, i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j])
            ++i;
        else if (a[i] > b[j])
            ++j;
        else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

} // namespace

InvariantVector degree(const SparseGraph& g) {
    std::vector<double> ones(g.num_vertices(), 1.0);
    return {InvariantKind::Degree, g.matvec(ones)};
}

InvariantVector scan_statistic_1(const SparseGraph& g) {
    const VertexId n = g.num_vertices();
    std::vector<double> values(n, 0.0);
    for (VertexId v = 0; v < n; ++v) {
        auto nv = g.neighbors(v);
        // closed neighborhood: v contributes its deg(v) incident edges;
        // each neighbor pair u < w with u ~ w adds one more
        std::size_t among = 0;
        for (std::size_t i = 0; i < nv.size(); ++i) {
            auto nu = g.neighbors(nv[i]);
            auto from = std::upper_bound(nu.begin(), nu.end(), nv[i]);
            among += intersection_size({from, nu.end()}, nv);
        }
        values[v] = static_cast<double>(nv.size() + among);
    }
    return {InvariantKind::ScanStat1, std::move(values)};
}

InvariantVector local_triangles_exact(const SparseGraph& g) {
    const VertexId n = g.num_vertices();
    std::vector<double> twice(n, 0.0);
    for (VertexId u = 0; u < n; ++u) {
        auto nu = g.neighbors(u);
        for (VertexId v : nu) {
            if (v <= u)
                continue;
            auto c = static_cast<double>(intersection_size(nu, g.neighbors(v)));
            twice[u] += c;
            twice[v] += c;
        }
    }
    // each triangle bumped each of its vertices twice
    for (double& t : twice)
        t *= 0.5;
    return {InvariantKind::TrianglesExact, std::move(twice)};
}

InvariantVector local_triangles_approx(const EigenPairs& eigs) {
    if (eigs.k() == 0)
        throw InputError("local_triangles_approx: no eigenpairs supplied");
    const std::size_t n = eigs.vectors[0].size();
    std::vector<double> values(n, 0.0);
    for (int k = 0; k < eigs.k(); ++k) {
        const double coeff = 0.5 * eigs.values[k] * eigs.values[k] * eigs.values[k];
        const std::vector<double>& x = eigs.vectors[k];
        for (std::size_t v = 0; v < n; ++v)
            values[v] += coeff * x[v] * x[v];
    }
    return {InvariantKind::TrianglesApprox, std::move(values)};
}

InvariantVector clustering_coefficient(const InvariantVector& deg, const InvariantVector& nl3) {
    if (deg.values.size() != nl3.values.size())
        throw InputError("clustering_coefficient: degree and nl3 lengths differ");
    std::vector<double> values(deg.values.size(), 0.0);
    for (std::size_t v = 0; v < values.size(); ++v) {
        const double d = deg.values[v];
        if (d <= 1.0)
            continue;
        values[v] = std::max(0.0, 2.0 * nl3.values[v] / (d * (d - 1.0)));
    }
    return {InvariantKind::ClusteringCoeff, std::move(values)};
}

LatentPositionMatrix latent_positions(const EigenPairs& eigs, int k, bool scaled) {
    if (k < 1 || k > eigs.k())
        throw InputError("latent_positions: k=" + std::to_string(k) + " exceeds available " +
                         std::to_string(eigs.k()) + " eigenpairs");
    LatentPositionMatrix lp;
    lp.n = static_cast<VertexId>(eigs.vectors[0].size());
    lp.k = k;
    lp.scaled = scaled;
    lp.rows.assign(static_cast<std::size_t>(lp.n) * k, 0.0);
    for (int j = 0; j < k; ++j) {
        const double scale = scaled ? std::sqrt(std::abs(eigs.values[j])) : 1.0;
        const std::vector<double>& x = eigs.vectors[j];
        for (VertexId v = 0; v < lp.n; ++v)
            lp.rows[static_cast<std::size_t>(v) * k + j] = scale * x[v];
    }
    return lp;
}

InvariantSelection parse_invariant_selection(const std::string& csv) {
    InvariantSelection sel{false, false, false, false, false};
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok == "deg")
            sel.deg = true;
        else if (tok == "ss1")
            sel.ss1 = true;
        else if (tok == "nl3")
            sel.nl3 = true;
        else if (tok == "cc")
            sel.cc = true;
        else if (tok == "lp")
            sel.lp = true;
        else if (!tok.empty())
            throw InputError("unknown invariant name: " + tok);
    }
    if (!sel.any())
        throw InputError("invariant selection is empty");
    return sel;
}

std::string to_string(const InvariantSelection& sel) {
    std::string out;
    auto add = [&](bool on, const char* name) {
        if (!on)
            return;
        if (!out.empty())
            out += ',';
        out += name;
    };
    add(sel.deg, "deg");
    add(sel.ss1, "ss1");
    add(sel.nl3, "nl3");
    add(sel.cc, "cc");
    add(sel.lp, "lp");
    return out;
}

InvariantBundle compute_all(const SparseGraph& g, const ComputeOptions& opts) {
    if (!opts.which.any())
        throw InputError("compute_all: no invariants requested");
    const int lp_dim = opts.effective_lp_dim();
    if (opts.which.needs_eigs()) {
        if (opts.eigs_k < 1)
            throw InputError("compute_all: K must be >= 1");
        if (opts.which.lp && lp_dim > opts.eigs_k)
            throw InputError("compute_all: lp_dim exceeds K");
    }

    InvariantBundle bundle;
    bundle.n = g.num_vertices();
    bundle.m = g.num_edges();

    auto timed = [&](const char* stage, auto&& fn) {
        auto t0 = std::chrono::steady_clock::now();
        auto result = fn();
        bundle.timings.push_back({stage, elapsed_seconds(t0)});
        return result;
    };

    // shared intermediates, each computed at most once
    std::optional<InvariantVector> deg_vec;
    if (opts.which.deg || opts.which.cc)
        deg_vec = timed("degree", [&] { return degree(g); });

    if (opts.which.ss1)
        bundle.ss1 = timed("ss1", [&] { return scan_statistic_1(g); }).values;

    std::optional<EigenPairs> eigs;
    if (opts.which.needs_eigs()) {
        eigs = timed("eigendecomposition",
                     [&] { return top_eigenpairs(g, opts.eigs_k, opts.tol, opts.max_iter); });
        bundle.eigenvalues = eigs->values;
        bundle.eigs_k = eigs->k();
    }

    std::optional<InvariantVector> nl3_vec;
    if (opts.which.nl3 || opts.which.cc)
        nl3_vec = timed("nl3", [&] { return local_triangles_approx(*eigs); });

    if (opts.which.cc)
        bundle.cc = timed("cc", [&] { return clustering_coefficient(*deg_vec, *nl3_vec); }).values;

    if (opts.which.lp) {
        const int k = std::min(lp_dim, eigs->k());
        bundle.lp = timed("lp", [&] { return latent_positions(*eigs, k, opts.lp_scaled); });
    }

    if (opts.which.deg)
        bundle.deg = std::move(deg_vec->values);
    if (opts.which.nl3)
        bundle.nl3 = std::move(nl3_vec->values);
    return bundle;
}

} // namespace glocal
