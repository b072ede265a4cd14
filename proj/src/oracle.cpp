#include "glocal/oracle.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace glocal {
namespace oracle {

namespace {

void check_guard(const SparseGraph& g, VertexId limit, const char* op) {
    if (g.num_vertices() > limit)
        throw InputError(std::string(op) + ": size guard exceeded (n=" +
                         std::to_string(g.num_vertices()) + " > " + std::to_string(limit) + ")");
}

} // namespace

InvariantVector brute_triangles(const SparseGraph& g) {
    check_guard(g, kBruteForceMaxVertices, "brute_triangles");
    const VertexId n = g.num_vertices();
    std::vector<double> counts(n, 0.0);
    // dense adjacency mirror so the triple loop stays O(1) per probe
    std::vector<char> adj(static_cast<std::size_t>(n) * n, 0);
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v : g.neighbors(u))
            adj[static_cast<std::size_t>(u) * n + v] = 1;
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v = u + 1; v < n; ++v) {
            if (!adj[static_cast<std::size_t>(u) * n + v])
                continue;
            for (VertexId w = v + 1; w < n; ++w)
                if (adj[static_cast<std::size_t>(u) * n + w] &&
                    adj[static_cast<std::size_t>(v) * n + w]) {
                    counts[u] += 1.0;
                    counts[v] += 1.0;
                    counts[w] += 1.0;
                }
        }
    return {InvariantKind::TrianglesExact, std::move(counts)};
}

InvariantVector brute_scan_statistic(const SparseGraph& g) {
    check_guard(g, kBruteForceMaxVertices, "brute_scan_statistic");
    const VertexId n = g.num_vertices();
    std::vector<double> values(n, 0.0);
    std::vector<VertexId> hood;
    for (VertexId v = 0; v < n; ++v) {
        auto nv = g.neighbors(v);
        hood.clear();
        hood.reserve(nv.size() + 1);
        // closed neighborhood, kept sorted: neighbors are ascending, insert v
        bool placed = false;
        for (VertexId u : nv) {
            if (!placed && v < u) {
                hood.push_back(v);
                placed = true;
            }
            hood.push_back(u);
        }
        if (!placed)
            hood.push_back(v);
        auto [sub, map] = g.induced_subgraph(hood);
        values[v] = static_cast<double>(sub.num_edges());
    }
    return {InvariantKind::ScanStat1, std::move(values)};
}

EigenPairs dense_spectrum(const SparseGraph& g) {
    check_guard(g, kDenseSpectrumMaxVertices, "dense_spectrum");
    const int n = static_cast<int>(g.num_vertices());
    if (n == 0)
        throw InputError("dense_spectrum: graph has no vertices");

    std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
    for (VertexId u = 0; u < g.num_vertices(); ++u)
        for (VertexId v : g.neighbors(u))
            a[static_cast<std::size_t>(u) * n + v] = 1.0;
    std::vector<double> vec(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        vec[static_cast<std::size_t>(i) * n + i] = 1.0;

    auto at = [&](int r, int c) -> double& { return a[static_cast<std::size_t>(r) * n + c]; };

    const int max_sweeps = 64;
    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q)
                off += std::abs(at(p, q));
        if (off == 0.0 || off <= 1e-13 * n)
            break;
        // annihilate noticeable off-diagonal entries in cyclic order
        const double thresh = sweep < 3 ? 0.2 * off / (static_cast<double>(n) * n) : 0.0;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (std::abs(apq) <= thresh)
                    continue;
                if (std::abs(apq) < 1e-300)
                    continue;
                const double tau = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const double app = at(p, p), aqq = at(q, q);
                at(p, p) = app - t * apq;
                at(q, q) = aqq + t * apq;
                at(p, q) = 0.0;
                at(q, p) = 0.0;
                for (int i = 0; i < n; ++i) {
                    if (i == p || i == q)
                        continue;
                    const double aip = at(i, p), aiq = at(i, q);
                    at(i, p) = c * aip - s * aiq;
                    at(p, i) = at(i, p);
                    at(i, q) = s * aip + c * aiq;
                    at(q, i) = at(i, q);
                }
                for (int i = 0; i < n; ++i) {
                    double* row = vec.data() + static_cast<std::size_t>(i) * n;
                    const double vip = row[p], viq = row[q];
                    row[p] = c * vip - s * viq;
                    row[q] = s * vip + c * viq;
                }
            }
        }
    }
    if (sweep == max_sweeps)
        throw NumericError("dense_spectrum: Jacobi did not converge within " +
                           std::to_string(max_sweeps) + " sweeps");

    EigenPairs out;
    out.values.resize(n);
    out.vectors.assign(n, std::vector<double>(n, 0.0));
    out.residuals.assign(n, 0.0);
    for (int j = 0; j < n; ++j) {
        out.values[j] = at(j, j);
        for (int i = 0; i < n; ++i)
            out.vectors[j][i] = vec[static_cast<std::size_t>(i) * n + j];
    }
    for (int j = 0; j < n; ++j) {
        std::vector<double> r = g.matvec(out.vectors[j]);
        for (int i = 0; i < n; ++i)
            r[i] -= out.values[j] * out.vectors[j][i];
        out.residuals[j] = std::sqrt(std::inner_product(r.begin(), r.end(), r.begin(), 0.0));
    }
    canonicalize_eigenpairs(out);
    return out;
}

} // namespace oracle
} // namespace glocal
