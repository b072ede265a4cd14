#include "glocal/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cerrno>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace glocal {
namespace io {

namespace {

[[noreturn]] void fail_line(std::size_t line, const std::string& what) {
    throw InputError("line " + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream iss(s);
    std::string tok;
    while (iss >> tok)
        out.push_back(tok);
    return out;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

bool next_line(std::istream& in, std::string& line, std::size_t& lineno) {
    if (!std::getline(in, line))
        return false;
    ++lineno;
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    return true;
}

std::uint64_t parse_u64(const std::string& tok, std::size_t line, const char* what) {
    if (tok.empty() || tok[0] == '-')
        fail_line(line, std::string("negative or empty ") + what + " '" + tok + "'");
    errno = 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
    if (errno == ERANGE || end != tok.c_str() + tok.size())
        fail_line(line, std::string("malformed ") + what + " '" + tok + "'");
    return v;
}

VertexId parse_vertex(const std::string& tok, std::size_t line) {
    std::uint64_t v = parse_u64(tok, line, "vertex id");
    if (v > std::numeric_limits<VertexId>::max())
        fail_line(line, "vertex id '" + tok + "' out of range");
    return static_cast<VertexId>(v);
}

double parse_real_at(const std::string& tok, std::size_t line, const char* what) {
    if (tok.empty())
        fail_line(line, std::string("empty ") + what);
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || !std::isfinite(v))
        fail_line(line, std::string("malformed ") + what + " '" + tok + "'");
    return v;
}

std::string lower(std::string s) {
    for (char& c : s)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

void put_u64_le(std::string& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i)
        buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64_le(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}

constexpr std::size_t kGlcvHeaderBytes = 20;
constexpr unsigned char kGlcvMagic[4] = {0x47, 0x4C, 0x43, 0x56};
constexpr std::uint8_t kGlcvVersion = 1;

} // namespace

GraphFormat detect_graph_format(const std::string& path) {
    auto dot = path.find_last_of('.');
    if (dot != std::string::npos) {
        std::string ext = lower(path.substr(dot + 1));
        if (ext == "mtx" || ext == "mm")
            return GraphFormat::MatrixMarket;
    }
    return GraphFormat::EdgeList;
}

WeightedEdgeList read_edge_list(std::istream& in) {
    WeightedEdgeList list;
    list.n = 0;
    bool n_fixed = false;
    VertexId max_id = 0;
    bool any_edge = false;

    std::string line;
    std::size_t lineno = 0;
    while (next_line(in, line, lineno)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        if (t[0] == '%') {
            auto toks = split_ws(t);
            if (toks.size() != 2 || toks[0] != "%n")
                fail_line(lineno, "unrecognized directive '" + t + "'");
            if (n_fixed)
                fail_line(lineno, "duplicate %n header");
            std::uint64_t n = parse_u64(toks[1], lineno, "vertex count");
            if (n > std::numeric_limits<VertexId>::max())
                fail_line(lineno, "vertex count out of range");
            list.n = static_cast<VertexId>(n);
            n_fixed = true;
            continue;
        }
        auto toks = split_ws(t);
        if (toks.size() < 2 || toks.size() > 3)
            fail_line(lineno, "expected 'u v' or 'u v w'");
        VertexId u = parse_vertex(toks[0], lineno);
        VertexId v = parse_vertex(toks[1], lineno);
        double w = 1.0;
        if (toks.size() == 3) {
            w = parse_real_at(toks[2], lineno, "weight");
            if (w < 0.0)
                fail_line(lineno, "negative weight '" + toks[2] + "'");
        }
        list.edges.push_back({u, v, w});
        max_id = std::max({max_id, u, v});
        any_edge = true;
    }
    if (!n_fixed && any_edge)
        list.n = max_id + 1;
    return list;
}

void write_edge_list(std::ostream& out, const WeightedEdgeList& list) {
    out << "%n " << list.n << '\n';
    for (const auto& e : list.edges)
        out << e.u << ' ' << e.v << ' ' << render_real(e.w) << '\n';
    if (!out)
        throw InputError("edge list write failed");
}

WeightedEdgeList read_matrix_market(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    if (!next_line(in, line, lineno))
        throw InputError("empty Matrix Market stream");
    auto banner = split_ws(trim(line));
    if (banner.size() != 5 || lower(banner[0]) != "%%matrixmarket")
        fail_line(lineno, "not a Matrix Market banner");
    const std::string object = lower(banner[1]);
    const std::string format = lower(banner[2]);
    const std::string field = lower(banner[3]);
    const std::string symmetry = lower(banner[4]);
    if (object != "matrix")
        fail_line(lineno, "unsupported object '" + banner[1] + "'");
    if (format != "coordinate")
        fail_line(lineno, "unsupported format '" + banner[2] + "' (coordinate only)");
    if (field != "real" && field != "integer" && field != "pattern")
        fail_line(lineno, "unsupported field '" + banner[3] + "'");
    if (symmetry != "general" && symmetry != "symmetric")
        fail_line(lineno, "unsupported symmetry '" + banner[4] + "'");
    const bool pattern = field == "pattern";

    std::uint64_t rows = 0, cols = 0, nnz = 0;
    bool have_size = false;
    WeightedEdgeList list;
    std::uint64_t seen = 0;
    while (next_line(in, line, lineno)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '%')
            continue;
        auto toks = split_ws(t);
        if (!have_size) {
            if (toks.size() != 3)
                fail_line(lineno, "expected size line 'rows cols nnz'");
            rows = parse_u64(toks[0], lineno, "row count");
            cols = parse_u64(toks[1], lineno, "column count");
            nnz = parse_u64(toks[2], lineno, "entry count");
            if (rows != cols)
                fail_line(lineno, "adjacency matrix must be square (" +
                                      std::to_string(rows) + "x" + std::to_string(cols) + ")");
            if (rows > std::numeric_limits<VertexId>::max())
                fail_line(lineno, "dimension out of range");
            list.n = static_cast<VertexId>(rows);
            have_size = true;
            continue;
        }
        if (seen == nnz)
            fail_line(lineno, "more entries than declared (" + std::to_string(nnz) + ")");
        const std::size_t want = pattern ? 2 : 3;
        if (toks.size() != want)
            fail_line(lineno, pattern ? "expected 'i j'" : "expected 'i j value'");
        std::uint64_t i = parse_u64(toks[0], lineno, "row index");
        std::uint64_t j = parse_u64(toks[1], lineno, "column index");
        if (i < 1 || i > rows || j < 1 || j > cols)
            fail_line(lineno, "index out of declared bounds");
        double w = pattern ? 1.0 : parse_real_at(toks[2], lineno, "value");
        list.edges.push_back({static_cast<VertexId>(i - 1), static_cast<VertexId>(j - 1), w});
        ++seen;
    }
    if (!have_size)
        throw InputError("missing Matrix Market size line");
    if (seen != nnz)
        throw InputError("expected " + std::to_string(nnz) + " entries, found " +
                         std::to_string(seen));
    return list;
}

void write_matrix_market(std::ostream& out, const WeightedEdgeList& list) {
    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    out << list.n << ' ' << list.n << ' ' << list.edges.size() << '\n';
    for (const auto& e : list.edges) {
        // lower-triangle orientation: row >= column
        VertexId i = std::max(e.u, e.v), j = std::min(e.u, e.v);
        out << (i + 1) << ' ' << (j + 1) << ' ' << render_real(e.w) << '\n';
    }
    if (!out)
        throw InputError("Matrix Market write failed");
}

WeightedEdgeList read_graph(std::istream& in, GraphFormat format) {
    return format == GraphFormat::MatrixMarket ? read_matrix_market(in) : read_edge_list(in);
}

WeightedEdgeList to_edge_list(const SparseGraph& g) {
    WeightedEdgeList list;
    list.n = g.num_vertices();
    list.edges.reserve(g.num_edges());
    for (VertexId u = 0; u < g.num_vertices(); ++u)
        for (VertexId v : g.neighbors(u))
            if (u < v)
                list.edges.push_back({u, v, 1.0});
    return list;
}

std::string render_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

double parse_real(const std::string& token) {
    return parse_real_at(token, 0, "real");
}

void write_invariants_csv(std::ostream& out, const InvariantBundle& bundle) {
    auto cell = [&](const std::optional<std::vector<double>>& v, VertexId i) -> std::string {
        return v ? render_real((*v)[i]) : std::string();
    };
    out << "vertex,degree,ss1,nl3,cc\n";
    for (VertexId i = 0; i < bundle.n; ++i)
        out << i << ',' << cell(bundle.deg, i) << ',' << cell(bundle.ss1, i) << ','
            << cell(bundle.nl3, i) << ',' << cell(bundle.cc, i) << '\n';
    if (!out)
        throw InputError("invariants CSV write failed");
}

void write_latent_positions_csv(std::ostream& out, const LatentPositionMatrix& lp) {
    out << "vertex";
    for (int j = 0; j < lp.k; ++j)
        out << ",lp_" << j;
    out << '\n';
    for (VertexId v = 0; v < lp.n; ++v) {
        out << v;
        for (int j = 0; j < lp.k; ++j)
            out << ',' << render_real(lp.at(v, j));
        out << '\n';
    }
    if (!out)
        throw InputError("latent positions CSV write failed");
}

void write_vector_csv(std::ostream& out, const std::string& name,
                      const std::vector<double>& values) {
    out << "vertex," << name << '\n';
    for (std::size_t i = 0; i < values.size(); ++i)
        out << i << ',' << render_real(values[i]) << '\n';
    if (!out)
        throw InputError("vector CSV write failed");
}

void write_vector_csv(std::ostream& out, const std::string& name,
                      const std::vector<std::uint64_t>& values) {
    out << "vertex," << name << '\n';
    for (std::size_t i = 0; i < values.size(); ++i)
        out << i << ',' << values[i] << '\n';
    if (!out)
        throw InputError("vector CSV write failed");
}

std::vector<double> read_vector_csv(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    if (!next_line(in, line, lineno))
        throw InputError("empty CSV stream");
    auto header = split_csv(trim(line));
    if (header.size() != 2 || header[0].empty() || header[1].empty())
        fail_line(lineno, "expected a two-column header like 'vertex,<name>'");
    std::vector<double> values;
    while (next_line(in, line, lineno)) {
        std::string t = trim(line);
        if (t.empty())
            continue;
        auto cells = split_csv(t);
        if (cells.size() != 2)
            fail_line(lineno, "expected 'index,value'");
        std::uint64_t idx = parse_u64(cells[0], lineno, "vertex index");
        if (idx != values.size())
            fail_line(lineno, "non-sequential vertex index " + cells[0]);
        values.push_back(parse_real_at(cells[1], lineno, "value"));
    }
    return values;
}

void write_vector_binary(std::ostream& out, const VectorPayload& values) {
    std::string buf;
    buf.append(reinterpret_cast<const char*>(kGlcvMagic), 4);
    buf.push_back(static_cast<char>(kGlcvVersion));
    const bool is_f64 = std::holds_alternative<std::vector<double>>(values);
    buf.push_back(is_f64 ? 0 : 1);
    buf.append(6, '\0');
    if (is_f64) {
        const auto& v = std::get<std::vector<double>>(values);
        put_u64_le(buf, v.size());
        for (double x : v)
            put_u64_le(buf, std::bit_cast<std::uint64_t>(x));
    } else {
        const auto& v = std::get<std::vector<std::uint64_t>>(values);
        put_u64_le(buf, v.size());
        for (std::uint64_t x : v)
            put_u64_le(buf, x);
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out)
        throw InputError("binary vector write failed");
}

VectorPayload read_vector_binary(std::istream& in) {
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto* p = reinterpret_cast<const unsigned char*>(data.data());
    if (data.size() < kGlcvHeaderBytes)
        throw InputError("truncated binary vector header");
    if (std::memcmp(p, kGlcvMagic, 4) != 0)
        throw InputError("bad magic (not a GLCV vector)");
    if (p[4] != kGlcvVersion)
        throw InputError("unsupported GLCV version " + std::to_string(p[4]));
    const std::uint8_t dtype = p[5];
    if (dtype > 1)
        throw InputError("unknown GLCV dtype " + std::to_string(dtype));
    const std::uint64_t count = get_u64_le(p + 12);
    if (count > (data.size() - kGlcvHeaderBytes) / 8)
        throw InputError("truncated binary vector payload");
    if (data.size() != kGlcvHeaderBytes + 8 * count)
        throw InputError("trailing bytes after binary vector payload");
    const unsigned char* body = p + kGlcvHeaderBytes;
    if (dtype == 0) {
        std::vector<double> v(count);
        for (std::uint64_t i = 0; i < count; ++i)
            v[i] = std::bit_cast<double>(get_u64_le(body + 8 * i));
        return v;
    }
    std::vector<std::uint64_t> v(count);
    for (std::uint64_t i = 0; i < count; ++i)
        v[i] = get_u64_le(body + 8 * i);
    return v;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad())
        throw InputError("read failed for '" + path + "'");
    return std::move(ss).str();
}

void write_file_atomic(const std::string& path, const std::string& data) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw InputError("cannot open '" + tmp + "' for writing");
        out.write(data.data(), static_cast<std::streamsize>(data.size()));
        out.flush();
        if (!out)
            throw InputError("write failed for '" + tmp + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw InputError("rename failed for '" + path + "': " + ec.message());
}

} // namespace io
} // namespace glocal
