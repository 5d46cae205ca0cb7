#include "minsum/io.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "minsum/errors.hpp"

namespace minsum {

namespace {

bool parse_double(const std::string& s, double& out) {
    const char* c = s.c_str();
    char* end = nullptr;
    out = std::strtod(c, &end);
    return end != c && *end == '\0';
}

bool parse_int(const std::string& s, int& out) {
    const char* c = s.c_str();
    char* end = nullptr;
    long v = std::strtol(c, &end, 10);
    if (end == c || *end != '\0') return false;
    out = static_cast<int>(v);
    return out == v;
}

std::vector<std::string> tokens_of(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> toks;
    std::string t;
    while (ss >> t) {
        if (t[0] == '#') break;
        toks.push_back(t);
    }
    return toks;
}

}  // namespace

RawProblem load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open for reading");

    RawProblem raw;
    bool have_n = false;
    std::map<std::pair<int, int>, double> seen;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = tokens_of(line);
        if (toks.empty()) continue;
        const std::string& kind = toks[0];
        if (kind == "n") {
            if (have_n) throw ParseError(path, lineno, "duplicate n header");
            int n;
            if (toks.size() != 2 || !parse_int(toks[1], n) || n < 1)
                throw ParseError(path, lineno, "bad n header");
            raw.n = n;
            raw.h.assign(n, 0.0);
            have_n = true;
        } else if (kind == "h") {
            if (!have_n) throw ParseError(path, lineno, "h before n header");
            int i;
            double v;
            if (toks.size() != 3 || !parse_int(toks[1], i) || !parse_double(toks[2], v))
                throw ParseError(path, lineno, "bad h line");
            if (i < 0 || i >= raw.n) throw ParseError(path, lineno, "h index out of range");
            if (!std::isfinite(v)) throw ParseError(path, lineno, "h value not finite");
            raw.h[i] = v;
        } else if (kind == "e") {
            if (!have_n) throw ParseError(path, lineno, "e before n header");
            int i, j;
            double v;
            if (toks.size() != 4 || !parse_int(toks[1], i) || !parse_int(toks[2], j) ||
                !parse_double(toks[3], v))
                throw ParseError(path, lineno, "bad e line");
            if (i < 0 || j < 0 || i >= raw.n || j >= raw.n)
                throw ParseError(path, lineno, "edge index out of range");
            if (i >= j) throw ParseError(path, lineno, "edges must have i < j");
            if (!std::isfinite(v)) throw ParseError(path, lineno, "edge value not finite");
            auto key = std::make_pair(i, j);
            auto it = seen.find(key);
            if (it != seen.end() && it->second != v)
                throw ParseError(path, lineno, "conflicting duplicate edge (" +
                                                   std::to_string(i) + "," +
                                                   std::to_string(j) + ")");
            seen[key] = v;
        } else {
            throw ParseError(path, lineno, "unknown directive '" + kind + "'");
        }
    }
    if (!have_n) throw ParseError(path, lineno, "missing n header");
    for (const auto& [ij, v] : seen)
        raw.entries.push_back({ij.first, ij.second, v});
    return raw;
}

void save_instance(const std::string& path, const RawProblem& raw) {
    std::ofstream out(path);
    if (!out) throw IoError(path, "cannot open for writing");
    out << "n " << raw.n << "\n";
    for (int i = 0; i < raw.n; ++i)
        out << "h " << i << " " << fmt_g17(raw.h[i]) << "\n";
    for (const auto& e : raw.entries) {
        if (e.i == e.j) continue;  // the dialect stores off-diagonals only
        out << "e " << e.i << " " << e.j << " " << fmt_g17(e.value) << "\n";
    }
    if (!out) throw IoError(path, "write failed");
}

std::string trace_row_string(const TraceRow& row, bool async) {
    std::string s = std::to_string(row.t) + "," + fmt_g17(row.dgamma) + "," +
                    fmt_g17(row.dz) + "," + fmt_g17(row.residual) + "," +
                    std::to_string(row.illposed);
    if (async)
        s += "," + std::to_string(row.activated) + "," + std::to_string(row.staleness);
    return s;
}

void save_trace(const std::string& path, const Trace& trace) {
    std::ofstream out(path);
    if (!out) throw IoError(path, "cannot open for writing");
    for (const TraceRow& row : trace.rows)
        out << trace_row_string(row, trace.async) << "\n";
    if (!out) throw IoError(path, "write failed");
}

void save_params(const std::string& path, const QuadraticProblem& p, const EdgeParams& params) {
    std::ofstream out(path);
    if (!out) throw IoError(path, "cannot open for writing");
    for (int e = 0; e < p.directed_count(); ++e)
        out << "g " << p.src[e] << " " << p.head[e] << " " << fmt_g17(params.gamma[e]) << "\n";
    for (int e = 0; e < p.directed_count(); ++e)
        out << "z " << p.src[e] << " " << p.head[e] << " " << fmt_g17(params.z[e]) << "\n";
    if (!out) throw IoError(path, "write failed");
}

void save_witness(const std::string& path, const QuadraticProblem& p, const Witness& w) {
    std::ofstream out(path);
    if (!out) throw IoError(path, "cannot open for writing");
    for (int e = 0; e < p.directed_count(); ++e)
        out << "g " << p.src[e] << " " << p.head[e] << " " << fmt_g17(w.v[e]) << "\n";
    if (!out) throw IoError(path, "write failed");
}

EdgeParams load_params(const std::string& path, const QuadraticProblem& p) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open for reading");
    EdgeParams out = EdgeParams::zeros(p);
    std::vector<unsigned char> have_g(p.directed_count(), 0);
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = tokens_of(line);
        if (toks.empty()) continue;
        if (toks[0] != "g" && toks[0] != "z")
            throw ParseError(path, lineno, "unknown directive '" + toks[0] + "'");
        int i, j;
        double v;
        if (toks.size() != 4 || !parse_int(toks[1], i) || !parse_int(toks[2], j) ||
            !parse_double(toks[3], v))
            throw ParseError(path, lineno, "bad " + toks[0] + " line");
        if (!std::isfinite(v)) throw ParseError(path, lineno, "value not finite");
        int e = p.directed_index(i, j);
        if (e < 0)
            throw ParseError(path, lineno, "no directed edge (" + std::to_string(i) +
                                               " -> " + std::to_string(j) + ")");
        if (toks[0] == "g") {
            if (have_g[e]) throw ParseError(path, lineno, "duplicate g record");
            have_g[e] = 1;
            out.gamma[e] = v;
        } else {
            out.z[e] = v;
        }
    }
    for (int e = 0; e < p.directed_count(); ++e)
        if (!have_g[e]) throw MissingEdgeValueError(p.src[e], p.head[e]);
    return out;
}

}  // namespace minsum
