#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "gqlc/channel.hpp"
#include "gqlc/code.hpp"
#include "gqlc/graph.hpp"
#include "gqlc/search.hpp"

namespace gqlc {

/// Locale-independent decimal text, explicit scientific notation.
inline std::string to_sci(double x, int precision = 9) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::scientific, precision);
    return std::string(buf, res.ptr);
}

inline std::string to_dec(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------- code files

struct CodeMetadata {
    double alpha = 0.0;
    int n_errors = 0;
    int threshold_T = 0;
    double init_density = 0.0;
    int batch_size = 0;
    std::uint64_t seed = 0;
    std::int64_t update_count = 0;
    std::string optimizer;
};

inline nlohmann::json code_to_json(const ParityCheckMatrix& h, const CodeMetadata& meta) {
    nlohmann::json j;
    j["n"] = h.dims().n;
    j["k"] = h.dims().k;
    std::vector<std::string> rows;
    for (int c = 0; c < h.dims().checks(); ++c) {
        std::string row(std::size_t(h.dims().k), '0');
        for (int b = 0; b < h.dims().k; ++b)
            if (h.w_bit(c, b)) row[std::size_t(b)] = '1';
        rows.push_back(std::move(row));
    }
    j["w"] = rows;
    j["metadata"] = {{"alpha", meta.alpha},
                     {"n_errors", meta.n_errors},
                     {"threshold_T", meta.threshold_T},
                     {"init_density", meta.init_density},
                     {"batch_size", meta.batch_size},
                     {"seed", meta.seed},
                     {"update_count", meta.update_count},
                     {"optimizer", meta.optimizer}};
    return j;
}

struct StoredCode {
    ParityCheckMatrix h;
    CodeMetadata meta;
};

inline StoredCode code_from_json(const nlohmann::json& j) {
    for (const char* field : {"n", "k", "w"})
        if (!j.contains(field))
            throw std::runtime_error(std::string("code file: missing field '") + field + "'");
    const CodeDimensions dims{j.at("n").get<int>(), j.at("k").get<int>()};
    require_valid(dims);
    const auto& rows = j.at("w");
    if (!rows.is_array() || int(rows.size()) != dims.checks())
        throw std::runtime_error("code file: field 'w' must hold n-k row strings");
    BitMatrix w(dims.checks(), dims.k);
    for (int c = 0; c < dims.checks(); ++c) {
        const std::string row = rows.at(std::size_t(c)).get<std::string>();
        if (int(row.size()) != dims.k)
            throw std::runtime_error("code file: row " + std::to_string(c) +
                                     " of 'w' must have k bits");
        for (int b = 0; b < dims.k; ++b) {
            if (row[std::size_t(b)] != '0' && row[std::size_t(b)] != '1')
                throw std::runtime_error("code file: row " + std::to_string(c) +
                                         " of 'w' has a non-binary character at column " +
                                         std::to_string(b));
            w.set(c, b, row[std::size_t(b)] == '1');
        }
    }
    StoredCode sc{ParityCheckMatrix(dims, std::move(w)), {}};
    if (j.contains("metadata")) {
        const auto& md = j.at("metadata");
        sc.meta.alpha = md.value("alpha", 0.0);
        sc.meta.n_errors = md.value("n_errors", 0);
        sc.meta.threshold_T = md.value("threshold_T", 0);
        sc.meta.init_density = md.value("init_density", 0.0);
        sc.meta.batch_size = md.value("batch_size", 0);
        sc.meta.seed = md.value("seed", std::uint64_t(0));
        sc.meta.update_count = md.value("update_count", std::int64_t(0));
        sc.meta.optimizer = md.value("optimizer", std::string());
    }
    return sc;
}

inline StoredCode parse_code_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("code file: ") + e.what());
    }
    return code_from_json(j);
}

inline StoredCode load_code(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open code file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_code_text(ss.str());
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

inline void save_code(const std::string& path, const ParityCheckMatrix& h,
                      const CodeMetadata& meta) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write code file: " + path);
    out << code_to_json(h, meta).dump(2) << "\n";
}

// --------------------------------------------------------------------- alist

/// Standard alist: "n m", max degrees, per-column and per-row degree lists,
/// then 1-based index lists zero-padded to the maxima.
inline void write_alist(std::ostream& out, const BitMatrix& h) {
    const int n = h.cols(), m = h.rows();
    std::vector<std::vector<int>> cols(n), rows(m);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < n; ++c)
            if (h.get(r, c)) {
                cols[c].push_back(r + 1);
                rows[r].push_back(c + 1);
            }
    std::size_t cmax = 0, rmax = 0;
    for (const auto& c : cols) cmax = std::max(cmax, c.size());
    for (const auto& r : rows) rmax = std::max(rmax, r.size());

    out << n << " " << m << "\n" << cmax << " " << rmax << "\n";
    for (int c = 0; c < n; ++c) out << cols[c].size() << (c + 1 < n ? " " : "\n");
    for (int r = 0; r < m; ++r) out << rows[r].size() << (r + 1 < m ? " " : "\n");
    for (const auto& c : cols) {
        for (std::size_t i = 0; i < cmax; ++i)
            out << (i < c.size() ? c[i] : 0) << (i + 1 < cmax ? " " : "\n");
    }
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < rmax; ++i)
            out << (i < r.size() ? r[i] : 0) << (i + 1 < rmax ? " " : "\n");
    }
}

inline BitMatrix read_alist(std::istream& in) {
    const auto next_int = [&](const char* what) {
        long long x;
        if (!(in >> x)) throw std::runtime_error(std::string("alist: missing ") + what);
        return x;
    };
    const long long n = next_int("column count"), m = next_int("row count");
    if (n <= 0 || m <= 0) throw std::runtime_error("alist: sizes must be positive");
    const long long cmax = next_int("max column degree");
    (void)next_int("max row degree");
    std::vector<long long> cdeg(static_cast<std::size_t>(n), 0);
    for (auto& d : cdeg) d = next_int("column degree");
    for (long long r = 0; r < m; ++r) (void)next_int("row degree");
    BitMatrix h{int(m), int(n)};
    for (long long c = 0; c < n; ++c) {
        for (long long i = 0; i < cmax; ++i) {
            const long long r = next_int("column index");
            if (r < 0 || r > m) throw std::runtime_error("alist: row index out of range");
            if (i < cdeg[std::size_t(c)]) {
                if (r == 0) throw std::runtime_error("alist: zero index inside declared degree");
                h.set(int(r - 1), int(c), true);
            }
        }
    }
    return h;  // row index lists are redundant; the column lists define H
}

// ------------------------------------------------------------------ BLER CSV

inline std::string bler_csv_header() {
    return "ebno_db,blocks,errors,p_tilde,half_width,converged";
}

inline std::string bler_csv_row(double ebno_db, const BlerEstimate& e) {
    std::ostringstream os;
    os << to_dec(ebno_db) << "," << e.blocks << "," << e.block_errors << ","
       << to_sci(e.p_tilde) << "," << to_sci(e.half_width) << "," << (e.converged ? 1 : 0);
    return os.str();
}

// ------------------------------------------------------- random-search jsonl

inline nlohmann::json record_to_json(const RandomSearchRecord& r) {
    nlohmann::json j;
    j["n"] = r.dims.n;
    j["k"] = r.dims.k;
    j["density"] = r.density;
    j["code_index"] = r.code_index;
    j["code_seed"] = r.code_seed;
    nlohmann::json pts = nlohmann::json::array();
    for (std::size_t i = 0; i < r.ebno_db.size(); ++i) {
        const auto& e = r.estimates[i];
        pts.push_back({{"ebno_db", r.ebno_db[i]},
                       {"blocks", e.blocks},
                       {"errors", e.block_errors},
                       {"p_tilde", e.p_tilde},
                       {"half_width", e.half_width},
                       {"converged", e.converged}});
    }
    j["points"] = pts;
    return j;
}

inline RandomSearchRecord record_from_json(const nlohmann::json& j) {
    RandomSearchRecord r;
    r.dims = {j.at("n").get<int>(), j.at("k").get<int>()};
    r.density = j.at("density").get<double>();
    r.code_index = j.at("code_index").get<std::uint64_t>();
    r.code_seed = j.at("code_seed").get<std::uint64_t>();
    for (const auto& p : j.at("points")) {
        r.ebno_db.push_back(p.at("ebno_db").get<double>());
        BlerEstimate e;
        e.blocks = p.at("blocks").get<std::uint64_t>();
        e.block_errors = p.at("errors").get<std::uint64_t>();
        e.p_tilde = p.at("p_tilde").get<double>();
        e.half_width = p.at("half_width").get<double>();
        e.converged = p.at("converged").get<bool>();
        r.estimates.push_back(e);
    }
    return r;
}

inline void save_records(const std::string& path, std::span<const RandomSearchRecord> records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write records file: " + path);
    for (const auto& r : records) out << record_to_json(r).dump() << "\n";
}

inline std::vector<RandomSearchRecord> load_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open records file: " + path);
    std::vector<RandomSearchRecord> records;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            records.push_back(record_from_json(nlohmann::json::parse(line)));
        } catch (const std::exception& e) {
            throw std::runtime_error(path + " line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return records;
}

// -------------------------------------------------------------- analysis json

inline nlohmann::json analysis_to_json(const GirthHistogram& gh, const DegreeDistribution& dd) {
    const auto hist_json = [](const std::map<int, int>& h, int acyclic, bool with_none) {
        nlohmann::json j = nlohmann::json::object();
        for (auto [k, v] : h) j[std::to_string(k)] = v;
        if (with_none) j["none"] = acyclic;
        return j;
    };
    nlohmann::json j;
    j["vn_girth"] = hist_json(gh.vn, gh.vn_acyclic, true);
    j["cn_girth"] = hist_json(gh.cn, gh.cn_acyclic, true);
    j["vn_degree"] = hist_json(dd.vn, 0, false);
    j["cn_degree"] = hist_json(dd.cn, 0, false);
    return j;
}

}  // namespace gqlc
