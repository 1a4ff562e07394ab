#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>

#include "json.hpp"
#include "shadowlab/complex_matrix.hpp"

namespace shadowlab {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Matrix file format: {"n": N, "rows": [[[re, im], ...], ...]} with N rows
/// of N two-element arrays. Ragged rows and non-finite numbers are rejected.
inline ComplexMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("rows"))
        throw ParseError("matrix json: expected object with \"n\" and \"rows\"");
    if (!j["n"].is_number_unsigned() && !j["n"].is_number_integer())
        throw ParseError("matrix json: \"n\" must be a positive integer");
    const long long n_raw = j["n"].get<long long>();
    if (n_raw < 1) throw ParseError("matrix json: \"n\" must be a positive integer");
    const std::size_t n = static_cast<std::size_t>(n_raw);

    const auto& rows = j["rows"];
    if (!rows.is_array() || rows.size() != n)
        throw ParseError("matrix json: expected " + std::to_string(n) + " rows, got " +
                         std::to_string(rows.size()));
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = rows[i];
        if (!row.is_array() || row.size() != n)
            throw ParseError("matrix json: ragged row " + std::to_string(i) + " (expected " +
                             std::to_string(n) + " entries)");
        for (std::size_t k = 0; k < n; ++k) {
            const auto& e = row[k];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw ParseError("matrix json: entry (" + std::to_string(i) + "," +
                                 std::to_string(k) + ") must be a [re, im] pair");
            const double re = e[0].get<double>();
            const double im = e[1].get<double>();
            if (!std::isfinite(re) || !std::isfinite(im))
                throw ParseError("matrix json: non-finite entry (" + std::to_string(i) + "," +
                                 std::to_string(k) + ")");
            m(i, k) = cplx(re, im);
        }
    }
    return m;
}

inline nlohmann::json matrix_to_json(const ComplexMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.order(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t k = 0; k < m.order(); ++k)
            row.push_back({m(i, k).real(), m(i, k).imag()});
        rows.push_back(std::move(row));
    }
    return {{"n", m.order()}, {"rows", std::move(rows)}};
}

inline ComplexMatrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open matrix file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("malformed json in " + path + ": " + e.what());
    }
    return matrix_from_json(j);
}

inline void write_matrix_file(const std::string& path, const ComplexMatrix& m) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write matrix file: " + path);
    out << matrix_to_json(m).dump(1) << "\n";
}

/// FNV-1a over the canonical text serialization; identifies matrix content
/// in run manifests.
inline std::uint64_t matrix_content_hash(const ComplexMatrix& m) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](const char* s) {
        for (; *s; ++s) {
            h ^= static_cast<unsigned char>(*s);
            h *= 0x100000001b3ull;
        }
    };
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%zu;", m.order());
    mix(buf);
    for (const cplx& z : m.data()) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g;", z.real(), z.imag());
        mix(buf);
    }
    return h;
}

}  // namespace shadowlab
