#pragma once

#include <map>
#include <string>
#include <vector>

#include "shadowlab/complex_matrix.hpp"
#include "shadowlab/matrix_io.hpp"
#include "shadowlab/normalize.hpp"

namespace shadowlab {

namespace detail {

inline ComplexMatrix from_rows(std::size_t n, std::initializer_list<cplx> entries) {
    return ComplexMatrix(n, std::vector<cplx>(entries));
}

inline std::map<std::string, ComplexMatrix> make_builtin_registry() {
    const cplx i(0.0, 1.0);
    const cplx w = std::polar(1.0, 2.0 * 3.14159265358979323846 / 3.0);  // cube root of unity
    const cplx w2 = std::conj(w);

    std::map<std::string, ComplexMatrix> reg;

    // N = 2: the generic qubit example, prescaled so alpha = 1.
    reg.emplace("A2_0", std::sqrt(2.0 / 5.0) *
                            from_rows(2, {1.0, 1.0,
                                          0.0, -1.0}));

    // N = 3: one representative per numerical-range class (0..3 flat parts).
    // The diagonal one carries its stated prefactor; the others are brought
    // to natural size numerically.
    reg.emplace("A3_0", natural_rescale(from_rows(3, {1.0, 1.0, 1.0,
                                                      0.0, w, 1.0,
                                                      0.0, 0.0, w2})));
    reg.emplace("A3_1", natural_rescale(from_rows(3, {cplx(5.0, -3.0), 0.0, 6.0,
                                                      0.0, cplx(5.0, 3.0), 6.0,
                                                      -6.0, -6.0, -10.0})));
    reg.emplace("A3_2", natural_rescale(from_rows(3, {1.0, 1.0, 0.0,
                                                      0.0, w, 0.0,
                                                      0.0, 0.0, w2})));
    reg.emplace("A3_3", std::sqrt(2.0 / 3.0) * from_rows(3, {1.0, 0.0, 0.0,
                                                             0.0, w, 0.0,
                                                             0.0, 0.0, w2}));

    // N = 4 survey: raw matrices plus natural-size variants (suffix n).
    const std::vector<std::pair<std::string, ComplexMatrix>> a4 = {
        {"A4_0", from_rows(4, {1.0, 1.0, 1.0, 1.0,
                               0.0, i, 1.0, 1.0,
                               0.0, 0.0, -1.0, 1.0,
                               0.0, 0.0, 0.0, -i})},
        {"A4_1", from_rows(4, {i, 0.0, -1.0, 0.0,
                               0.0, 0.0, -1.0, 0.0,
                               1.0, 1.0, cplx(1.0, -1.0), 0.0,
                               0.0, 0.0, 1.0, 1.0})},
        {"A4_2", from_rows(4, {1.0, 0.0, 0.0, 1.0,
                               0.0, i, 0.0, 1.0,
                               0.0, 0.0, -1.0, 0.0,
                               0.0, 0.0, 0.0, -i})},
        {"A4_3", from_rows(4, {1.0, 0.0, 0.0, 1.0,
                               0.0, i, 1.0, 0.0,
                               0.0, 0.0, -1.0, 0.0,
                               0.0, 0.0, 0.0, -i})},
        {"A4_4", from_rows(4, {1.0, 0.0, 0.0, 1.0,
                               0.0, i, 0.0, 0.0,
                               0.0, 0.0, -1.0, 0.0,
                               0.0, 0.0, 0.0, -i})},
        {"A4_5", from_rows(4, {i, 0.0, -1.0, 0.0,
                               0.0, 0.0, -1.0, 0.0,
                               1.0, 1.0, cplx(1.0, -1.0), 0.0,
                               0.0, 0.0, 0.0, 1.0})},
        {"A4_6", from_rows(4, {1.0, 0.0, 1.0, 0.0,
                               0.0, i, 0.0, 1.0,
                               0.0, 0.0, -1.0, 0.0,
                               0.0, 0.0, 0.0, -i})},
        {"A4_7", from_rows(4, {1.0, 0.0, 0.0, 0.0,
                               0.0, i, 0.0, 1.0,
                               0.0, 0.0, -1.0, 0.0,
                               0.0, 0.0, 0.0, -i})},
        {"A4_8", from_rows(4, {1.0, 0.0, 0.0, 0.0,
                               0.0, i, 0.0, 0.0,
                               0.0, 0.0, -1.0, 0.0,
                               0.0, 0.0, 0.0, -i})},
    };
    for (const auto& [name, m] : a4) {
        reg.emplace(name + "n", natural_rescale(m));
        reg.emplace(name, m);
    }

    // Qutrit Hamiltonian driving the trajectory examples.
    reg.emplace("H21", from_rows(3, {-1.0, cplx(-1.0, -1.0), 1.0,
                                     cplx(-1.0, 1.0), 0.0, cplx(1.0, 1.0),
                                     1.0, cplx(1.0, -1.0), 1.0}));

    // Viewpoint observables for the trajectory plots.
    reg.emplace("D_A1", from_rows(3, {0.0, 0.0, 1.0,
                                      0.0, i, 0.0,
                                      0.0, 0.0, -1.0}));
    reg.emplace("D_A2", from_rows(3, {0.0, 1.0, 1.0,
                                      0.0, i, 1.0,
                                      0.0, 0.0, -1.0}));
    reg.emplace("D_A3", from_rows(3, {i, 0.0, 2.0,
                                      0.0, 0.0, 0.0,
                                      0.0, 0.0, -i}));
    return reg;
}

}  // namespace detail

inline const std::map<std::string, ComplexMatrix>& builtin_registry() {
    static const std::map<std::string, ComplexMatrix> reg = detail::make_builtin_registry();
    return reg;
}

inline std::vector<std::string> builtin_names() {
    std::vector<std::string> names;
    for (const auto& [name, m] : builtin_registry()) names.push_back(name);
    return names;
}

inline const ComplexMatrix& builtin_matrix(const std::string& name) {
    const auto& reg = builtin_registry();
    const auto it = reg.find(name);
    if (it == reg.end()) throw ParseError("unknown builtin matrix: " + name);
    return it->second;
}

/// File path or registry name, the way the CLI flags accept matrices.
inline ComplexMatrix parse_matrix(const std::string& path_or_builtin) {
    const auto& reg = builtin_registry();
    const auto it = reg.find(path_or_builtin);
    if (it != reg.end()) return it->second;
    ComplexMatrix m = read_matrix_file(path_or_builtin);
    if (!m.all_finite()) throw ParseError("matrix has non-finite entries");
    return m;
}

}  // namespace shadowlab
