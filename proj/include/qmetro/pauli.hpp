#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "complex_matrix.hpp"
#include "quantum.hpp"

namespace qmetro {

inline ComplexMatrix pauli_x() { return detail::pauli_matrix(0); }
inline ComplexMatrix pauli_y() { return detail::pauli_matrix(1); }
inline ComplexMatrix pauli_z() { return detail::pauli_matrix(2); }

inline std::array<HermitianObservable, 3> pauli_basis() {
    return {HermitianObservable(2, pauli_x()), HermitianObservable(2, pauli_y()),
            HermitianObservable(2, pauli_z())};
}

// Generalized Pauli (Gell-Mann) basis for dimension d: d^2-1 traceless
// Hermitian matrices normalized to Tr(g_i g_j) = 2 delta_ij.
//
// Order: symmetric off-diagonal pairs in ascending (k,l), then antisymmetric
// pairs in ascending (k,l), then the d-1 diagonal matrices. For d=2 this is
// exactly (sigma_x, sigma_y, sigma_z).
inline std::vector<ComplexMatrix> gell_mann_basis(std::size_t d, std::size_t max_d = 8) {
    if (d < 2) throw std::invalid_argument("gell_mann_basis: d must be >= 2");
    if (d > max_d) throw std::invalid_argument("gell_mann_basis: d exceeds configured max");

    std::vector<ComplexMatrix> out;
    out.reserve(d * d - 1);
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = k + 1; l < d; ++l) {
            ComplexMatrix m(d, d);
            m(k, l) = 1.0;
            m(l, k) = 1.0;
            out.push_back(std::move(m));
        }
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = k + 1; l < d; ++l) {
            ComplexMatrix m(d, d);
            m(k, l) = cplx(0.0, -1.0);
            m(l, k) = cplx(0.0, 1.0);
            out.push_back(std::move(m));
        }
    for (std::size_t l = 1; l < d; ++l) {
        ComplexMatrix m(d, d);
        const double norm = std::sqrt(2.0 / double(l * (l + 1)));
        for (std::size_t j = 0; j < l; ++j) m(j, j) = norm;
        m(l, l) = -double(l) * norm;
        out.push_back(std::move(m));
    }
    return out;
}

// Index ranges of the three Gell-Mann families under the ordering above.
struct GellMannLayout {
    std::size_t n_symmetric;   // (k,l) symmetric pairs: d(d-1)/2
    std::size_t n_antisymmetric;  // imaginary pairs: d(d-1)/2
    std::size_t n_diagonal;    // d-1
};

inline GellMannLayout gell_mann_layout(std::size_t d) {
    return {d * (d - 1) / 2, d * (d - 1) / 2, d - 1};
}

}  // namespace qmetro
