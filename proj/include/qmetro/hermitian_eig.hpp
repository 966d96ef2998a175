#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "complex_matrix.hpp"

namespace qmetro {

struct EigResult {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // orthonormal columns, matching order
};

namespace detail {

// Sum of squared magnitudes of the strict off-diagonal part.
inline double off_diagonal_norm2(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return s;
}

}  // namespace detail

// Eigendecomposition of a Hermitian matrix by the cyclic complex Jacobi
// method. The input is symmetrized first ((M+M^dagger)/2); inputs further
// than `herm_tol` from Hermitian are rejected. Eigenvalues come back in
// ascending order; each eigenvector column has its phase fixed so that the
// largest-magnitude component is real and positive (stable under reruns).
inline EigResult hermitian_eig(const ComplexMatrix& m, double herm_tol = 1e-8) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("hermitian_eig: matrix must be square");
    if (!m.all_finite())
        throw std::invalid_argument("hermitian_eig: non-finite entries");
    if (m.hermiticity_defect() > herm_tol)
        throw std::invalid_argument("hermitian_eig: matrix is not Hermitian within tolerance");

    const std::size_t n = m.rows();
    ComplexMatrix a = m.symmetrized();
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double scale = std::max(1.0, a.frobenius_norm());
    const double target = 1e-26 * scale * scale;  // off-diagonal-squared goal
    const int max_sweeps = 100;

    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        if (detail::off_diagonal_norm2(a) <= target) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double abs_apq = std::abs(apq);
                if (abs_apq <= 1e-300) continue;

                // Unitary 2x2 rotation annihilating a(p,q). With
                // phase = apq/|apq|, the Hermitian 2x2 block reduces to a
                // real symmetric one, handled by the classical Jacobi angle.
                const cplx phase = apq / abs_apq;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * abs_apq);
                const double t = (tau >= 0.0)
                                     ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                     : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // Column update R: cols p,q of A and V.
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx aip = a(i, p);
                    const cplx aiq = a(i, q);
                    a(i, p) = c * aip - s * std::conj(phase) * aiq;
                    a(i, q) = s * phase * aip + c * aiq;
                    const cplx vip = v(i, p);
                    const cplx viq = v(i, q);
                    v(i, p) = c * vip - s * std::conj(phase) * viq;
                    v(i, q) = s * phase * vip + c * viq;
                }
                // Row update R^dagger on the left.
                for (std::size_t j = 0; j < n; ++j) {
                    const cplx apj = a(p, j);
                    const cplx aqj = a(q, j);
                    a(p, j) = c * apj - s * phase * aqj;
                    a(q, j) = s * std::conj(phase) * apj + c * aqj;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }

    const double resid = std::sqrt(detail::off_diagonal_norm2(a));
    if (sweep >= max_sweeps && resid * resid > target) {
        std::ostringstream os;
        os << "hermitian_eig: no convergence after " << max_sweeps
           << " sweeps; off-diagonal residual " << resid;
        throw std::runtime_error(os.str());
    }

    // Collect, sort ascending, fix phases.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return diag[x] < diag[y]; });

    EigResult out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = order[k];
        out.eigenvalues[k] = diag[src];
        // Phase convention: largest-|.| component real positive.
        std::size_t imax = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double mag = std::abs(v(i, src));
            if (mag > best) {
                best = mag;
                imax = i;
            }
        }
        cplx ph(1.0, 0.0);
        if (best > 1e-300) ph = std::conj(v(imax, src)) / best;
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = ph * v(i, src);
    }
    return out;
}

// Hermitian square root of a positive semidefinite matrix. Eigenvalues in
// [-1e-9, 0) are treated as rounding noise and clamped to zero; anything
// below -1e-6 is a genuinely non-PSD input and is rejected.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& m, double clamp_tol = 1e-9,
                              double reject_tol = 1e-6) {
    EigResult eig = hermitian_eig(m);
    const double min_ev = eig.eigenvalues.front();
    if (min_ev < -reject_tol) {
        std::ostringstream os;
        os << "psd_sqrt: matrix is not positive semidefinite (min eigenvalue "
           << min_ev << ")";
        throw std::invalid_argument(os.str());
    }
    (void)clamp_tol;  // anything in [-reject_tol, 0) is clamped below
    const std::size_t n = m.rows();
    ComplexMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double lam = std::max(0.0, eig.eigenvalues[k]);
        const double r = std::sqrt(lam);
        if (r == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx vik = eig.eigenvectors(i, k);
            if (vik == cplx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < n; ++j)
                out(i, j) += r * vik * std::conj(eig.eigenvectors(j, k));
        }
    }
    return out.symmetrized();
}

}  // namespace qmetro
