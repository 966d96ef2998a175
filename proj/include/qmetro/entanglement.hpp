#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "complex_matrix.hpp"
#include "hermitian_eig.hpp"
#include "metrology.hpp"
#include "optimize.hpp"
#include "pauli.hpp"
#include "quantum.hpp"
#include "rng.hpp"

namespace qmetro {

struct TangleValue {
    double value = 0.0;
    std::array<double, 4> lambdas{};  // Wootters spectrum, nonincreasing
};

// Two-qubit tangle (squared concurrence) from the spin-flip spectrum:
// lambdas are the square roots of the eigenvalues of
// sqrt(rho) rho_tilde sqrt(rho) with rho_tilde = (sy tensor sy) rho^T
// (sy tensor sy), the transpose taken in the computational product basis.
//
// Eigenvalues below 1e-14 are treated as exact zeros before the square root:
// they are squares of the Wootters lambdas, and keeping 1e-16-scale dust
// would inject sqrt(eps) ~ 1e-8 bias into the lambda sum.
inline TangleValue tangle_wootters(const DensityMatrix& rho) {
    if (rho.dim_a() != 2 || rho.dim_b() != 2)
        throw std::invalid_argument("tangle_wootters: requires a two-qubit state");

    const ComplexMatrix yy = tensor_product(pauli_y(), pauli_y());
    const ComplexMatrix rho_tilde = yy * rho.matrix().transpose() * yy;
    const ComplexMatrix s = psd_sqrt(rho.matrix());
    const ComplexMatrix inner = (s * rho_tilde * s).symmetrized();

    EigResult eig = hermitian_eig(inner);
    TangleValue out;
    for (int k = 0; k < 4; ++k) {
        double w = eig.eigenvalues[3 - k];  // descending
        if (w < 1e-14) w = 0.0;
        out.lambdas[k] = std::sqrt(w);
    }
    const double c = out.lambdas[0] - out.lambdas[1] - out.lambdas[2] - out.lambdas[3];
    out.value = std::clamp(c > 0.0 ? c * c : 0.0, 0.0, 1.0);
    return out;
}

// Pure-state interferometric entanglement for qubit A:
// alpha^2 (1 - |r|^2) with r the local Bloch vector; equals
// alpha^2 * 2(1 - Tr rho_A^2), the local linear entropy.
inline double ie_pure(const PureState& psi, const Spectrum& s) {
    if (psi.dim_a() != 2)
        throw std::invalid_argument("ie_pure: subsystem A must be a qubit");
    const std::array<double, 3> r = bloch_vector(psi);
    const double v = 1.0 - (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
    return s.alpha * s.alpha * std::max(0.0, v);
}

// Mixed two-qubit interferometric entanglement: the convex roof collapses to
// the tangle, scaled by alpha^2.
inline double ie_two_qubit(const DensityMatrix& rho, const Spectrum& s) {
    return s.alpha * s.alpha * tangle_wootters(rho).value;
}

struct Decomposition {
    std::vector<double> weights;
    std::vector<PureState> states;

    // max elementwise distance between sum_i p_i |psi_i><psi_i| and rho.
    double reconstruction_defect(const DensityMatrix& rho) const {
        const std::size_t d = rho.dim();
        ComplexMatrix acc(d, d);
        for (std::size_t k = 0; k < states.size(); ++k) {
            const std::vector<cplx>& a = states[k].amplitudes();
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    acc(i, j) += weights[k] * a[i] * std::conj(a[j]);
        }
        acc -= rho.matrix();
        return acc.max_abs();
    }
};

struct ConvexRoofResult {
    double value = 0.0;
    Decomposition best;
};

namespace detail {

// Gram-Schmidt column orthonormalization of an m x 2 complex matrix built
// from 4m real parameters; returns false when the columns are degenerate.
inline bool params_to_isometry(const std::vector<double>& x, std::size_t m,
                               ComplexMatrix& iso) {
    iso = ComplexMatrix(m, 2);
    for (std::size_t i = 0; i < m; ++i) {
        iso(i, 0) = cplx(x[2 * i], x[2 * i + 1]);
        iso(i, 1) = cplx(x[2 * m + 2 * i], x[2 * m + 2 * i + 1]);
    }
    for (std::size_t j = 0; j < 2; ++j) {
        for (std::size_t k = 0; k < j; ++k) {
            cplx proj = 0.0;
            for (std::size_t i = 0; i < m; ++i) proj += std::conj(iso(i, k)) * iso(i, j);
            for (std::size_t i = 0; i < m; ++i) iso(i, j) -= proj * iso(i, k);
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < m; ++i) norm += std::norm(iso(i, j));
        norm = std::sqrt(norm);
        if (norm < 1e-10) return false;
        for (std::size_t i = 0; i < m; ++i) iso(i, j) /= norm;
    }
    return true;
}

}  // namespace detail

// Numerical convex roof of the pure-state IE over decompositions of a rank-2
// two-qubit state. Every size-m decomposition of a rank-2 state arises as
// |w_i> = sum_j T_ij sqrt(q_j) |v_j> for an m x 2 isometry T, so the search
// space is exactly the isometry manifold; Haar starts plus Nelder-Mead local
// refinement per ensemble size.
inline ConvexRoofResult convex_roof_oracle(const DensityMatrix& rho, const Spectrum& s,
                                           const std::vector<std::size_t>& ensemble_sizes,
                                           std::size_t restarts, std::uint64_t seed) {
    if (rho.dim_a() != 2)
        throw std::invalid_argument("convex_roof_oracle: subsystem A must be a qubit");
    EigResult eig = hermitian_eig(rho.matrix());
    const std::size_t d = rho.dim();
    // eigenvalues ascending: rank <= 2 means all but the top two vanish.
    if (d > 2 && eig.eigenvalues[d - 3] > 1e-8)
        throw std::invalid_argument("convex_roof_oracle: state has rank > 2");

    // Scaled eigenvectors sqrt(q_j) |v_j> for the top two eigenvalues.
    std::array<std::vector<cplx>, 2> basis;
    for (int j = 0; j < 2; ++j) {
        const std::size_t col = d - 1 - j;
        const double q = std::max(0.0, eig.eigenvalues[col]);
        basis[j].resize(d);
        for (std::size_t i = 0; i < d; ++i)
            basis[j][i] = std::sqrt(q) * eig.eigenvectors(i, col);
    }

    const std::size_t da = rho.dim_a();
    const std::size_t db = rho.dim_b();

    // Ensemble-average IE of the decomposition induced by isometry T.
    auto objective = [&](const ComplexMatrix& iso) {
        const std::size_t m = iso.rows();
        double total = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<cplx> w(d, cplx(0.0, 0.0));
            for (int j = 0; j < 2; ++j) {
                const cplx t = iso(i, j);
                if (t == cplx(0.0, 0.0)) continue;
                for (std::size_t k = 0; k < d; ++k) w[k] += t * basis[j][k];
            }
            double p = 0.0;
            for (const cplx& z : w) p += std::norm(z);
            if (p < 1e-14) continue;
            // Bloch norm of the normalized member, computed in place.
            double r[3] = {0.0, 0.0, 0.0};
            for (int axis = 0; axis < 3; ++axis) {
                const ComplexMatrix sig = detail::pauli_matrix(axis);
                cplx acc = 0.0;
                for (std::size_t a = 0; a < da; ++a)
                    for (std::size_t b = 0; b < da; ++b) {
                        const cplx sab = sig(a, b);
                        if (sab == cplx(0.0, 0.0)) continue;
                        for (std::size_t k = 0; k < db; ++k)
                            acc += sab * std::conj(w[a * db + k]) * w[b * db + k];
                    }
                r[axis] = acc.real() / p;
            }
            const double lin = 1.0 - (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
            total += p * std::max(0.0, lin);
        }
        return total;
    };

    double best_val = std::numeric_limits<double>::infinity();
    ComplexMatrix best_iso;

    NelderMeadOptions opt;
    opt.max_iters = 300;
    opt.tolerance = 1e-12;
    opt.initial_step = 0.25;

    std::size_t stream = 0;
    for (std::size_t m : ensemble_sizes) {
        if (m < 2)
            throw std::invalid_argument("convex_roof_oracle: ensemble sizes must be >= 2");
        for (std::size_t r = 0; r < restarts; ++r, ++stream) {
            Rng rng = Rng::substream(seed, stream);
            const ComplexMatrix start = haar_isometry(m, 2, rng);
            std::vector<double> x0(4 * m);
            for (std::size_t i = 0; i < m; ++i) {
                x0[2 * i] = start(i, 0).real();
                x0[2 * i + 1] = start(i, 0).imag();
                x0[2 * m + 2 * i] = start(i, 1).real();
                x0[2 * m + 2 * i + 1] = start(i, 1).imag();
            }
            NelderMeadResult res = nelder_mead(
                [&](const std::vector<double>& x) {
                    ComplexMatrix iso;
                    if (!detail::params_to_isometry(x, m, iso))
                        return std::numeric_limits<double>::max();
                    return objective(iso);
                },
                x0, opt);
            // Strict less-than: earlier restarts win ties.
            if (res.value < best_val) {
                ComplexMatrix iso;
                if (detail::params_to_isometry(res.x, m, iso)) {
                    best_val = res.value;
                    best_iso = iso;
                }
            }
        }
    }

    // Reassemble the winning decomposition.
    ConvexRoofResult out;
    out.value = s.alpha * s.alpha * best_val;
    const std::size_t m = best_iso.rows();
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<cplx> w(d, cplx(0.0, 0.0));
        for (int j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < d; ++k) w[k] += best_iso(i, j) * basis[j][k];
        double p = 0.0;
        for (const cplx& z : w) p += std::norm(z);
        if (p < 1e-14) continue;
        const double inv = 1.0 / std::sqrt(p);
        for (cplx& z : w) z *= inv;
        out.best.weights.push_back(p);
        out.best.states.emplace_back(da, db, std::move(w));
    }
    return out;
}

inline ConvexRoofResult convex_roof_oracle(const DensityMatrix& rho, const Spectrum& s,
                                           std::uint64_t seed = 1) {
    return convex_roof_oracle(rho, s, {2, 3, 4}, 6, seed);
}

}  // namespace qmetro
