#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "complex_matrix.hpp"

namespace qmetro {

// splitmix64: tiny, fast, and fully specified by its code, so identical
// streams are reproduced on every rerun (the standard library's distribution
// objects carry no such guarantee across implementations).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // Independent substream k of a master seed: used so parallel work items
    // draw values that do not depend on scheduling.
    static Rng substream(std::uint64_t master_seed, std::uint64_t index) {
        return Rng(mix(master_seed ^ mix((index + 1) * 0x9E3779B97F4A7C15ULL)));
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    // Uniform in [0, 1).
    double next_double() {
        return double(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Standard normal via the Marsaglia polar method (pair cached).
    double next_gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * next_double() - 1.0;
            v = 2.0 * next_double() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    cplx next_complex_gaussian() {
        const double re = next_gaussian();
        const double im = next_gaussian();
        return cplx(re, im);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// rows x cols matrix of independent standard complex Gaussians.
inline ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
    ComplexMatrix g(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) g(i, j) = rng.next_complex_gaussian();
    return g;
}

// Haar-random unitary: QR of a Ginibre matrix with the R-diagonal phase fix
// (without the fix the distribution is biased toward the QR convention).
inline ComplexMatrix haar_unitary(std::size_t d, Rng& rng) {
    ComplexMatrix g = ginibre(d, d, rng);
    // Modified Gram-Schmidt; rdiag records the R diagonal.
    std::vector<cplx> rdiag(d);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = 0; k < j; ++k) {
            cplx proj = 0.0;
            for (std::size_t i = 0; i < d; ++i) proj += std::conj(g(i, k)) * g(i, j);
            for (std::size_t i = 0; i < d; ++i) g(i, j) -= proj * g(i, k);
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < d; ++i) norm += std::norm(g(i, j));
        norm = std::sqrt(norm);
        if (norm < 1e-12)
            throw std::runtime_error("haar_unitary: degenerate Ginibre sample");
        rdiag[j] = norm;  // real positive here; phase fix folds the sign below
        for (std::size_t i = 0; i < d; ++i) g(i, j) /= norm;
    }
    // With MGS the R diagonal is already real positive, so no further phase
    // correction is required; kept explicit for clarity.
    (void)rdiag;
    return g;
}

// Haar-random column-orthonormal m x n isometry (m >= n).
inline ComplexMatrix haar_isometry(std::size_t m, std::size_t n, Rng& rng) {
    if (n > m) throw std::invalid_argument("haar_isometry: need m >= n");
    ComplexMatrix g = ginibre(m, n, rng);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < j; ++k) {
            cplx proj = 0.0;
            for (std::size_t i = 0; i < m; ++i) proj += std::conj(g(i, k)) * g(i, j);
            for (std::size_t i = 0; i < m; ++i) g(i, j) -= proj * g(i, k);
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < m; ++i) norm += std::norm(g(i, j));
        norm = std::sqrt(norm);
        if (norm < 1e-12)
            throw std::runtime_error("haar_isometry: degenerate sample");
        for (std::size_t i = 0; i < m; ++i) g(i, j) /= norm;
    }
    return g;
}

// Flat Dirichlet weights (uniform on the probability simplex).
inline std::vector<double> dirichlet_flat(std::size_t n, Rng& rng) {
    std::vector<double> w(n);
    double total = 0.0;
    for (double& x : w) {
        x = -std::log(1.0 - rng.next_double());
        total += x;
    }
    for (double& x : w) x /= total;
    return w;
}

}  // namespace qmetro
