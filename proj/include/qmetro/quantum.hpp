#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "complex_matrix.hpp"
#include "hermitian_eig.hpp"

namespace qmetro {

enum class Subsystem { A, B };

// Validated bipartite density matrix: Hermitian, unit trace, positive
// semidefinite (all within documented tolerances), with the A/B dimension
// split carried as metadata.
class DensityMatrix {
public:
    static constexpr double kHermTol = 1e-10;
    static constexpr double kTraceTol = 1e-10;
    static constexpr double kEigTol = 1e-10;

    DensityMatrix(std::size_t dim_a, std::size_t dim_b, ComplexMatrix m)
        : dim_a_(dim_a), dim_b_(dim_b), m_(std::move(m)) {
        validate();
    }

    std::size_t dim_a() const { return dim_a_; }
    std::size_t dim_b() const { return dim_b_; }
    std::size_t dim() const { return dim_a_ * dim_b_; }
    const ComplexMatrix& matrix() const { return m_; }

    const cplx& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

private:
    void validate() const {
        if (dim_a_ == 0 || dim_b_ == 0)
            throw std::invalid_argument("DensityMatrix: dimensions must be positive");
        const std::size_t d = dim_a_ * dim_b_;
        if (d > kMaxDim)
            throw std::invalid_argument("DensityMatrix: dimension exceeds cap");
        if (m_.rows() != d || m_.cols() != d)
            throw std::invalid_argument("DensityMatrix: matrix size does not match dim_a*dim_b");
        if (!m_.all_finite())
            throw std::invalid_argument("DensityMatrix: non-finite entries");
        if (m_.hermiticity_defect() > kHermTol)
            throw std::invalid_argument("DensityMatrix: not Hermitian within 1e-10");
        if (std::abs(m_.trace() - cplx(1.0, 0.0)) > kTraceTol)
            throw std::invalid_argument("DensityMatrix: trace is not 1 within 1e-10");
        EigResult eig = hermitian_eig(m_);
        if (eig.eigenvalues.front() < -kEigTol) {
            std::ostringstream os;
            os << "DensityMatrix: negative eigenvalue " << eig.eigenvalues.front();
            throw std::invalid_argument(os.str());
        }
    }

    std::size_t dim_a_, dim_b_;
    ComplexMatrix m_;
};

// Normalized pure bipartite state vector.
class PureState {
public:
    static constexpr double kNormTol = 1e-10;

    PureState(std::size_t dim_a, std::size_t dim_b, std::vector<cplx> amplitudes)
        : dim_a_(dim_a), dim_b_(dim_b), amps_(std::move(amplitudes)) {
        if (dim_a_ == 0 || dim_b_ == 0)
            throw std::invalid_argument("PureState: dimensions must be positive");
        if (amps_.size() != dim_a_ * dim_b_)
            throw std::invalid_argument("PureState: amplitude count does not match dimensions");
        double n2 = 0.0;
        for (const cplx& z : amps_) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw std::invalid_argument("PureState: non-finite amplitude");
            n2 += std::norm(z);
        }
        if (std::abs(std::sqrt(n2) - 1.0) > kNormTol)
            throw std::invalid_argument("PureState: not normalized within 1e-10");
    }

    std::size_t dim_a() const { return dim_a_; }
    std::size_t dim_b() const { return dim_b_; }
    std::size_t dim() const { return dim_a_ * dim_b_; }
    const std::vector<cplx>& amplitudes() const { return amps_; }

    DensityMatrix to_density() const {
        const std::size_t d = dim();
        ComplexMatrix m(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                m(i, j) = amps_[i] * std::conj(amps_[j]);
        return DensityMatrix(dim_a_, dim_b_, std::move(m));
    }

private:
    std::size_t dim_a_, dim_b_;
    std::vector<cplx> amps_;
};

// Hermitian operator on a single subsystem.
class HermitianObservable {
public:
    static constexpr double kHermTol = 1e-10;

    HermitianObservable(std::size_t dim, ComplexMatrix m) : dim_(dim), m_(std::move(m)) {
        if (dim_ == 0) throw std::invalid_argument("HermitianObservable: dim must be positive");
        if (m_.rows() != dim_ || m_.cols() != dim_)
            throw std::invalid_argument("HermitianObservable: matrix size mismatch");
        if (!m_.all_finite())
            throw std::invalid_argument("HermitianObservable: non-finite entries");
        if (m_.hermiticity_defect() > kHermTol)
            throw std::invalid_argument("HermitianObservable: not Hermitian within 1e-10");
    }

    std::size_t dim() const { return dim_; }
    const ComplexMatrix& matrix() const { return m_; }

private:
    std::size_t dim_;
    ComplexMatrix m_;
};

// Reduced state after discarding one subsystem. `traced_out` names the
// subsystem that is removed.
inline DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem traced_out) {
    const std::size_t da = rho.dim_a();
    const std::size_t db = rho.dim_b();
    if (traced_out == Subsystem::B) {
        ComplexMatrix out(da, da);
        for (std::size_t i = 0; i < da; ++i)
            for (std::size_t j = 0; j < da; ++j) {
                cplx s = 0.0;
                for (std::size_t k = 0; k < db; ++k) s += rho(i * db + k, j * db + k);
                out(i, j) = s;
            }
        return DensityMatrix(da, 1, std::move(out));
    }
    ComplexMatrix out(db, db);
    for (std::size_t i = 0; i < db; ++i)
        for (std::size_t j = 0; j < db; ++j) {
            cplx s = 0.0;
            for (std::size_t k = 0; k < da; ++k) s += rho(k * db + i, k * db + j);
            out(i, j) = s;
        }
    return DensityMatrix(db, 1, std::move(out));
}

namespace detail {

inline ComplexMatrix pauli_matrix(int k) {
    ComplexMatrix m(2, 2);
    switch (k) {
        case 0:  // x
            m(0, 1) = 1.0;
            m(1, 0) = 1.0;
            break;
        case 1:  // y
            m(0, 1) = cplx(0.0, -1.0);
            m(1, 0) = cplx(0.0, 1.0);
            break;
        default:  // z
            m(0, 0) = 1.0;
            m(1, 1) = -1.0;
            break;
    }
    return m;
}

}  // namespace detail

// Local Bloch vector of qubit A: r_k = Tr(rho (sigma_k tensor I_B)).
inline std::array<double, 3> bloch_vector(const DensityMatrix& rho) {
    if (rho.dim_a() != 2)
        throw std::invalid_argument("bloch_vector: subsystem A must be a qubit");
    const std::size_t db = rho.dim_b();
    std::array<double, 3> r{0.0, 0.0, 0.0};
    // Tr(rho (sigma tensor I)) contracted by blocks: sigma_ab picks block (b,a).
    for (int k = 0; k < 3; ++k) {
        const ComplexMatrix sig = detail::pauli_matrix(k);
        cplx s = 0.0;
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t b = 0; b < 2; ++b) {
                const cplx sab = sig(a, b);
                if (sab == cplx(0.0, 0.0)) continue;
                for (std::size_t i = 0; i < db; ++i) s += sab * rho(b * db + i, a * db + i);
            }
        r[k] = s.real();
    }
    const double norm = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
    if (norm > 1.0 + 1e-10)
        throw std::runtime_error("bloch_vector: norm exceeds 1 beyond tolerance");
    return r;
}

inline std::array<double, 3> bloch_vector(const PureState& psi) {
    return bloch_vector(psi.to_density());
}

// Uhlmann fidelity F = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, clamped to [0,1].
inline double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim())
        throw std::invalid_argument("uhlmann_fidelity: dimension mismatch");
    const ComplexMatrix s = psd_sqrt(rho.matrix());
    const ComplexMatrix inner = (s * sigma.matrix() * s).symmetrized();
    EigResult eig = hermitian_eig(inner);
    double tr = 0.0;
    for (double lam : eig.eigenvalues) tr += std::sqrt(std::max(0.0, lam));
    const double f = tr * tr;
    return std::clamp(f, 0.0, 1.0);
}

}  // namespace qmetro
