#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "complex_matrix.hpp"
#include "pauli.hpp"
#include "quantum.hpp"

namespace qmetro {

enum class ChannelFamily {
    CompletelyDecohering,
    RandomUnitary,
    IsotropicUnitary,
    IsotropicAntiunitary,
    Custom,
};

inline const char* channel_family_name(ChannelFamily f) {
    switch (f) {
        case ChannelFamily::CompletelyDecohering: return "completely_decohering";
        case ChannelFamily::RandomUnitary: return "random_unitary";
        case ChannelFamily::IsotropicUnitary: return "isotropic_unitary";
        case ChannelFamily::IsotropicAntiunitary: return "isotropic_antiunitary";
        default: return "custom";
    }
}

// CPTP map in Kraus form; construction enforces the completeness relation
// sum K^dagger K = I within 1e-10.
class KrausChannel {
public:
    static constexpr double kCompletenessTol = 1e-10;

    KrausChannel(std::size_t dim, std::vector<ComplexMatrix> kraus, ChannelFamily tag)
        : dim_(dim), kraus_(std::move(kraus)), tag_(tag) {
        if (dim_ == 0) throw std::invalid_argument("KrausChannel: dim must be positive");
        if (kraus_.empty()) throw std::invalid_argument("KrausChannel: empty Kraus list");
        for (const ComplexMatrix& k : kraus_)
            if (k.rows() != dim_ || k.cols() != dim_)
                throw std::invalid_argument("KrausChannel: operator size mismatch");
        const double defect = completeness_defect();
        if (defect > kCompletenessTol) {
            std::ostringstream os;
            os << "KrausChannel: completeness defect " << defect << " exceeds 1e-10";
            throw std::invalid_argument(os.str());
        }
    }

    std::size_t dim() const { return dim_; }
    const std::vector<ComplexMatrix>& kraus() const { return kraus_; }
    ChannelFamily family_tag() const { return tag_; }

    double completeness_defect() const {
        ComplexMatrix acc(dim_, dim_);
        for (const ComplexMatrix& k : kraus_) acc += k.adjoint() * k;
        acc -= ComplexMatrix::identity(dim_);
        return acc.max_abs();
    }

    // Action on a single-system state (a dim x dim matrix).
    ComplexMatrix apply(const ComplexMatrix& rho) const {
        ComplexMatrix out(dim_, dim_);
        for (const ComplexMatrix& k : kraus_) out += k * rho * k.adjoint();
        return out;
    }

private:
    std::size_t dim_;
    std::vector<ComplexMatrix> kraus_;
    ChannelFamily tag_;
};

// Isotropic channel parameters: Lambda(rho) = t Phi(rho) + (1-t) I/d with
// Phi either unitary conjugation (anti = false) or transpose followed by
// unitary conjugation (anti = true). The admissible t interval is exactly
// the complete-positivity region.
struct IsotropicParams {
    std::size_t d;
    double t;
    ComplexMatrix u;  // the Phi unitary
    bool anti = false;

    static std::pair<double, double> admissible_range(std::size_t d, bool anti) {
        const double dd = double(d);
        if (anti) return {-1.0 / (dd - 1.0), 1.0 / (dd + 1.0)};
        return {-1.0 / (dd * dd - 1.0), 1.0};
    }
};

// Structured rejection for out-of-range isotropic t: carries the requested
// value and the admissible interval so callers can print the bound verbatim.
class IsotropicRangeError : public std::domain_error {
public:
    IsotropicRangeError(double t, double lo, double hi, bool anti)
        : std::domain_error(build_message(t, lo, hi, anti)),
          t_(t), lo_(lo), hi_(hi) {}

    double requested_t() const { return t_; }
    double lower_bound() const { return lo_; }
    double upper_bound() const { return hi_; }

private:
    static std::string build_message(double t, double lo, double hi, bool anti) {
        std::ostringstream os;
        os << "isotropic " << (anti ? "antiunitary" : "unitary") << " map: t = " << t
           << " outside admissible range ";
        if (t < lo)
            os << "(violated bound: t >= " << lo << ")";
        else
            os << "(violated bound: t <= " << hi << ")";
        os << "; admissible interval [" << lo << ", " << hi << "]";
        return os.str();
    }

    double t_, lo_, hi_;
};

enum class DecoheringWeights { Projective };

// Completely decohering channel: projective measurement in the given
// orthonormal basis, K_i = |b_i><b_i|. Output is diagonal in that basis for
// every input.
inline KrausChannel build_completely_decohering(const ComplexMatrix& basis_columns,
                                                DecoheringWeights /*weights*/ =
                                                    DecoheringWeights::Projective) {
    const std::size_t d = basis_columns.rows();
    if (basis_columns.cols() != d)
        throw std::invalid_argument("build_completely_decohering: basis must be square");
    ComplexMatrix gram = basis_columns.adjoint() * basis_columns;
    gram -= ComplexMatrix::identity(d);
    if (gram.max_abs() > 1e-10)
        throw std::invalid_argument(
            "build_completely_decohering: basis is not orthonormal within 1e-10");

    std::vector<ComplexMatrix> kraus;
    kraus.reserve(d);
    for (std::size_t k = 0; k < d; ++k) {
        ComplexMatrix p(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                p(i, j) = basis_columns(i, k) * std::conj(basis_columns(j, k));
        kraus.push_back(std::move(p));
    }
    return KrausChannel(d, std::move(kraus), ChannelFamily::CompletelyDecohering);
}

// Random-unitary (unital) channel: K_i = sqrt(p_i) U_i.
inline KrausChannel build_random_unitary(const std::vector<double>& probs,
                                         const std::vector<ComplexMatrix>& unitaries) {
    if (probs.size() != unitaries.size() || probs.empty())
        throw std::invalid_argument("build_random_unitary: probs/unitaries size mismatch");
    double total = 0.0;
    for (double p : probs) {
        if (p < -1e-12) throw std::invalid_argument("build_random_unitary: negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-10)
        throw std::invalid_argument("build_random_unitary: probabilities must sum to 1");
    const std::size_t d = unitaries.front().rows();
    std::vector<ComplexMatrix> kraus;
    kraus.reserve(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const ComplexMatrix& u = unitaries[i];
        if (u.rows() != d || u.cols() != d)
            throw std::invalid_argument("build_random_unitary: unitary size mismatch");
        ComplexMatrix defect = u.adjoint() * u;
        defect -= ComplexMatrix::identity(d);
        if (defect.max_abs() > 1e-10)
            throw std::invalid_argument("build_random_unitary: matrix is not unitary within 1e-10");
        kraus.push_back(std::sqrt(std::max(0.0, probs[i])) * u);
    }
    return KrausChannel(d, std::move(kraus), ChannelFamily::RandomUnitary);
}

// Isotropic channel in Kraus form with the generalized-Pauli decomposition.
//
// Unitary case:      K_0 = sqrt((1+(d^2-1)t)/d^2) U,
//                    K_i = sqrt((1-t)/(2d)) U g_i           (all d^2-1 g_i)
// Antiunitary case:  K_0 = sqrt((1+(d-1)t)/d^2) U,
//                    type-1 g: sqrt((1+(d-1)t)/(2d)) U g    (symmetric+diagonal)
//                    type-2 g: sqrt((1-(d+1)t)/(2d)) U g    (antisymmetric)
// Both lists have d^2 operators (zero-coefficient members are kept so the
// counts match the construction).
inline KrausChannel build_isotropic(const IsotropicParams& params) {
    const std::size_t d = params.d;
    if (d < 2) throw std::invalid_argument("build_isotropic: d must be >= 2");
    const auto [lo, hi] = IsotropicParams::admissible_range(d, params.anti);
    if (params.t < lo - 1e-12 || params.t > hi + 1e-12)
        throw IsotropicRangeError(params.t, lo, hi, params.anti);

    ComplexMatrix u = params.u;
    if (u.rows() == 0) u = ComplexMatrix::identity(d);
    if (u.rows() != d || u.cols() != d)
        throw std::invalid_argument("build_isotropic: unitary size mismatch");
    {
        ComplexMatrix defect = u.adjoint() * u;
        defect -= ComplexMatrix::identity(d);
        if (defect.max_abs() > 1e-10)
            throw std::invalid_argument("build_isotropic: matrix is not unitary within 1e-10");
    }

    const std::vector<ComplexMatrix> basis = gell_mann_basis(d);
    const GellMannLayout layout = gell_mann_layout(d);
    const double t = params.t;
    std::vector<ComplexMatrix> kraus;
    kraus.reserve(d * d);

    auto scaled = [&](double coef2, const ComplexMatrix& g) {
        const double c = std::sqrt(std::max(0.0, coef2));
        return c * (u * g);
    };

    if (!params.anti) {
        const double c0 = (1.0 + (double(d) * d - 1.0) * t) / double(d * d);
        kraus.push_back(std::sqrt(std::max(0.0, c0)) * u);
        const double ci = (1.0 - t) / (2.0 * double(d));
        for (const ComplexMatrix& g : basis) kraus.push_back(scaled(ci, g));
        return KrausChannel(d, std::move(kraus), ChannelFamily::IsotropicUnitary);
    }

    const double c0 = (1.0 + (double(d) - 1.0) * t) / double(d * d);
    kraus.push_back(std::sqrt(std::max(0.0, c0)) * u);
    const double c1 = (1.0 + (double(d) - 1.0) * t) / (2.0 * double(d));
    const double c2 = (1.0 - (double(d) + 1.0) * t) / (2.0 * double(d));
    // type 1: symmetric pairs ... then, after the antisymmetric block,
    // the diagonal matrices; type 2: the antisymmetric pairs.
    for (std::size_t i = 0; i < layout.n_symmetric; ++i) kraus.push_back(scaled(c1, basis[i]));
    for (std::size_t i = 0; i < layout.n_antisymmetric; ++i)
        kraus.push_back(scaled(c2, basis[layout.n_symmetric + i]));
    for (std::size_t i = 0; i < layout.n_diagonal; ++i)
        kraus.push_back(
            scaled(c1, basis[layout.n_symmetric + layout.n_antisymmetric + i]));
    return KrausChannel(d, std::move(kraus), ChannelFamily::IsotropicAntiunitary);
}

// Direct-form isotropic action, bypassing Kraus form entirely. Valid for any
// t (even complete-positivity-violating values); used to audit the Choi
// criterion from outside the admissible interval.
inline ComplexMatrix isotropic_apply_direct(const ComplexMatrix& rho, std::size_t d,
                                            double t, const ComplexMatrix& u, bool anti) {
    const ComplexMatrix base = anti ? rho.transpose() : rho;
    ComplexMatrix out = u * base * u.adjoint();
    out *= t;
    const cplx fill((1.0 - t) / double(d), 0.0);
    for (std::size_t i = 0; i < d; ++i) out(i, i) += fill;
    return out;
}

// Local action Lambda_A tensor I_B.
inline DensityMatrix apply_local_A(const DensityMatrix& rho, const KrausChannel& ch) {
    if (ch.dim() != rho.dim_a())
        throw std::invalid_argument("apply_local_A: channel dim != dim_a");
    const std::size_t da = rho.dim_a();
    const std::size_t db = rho.dim_b();
    const ComplexMatrix eye_b = ComplexMatrix::identity(db);
    ComplexMatrix out(da * db, da * db);
    for (const ComplexMatrix& k : ch.kraus()) {
        const ComplexMatrix kb = tensor_product(k, eye_b);
        out += kb * rho.matrix() * kb.adjoint();
    }
    return DensityMatrix(da, db, out.symmetrized());
}

// Local action I_A tensor Lambda_B.
inline DensityMatrix apply_local_B(const DensityMatrix& rho, const KrausChannel& ch) {
    if (ch.dim() != rho.dim_b())
        throw std::invalid_argument("apply_local_B: channel dim != dim_b");
    const std::size_t da = rho.dim_a();
    const std::size_t db = rho.dim_b();
    const ComplexMatrix eye_a = ComplexMatrix::identity(da);
    ComplexMatrix out(da * db, da * db);
    for (const ComplexMatrix& k : ch.kraus()) {
        const ComplexMatrix ak = tensor_product(eye_a, k);
        out += ak * rho.matrix() * ak.adjoint();
    }
    return DensityMatrix(da, db, out.symmetrized());
}

namespace detail {

inline ComplexMatrix max_entangled_projector(std::size_t d) {
    // |Psi+> = (1/sqrt d) sum_i |ii>
    ComplexMatrix p(d * d, d * d);
    const double inv = 1.0 / double(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) p(i * d + i, j * d + j) = inv;
    return p;
}

}  // namespace detail

// Choi state tau = (Lambda tensor I)(|Psi+><Psi+|).
inline DensityMatrix choi_matrix(const KrausChannel& ch) {
    const std::size_t d = ch.dim();
    if (d * d > kMaxDim)
        throw std::invalid_argument("choi_matrix: d^2 exceeds dimension cap");
    const ComplexMatrix p = detail::max_entangled_projector(d);
    const ComplexMatrix eye = ComplexMatrix::identity(d);
    ComplexMatrix out(d * d, d * d);
    for (const ComplexMatrix& k : ch.kraus()) {
        const ComplexMatrix kb = tensor_product(k, eye);
        out += kb * p * kb.adjoint();
    }
    return DensityMatrix(d, d, out.symmetrized());
}

// Choi matrix of the direct-form isotropic map; unlike choi_matrix this can
// leave the PSD cone, so it returns the raw matrix rather than a validated
// state.
inline ComplexMatrix isotropic_choi_direct(std::size_t d, double t, const ComplexMatrix& u,
                                           bool anti) {
    const ComplexMatrix eye = ComplexMatrix::identity(d);
    ComplexMatrix out(d * d, d * d);
    // Apply Lambda tensor I to |Psi+><Psi+| block-wise: the (i,j) block of
    // the projector is |i><j|/d.
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            ComplexMatrix block(d, d);
            block(i, j) = cplx(1.0 / double(d), 0.0);
            const ComplexMatrix mapped = isotropic_apply_direct(block, d, t, u, anti);
            for (std::size_t r = 0; r < d; ++r)
                for (std::size_t c = 0; c < d; ++c)
                    out(r * d + i, c * d + j) = mapped(r, c);
        }
    return out.symmetrized();
}

struct GellMannVectorization {
    std::vector<std::size_t> type1;  // vec(g).vec(g) = +2 (symmetric + diagonal)
    std::vector<std::size_t> type2;  // vec(g).vec(g) = -2 (antisymmetric)
};

// Classifies the generalized Pauli basis by the sign of the plain
// (non-conjugated) dot product of each matrix's vectorization with itself.
inline GellMannVectorization classify_gell_mann_vectorization(std::size_t d) {
    const std::vector<ComplexMatrix> basis = gell_mann_basis(d);
    GellMannVectorization out;
    for (std::size_t idx = 0; idx < basis.size(); ++idx) {
        cplx dot = 0.0;
        for (const cplx& z : basis[idx].data()) dot += z * z;
        if (dot.real() > 0.0)
            out.type1.push_back(idx);
        else
            out.type2.push_back(idx);
    }
    return out;
}

}  // namespace qmetro
