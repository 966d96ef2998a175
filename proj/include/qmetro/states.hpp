#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "complex_matrix.hpp"
#include "entanglement.hpp"
#include "hermitian_eig.hpp"
#include "metrology.hpp"
#include "parallel.hpp"
#include "quantum.hpp"
#include "rng.hpp"

namespace qmetro {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Two-angle parameterization of the rank-2 X-form family; both angles live
// in [0, pi/2].
struct FamilyParams {
    double theta1;
    double theta2;

    FamilyParams(double t1, double t2) : theta1(t1), theta2(t2) {
        if (!(t1 >= -1e-12 && t1 <= kPi / 2 + 1e-12) ||
            !(t2 >= -1e-12 && t2 <= kPi / 2 + 1e-12))
            throw std::invalid_argument("FamilyParams: angles must lie in [0, pi/2]");
    }
};

// X-form state built from the family angles:
//   diagonal (c+, s+, s-, c-)/2, anti-diagonal couplings d+/2 (|00>,|11|)
//   and d-/2 (|01>,|10>), with
//   c_pm = cos^2(t2/2)(1 pm sin t1), s_pm = sin^2(t2/2)(1 pm sin t1),
//   d_pm = -(cos t1 / 2)(1 pm cos t2).
inline DensityMatrix family_state(const FamilyParams& p) {
    const double t1 = p.theta1;
    const double t2 = p.theta2;
    const double ch = std::cos(t2 / 2) * std::cos(t2 / 2);
    const double sh = std::sin(t2 / 2) * std::sin(t2 / 2);
    const double cp = ch * (1.0 + std::sin(t1));
    const double cm = ch * (1.0 - std::sin(t1));
    const double sp = sh * (1.0 + std::sin(t1));
    const double sm = sh * (1.0 - std::sin(t1));
    const double dp = -(std::cos(t1) / 2) * (1.0 + std::cos(t2));
    const double dm = -(std::cos(t1) / 2) * (1.0 - std::cos(t2));

    ComplexMatrix m(4, 4);
    m(0, 0) = cp / 2;
    m(1, 1) = sp / 2;
    m(2, 2) = sm / 2;
    m(3, 3) = cm / 2;
    m(0, 3) = m(3, 0) = dp / 2;
    m(1, 2) = m(2, 1) = dm / 2;
    return DensityMatrix(2, 2, m);
}

// Closed-form tangle of the family: cos^2(t1) cos^2(t2).
inline double family_tangle(const FamilyParams& p) {
    const double c1 = std::cos(p.theta1);
    const double c2 = std::cos(p.theta2);
    return c1 * c1 * c2 * c2;
}

// Closed-form IP of the family:
//   min{ cos^2 t1, [3 - cos 2t1 + 2 cos^2 t1 cos 2t2] / 4 }.
inline double family_ip(const FamilyParams& p) {
    const double c1 = std::cos(p.theta1);
    const double first = c1 * c1;
    const double second =
        (3.0 - std::cos(2 * p.theta1) + 2.0 * c1 * c1 * std::cos(2 * p.theta2)) / 4.0;
    return std::min(first, second);
}

// Explicit spectral decomposition of the family state: two nonzero
// eigenvalues cos^2(t2/2) and sin^2(t2/2) with eigenvectors
//   |u> = cos(chi)|00> - sin(chi)|11>,  |v> = cos(chi)|01> - sin(chi)|10>,
// where chi = pi/4 - t1/2.
struct FamilyEigen {
    std::array<double, 2> eigenvalues;        // {cos^2(t2/2), sin^2(t2/2)}
    std::array<std::vector<cplx>, 2> vectors; // each of length 4
};

inline FamilyEigen family_eigen(const FamilyParams& p) {
    const double chi = kPi / 4 - p.theta1 / 2;
    const double c = std::cos(chi);
    const double s = std::sin(chi);
    FamilyEigen out;
    const double ch = std::cos(p.theta2 / 2);
    const double sh = std::sin(p.theta2 / 2);
    out.eigenvalues = {ch * ch, sh * sh};
    out.vectors[0] = {cplx(c, 0), 0.0, 0.0, cplx(-s, 0)};
    out.vectors[1] = {0.0, cplx(c, 0), cplx(-s, 0), 0.0};
    return out;
}

enum class CurveKind { Lower, Upper };

// Extremal parameterizations at fixed tangle T:
//   lower: (0, arccos sqrt(T)), where ip = T;
//   upper: (arccos sqrt((1+T)/2), arccos(3 - 4/(1+T)) / 2), where ip = (1+T)/2.
inline FamilyParams extremal_curve(CurveKind kind, double target_tangle) {
    const double T = target_tangle;
    if (!(T >= 0.0 && T <= 1.0))
        throw std::invalid_argument("extremal_curve: target tangle must lie in [0,1]");
    if (kind == CurveKind::Lower) return FamilyParams(0.0, std::acos(std::sqrt(T)));
    const double t1 = std::acos(std::sqrt((1.0 + T) / 2.0));
    const double arg = 3.0 - 4.0 / (1.0 + T);
    const double t2 = std::acos(std::max(-1.0, std::min(1.0, arg))) / 2.0;
    return FamilyParams(t1, t2);
}

inline double extremal_curve_ip(CurveKind kind, double target_tangle) {
    if (!(target_tangle >= 0.0 && target_tangle <= 1.0))
        throw std::invalid_argument("extremal_curve_ip: target tangle must lie in [0,1]");
    return kind == CurveKind::Lower ? target_tangle : (1.0 + target_tangle) / 2.0;
}

// The two published angle lists: (a) seven points on the lower curve,
// (b) seven points tracking the upper curve.
struct AngleTable {
    std::vector<FamilyParams> list_a;
    std::vector<FamilyParams> list_b;
};

inline AngleTable table1_params() {
    AngleTable t;
    for (int k = 1; k <= 7; ++k) t.list_a.emplace_back(0.0, k * kPi / 14);
    t.list_b.emplace_back(0.0, 0.0);
    t.list_b.emplace_back(7 * kPi / 90, kPi / 10);
    t.list_b.emplace_back(kPi / 9, kPi / 10);
    t.list_b.emplace_back(13 * kPi / 90, 7 * kPi / 45);
    t.list_b.emplace_back(8 * kPi / 45, 19 * kPi / 90);
    t.list_b.emplace_back(19 * kPi / 90, 3 * kPi / 10);
    t.list_b.emplace_back(11 * kPi / 45, 7 * kPi / 18);
    return t;
}

// Hilbert-Schmidt random rank-k state: rho = GG^dagger / Tr(GG^dagger) with
// G a (dim_a*dim_b) x k complex Ginibre matrix. Deterministic per seed; the
// numerical rank is asserted to equal k.
inline DensityMatrix random_rank_k_hs(std::size_t dim_a, std::size_t dim_b, std::size_t k,
                                      std::uint64_t seed) {
    const std::size_t d = dim_a * dim_b;
    if (k < 1 || k > d)
        throw std::invalid_argument("random_rank_k_hs: k must satisfy 1 <= k <= dim_a*dim_b");
    Rng rng(seed);
    const ComplexMatrix g = ginibre(d, k, rng);
    ComplexMatrix m = g * g.adjoint();
    const double tr = m.trace().real();
    m *= cplx(1.0 / tr, 0.0);
    DensityMatrix rho(dim_a, dim_b, m.symmetrized());

    const EigResult eig = hermitian_eig(rho.matrix());
    std::size_t numerical_rank = 0;
    for (double w : eig.eigenvalues)
        if (w > 1e-10) ++numerical_rank;
    if (numerical_rank != k) {
        std::ostringstream os;
        os << "random_rank_k_hs: numerical rank " << numerical_rank << " != requested " << k;
        throw std::runtime_error(os.str());
    }
    return rho;
}

// Haar-random pure bipartite state.
inline PureState random_pure(std::size_t dim_a, std::size_t dim_b, Rng& rng) {
    const std::size_t d = dim_a * dim_b;
    std::vector<cplx> amp(d);
    double norm2 = 0.0;
    for (cplx& a : amp) {
        a = rng.next_complex_gaussian();
        norm2 += std::norm(a);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (cplx& a : amp) a *= inv;
    return PureState(dim_a, dim_b, std::move(amp));
}

enum class BellState { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

inline PureState bell(BellState which) {
    const double r = 1.0 / std::sqrt(2.0);
    switch (which) {
        case BellState::PhiPlus: return PureState(2, 2, {r, 0.0, 0.0, r});
        case BellState::PhiMinus: return PureState(2, 2, {r, 0.0, 0.0, -r});
        case BellState::PsiPlus: return PureState(2, 2, {0.0, r, r, 0.0});
        default: return PureState(2, 2, {0.0, r, -r, 0.0});
    }
}

// Classical-correlated state sum_i p_i |b_i><b_i| tensor rho_B_i with
// {|b_i>} an orthonormal basis of A (given as matrix columns).
inline DensityMatrix classical_state(const std::vector<double>& probs,
                                     const ComplexMatrix& basis_a,
                                     const std::vector<ComplexMatrix>& states_b) {
    const std::size_t da = basis_a.rows();
    if (basis_a.cols() != da)
        throw std::invalid_argument("classical_state: basis must be square");
    if (probs.size() != states_b.size() || probs.empty() || probs.size() > da)
        throw std::invalid_argument("classical_state: probs/states size mismatch");
    ComplexMatrix gram = basis_a.adjoint() * basis_a;
    gram -= ComplexMatrix::identity(da);
    if (gram.max_abs() > 1e-10)
        throw std::invalid_argument("classical_state: basis_A is not orthonormal within 1e-10");
    double total = 0.0;
    for (double p : probs) {
        if (p < -1e-12) throw std::invalid_argument("classical_state: negative weight");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-10)
        throw std::invalid_argument("classical_state: weights must sum to 1");

    const std::size_t db = states_b.front().rows();
    ComplexMatrix out(da * db, da * db);
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (states_b[i].rows() != db || states_b[i].cols() != db)
            throw std::invalid_argument("classical_state: B-state size mismatch");
        ComplexMatrix proj(da, da);
        for (std::size_t r = 0; r < da; ++r)
            for (std::size_t c = 0; c < da; ++c)
                proj(r, c) = basis_a(r, i) * std::conj(basis_a(c, i));
        out += std::max(0.0, probs[i]) * tensor_product(proj, states_b[i]);
    }
    return DensityMatrix(da, db, out.symmetrized());
}

struct ProductTerm {
    double weight;
    ComplexMatrix rho_a;
    ComplexMatrix rho_b;
};

// Separable mixture sum_i p_i rho_A_i tensor rho_B_i.
inline DensityMatrix separable_mixture(const std::vector<ProductTerm>& ensemble) {
    if (ensemble.empty()) throw std::invalid_argument("separable_mixture: empty ensemble");
    const std::size_t da = ensemble.front().rho_a.rows();
    const std::size_t db = ensemble.front().rho_b.rows();
    double total = 0.0;
    ComplexMatrix out(da * db, da * db);
    for (const ProductTerm& term : ensemble) {
        if (term.weight < -1e-12)
            throw std::invalid_argument("separable_mixture: negative weight");
        if (term.rho_a.rows() != da || term.rho_a.cols() != da || term.rho_b.rows() != db ||
            term.rho_b.cols() != db)
            throw std::invalid_argument("separable_mixture: factor size mismatch");
        total += term.weight;
        out += std::max(0.0, term.weight) * tensor_product(term.rho_a, term.rho_b);
    }
    if (std::abs(total - 1.0) > 1e-10)
        throw std::invalid_argument("separable_mixture: weights must sum to 1");
    return DensityMatrix(da, db, out.symmetrized());
}

namespace detail {

inline ComplexMatrix random_pure_density(std::size_t d, Rng& rng) {
    std::vector<cplx> amp(d);
    double norm2 = 0.0;
    for (cplx& a : amp) {
        a = rng.next_complex_gaussian();
        norm2 += std::norm(a);
    }
    ComplexMatrix rho(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) rho(i, j) = amp[i] * std::conj(amp[j]) / norm2;
    return rho;
}

}  // namespace detail

// Random classical-correlated state: Haar basis on A, flat-Dirichlet weights,
// random pure states on B.
inline DensityMatrix random_classical_state(std::size_t dim_a, std::size_t dim_b,
                                            std::size_t n_terms, Rng& rng) {
    if (n_terms < 1 || n_terms > dim_a)
        throw std::invalid_argument("random_classical_state: need 1 <= n_terms <= dim_a");
    const ComplexMatrix basis = haar_unitary(dim_a, rng);
    const std::vector<double> probs = dirichlet_flat(n_terms, rng);
    std::vector<ComplexMatrix> states_b;
    states_b.reserve(n_terms);
    for (std::size_t i = 0; i < n_terms; ++i)
        states_b.push_back(detail::random_pure_density(dim_b, rng));
    return classical_state(probs, basis, states_b);
}

// Random separable (generically non-classical) state: mixture of pure
// product terms with flat-Dirichlet weights.
inline DensityMatrix random_separable_state(std::size_t dim_a, std::size_t dim_b,
                                            std::size_t n_terms, Rng& rng) {
    if (n_terms < 1) throw std::invalid_argument("random_separable_state: need n_terms >= 1");
    const std::vector<double> probs = dirichlet_flat(n_terms, rng);
    std::vector<ProductTerm> ensemble;
    ensemble.reserve(n_terms);
    for (std::size_t i = 0; i < n_terms; ++i)
        ensemble.push_back(ProductTerm{probs[i], detail::random_pure_density(dim_a, rng),
                                       detail::random_pure_density(dim_b, rng)});
    return separable_mixture(ensemble);
}

// One sample of the tangle/IP region scan.
struct ScanRecord {
    double tangle;
    double ip;
    std::size_t seed_index;
};

inline constexpr double kScanSlack = 1e-9;

// tangle <= ip is a theorem for the sampled class; checked with slack.
inline bool scan_lower_ok(const ScanRecord& r) { return r.tangle <= r.ip + kScanSlack; }

// ip <= (1+tangle)/2 is conjectured; reported, never hard-asserted.
inline bool scan_upper_ok(const ScanRecord& r) {
    return r.ip <= (1.0 + r.tangle) / 2.0 + kScanSlack;
}

// Region scan over Hilbert-Schmidt random rank-2 two-qubit states. Sample i
// uses the (master_seed, i) substream, so the output is independent of the
// thread count.
inline std::vector<ScanRecord> run_region_scan(std::size_t n_samples,
                                               std::uint64_t master_seed) {
    std::vector<ScanRecord> records(n_samples);
    const Spectrum s;
    parallel_for(n_samples, [&](std::size_t i) {
        Rng rng = Rng::substream(master_seed, i);
        const ComplexMatrix g = ginibre(4, 2, rng);
        ComplexMatrix m = g * g.adjoint();
        m *= cplx(1.0 / m.trace().real(), 0.0);
        const DensityMatrix rho(2, 2, m.symmetrized());
        records[i] = ScanRecord{tangle_wootters(rho).value, ip_closed(rho, s).value, i};
    });
    return records;
}

}  // namespace qmetro
