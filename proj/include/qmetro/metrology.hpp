#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "complex_matrix.hpp"
#include "hermitian_eig.hpp"
#include "optimize.hpp"
#include "parallel.hpp"
#include "pauli.hpp"
#include "quantum.hpp"
#include "rng.hpp"

namespace qmetro {

// Two-level Hamiltonian spectrum {beta - alpha, beta + alpha}, alpha > 0.
struct Spectrum {
    double alpha;
    double beta;

    explicit Spectrum(double a = 1.0, double b = 0.0) : alpha(a), beta(b) {
        if (!(alpha > 0.0)) throw std::invalid_argument("Spectrum: alpha must be > 0");
        if (!std::isfinite(alpha) || !std::isfinite(beta))
            throw std::invalid_argument("Spectrum: non-finite parameter");
    }
};

// Eigenvalue cleanup thresholds for the QFI spectral sum.
inline constexpr double kQfiPairSkipTol = 1e-12;  // skip q_m + q_n below this
inline constexpr double kQfiZeroTol = 1e-14;      // |q| below this is exactly 0

// Local phase-imprinting Hamiltonian with fixed spectrum. For qubit A it is
// parameterized by a unit Bloch direction (H = beta I + alpha n.sigma); for
// general dimension by a unitary eigenbasis V (H = V diag(spectrum) V^dagger,
// with the lower level on the first ceil(d/2) slots).
class PhaseHamiltonian {
public:
    static PhaseHamiltonian from_direction(const Spectrum& s, std::array<double, 3> n) {
        const double norm = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
        if (std::abs(norm - 1.0) > 1e-12)
            throw std::invalid_argument("PhaseHamiltonian: direction must be unit length");
        PhaseHamiltonian h(s);
        h.direction_ = n;
        return h;
    }

    static PhaseHamiltonian from_eigenbasis(const Spectrum& s, ComplexMatrix v) {
        if (v.rows() != v.cols())
            throw std::invalid_argument("PhaseHamiltonian: eigenbasis must be square");
        const ComplexMatrix vhv = v.adjoint() * v;
        ComplexMatrix defect = vhv;
        defect -= ComplexMatrix::identity(v.rows());
        if (defect.max_abs() > 1e-10)
            throw std::invalid_argument("PhaseHamiltonian: eigenbasis is not unitary within 1e-10");
        PhaseHamiltonian h(s);
        h.eigenbasis_ = std::move(v);
        return h;
    }

    const Spectrum& spectrum() const { return spec_; }
    const std::optional<std::array<double, 3>>& direction() const { return direction_; }
    const std::optional<ComplexMatrix>& eigenbasis() const { return eigenbasis_; }

    // Dense dim_a x dim_a matrix of the Hamiltonian.
    ComplexMatrix to_matrix(std::size_t dim_a) const {
        if (direction_) {
            if (dim_a != 2)
                throw std::invalid_argument("PhaseHamiltonian: direction form needs dim_a = 2");
            const auto& n = *direction_;
            ComplexMatrix h(2, 2);
            h(0, 0) = cplx(spec_.beta + spec_.alpha * n[2], 0.0);
            h(1, 1) = cplx(spec_.beta - spec_.alpha * n[2], 0.0);
            h(0, 1) = cplx(spec_.alpha * n[0], -spec_.alpha * n[1]);
            h(1, 0) = cplx(spec_.alpha * n[0], spec_.alpha * n[1]);
            return h;
        }
        const ComplexMatrix& v = *eigenbasis_;
        if (v.rows() != dim_a)
            throw std::invalid_argument("PhaseHamiltonian: eigenbasis dimension mismatch");
        return detail_build(v, spec_, dim_a);
    }

    static std::vector<double> level_assignment(const Spectrum& s, std::size_t d) {
        // Lower level beta-alpha on the first ceil(d/2) slots.
        std::vector<double> levels(d, s.beta + s.alpha);
        const std::size_t n_low = (d + 1) / 2;
        for (std::size_t i = 0; i < n_low; ++i) levels[i] = s.beta - s.alpha;
        return levels;
    }

private:
    explicit PhaseHamiltonian(const Spectrum& s) : spec_(s) {}

    static ComplexMatrix detail_build(const ComplexMatrix& v, const Spectrum& s,
                                      std::size_t d) {
        const std::vector<double> levels = level_assignment(s, d);
        ComplexMatrix h(d, d);
        for (std::size_t k = 0; k < d; ++k)
            for (std::size_t i = 0; i < d; ++i) {
                const cplx vik = v(i, k) * levels[k];
                if (vik == cplx(0.0, 0.0)) continue;
                for (std::size_t j = 0; j < d; ++j) h(i, j) += vik * std::conj(v(j, k));
            }
        return h.symmetrized();
    }

    Spectrum spec_;
    std::optional<std::array<double, 3>> direction_;
    std::optional<ComplexMatrix> eigenbasis_;
};

// Variance of H tensor I in a pure state.
inline double variance(const PureState& psi, const PhaseHamiltonian& h) {
    const std::size_t da = psi.dim_a();
    const std::size_t db = psi.dim_b();
    const ComplexMatrix hm = h.to_matrix(da);
    const std::vector<cplx>& a = psi.amplitudes();
    // y = (H tensor I) |psi>
    std::vector<cplx> y(da * db, cplx(0.0, 0.0));
    for (std::size_t r = 0; r < da; ++r)
        for (std::size_t c = 0; c < da; ++c) {
            const cplx hrc = hm(r, c);
            if (hrc == cplx(0.0, 0.0)) continue;
            for (std::size_t i = 0; i < db; ++i) y[r * db + i] += hrc * a[c * db + i];
        }
    cplx mean = 0.0;
    double second = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        mean += std::conj(a[i]) * y[i];
        second += std::norm(y[i]);  // <psi|H^2|psi> = ||H|psi>||^2
    }
    const double v = second - std::norm(mean);
    if (v < -1e-12)
        throw std::runtime_error("variance: negative beyond tolerance");
    return std::max(0.0, v);
}

namespace detail {

// Spectral data of a state, with the QFI eigenvalue cleanup applied.
struct SpectralState {
    std::vector<double> q;  // ascending, |q| < kQfiZeroTol snapped to 0
    ComplexMatrix v;        // eigenvector columns
    std::size_t dim_a, dim_b;
};

inline SpectralState spectral_state(const DensityMatrix& rho) {
    EigResult eig = hermitian_eig(rho.matrix());
    for (double& q : eig.eigenvalues)
        if (std::abs(q) < kQfiZeroTol) q = 0.0;
    return {std::move(eig.eigenvalues), std::move(eig.eigenvectors), rho.dim_a(),
            rho.dim_b()};
}

// Columns of (H tensor I) V.
inline ComplexMatrix apply_h_tensor_i(const ComplexMatrix& h, const ComplexMatrix& v,
                                      std::size_t da, std::size_t db) {
    const std::size_t d = da * db;
    ComplexMatrix out(d, d);
    for (std::size_t r = 0; r < da; ++r)
        for (std::size_t c = 0; c < da; ++c) {
            const cplx hrc = h(r, c);
            if (hrc == cplx(0.0, 0.0)) continue;
            for (std::size_t i = 0; i < db; ++i)
                for (std::size_t n = 0; n < d; ++n)
                    out(r * db + i, n) += hrc * v(c * db + i, n);
        }
    return out;
}

inline double qfi_from_spectral(const SpectralState& ss, const ComplexMatrix& h) {
    const std::size_t d = ss.q.size();
    const ComplexMatrix hv = apply_h_tensor_i(h, ss.v, ss.dim_a, ss.dim_b);
    double f = 0.0;
    for (std::size_t m = 0; m < d; ++m)
        for (std::size_t n = 0; n < d; ++n) {
            const double s = ss.q[m] + ss.q[n];
            if (s < kQfiPairSkipTol) continue;
            const double diff = ss.q[m] - ss.q[n];
            if (diff == 0.0) continue;
            cplx amp = 0.0;
            for (std::size_t i = 0; i < d; ++i) amp += std::conj(ss.v(i, m)) * hv(i, n);
            f += 2.0 * diff * diff / s * std::norm(amp);
        }
    return std::max(0.0, f);
}

}  // namespace detail

// Quantum Fisher information of rho for the phase generated by H tensor I:
// F = 2 sum_{m,n: q_m+q_n != 0} (q_m - q_n)^2/(q_m + q_n) |<m|H tensor I|n>|^2.
inline double qfi(const DensityMatrix& rho, const PhaseHamiltonian& h) {
    const detail::SpectralState ss = detail::spectral_state(rho);
    return detail::qfi_from_spectral(ss, h.to_matrix(rho.dim_a()));
}

using Matrix3 = std::array<std::array<double, 3>, 3>;

// The 3x3 matrix whose minimum eigenvalue gives the qubit-A interferometric
// power: M_ab = 1/2 sum_{q_m+q_n != 0} (q_m-q_n)^2/(q_m+q_n)
//              <m|sigma_a tensor I|n><n|sigma_b tensor I|m>.
inline Matrix3 m_matrix(const DensityMatrix& rho) {
    if (rho.dim_a() != 2)
        throw std::invalid_argument("m_matrix: subsystem A must be a qubit");
    const detail::SpectralState ss = detail::spectral_state(rho);
    const std::size_t d = ss.q.size();
    const std::size_t db = rho.dim_b();

    std::array<ComplexMatrix, 3> sv;
    for (int a = 0; a < 3; ++a)
        sv[a] = detail::apply_h_tensor_i(detail::pauli_matrix(a), ss.v, 2, db);

    Matrix3 m{};
    for (std::size_t p = 0; p < d; ++p)
        for (std::size_t n = 0; n < d; ++n) {
            const double s = ss.q[p] + ss.q[n];
            if (s < kQfiPairSkipTol) continue;
            const double diff = ss.q[p] - ss.q[n];
            if (diff == 0.0) continue;
            const double w = 0.5 * diff * diff / s;
            cplx amp[3];
            for (int a = 0; a < 3; ++a) {
                cplx t = 0.0;
                for (std::size_t i = 0; i < d; ++i)
                    t += std::conj(ss.v(i, p)) * sv[a](i, n);
                amp[a] = t;
            }
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    m[a][b] += w * (amp[a] * std::conj(amp[b])).real();
        }
    // Symmetrize away rounding skew.
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
            const double avg = 0.5 * (m[a][b] + m[b][a]);
            m[a][b] = avg;
            m[b][a] = avg;
        }
    return m;
}

enum class IpMethod { ClosedForm, Oracle };

struct IpResult {
    double value = 0.0;
    std::optional<std::array<double, 3>> worst_direction;  // qubit A
    std::optional<ComplexMatrix> worst_eigenbasis;         // general d_A
    IpMethod method = IpMethod::ClosedForm;
};

namespace detail {

inline std::pair<double, std::array<double, 3>> sym3_min_eig(const Matrix3& m) {
    ComplexMatrix cm(3, 3);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) cm(a, b) = cplx(m[a][b], 0.0);
    EigResult eig = hermitian_eig(cm);
    std::array<double, 3> dir{};
    double norm = 0.0;
    for (int i = 0; i < 3; ++i) {
        dir[i] = eig.eigenvectors(i, 0).real();
        norm += dir[i] * dir[i];
    }
    norm = std::sqrt(norm);
    for (double& x : dir) x /= norm;
    // Canonical sign: first component of meaningful size is positive.
    for (int i = 0; i < 3; ++i) {
        if (std::abs(dir[i]) > 1e-9) {
            if (dir[i] < 0.0)
                for (double& x : dir) x = -x;
            break;
        }
    }
    return {eig.eigenvalues[0], dir};
}

}  // namespace detail

// Closed-form interferometric power for qubit A: alpha^2 * lambda_min(M).
inline IpResult ip_closed(const DensityMatrix& rho, const Spectrum& s) {
    const Matrix3 m = m_matrix(rho);
    auto [lam, dir] = detail::sym3_min_eig(m);
    IpResult out;
    out.value = s.alpha * s.alpha * std::max(0.0, lam);
    out.worst_direction = dir;
    out.method = IpMethod::ClosedForm;
    return out;
}

struct IpOracleGrid {
    std::size_t n_polar = 64;
    std::size_t n_azimuth = 128;
};

namespace detail {

// Internal fixed seed for the d_A > 2 multistart; a constant so that oracle
// results are identical on every run.
inline constexpr std::uint64_t kIpMultistartSeed = 0x51F15EEDCAFEF00DULL;

inline std::array<double, 3> sphere_dir(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
            std::cos(theta)};
}

// Qubit-A oracle: coarse half-sphere grid + Nelder-Mead polish.
inline IpResult ip_oracle_qubit(const DensityMatrix& rho, const Spectrum& s,
                                const IpOracleGrid& grid, int refine_iters) {
    const SpectralState ss = spectral_state(rho);
    const std::size_t d = ss.q.size();
    const std::size_t db = rho.dim_b();

    // Pair weights and sigma couplings, computed once.
    std::array<ComplexMatrix, 3> sv;
    for (int a = 0; a < 3; ++a)
        sv[a] = apply_h_tensor_i(pauli_matrix(a), ss.v, 2, db);
    struct Pair {
        double w;
        cplx s[3];
    };
    std::vector<Pair> pairs;
    for (std::size_t m = 0; m < d; ++m)
        for (std::size_t n = 0; n < d; ++n) {
            const double sum = ss.q[m] + ss.q[n];
            if (sum < kQfiPairSkipTol) continue;
            const double diff = ss.q[m] - ss.q[n];
            if (diff == 0.0) continue;
            Pair p;
            p.w = 2.0 * diff * diff / sum;
            for (int a = 0; a < 3; ++a) {
                cplx t = 0.0;
                for (std::size_t i = 0; i < d; ++i)
                    t += std::conj(ss.v(i, m)) * sv[a](i, n);
                p.s[a] = t;
            }
            pairs.push_back(p);
        }

    // qfi(n)/4 for a unit direction (alpha = 1; scaled at the end).
    auto quarter_qfi = [&pairs](const std::array<double, 3>& n) {
        double f = 0.0;
        for (const Pair& p : pairs)
            f += p.w * std::norm(n[0] * p.s[0] + n[1] * p.s[1] + n[2] * p.s[2]);
        return 0.25 * f;
    };

    // Half-sphere grid (n and -n generate the same QFI).
    const std::size_t np = grid.n_polar;
    const std::size_t na = grid.n_azimuth;
    std::vector<double> values(np * na);
    parallel_for(np, [&](std::size_t i) {
        const double theta = (double(i) + 0.5) * (0.5 * M_PI) / double(np);
        for (std::size_t j = 0; j < na; ++j) {
            const double phi = 2.0 * M_PI * double(j) / double(na);
            values[i * na + j] = quarter_qfi(sphere_dir(theta, phi));
        }
    });

    // Deterministic reduction: strictly-less keeps the lexicographically
    // smallest grid index on ties.
    std::array<std::size_t, 3> best_idx{0, 0, 0};
    {
        std::vector<std::size_t> order(values.size());
        for (std::size_t k = 0; k < values.size(); ++k) order[k] = k;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (values[a] != values[b]) return values[a] < values[b];
            return a < b;
        });
        for (int k = 0; k < 3; ++k) best_idx[k] = order[std::min<std::size_t>(k, order.size() - 1)];
    }

    double best_val = values[best_idx[0]];
    std::array<double, 3> best_dir =
        sphere_dir((double(best_idx[0] / na) + 0.5) * (0.5 * M_PI) / double(np),
                   2.0 * M_PI * double(best_idx[0] % na) / double(na));

    NelderMeadOptions opt;
    opt.max_iters = refine_iters;
    opt.tolerance = 1e-10;
    opt.initial_step = 0.5 * (0.5 * M_PI) / double(np);
    for (std::size_t k = 0; k < 3; ++k) {
        const double theta0 = (double(best_idx[k] / na) + 0.5) * (0.5 * M_PI) / double(np);
        const double phi0 = 2.0 * M_PI * double(best_idx[k] % na) / double(na);
        NelderMeadResult r = nelder_mead(
            [&](const std::vector<double>& x) {
                return quarter_qfi(sphere_dir(x[0], x[1]));
            },
            {theta0, phi0}, opt);
        if (r.value < best_val) {
            best_val = r.value;
            best_dir = sphere_dir(r.x[0], r.x[1]);
        }
    }

    IpResult out;
    out.value = s.alpha * s.alpha * std::max(0.0, best_val);
    out.worst_direction = best_dir;
    out.method = IpMethod::Oracle;
    return out;
}

// d_A > 2 oracle: eigenbasis multistart (Haar) plus local polish of the best
// few starts over a Hermitian-generator chart around each.
inline IpResult ip_oracle_qudit(const DensityMatrix& rho, const Spectrum& s,
                                std::size_t n_starts, int refine_iters) {
    const std::size_t da = rho.dim_a();
    const std::size_t db = rho.dim_b();
    const std::size_t d = da * db;
    const SpectralState ss = spectral_state(rho);

    // Couplings C[(m,n)][(a,b)] = <m| E_ab tensor I |n>.
    struct Pair {
        double w;
        std::vector<cplx> c;  // da*da entries, index a*da+b
    };
    std::vector<Pair> pairs;
    for (std::size_t m = 0; m < d; ++m)
        for (std::size_t n = 0; n < d; ++n) {
            const double sum = ss.q[m] + ss.q[n];
            if (sum < kQfiPairSkipTol) continue;
            const double diff = ss.q[m] - ss.q[n];
            if (diff == 0.0) continue;
            Pair p;
            p.w = 2.0 * diff * diff / sum;
            p.c.assign(da * da, cplx(0.0, 0.0));
            for (std::size_t a = 0; a < da; ++a)
                for (std::size_t b = 0; b < da; ++b) {
                    cplx t = 0.0;
                    for (std::size_t i = 0; i < db; ++i)
                        t += std::conj(ss.v(a * db + i, m)) * ss.v(b * db + i, n);
                    p.c[a * da + b] = t;
                }
            pairs.push_back(std::move(p));
        }

    auto quarter_qfi_h = [&](const ComplexMatrix& h) {
        double f = 0.0;
        for (const Pair& p : pairs) {
            cplx amp = 0.0;
            for (std::size_t a = 0; a < da; ++a)
                for (std::size_t b = 0; b < da; ++b) amp += h(a, b) * p.c[a * da + b];
            f += p.w * std::norm(amp);
        }
        return 0.25 * f;
    };

    const std::vector<double> levels = PhaseHamiltonian::level_assignment(Spectrum(1.0, 0.0), da);
    auto h_of_basis = [&](const ComplexMatrix& v) {
        ComplexMatrix h(da, da);
        for (std::size_t k = 0; k < da; ++k)
            for (std::size_t i = 0; i < da; ++i) {
                const cplx vik = v(i, k) * levels[k];
                if (vik == cplx(0.0, 0.0)) continue;
                for (std::size_t j = 0; j < da; ++j) h(i, j) += vik * std::conj(v(j, k));
            }
        return h.symmetrized();
    };

    // Multistart (deterministic substreams of the fixed internal seed).
    std::vector<double> start_vals(n_starts);
    std::vector<ComplexMatrix> start_bases(n_starts);
    parallel_for(n_starts, [&](std::size_t k) {
        Rng rng = Rng::substream(kIpMultistartSeed, k);
        ComplexMatrix v = haar_unitary(da, rng);
        start_vals[k] = quarter_qfi_h(h_of_basis(v));
        start_bases[k] = std::move(v);
    });

    std::vector<std::size_t> order(n_starts);
    for (std::size_t k = 0; k < n_starts; ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (start_vals[a] != start_vals[b]) return start_vals[a] < start_vals[b];
        return a < b;
    });

    double best_val = start_vals[order[0]];
    ComplexMatrix best_basis = start_bases[order[0]];

    // Local chart around a basis V0: V(x) = exp(i A(x)) V0 with A Hermitian
    // built from da^2 real parameters.
    auto chart = [&](const ComplexMatrix& v0, const std::vector<double>& x) {
        ComplexMatrix a(da, da);
        std::size_t idx = 0;
        for (std::size_t i = 0; i < da; ++i) a(i, i) = x[idx++];
        for (std::size_t i = 0; i < da; ++i)
            for (std::size_t j = i + 1; j < da; ++j) {
                a(i, j) = cplx(x[idx], x[idx + 1]);
                a(j, i) = cplx(x[idx], -x[idx + 1]);
                idx += 2;
            }
        EigResult eig = hermitian_eig(a);
        ComplexMatrix expia(da, da);
        for (std::size_t k = 0; k < da; ++k) {
            const cplx ph(std::cos(eig.eigenvalues[k]), std::sin(eig.eigenvalues[k]));
            for (std::size_t i = 0; i < da; ++i) {
                const cplx vik = eig.eigenvectors(i, k) * ph;
                for (std::size_t j = 0; j < da; ++j)
                    expia(i, j) += vik * std::conj(eig.eigenvectors(j, k));
            }
        }
        return expia * v0;
    };

    NelderMeadOptions opt;
    opt.max_iters = refine_iters;
    opt.tolerance = 1e-12;
    opt.initial_step = 0.15;
    const std::size_t n_refine = std::min<std::size_t>(8, n_starts);
    for (std::size_t k = 0; k < n_refine; ++k) {
        const ComplexMatrix& v0 = start_bases[order[k]];
        NelderMeadResult r = nelder_mead(
            [&](const std::vector<double>& x) { return quarter_qfi_h(h_of_basis(chart(v0, x))); },
            std::vector<double>(da * da, 0.0), opt);
        if (r.value < best_val) {
            best_val = r.value;
            best_basis = chart(v0, r.x);
        }
    }

    IpResult out;
    out.value = s.alpha * s.alpha * std::max(0.0, best_val);
    out.worst_eigenbasis = best_basis;
    out.method = IpMethod::Oracle;
    return out;
}

}  // namespace detail

// Brute-force interferometric power: minimizes qfi/4 over the admissible
// Hamiltonian family. Qubit A uses a polar-azimuth grid over the half sphere
// with Nelder-Mead polish from the best three grid points; larger d_A uses
// Haar-random eigenbasis multistart (default 256 starts).
inline IpResult ip_oracle(const DensityMatrix& rho, const Spectrum& s,
                          const IpOracleGrid& grid = {}, int refine_iters = 200,
                          std::size_t qudit_starts = 256) {
    if (rho.dim_a() == 2) {
        if (grid.n_polar < 16 || grid.n_azimuth < 32)
            throw std::invalid_argument("ip_oracle: grid must be at least 16x32");
        return detail::ip_oracle_qubit(rho, s, grid, refine_iters);
    }
    return detail::ip_oracle_qudit(rho, s, qudit_starts, refine_iters);
}

// Cramer-Rao bound 1/(nu F); F <= 0 carries no information, which is a
// distinguished result rather than an exception.
struct CramerRaoResult {
    bool bounded = false;
    double value = std::numeric_limits<double>::infinity();
};

inline CramerRaoResult cramer_rao_bound(double fisher, long long nu) {
    if (nu <= 0) throw std::invalid_argument("cramer_rao_bound: nu must be positive");
    if (!(fisher > 0.0)) return {};
    return {true, 1.0 / (double(nu) * fisher)};
}

}  // namespace qmetro
