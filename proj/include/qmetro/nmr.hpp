#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "channels.hpp"
#include "complex_matrix.hpp"
#include "entanglement.hpp"
#include "hermitian_eig.hpp"
#include "metrology.hpp"
#include "optimize.hpp"
#include "parallel.hpp"
#include "pauli.hpp"
#include "quantum.hpp"
#include "rng.hpp"
#include "states.hpp"

namespace qmetro {

// Scalar spin-spin coupling of the two-spin sample.
inline constexpr double kJCouplingHz = 215.0;

// Qubit order is fixed as (H, C) = (A, B): the proton is the first tensor
// factor, the carbon the second.
enum class Nucleus { H, C };

enum class PulsePhase { X, Y, MinusX, MinusY };

inline double pulse_phase_angle(PulsePhase p) {
    switch (p) {
        case PulsePhase::X: return 0.0;
        case PulsePhase::Y: return kPi / 2;
        case PulsePhase::MinusX: return kPi;
        default: return -kPi / 2;
    }
}

struct Pulse {
    Nucleus nucleus;
    double angle;  // radians
    PulsePhase phase;
};

struct JEvolution {
    double duration;  // seconds, > 0
};

struct Gradient {};

using SequenceEvent = std::variant<Pulse, JEvolution, Gradient>;

inline std::size_t count_pulses(const std::vector<SequenceEvent>& events) {
    std::size_t n = 0;
    for (const SequenceEvent& e : events)
        if (std::holds_alternative<Pulse>(e)) ++n;
    return n;
}

// exp(-i (angle/2) (cos phi sigma_x + sin phi sigma_y)) on one qubit.
inline ComplexMatrix rotation_xy(double angle, double phi) {
    ComplexMatrix u(2, 2);
    const double c = std::cos(angle / 2);
    const double s = std::sin(angle / 2);
    u(0, 0) = cplx(c, 0);
    u(1, 1) = cplx(c, 0);
    u(0, 1) = cplx(0, -s) * std::exp(cplx(0, -phi));
    u(1, 0) = cplx(0, -s) * std::exp(cplx(0, phi));
    return u;
}

// z rotation diag(e^{-i z/2}, e^{i z/2}).
inline ComplexMatrix rotation_z(double zeta) {
    ComplexMatrix u(2, 2);
    u(0, 0) = std::exp(cplx(0, -zeta / 2));
    u(1, 1) = std::exp(cplx(0, zeta / 2));
    return u;
}

// Two-qubit unitary of a transverse pulse: the rotation on the addressed
// nucleus, identity on the other.
inline ComplexMatrix pulse_unitary(const Pulse& p) {
    if (!std::isfinite(p.angle)) throw std::invalid_argument("pulse_unitary: non-finite angle");
    const ComplexMatrix r = rotation_xy(p.angle, pulse_phase_angle(p.phase));
    const ComplexMatrix eye = ComplexMatrix::identity(2);
    return p.nucleus == Nucleus::H ? tensor_product(r, eye) : tensor_product(eye, r);
}

// Free evolution under the scalar coupling: exp(-i pi J tau (sigma_z tensor
// sigma_z) / 2). Diagonal, so exponentiated entrywise.
inline ComplexMatrix j_evolution_unitary(double duration, double j_hz = kJCouplingHz) {
    if (!(duration > 0)) throw std::invalid_argument("j_evolution_unitary: duration must be > 0");
    const double theta = kPi * j_hz * duration / 2;
    ComplexMatrix u(4, 4);
    u(0, 0) = u(3, 3) = std::exp(cplx(0, -theta));
    u(1, 1) = u(2, 2) = std::exp(cplx(0, theta));
    return u;
}

namespace detail {

// Zero the computational-basis off-diagonal entries; works on any Hermitian
// matrix (density or deviation form).
inline ComplexMatrix dephase(const ComplexMatrix& m) {
    ComplexMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows() && i < m.cols(); ++i)
        out(i, i) = cplx(m(i, i).real(), 0.0);
    return out;
}

}  // namespace detail

// Field-gradient dephasing: a completely positive trace-preserving
// idempotent map that keeps the diagonal and erases every coherence.
inline DensityMatrix gradient_dephase(const DensityMatrix& rho) {
    return DensityMatrix(rho.dim_a(), rho.dim_b(), detail::dephase(rho.matrix()));
}

// The same map in Kraus form (the four diagonal projectors).
inline KrausChannel gradient_kraus_channel() {
    return build_completely_decohering(ComplexMatrix::identity(4));
}

// Runs a sequence on a Hermitian matrix (density or deviation form).
// pulse_scales, when non-empty, supplies one multiplicative factor per pulse
// (angle -> angle * scale), consumed in event order starting at *cursor.
inline ComplexMatrix apply_sequence(ComplexMatrix state,
                                    const std::vector<SequenceEvent>& events,
                                    const std::vector<double>& pulse_scales = {},
                                    std::size_t* cursor = nullptr) {
    std::size_t local = 0;
    std::size_t& idx = cursor ? *cursor : local;
    for (const SequenceEvent& e : events) {
        if (const Pulse* p = std::get_if<Pulse>(&e)) {
            Pulse scaled = *p;
            if (!pulse_scales.empty()) {
                if (idx >= pulse_scales.size())
                    throw std::invalid_argument("apply_sequence: pulse scale list exhausted");
                scaled.angle *= pulse_scales[idx];
            }
            ++idx;
            const ComplexMatrix u = pulse_unitary(scaled);
            state = u * state * u.adjoint();
        } else if (const JEvolution* j = std::get_if<JEvolution>(&e)) {
            const ComplexMatrix u = j_evolution_unitary(j->duration);
            state = u * state * u.adjoint();
        } else {
            state = detail::dephase(state);
        }
    }
    return state.symmetrized();
}

// Composed unitary of a gradient-free sequence (events applied left to
// right, so the product is U_n ... U_1).
inline ComplexMatrix sequence_unitary(const std::vector<SequenceEvent>& events) {
    ComplexMatrix u = ComplexMatrix::identity(4);
    for (const SequenceEvent& e : events) {
        if (const Pulse* p = std::get_if<Pulse>(&e))
            u = pulse_unitary(*p) * u;
        else if (const JEvolution* j = std::get_if<JEvolution>(&e))
            u = j_evolution_unitary(j->duration) * u;
        else
            throw std::invalid_argument("sequence_unitary: gradient events are not unitary");
    }
    return u;
}

// Pseudopure preparation sequence:
//   [pi/3]_x^C -> G_z -> [pi/4]_x^H -> U[1/(2J)] -> [pi/4]_{-y}^H -> G_z.
inline std::vector<SequenceEvent> pseudopure_sequence() {
    return {
        Pulse{Nucleus::C, kPi / 3, PulsePhase::X},
        Gradient{},
        Pulse{Nucleus::H, kPi / 4, PulsePhase::X},
        JEvolution{1.0 / (2.0 * kJCouplingHz)},
        Pulse{Nucleus::H, kPi / 4, PulsePhase::MinusY},
        Gradient{},
    };
}

// CNOT pulse sequence (control H, target C):
//   [pi/2]_y^C -> U[1/(2J)] -> [pi/2]_x^C -> [pi/2]_{-y}^C -> [pi/2]_x^C ->
//   [pi/2]_y^C -> [pi/2]_{-y}^H -> [pi/2]_{-x}^H -> [pi/2]_y^H.
inline std::vector<SequenceEvent> cnot_sequence() {
    const double h = kPi / 2;
    return {
        Pulse{Nucleus::C, h, PulsePhase::Y},
        JEvolution{1.0 / (2.0 * kJCouplingHz)},
        Pulse{Nucleus::C, h, PulsePhase::X},
        Pulse{Nucleus::C, h, PulsePhase::MinusY},
        Pulse{Nucleus::C, h, PulsePhase::X},
        Pulse{Nucleus::C, h, PulsePhase::Y},
        Pulse{Nucleus::H, h, PulsePhase::MinusY},
        Pulse{Nucleus::H, h, PulsePhase::MinusX},
        Pulse{Nucleus::H, h, PulsePhase::Y},
    };
}

// Hadamard on H as two pulses: [pi/2]_y^H -> [pi]_x^H.
inline std::vector<SequenceEvent> hadamard_sequence() {
    return {
        Pulse{Nucleus::H, kPi / 2, PulsePhase::Y},
        Pulse{Nucleus::H, kPi, PulsePhase::X},
    };
}

inline ComplexMatrix canonical_cnot() {
    ComplexMatrix u(4, 4);
    u(0, 0) = u(1, 1) = u(2, 3) = u(3, 2) = cplx(1, 0);
    return u;
}

inline ComplexMatrix canonical_hadamard_on_h() {
    ComplexMatrix h(2, 2);
    const double r = 1.0 / std::sqrt(2.0);
    h(0, 0) = h(0, 1) = h(1, 0) = cplx(r, 0);
    h(1, 1) = cplx(-r, 0);
    return tensor_product(h, ComplexMatrix::identity(2));
}

// Local-z equivalence fit: finds (delta, a, b, c, e) minimizing
// || U - e^{i delta} (Rz(a) tensor Rz(b)) T (Rz(c) tensor Rz(e)) ||_F.
struct LocalZFit {
    double delta, a, b, c, e;
    double residual;
};

inline LocalZFit fit_local_z_equivalence(const ComplexMatrix& u, const ComplexMatrix& target) {
    if (u.rows() != 4 || u.cols() != 4 || target.rows() != 4 || target.cols() != 4)
        throw std::invalid_argument("fit_local_z_equivalence: expected 4x4 matrices");

    auto model = [&](const std::vector<double>& x) {
        const ComplexMatrix left = tensor_product(rotation_z(x[1]), rotation_z(x[2]));
        const ComplexMatrix right = tensor_product(rotation_z(x[3]), rotation_z(x[4]));
        ComplexMatrix m = left * target * right;
        m *= std::exp(cplx(0, x[0]));
        return m;
    };
    auto objective = [&](const std::vector<double>& x) {
        ComplexMatrix diff = u;
        diff -= model(x);
        return diff.frobenius_norm();
    };

    const double q = kPi / 4;
    const std::vector<std::vector<double>> starts = {
        {0, 0, 0, 0, 0},       {-q, 0, 0, 0, 0},     {q, 0, 0, 0, 0},
        {0, 2 * q, 0, 0, 0},   {0, 0, 2 * q, 0, 0},  {0, 0, 0, 2 * q, 0},
        {0, 0, 0, 0, 2 * q},   {2 * q, 2 * q, 2 * q, 2 * q, 2 * q},
        {-2 * q, -2 * q, 0, 0, 0},
    };
    NelderMeadOptions opt;
    opt.max_iters = 600;
    opt.initial_step = 0.4;
    opt.tolerance = 1e-14;
    std::vector<double> best;
    double best_val = std::numeric_limits<double>::infinity();
    for (const std::vector<double>& x0 : starts) {
        const NelderMeadResult r = nelder_mead(objective, x0, opt);
        if (r.value < best_val) {
            best_val = r.value;
            best = r.x;
        }
    }
    return LocalZFit{best[0], best[1], best[2], best[3], best[4], best_val};
}

// Raised when a pulse-backend convention fit does not converge to a usable
// correction.
class ConventionFitError : public std::runtime_error {
public:
    ConventionFitError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

namespace detail {

// Thermal deviation matrix of the weakly coupled two-spin system at equal
// nominal polarizations: (sigma_z tensor 1 + 1 tensor sigma_z)/4.
inline ComplexMatrix thermal_deviation() {
    ComplexMatrix d(4, 4);
    d(0, 0) = cplx(0.5, 0);
    d(3, 3) = cplx(-0.5, 0);
    return d;
}

// Clamp a Hermitian matrix to the nearest physical state: negative
// eigenvalues are zeroed and the result renormalized to unit trace.
inline DensityMatrix clamp_to_physical(const ComplexMatrix& m, std::size_t da, std::size_t db) {
    const EigResult eig = hermitian_eig(m.symmetrized());
    const std::size_t d = m.rows();
    ComplexMatrix out(d, d);
    double total = 0.0;
    for (double w : eig.eigenvalues) total += std::max(0.0, w);
    if (total <= 0.0) throw std::runtime_error("clamp_to_physical: no positive weight");
    for (std::size_t k = 0; k < d; ++k) {
        const double w = std::max(0.0, eig.eigenvalues[k]) / total;
        if (w == 0.0) continue;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                out(i, j) += w * eig.eigenvectors(i, k) * std::conj(eig.eigenvectors(j, k));
    }
    return DensityMatrix(da, db, out.symmetrized());
}

}  // namespace detail

// Pseudopure preparation, simulated at the deviation-matrix level: the
// sequence acts on the traceless deviation, and the ideal-normalized state
// is read out through the affine map rho = 1/4 + 2*Delta.
inline DensityMatrix pseudopure_prep(const std::vector<double>& pulse_scales = {},
                                     std::size_t* cursor = nullptr) {
    const ComplexMatrix delta =
        apply_sequence(detail::thermal_deviation(), pseudopure_sequence(), pulse_scales, cursor);
    ComplexMatrix rho = delta;
    rho *= cplx(2.0, 0.0);
    for (std::size_t i = 0; i < 4; ++i) rho(i, i) += cplx(0.25, 0.0);
    return detail::clamp_to_physical(rho, 2, 2);
}

// Eigenvalue-weighting and entangling stage of the family preparation:
//   [theta2]_x^C -> G_z -> [pi/2 - theta1]_x^H -> CNOT events.
inline std::vector<SequenceEvent> family_pulse_events(const FamilyParams& p) {
    std::vector<SequenceEvent> events = {
        Pulse{Nucleus::C, p.theta2, PulsePhase::X},
        Gradient{},
        Pulse{Nucleus::H, kPi / 2 - p.theta1, PulsePhase::X},
    };
    const std::vector<SequenceEvent> cnot = cnot_sequence();
    events.insert(events.end(), cnot.begin(), cnot.end());
    return events;
}

// Total transverse pulses in the full preparation (pseudopure + family).
inline constexpr std::size_t kFamilyPulseCount = 13;

namespace detail {

inline DensityMatrix run_pulse_preparation(const FamilyParams& p, double zeta_h, double zeta_c,
                                           const std::vector<double>& pulse_scales) {
    std::size_t cursor = 0;
    const DensityMatrix pp = pseudopure_prep(pulse_scales, &cursor);
    ComplexMatrix rho =
        apply_sequence(pp.matrix(), family_pulse_events(p), pulse_scales, &cursor);
    // Software z corrections: reference-frame redefinitions, applied exactly
    // (they are not physical pulses and carry no calibration error).
    const ComplexMatrix w = tensor_product(rotation_z(zeta_h), rotation_z(zeta_c));
    rho = w * rho * w.adjoint();
    return clamp_to_physical(rho, 2, 2);
}

struct ZCorrection {
    double zeta_h;
    double zeta_c;
    double residual;  // mean infidelity over the probe points
};

// One-time fit of the software z corrections. The probe objective compares
// the zero-error pulse preparation against the closed-form target at three
// family points; the best Nelder-Mead solution is snapped to the nearest
// quarter-turn grid when that does not hurt the objective.
inline ZCorrection fit_z_correction() {
    const std::vector<FamilyParams> probes = {
        FamilyParams(0.0, 0.0),
        FamilyParams(kPi / 4, kPi / 3),
        FamilyParams(kPi / 9, kPi / 10),
    };
    std::vector<DensityMatrix> targets;
    targets.reserve(probes.size());
    for (const FamilyParams& p : probes) targets.push_back(family_state(p));

    auto objective = [&](const std::vector<double>& x) {
        double total = 0.0;
        for (std::size_t i = 0; i < probes.size(); ++i) {
            const DensityMatrix got = run_pulse_preparation(probes[i], x[0], x[1], {});
            total += 1.0 - uhlmann_fidelity(got, targets[i]);
        }
        return total / double(probes.size());
    };

    const double h = kPi / 2;
    const std::vector<std::vector<double>> starts = {
        {0, 0}, {-h, 0}, {h, 0}, {0, -h}, {0, h}, {-h, -h}, {h, h}, {2 * h, 0},
    };
    NelderMeadOptions opt;
    opt.max_iters = 400;
    opt.initial_step = 0.3;
    opt.tolerance = 1e-14;
    std::vector<double> best = {0, 0};
    double best_val = std::numeric_limits<double>::infinity();
    for (const std::vector<double>& x0 : starts) {
        const NelderMeadResult r = nelder_mead(objective, x0, opt);
        if (r.value < best_val) {
            best_val = r.value;
            best = r.x;
        }
    }
    // Prefer the exact quarter-turn grid point when it matches the optimum.
    std::vector<double> snapped = {std::round(best[0] / h) * h, std::round(best[1] / h) * h};
    const double snapped_val = objective(snapped);
    if (snapped_val <= best_val + 1e-12) {
        best = snapped;
        best_val = snapped_val;
    }
    return ZCorrection{best[0], best[1], best_val};
}

inline const ZCorrection& z_correction() {
    static const ZCorrection fit = [] {
        ZCorrection f = fit_z_correction();
        if (f.residual > 1e-4)
            throw ConventionFitError(
                "pulse backend: software z-correction fit residual exceeds 1e-4", f.residual);
        return f;
    }();
    return fit;
}

}  // namespace detail

enum class PrepBackend { Gate, Pulse };

// Family-state preparation. The gate backend mixes the two spectral
// eigenstates with their closed-form weights (exact by construction); the
// pulse backend runs the full sequence, with optional per-pulse angle
// scale factors for error studies.
inline DensityMatrix prepare_family(const FamilyParams& p, PrepBackend backend,
                                    const std::vector<double>& pulse_scales = {}) {
    if (backend == PrepBackend::Gate) {
        const FamilyEigen eigen = family_eigen(p);
        ComplexMatrix rho(4, 4);
        for (int k = 0; k < 2; ++k)
            for (std::size_t i = 0; i < 4; ++i)
                for (std::size_t j = 0; j < 4; ++j)
                    rho(i, j) += eigen.eigenvalues[k] * eigen.vectors[k][i] *
                                 std::conj(eigen.vectors[k][j]);
        return DensityMatrix(2, 2, rho.symmetrized());
    }
    if (!pulse_scales.empty() && pulse_scales.size() != kFamilyPulseCount)
        throw std::invalid_argument("prepare_family: expected one scale per pulse");
    const detail::ZCorrection& z = detail::z_correction();
    return detail::run_pulse_preparation(p, z.zeta_h, z.zeta_c, pulse_scales);
}

enum class ErrorDistribution { Uniform, Gaussian };

// Per-pulse multiplicative calibration-error model.
struct ErrorModel {
    double relative_bound = 0.03;
    int runs = 100;
    ErrorDistribution distribution = ErrorDistribution::Uniform;
    std::uint64_t seed = 1;

    void validate() const {
        if (!(relative_bound >= 0.0 && relative_bound < 1.0))
            throw std::invalid_argument("ErrorModel: relative_bound must lie in [0, 1)");
        if (runs < 1) throw std::invalid_argument("ErrorModel: runs must be >= 1");
    }
};

struct PrepReport {
    double theta1;
    double theta2;
    DensityMatrix mean_state;
    double fidelity_mean;
    double fidelity_min;
    double tangle_mean;
    double tangle_std;
    double ip_mean;
    double ip_std;
    int runs;
    double relative_bound;
    std::uint64_t seed;
    std::string error_bar_definition;
};

// Calibration-error Monte Carlo: every pulse angle is multiplied by
// (1 + eps) with eps drawn independently per pulse per run; run r uses the
// (seed, r) substream, so reports are identical for identical seeds. When
// run_fidelities is given it receives the per-run fidelity trace.
inline PrepReport monte_carlo(const FamilyParams& p, const ErrorModel& em,
                              std::vector<double>* run_fidelities = nullptr) {
    em.validate();
    const DensityMatrix target = family_state(p);
    const std::size_t runs = std::size_t(em.runs);

    std::vector<double> fid(runs), tan(runs), ipv(runs);
    std::vector<ComplexMatrix> states(runs, ComplexMatrix(4, 4));
    const Spectrum s;

    // Resolve the z-correction fit before entering the parallel region.
    (void)detail::z_correction();

    parallel_for(runs, [&](std::size_t r) {
        Rng rng = Rng::substream(em.seed, r);
        std::vector<double> scales(kFamilyPulseCount);
        for (double& v : scales) {
            const double eps = em.distribution == ErrorDistribution::Uniform
                                   ? rng.uniform(-em.relative_bound, em.relative_bound)
                                   : rng.next_gaussian() * (em.relative_bound / 2);
            v = 1.0 + eps;
        }
        const DensityMatrix rho = prepare_family(p, PrepBackend::Pulse, scales);
        states[r] = rho.matrix();
        fid[r] = uhlmann_fidelity(rho, target);
        tan[r] = tangle_wootters(rho).value;
        ipv[r] = ip_closed(rho, s).value;
    });

    auto mean = [&](const std::vector<double>& v) {
        double t = 0.0;
        for (double x : v) t += x;
        return t / double(v.size());
    };
    auto pop_std = [&](const std::vector<double>& v, double m) {
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        if (*lo == *hi) return 0.0;  // identical runs carry exactly zero spread
        double t = 0.0;
        for (double x : v) t += (x - m) * (x - m);
        return std::sqrt(std::max(0.0, t / double(v.size())));
    };

    ComplexMatrix acc(4, 4);
    for (const ComplexMatrix& m : states) acc += m;
    acc *= cplx(1.0 / double(runs), 0.0);
    if (run_fidelities) *run_fidelities = fid;

    const double fm = mean(fid);
    const double tm = mean(tan);
    const double im = mean(ipv);
    return PrepReport{
        p.theta1,
        p.theta2,
        DensityMatrix(2, 2, acc.symmetrized()),
        fm,
        *std::min_element(fid.begin(), fid.end()),
        tm,
        pop_std(tan, tm),
        im,
        pop_std(ipv, im),
        em.runs,
        em.relative_bound,
        em.seed,
        "population standard deviation of the per-run value over the error-model runs",
    };
}

}  // namespace qmetro
