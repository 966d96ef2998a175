// Core linear algebra and state plumbing: ComplexMatrix, the Jacobi
// eigensolver, PSD square root, density/pure-state validation, partial
// trace, Bloch vectors, the generalized Pauli basis, and Uhlmann fidelity.

#include <catch2/catch_amalgamated.hpp>

#include <qmetro/complex_matrix.hpp>
#include <qmetro/hermitian_eig.hpp>
#include <qmetro/pauli.hpp>
#include <qmetro/quantum.hpp>
#include <qmetro/rng.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

using namespace qmetro;

namespace {

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix d = a;
    d -= b;
    return d.max_abs();
}

ComplexMatrix random_hermitian(std::size_t n, Rng& rng) {
    const ComplexMatrix g = ginibre(n, n, rng);
    ComplexMatrix h = g;
    h += g.adjoint();
    h *= cplx(0.5, 0.0);
    return h;
}

ComplexMatrix random_psd(std::size_t n, Rng& rng) {
    const ComplexMatrix g = ginibre(n, n, rng);
    return (g * g.adjoint()).symmetrized();
}

DensityMatrix bell_phi_plus() {
    const double r = 1.0 / std::sqrt(2.0);
    return PureState(2, 2, {r, 0.0, 0.0, r}).to_density();
}

}  // namespace

TEST_CASE("ComplexMatrix construction and dimension cap", "[qmat]") {
    REQUIRE_THROWS_AS(ComplexMatrix(0, 3), std::invalid_argument);
    REQUIRE_THROWS_AS(ComplexMatrix(3, 0), std::invalid_argument);
    REQUIRE_THROWS_AS(ComplexMatrix(kMaxDim + 1, 1), std::invalid_argument);
    REQUIRE_NOTHROW(ComplexMatrix(kMaxDim, kMaxDim));

    const ComplexMatrix eye = ComplexMatrix::identity(3);
    REQUIRE(eye(0, 0) == cplx(1.0, 0.0));
    REQUIRE(eye(0, 1) == cplx(0.0, 0.0));
    REQUIRE(eye.trace() == cplx(3.0, 0.0));

    ComplexMatrix m(2, 3);
    REQUIRE_THROWS_AS(m.at(2, 0), std::out_of_range);
    REQUIRE_THROWS_AS(m.at(0, 3), std::out_of_range);
    REQUIRE_THROWS_AS(m.trace(), std::invalid_argument);
}

TEST_CASE("ComplexMatrix arithmetic and shape checks", "[qmat]") {
    ComplexMatrix a(2, 2);
    a(0, 0) = cplx(1.0, 2.0);
    a(0, 1) = cplx(0.0, -1.0);
    a(1, 0) = cplx(3.0, 0.0);
    a(1, 1) = cplx(-1.0, 1.0);

    SECTION("adjoint, transpose, conjugate are consistent") {
        REQUIRE(max_abs_diff(a.adjoint(), a.transpose().conjugate()) == 0.0);
        REQUIRE(max_abs_diff(a.adjoint().adjoint(), a) == 0.0);
    }

    SECTION("shape mismatches are rejected") {
        ComplexMatrix b(2, 3);
        REQUIRE_THROWS_AS(a += b, std::invalid_argument);
        REQUIRE_THROWS_AS(a -= b, std::invalid_argument);
        ComplexMatrix c(3, 2);
        REQUIRE_THROWS_AS(b * b, std::invalid_argument);
        REQUIRE_NOTHROW(b * c);
    }

    SECTION("matrix product matches a hand computation") {
        ComplexMatrix x(2, 2);
        x(0, 1) = 1.0;
        x(1, 0) = 1.0;
        const ComplexMatrix p = a * x;
        REQUIRE(p(0, 0) == a(0, 1));
        REQUIRE(p(0, 1) == a(0, 0));
        REQUIRE(p(1, 0) == a(1, 1));
        REQUIRE(p(1, 1) == a(1, 0));
    }

    SECTION("apply agrees with explicit matrix-vector product") {
        const std::vector<cplx> x = {cplx(1.0, 1.0), cplx(0.5, -2.0)};
        const std::vector<cplx> y = a.apply(x);
        REQUIRE(std::abs(y[0] - (a(0, 0) * x[0] + a(0, 1) * x[1])) < 1e-15);
        REQUIRE(std::abs(y[1] - (a(1, 0) * x[0] + a(1, 1) * x[1])) < 1e-15);
        REQUIRE_THROWS_AS(a.apply(std::vector<cplx>(3)), std::invalid_argument);
    }
}

TEST_CASE("tensor_product layout and cap", "[qmat]") {
    const ComplexMatrix x = pauli_x();
    const ComplexMatrix z = pauli_z();
    const ComplexMatrix xz = tensor_product(x, z);
    REQUIRE(xz.rows() == 4);
    // (x tensor z)[(i1 i2),(j1 j2)] = x(i1,j1) z(i2,j2)
    REQUIRE(xz(0, 2) == cplx(1.0, 0.0));
    REQUIRE(xz(1, 3) == cplx(-1.0, 0.0));
    REQUIRE(xz(0, 0) == cplx(0.0, 0.0));

    SECTION("mixed products and trace multiplicativity") {
        Rng rng(7);
        const ComplexMatrix a = ginibre(3, 3, rng);
        const ComplexMatrix b = ginibre(4, 4, rng);
        REQUIRE(std::abs(tensor_product(a, b).trace() - a.trace() * b.trace()) < 1e-12);
    }

    SECTION("oversized results are rejected") {
        const ComplexMatrix big = ComplexMatrix::identity(9);
        const ComplexMatrix mid = ComplexMatrix::identity(8);
        REQUIRE_THROWS_AS(tensor_product(big, mid), std::invalid_argument);
        REQUIRE_NOTHROW(tensor_product(mid, mid));
    }
}

TEST_CASE("inner_product is conjugate-linear in the first slot", "[qmat]") {
    const std::vector<cplx> x = {cplx(0.0, 1.0), cplx(2.0, 0.0)};
    const std::vector<cplx> y = {cplx(1.0, 0.0), cplx(0.0, 3.0)};
    const cplx ip = inner_product(x, y);
    REQUIRE(std::abs(ip - (std::conj(x[0]) * y[0] + std::conj(x[1]) * y[1])) < 1e-15);
    REQUIRE(std::abs(inner_product(y, x) - std::conj(ip)) < 1e-15);
    REQUIRE_THROWS_AS(inner_product(x, std::vector<cplx>(3)), std::invalid_argument);
}

TEST_CASE("hermitian_eig on fixed inputs", "[qmat]") {
    SECTION("sigma_z has spectrum {-1, +1} in ascending order") {
        const EigResult eig = hermitian_eig(pauli_z());
        REQUIRE(eig.eigenvalues.size() == 2);
        REQUIRE(eig.eigenvalues[0] == Catch::Approx(-1.0).margin(1e-12));
        REQUIRE(eig.eigenvalues[1] == Catch::Approx(1.0).margin(1e-12));
    }

    SECTION("sigma_x has spectrum {-1, +1}") {
        const EigResult eig = hermitian_eig(pauli_x());
        REQUIRE(eig.eigenvalues[0] == Catch::Approx(-1.0).margin(1e-12));
        REQUIRE(eig.eigenvalues[1] == Catch::Approx(1.0).margin(1e-12));
    }

    SECTION("degenerate identity returns all ones and orthonormal vectors") {
        const EigResult eig = hermitian_eig(ComplexMatrix::identity(4));
        for (double w : eig.eigenvalues) REQUIRE(w == Catch::Approx(1.0).margin(1e-12));
        const ComplexMatrix g = eig.eigenvectors.adjoint() * eig.eigenvectors;
        REQUIRE(max_abs_diff(g, ComplexMatrix::identity(4)) < 1e-10);
    }

    SECTION("non-Hermitian and non-square inputs are rejected") {
        ComplexMatrix bad(2, 2);
        bad(0, 1) = cplx(1.0, 0.0);
        bad(1, 0) = cplx(0.0, 0.5);  // far from conj(bad(0,1))
        REQUIRE_THROWS_AS(hermitian_eig(bad), std::invalid_argument);
        REQUIRE_THROWS_AS(hermitian_eig(ComplexMatrix(2, 3)), std::invalid_argument);
    }
}

TEST_CASE("hermitian_eig reconstructs random matrices up to dim 16", "[qmat]") {
    Rng rng(11);
    for (std::size_t n : {2u, 3u, 5u, 8u, 12u, 16u}) {
        const ComplexMatrix h = random_hermitian(n, rng);
        const EigResult eig = hermitian_eig(h);

        // Ascending order.
        for (std::size_t i = 1; i < n; ++i)
            REQUIRE(eig.eigenvalues[i] >= eig.eigenvalues[i - 1]);

        // Orthonormal columns.
        const ComplexMatrix gram = eig.eigenvectors.adjoint() * eig.eigenvectors;
        REQUIRE(max_abs_diff(gram, ComplexMatrix::identity(n)) < 1e-10);

        // V diag(w) V^dagger = H.
        ComplexMatrix recon(n, n);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    recon(i, j) += eig.eigenvalues[k] * eig.eigenvectors(i, k) *
                                   std::conj(eig.eigenvectors(j, k));
        REQUIRE(max_abs_diff(recon, h) < 1e-8);

        // Trace is preserved by the spectrum.
        double wsum = 0.0;
        for (double w : eig.eigenvalues) wsum += w;
        REQUIRE(wsum == Catch::Approx(h.trace().real()).margin(1e-9));
    }
}

TEST_CASE("psd_sqrt on diagonal and random inputs", "[qmat]") {
    SECTION("diag(4, 1) maps to diag(2, 1)") {
        ComplexMatrix m(2, 2);
        m(0, 0) = 4.0;
        m(1, 1) = 1.0;
        const ComplexMatrix r = psd_sqrt(m);
        REQUIRE(std::abs(r(0, 0) - cplx(2.0, 0.0)) < 1e-12);
        REQUIRE(std::abs(r(1, 1) - cplx(1.0, 0.0)) < 1e-12);
        REQUIRE(std::abs(r(0, 1)) < 1e-12);
    }

    SECTION("square of the root recovers the input") {
        Rng rng(3);
        for (std::size_t n : {2u, 4u, 6u}) {
            const ComplexMatrix m = random_psd(n, rng);
            const ComplexMatrix r = psd_sqrt(m);
            REQUIRE(r.hermiticity_defect() < 1e-10);
            REQUIRE(max_abs_diff(r * r, m) < 1e-8);
        }
    }

    SECTION("tiny negative eigenvalues are clamped, real ones rejected") {
        ComplexMatrix tiny(2, 2);
        tiny(0, 0) = 1.0;
        tiny(1, 1) = -1e-8;  // rounding-scale, must clamp to zero
        const ComplexMatrix r = psd_sqrt(tiny);
        REQUIRE(std::abs(r(1, 1)) < 1e-12);

        ComplexMatrix bad(2, 2);
        bad(0, 0) = 1.0;
        bad(1, 1) = -1e-3;  // beyond the rejection threshold
        REQUIRE_THROWS_WITH(psd_sqrt(bad),
                            Catch::Matchers::ContainsSubstring("not positive semidefinite"));
    }
}

TEST_CASE("DensityMatrix validation", "[qmat]") {
    SECTION("a Bell state passes") { REQUIRE_NOTHROW(bell_phi_plus()); }

    SECTION("wrong trace is rejected") {
        ComplexMatrix m = ComplexMatrix::identity(4);
        m *= cplx(0.5, 0.0);  // trace 2
        REQUIRE_THROWS_WITH(DensityMatrix(2, 2, m),
                            Catch::Matchers::ContainsSubstring("trace"));
    }

    SECTION("non-Hermitian input is rejected") {
        ComplexMatrix m = ComplexMatrix::identity(2);
        m *= cplx(0.5, 0.0);
        m(0, 1) = cplx(0.3, 0.0);
        REQUIRE_THROWS_WITH(DensityMatrix(2, 1, m),
                            Catch::Matchers::ContainsSubstring("Hermitian"));
    }

    SECTION("negative eigenvalues are rejected with the value in the message") {
        ComplexMatrix m(2, 2);
        m(0, 0) = 1.2;
        m(1, 1) = -0.2;
        REQUIRE_THROWS_WITH(DensityMatrix(2, 1, m),
                            Catch::Matchers::ContainsSubstring("negative eigenvalue"));
    }

    SECTION("size metadata must match the matrix") {
        REQUIRE_THROWS_AS(DensityMatrix(2, 2, ComplexMatrix::identity(2)),
                          std::invalid_argument);
        REQUIRE_THROWS_AS(DensityMatrix(0, 2, ComplexMatrix::identity(2)),
                          std::invalid_argument);
    }
}

TEST_CASE("PureState validation and to_density", "[qmat]") {
    REQUIRE_THROWS_WITH(PureState(2, 1, {cplx(1.0, 0.0), cplx(1.0, 0.0)}),
                        Catch::Matchers::ContainsSubstring("normalized"));
    REQUIRE_THROWS_AS(PureState(2, 2, {cplx(1.0, 0.0)}), std::invalid_argument);

    const double r = 1.0 / std::sqrt(2.0);
    const PureState psi(2, 1, {cplx(r, 0.0), cplx(0.0, r)});
    const DensityMatrix rho = psi.to_density();
    REQUIRE(std::abs(rho(0, 0) - cplx(0.5, 0.0)) < 1e-15);
    REQUIRE(std::abs(rho(0, 1) - cplx(0.0, -0.5)) < 1e-15);
    REQUIRE(std::abs(rho.matrix().trace() - cplx(1.0, 0.0)) < 1e-15);
}

TEST_CASE("HermitianObservable validation", "[qmat]") {
    REQUIRE_NOTHROW(HermitianObservable(2, pauli_y()));
    ComplexMatrix bad(2, 2);
    bad(0, 1) = cplx(1.0, 0.0);
    REQUIRE_THROWS_WITH(HermitianObservable(2, bad),
                        Catch::Matchers::ContainsSubstring("Hermitian"));
    REQUIRE_THROWS_AS(HermitianObservable(3, pauli_x()), std::invalid_argument);
}

TEST_CASE("partial_trace on known states", "[qmat]") {
    SECTION("Bell state reduces to the maximally mixed qubit on both sides") {
        const DensityMatrix rho = bell_phi_plus();
        for (Subsystem side : {Subsystem::A, Subsystem::B}) {
            const DensityMatrix red = partial_trace(rho, side);
            REQUIRE(red.dim() == 2);
            REQUIRE(std::abs(red(0, 0) - cplx(0.5, 0.0)) < 1e-12);
            REQUIRE(std::abs(red(1, 1) - cplx(0.5, 0.0)) < 1e-12);
            REQUIRE(std::abs(red(0, 1)) < 1e-12);
        }
    }

    SECTION("product states reduce to their factors") {
        Rng rng(5);
        // rho_A (2x2) tensor rho_B (3x3), both random pure densities.
        const ComplexMatrix ga = ginibre(2, 1, rng);
        ComplexMatrix ra = ga * ga.adjoint();
        ra *= cplx(1.0 / ra.trace().real(), 0.0);
        const ComplexMatrix gb = ginibre(3, 1, rng);
        ComplexMatrix rb = gb * gb.adjoint();
        rb *= cplx(1.0 / rb.trace().real(), 0.0);

        const DensityMatrix rho(2, 3, tensor_product(ra, rb).symmetrized());
        REQUIRE(max_abs_diff(partial_trace(rho, Subsystem::B).matrix(), ra) < 1e-10);
        REQUIRE(max_abs_diff(partial_trace(rho, Subsystem::A).matrix(), rb) < 1e-10);
    }
}

TEST_CASE("partial_trace order does not matter on a tripartite embedding", "[qmat]") {
    // A three-qubit state read either as (q1) x (q2 q3) or as (q1 q2) x (q3):
    // discarding q2 and q3 must give the same q1 state either way.
    Rng rng(17);
    const ComplexMatrix g = ginibre(8, 8, rng);
    ComplexMatrix m = g * g.adjoint();
    m *= cplx(1.0 / m.trace().real(), 0.0);
    m = m.symmetrized();

    const DensityMatrix grouped_tail(2, 4, m);   // q1 | (q2 q3)
    const DensityMatrix grouped_head(4, 2, m);   // (q1 q2) | q3

    const DensityMatrix direct = partial_trace(grouped_tail, Subsystem::B);

    const DensityMatrix mid = partial_trace(grouped_head, Subsystem::B);  // on (q1 q2)
    const DensityMatrix staged =
        partial_trace(DensityMatrix(2, 2, mid.matrix()), Subsystem::B);

    REQUIRE(max_abs_diff(direct.matrix(), staged.matrix()) < 1e-12);
}

TEST_CASE("bloch_vector on known states", "[qmat]") {
    SECTION("Bell state has a vanishing local vector") {
        const std::array<double, 3> r = bloch_vector(bell_phi_plus());
        for (double x : r) REQUIRE(std::abs(x) < 1e-12);
    }

    SECTION("|00> points along +z") {
        const PureState psi(2, 2, {cplx(1.0, 0.0), 0.0, 0.0, 0.0});
        const std::array<double, 3> r = bloch_vector(psi);
        REQUIRE(r[0] == Catch::Approx(0.0).margin(1e-12));
        REQUIRE(r[1] == Catch::Approx(0.0).margin(1e-12));
        REQUIRE(r[2] == Catch::Approx(1.0).margin(1e-12));
    }

    SECTION("|+> tensor anything points along +x") {
        Rng rng(23);
        const double r2 = 1.0 / std::sqrt(2.0);
        // Random normalized B-state of dimension 3.
        std::vector<cplx> b(3);
        double n2 = 0.0;
        for (cplx& z : b) {
            z = rng.next_complex_gaussian();
            n2 += std::norm(z);
        }
        for (cplx& z : b) z *= 1.0 / std::sqrt(n2);
        std::vector<cplx> amps(6);
        for (std::size_t i = 0; i < 3; ++i) {
            amps[i] = r2 * b[i];
            amps[3 + i] = r2 * b[i];
        }
        const std::array<double, 3> r = bloch_vector(PureState(2, 3, amps));
        REQUIRE(r[0] == Catch::Approx(1.0).margin(1e-10));
        REQUIRE(std::abs(r[1]) < 1e-10);
        REQUIRE(std::abs(r[2]) < 1e-10);
    }

    SECTION("subsystem A must be a qubit") {
        const DensityMatrix rho(3, 1,
                                ComplexMatrix::identity(3) * cplx(1.0 / 3.0, 0.0));
        REQUIRE_THROWS_AS(bloch_vector(rho), std::invalid_argument);
    }
}

TEST_CASE("Pauli matrices satisfy the algebra", "[qmat]") {
    const ComplexMatrix x = pauli_x();
    const ComplexMatrix y = pauli_y();
    const ComplexMatrix z = pauli_z();
    const ComplexMatrix eye = ComplexMatrix::identity(2);

    REQUIRE(max_abs_diff(x * x, eye) < 1e-15);
    REQUIRE(max_abs_diff(y * y, eye) < 1e-15);
    REQUIRE(max_abs_diff(z * z, eye) < 1e-15);
    REQUIRE(max_abs_diff(x * y, cplx(0.0, 1.0) * z) < 1e-15);
    REQUIRE(max_abs_diff(y * z, cplx(0.0, 1.0) * x) < 1e-15);
    REQUIRE(max_abs_diff(z * x, cplx(0.0, 1.0) * y) < 1e-15);
    // Anticommutation.
    REQUIRE(max_abs_diff(x * y, cplx(-1.0, 0.0) * (y * x)) < 1e-15);

    for (const HermitianObservable& s : pauli_basis()) {
        REQUIRE(std::abs(s.matrix().trace()) < 1e-15);
    }
}

TEST_CASE("gell_mann_basis properties", "[qmat]") {
    SECTION("d=2 reduces to the Pauli triple") {
        const std::vector<ComplexMatrix> basis = gell_mann_basis(2);
        REQUIRE(basis.size() == 3);
        REQUIRE(max_abs_diff(basis[0], pauli_x()) < 1e-15);
        REQUIRE(max_abs_diff(basis[1], pauli_y()) < 1e-15);
        REQUIRE(max_abs_diff(basis[2], pauli_z()) < 1e-15);
    }

    SECTION("d=3 squares sum to (16/3) identity") {
        const std::vector<ComplexMatrix> basis = gell_mann_basis(3);
        REQUIRE(basis.size() == 8);
        ComplexMatrix acc(3, 3);
        for (const ComplexMatrix& g : basis) acc += g * g;
        REQUIRE(max_abs_diff(acc, cplx(16.0 / 3.0, 0.0) * ComplexMatrix::identity(3)) <
                1e-12);
    }

    SECTION("Hermitian, traceless, Hilbert-Schmidt orthonormal with norm 2") {
        for (std::size_t d : {3u, 4u, 5u}) {
            const std::vector<ComplexMatrix> basis = gell_mann_basis(d);
            REQUIRE(basis.size() == d * d - 1);
            for (std::size_t i = 0; i < basis.size(); ++i) {
                REQUIRE(basis[i].hermiticity_defect() < 1e-15);
                REQUIRE(std::abs(basis[i].trace()) < 1e-12);
                for (std::size_t j = i; j < basis.size(); ++j) {
                    const cplx hs = (basis[i] * basis[j]).trace();
                    const double expect = i == j ? 2.0 : 0.0;
                    REQUIRE(std::abs(hs - cplx(expect, 0.0)) < 1e-12);
                }
            }
        }
    }

    SECTION("layout counts match the ordering contract") {
        for (std::size_t d : {2u, 3u, 4u, 5u}) {
            const GellMannLayout layout = gell_mann_layout(d);
            REQUIRE(layout.n_symmetric == d * (d - 1) / 2);
            REQUIRE(layout.n_antisymmetric == d * (d - 1) / 2);
            REQUIRE(layout.n_diagonal == d - 1);
            REQUIRE(layout.n_symmetric + layout.n_antisymmetric + layout.n_diagonal ==
                    d * d - 1);

            // Symmetric block is real symmetric, antisymmetric block purely
            // imaginary, diagonal block diagonal.
            const std::vector<ComplexMatrix> basis = gell_mann_basis(d);
            for (std::size_t i = 0; i < layout.n_symmetric; ++i)
                REQUIRE(max_abs_diff(basis[i], basis[i].transpose()) < 1e-15);
            for (std::size_t i = 0; i < layout.n_antisymmetric; ++i) {
                const ComplexMatrix& g = basis[layout.n_symmetric + i];
                REQUIRE(max_abs_diff(g, cplx(-1.0, 0.0) * g.transpose()) < 1e-15);
            }
            for (std::size_t i = 0; i < layout.n_diagonal; ++i) {
                const ComplexMatrix& g =
                    basis[layout.n_symmetric + layout.n_antisymmetric + i];
                double off = 0.0;
                for (std::size_t r = 0; r < d; ++r)
                    for (std::size_t c = 0; c < d; ++c)
                        if (r != c) off += std::abs(g(r, c));
                REQUIRE(off == 0.0);
            }
        }
    }

    SECTION("out-of-range dimensions are rejected") {
        REQUIRE_THROWS_AS(gell_mann_basis(1), std::invalid_argument);
        REQUIRE_THROWS_AS(gell_mann_basis(9), std::invalid_argument);
    }
}

TEST_CASE("uhlmann_fidelity on known pairs", "[qmat]") {
    const DensityMatrix bell = bell_phi_plus();
    const DensityMatrix zero = PureState(2, 1, {cplx(1.0, 0.0), 0.0}).to_density();
    const DensityMatrix one = PureState(2, 1, {0.0, cplx(1.0, 0.0)}).to_density();
    const DensityMatrix mixed(2, 1, ComplexMatrix::identity(2) * cplx(0.5, 0.0));

    SECTION("self-fidelity is one") {
        REQUIRE(uhlmann_fidelity(bell, bell) == Catch::Approx(1.0).margin(1e-10));
        REQUIRE(uhlmann_fidelity(mixed, mixed) == Catch::Approx(1.0).margin(1e-10));
    }

    SECTION("orthogonal pure states have zero fidelity") {
        REQUIRE(uhlmann_fidelity(zero, one) == Catch::Approx(0.0).margin(1e-10));
    }

    SECTION("pure versus maximally mixed gives 1/2") {
        REQUIRE(uhlmann_fidelity(zero, mixed) == Catch::Approx(0.5).margin(1e-10));
    }

    SECTION("pure-pure fidelity is the squared overlap") {
        const double c = std::cos(0.3), s = std::sin(0.3);
        const DensityMatrix tilted = PureState(2, 1, {cplx(c, 0.0), cplx(s, 0.0)}).to_density();
        REQUIRE(uhlmann_fidelity(zero, tilted) == Catch::Approx(c * c).margin(1e-10));
    }

    SECTION("symmetric in its arguments") {
        Rng rng(29);
        for (int trial = 0; trial < 5; ++trial) {
            const ComplexMatrix m1 = random_psd(4, rng);
            const ComplexMatrix m2 = random_psd(4, rng);
            const DensityMatrix r1(2, 2, (m1 * cplx(1.0 / m1.trace().real(), 0.0)).symmetrized());
            const DensityMatrix r2(2, 2, (m2 * cplx(1.0 / m2.trace().real(), 0.0)).symmetrized());
            const double f12 = uhlmann_fidelity(r1, r2);
            const double f21 = uhlmann_fidelity(r2, r1);
            REQUIRE(f12 == Catch::Approx(f21).margin(1e-8));
            REQUIRE(f12 >= 0.0);
            REQUIRE(f12 <= 1.0);
        }
    }

    SECTION("dimension mismatch is rejected") {
        REQUIRE_THROWS_AS(uhlmann_fidelity(bell, mixed), std::invalid_argument);
    }
}
