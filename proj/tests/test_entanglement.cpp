// Interferometric entanglement: the pure-state variance form, the Wootters
// tangle, the two-qubit IE closed form, and the convex-roof oracle.

#include <catch2/catch_amalgamated.hpp>

#include <qmetro/channels.hpp>
#include <qmetro/entanglement.hpp>
#include <qmetro/metrology.hpp>
#include <qmetro/quantum.hpp>
#include <qmetro/rng.hpp>
#include <qmetro/states.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace qmetro;

namespace {

// Two-operator Kraus channel on a qubit, carved from a Haar 4x2 isometry so
// that completeness holds exactly by construction.
KrausChannel random_kraus_pair(Rng& rng) {
    const ComplexMatrix iso = haar_isometry(4, 2, rng);
    ComplexMatrix k1(2, 2), k2(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            k1(i, j) = iso(i, j);
            k2(i, j) = iso(2 + i, j);
        }
    return KrausChannel(2, {k1, k2}, ChannelFamily::Custom);
}

DensityMatrix werner(double p) {
    // p |Psi-><Psi-| + (1-p) I/4
    ComplexMatrix m = ComplexMatrix::identity(4);
    m *= cplx((1.0 - p) / 4.0, 0.0);
    const PureState psi = bell(BellState::PsiMinus);
    const std::vector<cplx>& a = psi.amplitudes();
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) m(i, j) += p * a[i] * std::conj(a[j]);
    return DensityMatrix(2, 2, m.symmetrized());
}

}  // namespace

TEST_CASE("tangle_wootters on reference states", "[entanglement]") {
    SECTION("Bell states are maximally tangled") {
        for (BellState b : {BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus,
                            BellState::PsiMinus}) {
            const TangleValue t = tangle_wootters(bell(b).to_density());
            REQUIRE(t.value == Catch::Approx(1.0).margin(1e-10));
        }
    }

    SECTION("separable mixtures have zero tangle") {
        Rng rng(53);
        for (int trial = 0; trial < 10; ++trial) {
            const DensityMatrix rho = random_separable_state(2, 2, 4, rng);
            REQUIRE(tangle_wootters(rho).value == Catch::Approx(0.0).margin(1e-10));
        }
    }

    SECTION("the family point (pi/4, pi/3) evaluates to 1/8") {
        const DensityMatrix rho = family_state(FamilyParams(kPi / 4, kPi / 3));
        REQUIRE(tangle_wootters(rho).value == Catch::Approx(0.125).margin(1e-10));
    }

    SECTION("Werner states follow the concurrence formula") {
        // concurrence max{0, (3p-1)/2}; tangle is its square.
        for (double p : {0.2, 1.0 / 3.0, 0.5, 0.8, 1.0}) {
            const double c = std::max(0.0, (3.0 * p - 1.0) / 2.0);
            REQUIRE(tangle_wootters(werner(p)).value ==
                    Catch::Approx(c * c).margin(1e-10));
        }
        REQUIRE(tangle_wootters(werner(0.8)).value == Catch::Approx(0.49).margin(1e-10));
    }

    SECTION("lambdas come back nonincreasing and rebuild the value") {
        Rng rng(59);
        for (int trial = 0; trial < 20; ++trial) {
            const TangleValue t = tangle_wootters(random_rank_k_hs(2, 2, 3, 100 + trial));
            for (int i = 1; i < 4; ++i) REQUIRE(t.lambdas[i] <= t.lambdas[i - 1] + 1e-12);
            const double c = t.lambdas[0] - t.lambdas[1] - t.lambdas[2] - t.lambdas[3];
            const double expect = c > 0.0 ? c * c : 0.0;
            REQUIRE(t.value == Catch::Approx(expect).margin(1e-10));
        }
    }

    SECTION("non-two-qubit inputs are rejected") {
        const DensityMatrix rho(2, 3,
                                ComplexMatrix::identity(6) * cplx(1.0 / 6.0, 0.0));
        REQUIRE_THROWS_AS(tangle_wootters(rho), std::invalid_argument);
    }
}

TEST_CASE("tangle is invariant under local unitaries", "[entanglement]") {
    Rng rng(61);
    for (int trial = 0; trial < 25; ++trial) {
        const DensityMatrix rho = random_rank_k_hs(2, 2, 2, 200 + trial);
        const double base = tangle_wootters(rho).value;
        const ComplexMatrix u = tensor_product(haar_unitary(2, rng), haar_unitary(2, rng));
        const DensityMatrix rotated(2, 2, (u * rho.matrix() * u.adjoint()).symmetrized());
        REQUIRE(tangle_wootters(rotated).value == Catch::Approx(base).margin(1e-9));
    }
}

TEST_CASE("ie_pure on reference states", "[entanglement]") {
    SECTION("Bell state reaches 1 at unit alpha") {
        REQUIRE(ie_pure(bell(BellState::PhiPlus), Spectrum()) ==
                Catch::Approx(1.0).margin(1e-12));
    }

    SECTION("product states carry no entanglement at any alpha") {
        const PureState prod(2, 2, {cplx(1.0, 0.0), 0.0, 0.0, 0.0});
        REQUIRE(ie_pure(prod, Spectrum()) == Catch::Approx(0.0).margin(1e-12));
        REQUIRE(ie_pure(prod, Spectrum(5.0)) == Catch::Approx(0.0).margin(1e-12));
    }

    SECTION("cos(pi/8)|00> + sin(pi/8)|11> gives 1/2") {
        const PureState psi(2, 2,
                            {cplx(std::cos(kPi / 8), 0.0), 0.0, 0.0,
                             cplx(std::sin(kPi / 8), 0.0)});
        REQUIRE(ie_pure(psi, Spectrum()) == Catch::Approx(0.5).margin(1e-10));
    }

    SECTION("alpha scaling is quadratic") {
        const PureState psi = bell(BellState::PsiPlus);
        REQUIRE(ie_pure(psi, Spectrum(3.0)) ==
                Catch::Approx(9.0 * ie_pure(psi, Spectrum())).margin(1e-10));
    }

    SECTION("equals the local linear entropy alpha^2 * 2(1 - Tr rho_A^2)") {
        Rng rng(67);
        for (int trial = 0; trial < 25; ++trial) {
            const PureState psi = random_pure(2, 2, rng);
            const DensityMatrix red = partial_trace(psi.to_density(), Subsystem::B);
            const double purity = (red.matrix() * red.matrix()).trace().real();
            REQUIRE(ie_pure(psi, Spectrum(1.5)) ==
                    Catch::Approx(1.5 * 1.5 * 2.0 * (1.0 - purity)).margin(1e-10));
        }
    }

    SECTION("dim_a must be 2") {
        const double r = 1.0 / std::sqrt(3.0);
        const PureState psi(3, 1, {cplx(r, 0.0), cplx(r, 0.0), cplx(r, 0.0)});
        REQUIRE_THROWS_AS(ie_pure(psi, Spectrum()), std::invalid_argument);
    }
}

TEST_CASE("ie_two_qubit scales the tangle", "[entanglement]") {
    REQUIRE(ie_two_qubit(bell(BellState::PhiPlus).to_density(), Spectrum()) ==
            Catch::Approx(1.0).margin(1e-10));
    REQUIRE(ie_two_qubit(bell(BellState::PhiPlus).to_density(), Spectrum(3.0)) ==
            Catch::Approx(9.0).margin(1e-10));
    REQUIRE(ie_two_qubit(family_state(FamilyParams(0.0, kPi / 3)), Spectrum()) ==
            Catch::Approx(0.25).margin(1e-10));
}

TEST_CASE("convex_roof_oracle on reference states", "[entanglement]") {
    SECTION("states of rank above two are rejected") {
        REQUIRE_THROWS_AS(convex_roof_oracle(random_rank_k_hs(2, 2, 4, 9), Spectrum()),
                          std::invalid_argument);
        REQUIRE_THROWS_AS(convex_roof_oracle(random_rank_k_hs(2, 2, 3, 9), Spectrum()),
                          std::invalid_argument);
    }

    SECTION("a pure Bell state pins the roof at 1") {
        const ConvexRoofResult res =
            convex_roof_oracle(bell(BellState::PhiPlus).to_density(), Spectrum());
        REQUIRE(res.value >= 1.0 - 1e-9);
        REQUIRE(res.value <= 1.0 + 1e-3);
    }

    SECTION("the classical diag(1/2,0,0,1/2) mixture reaches 0") {
        ComplexMatrix m(4, 4);
        m(0, 0) = 0.5;
        m(3, 3) = 0.5;
        const ConvexRoofResult res =
            convex_roof_oracle(DensityMatrix(2, 2, m), Spectrum());
        REQUIRE(res.value >= -1e-9);
        REQUIRE(res.value <= 1e-3);
    }

    SECTION("the family point (pi/4, pi/3) matches the Wootters value") {
        const ConvexRoofResult res =
            convex_roof_oracle(family_state(FamilyParams(kPi / 4, kPi / 3)), Spectrum());
        REQUIRE(res.value == Catch::Approx(0.125).margin(1e-3));
    }

    SECTION("the winning decomposition is a true decomposition") {
        const DensityMatrix rho = random_rank_k_hs(2, 2, 2, 77);
        const ConvexRoofResult res = convex_roof_oracle(rho, Spectrum());
        double wsum = 0.0;
        for (double w : res.best.weights) wsum += w;
        REQUIRE(wsum == Catch::Approx(1.0).margin(1e-10));
        REQUIRE(res.best.reconstruction_defect(rho) < 1e-8);
        REQUIRE(res.best.states.size() == res.best.weights.size());
    }

    SECTION("identical seeds give identical results") {
        const DensityMatrix rho = random_rank_k_hs(2, 2, 2, 88);
        const ConvexRoofResult a = convex_roof_oracle(rho, Spectrum(), {2, 3}, 4, 42);
        const ConvexRoofResult b = convex_roof_oracle(rho, Spectrum(), {2, 3}, 4, 42);
        REQUIRE(a.value == b.value);
        REQUIRE(a.best.weights == b.best.weights);
    }

    SECTION("ensemble sizes below two are rejected") {
        const DensityMatrix rho = random_rank_k_hs(2, 2, 2, 99);
        REQUIRE_THROWS_AS(convex_roof_oracle(rho, Spectrum(), {1, 2}, 2, 1),
                          std::invalid_argument);
    }
}

TEST_CASE("convex roof brackets the closed-form IE", "[entanglement]") {
    // The oracle can only overshoot the true roof (it searches a superset of
    // candidates imperfectly), and the closed form is the exact roof.
    for (int trial = 0; trial < 50; ++trial) {
        const DensityMatrix rho = random_rank_k_hs(2, 2, 2, 300 + trial);
        const double closed = ie_two_qubit(rho, Spectrum());
        const double roof = convex_roof_oracle(rho, Spectrum()).value;
        REQUIRE(roof >= closed - 1e-9);
        REQUIRE(roof <= closed + 1e-3);
    }
}

TEST_CASE("random channels on B never increase the IE", "[entanglement]") {
    Rng rng(71);
    const Spectrum s;
    for (int trial = 0; trial < 200; ++trial) {
        const DensityMatrix rho = random_rank_k_hs(2, 2, 1 + (trial % 4), 400 + trial);
        const double before = ie_two_qubit(rho, s);
        const KrausChannel ch = random_kraus_pair(rng);
        const double after = ie_two_qubit(apply_local_B(rho, ch), s);
        REQUIRE(after <= before + 1e-8);
    }
}

TEST_CASE("pure states tie IE to the interferometric power", "[entanglement]") {
    Rng rng(73);
    for (int trial = 0; trial < 100; ++trial) {
        const PureState psi = random_pure(2, 2, rng);
        const double e = ie_pure(psi, Spectrum());
        const double p = ip_closed(psi.to_density(), Spectrum()).value;
        REQUIRE(e == Catch::Approx(p).margin(1e-8));
    }
}

TEST_CASE("hierarchy: power dominates entanglement on rank-2 states", "[entanglement]") {
    const Spectrum s;
    for (int trial = 0; trial < 200; ++trial) {
        const DensityMatrix rho = random_rank_k_hs(2, 2, 2, 500 + trial);
        REQUIRE(ip_closed(rho, s).value >= ie_two_qubit(rho, s) - 1e-9);
    }
}
