#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "coollab/channels.hpp"
#include "coollab/spectral.hpp"

using namespace coollab;

namespace {

UnitaryRealization identity2() {
    return UnitaryRealization(ComplexMatrix::Identity(2, 2));
}

/// Brute-force oracle: sum E rho E† by explicit loops, independent of the
/// channel classes.
ComplexMatrix kraus_sum_oracle(const std::vector<ComplexMatrix>& ops,
                               const ComplexMatrix& rho) {
    ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
    for (const auto& e : ops) out += e * rho * e.adjoint();
    return out;
}

RandomUnitaryChannel random_channel(Eigen::Index dim, std::size_t count,
                                    RngSeed seed) {
    Rng rng(seed);
    const auto weights = rng.dirichlet_flat(count);
    std::vector<RandomUnitaryChannel::Realization> reals;
    for (std::size_t k = 0; k < count; ++k)
        reals.push_back(
            {weights[k], UnitaryRealization(detail::haar_unitary(dim, rng))});
    return RandomUnitaryChannel(dim, std::move(reals));
}

}  // namespace

TEST_CASE("identity channel leaves states unchanged") {
    const RandomUnitaryChannel ch(2, {{1.0, identity2()}});
    const DensityMatrix rho = DensityMatrix::diagonal({0.7, 0.3});
    REQUIRE(max_abs(apply_random_unitary(ch, rho).mat() - rho.mat()) <= 1e-14);
}

TEST_CASE("equal mixture of I and i sigma_x depolarizes diag(0.7, 0.3)") {
    const ComplexMatrix isx = Complex(0.0, 1.0) * pauli_x();
    const RandomUnitaryChannel ch(
        2, {{0.5, identity2()}, {0.5, UnitaryRealization(isx)}});
    const DensityMatrix out =
        apply_random_unitary(ch, DensityMatrix::diagonal({0.7, 0.3}));
    // Direct 2x2 arithmetic: (rho + sx rho sx)/2 = diag(0.5, 0.5).
    REQUIRE(max_abs(out.mat() - 0.5 * ComplexMatrix::Identity(2, 2)) <= 1e-14);
}

TEST_CASE("pure i sigma_x channel swaps populations") {
    const ComplexMatrix isx = Complex(0.0, 1.0) * pauli_x();
    const RandomUnitaryChannel ch(2, {{1.0, UnitaryRealization(isx)}});
    const DensityMatrix out =
        apply_random_unitary(ch, DensityMatrix::diagonal({0.7, 0.3}));
    REQUIRE(max_abs(out.mat() -
                    DensityMatrix::diagonal({0.3, 0.7}).mat()) <= 1e-14);
}

TEST_CASE("apply_random_unitary rejects dimension mismatch") {
    const RandomUnitaryChannel ch(2, {{1.0, identity2()}});
    REQUIRE_THROWS_AS(
        apply_random_unitary(ch, DensityMatrix::maximally_mixed(3)),
        InvalidInput);
}

TEST_CASE("bit flip with p = 1 is the identity map") {
    const KrausChannel ch = standard_channel(StandardChannelKind::bit_flip, 1.0);
    const DensityMatrix rho = random_density_matrix(2, {5, 5});
    REQUIRE(max_abs(apply_kraus(ch, rho).mat() - rho.mat()) <= 1e-14);
}

TEST_CASE("depolarizing p = 1 fully mixes diag(1, 0)") {
    const KrausChannel ch =
        standard_channel(StandardChannelKind::depolarizing, 1.0);
    const DensityMatrix rho = DensityMatrix::diagonal({1.0, 0.0});
    const DensityMatrix out = apply_kraus(ch, rho);
    // Oracle: direct summation of the four Kraus terms.
    const ComplexMatrix expected = kraus_sum_oracle(ch.ops(), rho.mat());
    REQUIRE(max_abs(out.mat() - expected) <= 1e-14);
    REQUIRE(max_abs(out.mat() - 0.5 * ComplexMatrix::Identity(2, 2)) <= 1e-14);
}

TEST_CASE("amplitude damping gamma = 0.5 on the maximally mixed state") {
    const KrausChannel ch = amplitude_damping(0.5);
    const DensityMatrix out =
        apply_kraus(ch, DensityMatrix::maximally_mixed(2));
    const ComplexMatrix expected = kraus_sum_oracle(
        ch.ops(), DensityMatrix::maximally_mixed(2).mat());
    REQUIRE(max_abs(out.mat() - expected) <= 1e-14);
    REQUIRE(max_abs(out.mat() -
                    DensityMatrix::diagonal({0.75, 0.25}).mat()) <= 1e-14);
}

TEST_CASE("apply_kraus rejects non-CPTP operator sets") {
    const KrausChannel ch({0.5 * ComplexMatrix::Identity(2, 2)});
    REQUIRE_THROWS_AS(apply_kraus(ch, DensityMatrix::maximally_mixed(2)),
                      RejectedChannel);
}

TEST_CASE("theorem_check basics") {
    const DensityMatrix rho = DensityMatrix::diagonal({0.7, 0.3});
    const auto same = theorem_check(rho, rho);
    REQUIRE(same.margin == Catch::Approx(0.0).margin(1e-14));
    REQUIRE(same.pass);

    const auto mix = theorem_check(rho, DensityMatrix::maximally_mixed(2));
    REQUIRE(mix.margin == Catch::Approx(0.2).margin(1e-12));
    REQUIRE(mix.pass);
    REQUIRE(mix.all_indices_pass);

    // Amplitude damping cools the maximally mixed state; the bound fails,
    // as it must for a non-mixed-unitary channel.
    const auto cooled = theorem_check(DensityMatrix::maximally_mixed(2),
                                      DensityMatrix::diagonal({0.75, 0.25}));
    REQUIRE_FALSE(cooled.pass);
}

TEST_CASE("certify the bit flip channel") {
    for (double p : {0.0, 0.3, 0.7, 1.0}) {
        const auto cert =
            certify(standard_channel(StandardChannelKind::bit_flip, p));
        REQUIRE(cert.row_sums[0] == Catch::Approx(1.0).margin(1e-12));
        REQUIRE(cert.row_sums[1] == Catch::Approx(1.0).margin(1e-12));
        REQUIRE(cert.cooling_impossible);
        REQUIRE(cert.cptp_defect <= 1e-12);
    }
}

TEST_CASE("certify the depolarizing channel") {
    for (double p : {0.0, 0.3, 1.0}) {
        const auto cert =
            certify(standard_channel(StandardChannelKind::depolarizing, p));
        REQUIRE(cert.unital_defect <= 1e-12);
        REQUIRE(cert.row_sums[0] == Catch::Approx(1.0).margin(1e-12));
        REQUIRE(cert.row_sums[1] == Catch::Approx(1.0).margin(1e-12));
        REQUIRE(cert.cooling_impossible);
    }
}

TEST_CASE("certify amplitude damping") {
    const auto cert = certify(amplitude_damping(0.5));
    REQUIRE(cert.row_sums[0] == Catch::Approx(1.5).margin(1e-12));
    REQUIRE(cert.row_sums[1] == Catch::Approx(0.5).margin(1e-12));
    REQUIRE_FALSE(cert.cooling_impossible);
    REQUIRE_FALSE(cert.is_mixed_unitary);
    REQUIRE(cert.witness.has_value());
    REQUIRE(cert.witness->before.max() == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(cert.witness->after.max() == Catch::Approx(0.75).margin(1e-12));
}

TEST_CASE("certify rejects an empty operator list") {
    REQUIRE_THROWS_AS(KrausChannel({}), InvalidInput);
}

TEST_CASE("to_kraus of the identity channel") {
    const RandomUnitaryChannel ch(2, {{1.0, identity2()}});
    const KrausChannel k = to_kraus(ch);
    REQUIRE(k.ops().size() == 1);
    REQUIRE(max_abs(k.ops()[0] - ComplexMatrix::Identity(2, 2)) <= 1e-14);
}

TEST_CASE("to_kraus of an equal I / sigma_x mixture") {
    const RandomUnitaryChannel ch(
        2, {{0.5, identity2()}, {0.5, UnitaryRealization(pauli_x())}});
    const KrausChannel k = to_kraus(ch);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    REQUIRE(max_abs(k.ops()[0] -
                    inv_sqrt2 * ComplexMatrix::Identity(2, 2)) <= 1e-14);
    REQUIRE(max_abs(k.ops()[1] - inv_sqrt2 * pauli_x()) <= 1e-14);
    const auto cert = certify(k);
    REQUIRE(cert.row_sums[0] == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(cert.row_sums[1] == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(cert.is_mixed_unitary);
}

TEST_CASE("to_kraus agrees with the random-unitary action") {
    for (int trial = 0; trial < 20; ++trial) {
        const RngSeed seed{55, static_cast<std::uint64_t>(trial)};
        const Eigen::Index dim = 2 + trial % 4;
        const RandomUnitaryChannel ch =
            random_channel(dim, 1 + trial % 5, seed);
        const DensityMatrix rho =
            random_density_matrix(dim, seed.substream(999));
        REQUIRE(max_abs(apply_kraus(to_kraus(ch), rho).mat() -
                        apply_random_unitary(ch, rho).mat()) <= 1e-12);
        const auto cert = certify(to_kraus(ch));
        REQUIRE(cert.is_mixed_unitary);
        REQUIRE(cert.unital_defect <= 1e-10);
        // Unital implies every row sum is 1.
        for (double s : cert.row_sums)
            REQUIRE(s == Catch::Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("propagator of an empty segment list is the identity") {
    const auto u = propagator({}, 3);
    REQUIRE(max_abs(u.k - ComplexMatrix::Identity(3, 3)) <= 1e-14);
}

TEST_CASE("propagator reproduces the Pauli exponential") {
    // Oracle: exp(-i t H) with H = (pi/2) sigma_x is
    // cos(pi/2) I - i sin(pi/2) sigma_x = -i sigma_x at t = 1.
    const auto u = propagator({{0.5 * std::numbers::pi * pauli_x(), 1.0}});
    REQUIRE(max_abs(u.k - Complex(0.0, -1.0) * pauli_x()) <= 1e-12);
}

TEST_CASE("propagator is additive over commuting segments") {
    const ComplexMatrix h = 0.3 * pauli_x() + 0.7 * pauli_z();
    const auto split = propagator({{h, 0.4}, {h, 1.1}});
    const auto whole = propagator({{h, 1.5}});
    REQUIRE(max_abs(split.k - whole.k) <= 1e-12);
    REQUIRE(unitarity_defect(split.k) <= 1e-10);
}

TEST_CASE("propagator rejects non-Hermitian segments") {
    ComplexMatrix bad(2, 2);
    bad << 0.0, 1.0, 0.0, 0.0;
    REQUIRE_THROWS_AS(propagator({{bad, 1.0}}), InvalidInput);
}

TEST_CASE("standard channels are complete and row-sum bounded") {
    for (auto kind :
         {StandardChannelKind::bit_flip, StandardChannelKind::phase_flip,
          StandardChannelKind::bit_phase_flip,
          StandardChannelKind::depolarizing}) {
        const auto cert = certify(standard_channel(kind, 0.3));
        REQUIRE(cert.cptp_defect <= 1e-12);
        REQUIRE(cert.row_sums[0] == Catch::Approx(1.0).margin(1e-12));
        REQUIRE(cert.row_sums[1] == Catch::Approx(1.0).margin(1e-12));
    }
    REQUIRE_THROWS_AS(standard_channel(StandardChannelKind::bit_flip, 1.5),
                      InvalidInput);
}

TEST_CASE("amplitude damping limits") {
    const DensityMatrix rho = random_density_matrix(2, {3, 1});
    REQUIRE(max_abs(apply_kraus(amplitude_damping(0.0), rho).mat() -
                    rho.mat()) <= 1e-14);
    REQUIRE(max_abs(apply_kraus(amplitude_damping(1.0), rho).mat() -
                    DensityMatrix::diagonal({1.0, 0.0}).mat()) <= 1e-12);
    REQUIRE_FALSE(certify(amplitude_damping(0.5)).cooling_impossible);
    REQUIRE_THROWS_AS(amplitude_damping(-0.1), InvalidInput);
}

TEST_CASE("haar_random_unitary basics") {
    const auto scalar = haar_random_unitary(1, {1, 1});
    REQUIRE(std::abs(std::abs(scalar.k(0, 0)) - 1.0) <= 1e-12);

    const auto a = haar_random_unitary(4, {6, 2});
    const auto b = haar_random_unitary(4, {6, 2});
    REQUIRE(a.k == b.k);
    REQUIRE(unitarity_defect(a.k) <= 1e-10);
}

TEST_CASE("haar_random_unitary first-entry moment") {
    // Haar moment: E|U_00|^2 = 1/dim.
    constexpr int samples = 10000;
    const RngSeed master{13, 0};
    double mean = 0.0;
    for (int i = 0; i < samples; ++i) {
        const auto u = haar_random_unitary(
            3, master.substream(static_cast<std::uint64_t>(i)));
        mean += std::norm(u.k(0, 0));
    }
    mean /= samples;
    REQUIRE(mean == Catch::Approx(1.0 / 3.0).margin(0.01));
}

TEST_CASE("population bound holds for random channels") {
    for (int trial = 0; trial < 1000; ++trial) {
        const RngSeed seed{99, static_cast<std::uint64_t>(trial)};
        Rng rng(seed);
        const Eigen::Index dim = 2 + static_cast<Eigen::Index>(
                                         rng.uniform_int(0, 4));
        const auto count = static_cast<std::size_t>(rng.uniform_int(1, 8));
        const RandomUnitaryChannel ch = random_channel(dim, count, seed.substream(1));
        const DensityMatrix rho = random_density_matrix(dim, seed.substream(2));
        const auto rep =
            theorem_check(rho, apply_random_unitary(ch, rho), 1e-9);
        REQUIRE(rep.pass);
        REQUIRE(rep.all_indices_pass);
        // Trace preservation.
        REQUIRE(std::abs(apply_random_unitary(ch, rho).mat().trace().real() -
                         1.0) <= 1e-10);
    }
}

TEST_CASE("single-unitary channels preserve the spectrum") {
    for (int trial = 0; trial < 50; ++trial) {
        const RngSeed seed{17, static_cast<std::uint64_t>(trial)};
        const RandomUnitaryChannel ch = random_channel(3, 1, seed);
        const DensityMatrix rho = random_density_matrix(3, seed.substream(1));
        const auto before = sorted_spectrum(rho).probs;
        const auto after =
            sorted_spectrum(apply_random_unitary(ch, rho)).probs;
        for (std::size_t i = 0; i < before.size(); ++i)
            REQUIRE(after[i] == Catch::Approx(before[i]).margin(1e-10));
    }
}
