#ifndef COOLLAB_NOISE_MODELS_HPP
#define COOLLAB_NOISE_MODELS_HPP

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "coollab/channels.hpp"
#include "coollab/matrix.hpp"
#include "coollab/spectral.hpp"

namespace coollab {

/// Discrete classical-noise ensemble: realization angles theta_k with
/// probabilities lambda_k.
struct NoiseEnsemble {
    std::vector<double> thetas;
    std::vector<double> lambdas;

    NoiseEnsemble(std::vector<double> th, std::vector<double> lam)
        : thetas(std::move(th)), lambdas(std::move(lam)) {
        if (thetas.empty() || thetas.size() != lambdas.size())
            throw InvalidInput("NoiseEnsemble: theta/lambda length mismatch");
        double total = 0.0;
        for (double l : lambdas) {
            if (l < 0.0) throw InvalidInput("NoiseEnsemble: negative weight");
            total += l;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw InvalidInput("NoiseEnsemble: weights do not sum to 1");
    }

    std::size_t size() const { return thetas.size(); }
};

// ---------------------------------------------------------------------------
// Two-level stochastic rotation channel
// ---------------------------------------------------------------------------

/// [[cos t, i sin t], [i sin t, cos t]] — unitary for any real angle.
inline UnitaryRealization two_level_kraus(double theta) {
    if (!std::isfinite(theta))
        throw InvalidInput("two_level_kraus: non-finite angle");
    ComplexMatrix e(2, 2);
    const Complex is(0.0, std::sin(theta));
    e << std::cos(theta), is, is, std::cos(theta);
    return UnitaryRealization(std::move(e));
}

inline RandomUnitaryChannel two_level_channel(const NoiseEnsemble& ens) {
    std::vector<RandomUnitaryChannel::Realization> reals;
    reals.reserve(ens.size());
    for (std::size_t k = 0; k < ens.size(); ++k)
        reals.push_back({ens.lambdas[k], two_level_kraus(ens.thetas[k])});
    return RandomUnitaryChannel(2, std::move(reals));
}

/// Y = (sum_k l_k cos 2t_k)^2 + (sum_k l_k sin 2t_k)^2; the squared length of
/// the ensemble-averaged phasor, in [0, 1].
inline double auxiliary_Y(const NoiseEnsemble& ens) {
    double c = 0.0, s = 0.0;
    for (std::size_t k = 0; k < ens.size(); ++k) {
        c += ens.lambdas[k] * std::cos(2.0 * ens.thetas[k]);
        s += ens.lambdas[k] * std::sin(2.0 * ens.thetas[k]);
    }
    return c * c + s * s;
}

/// Final populations of diag(p1, 1-p1) under the two-level channel:
/// (1 +/- X)/2 with X = (2 p1 - 1) sqrt(Y).
inline std::pair<double, double> two_level_closed_form(
    const NoiseEnsemble& ens, double p1) {
    if (p1 < 0.5 || p1 > 1.0)
        throw InvalidInput("two_level_closed_form: p1 must lie in [0.5, 1]");
    const double x = (2.0 * p1 - 1.0) * std::sqrt(auxiliary_Y(ens));
    return {(1.0 + x) / 2.0, (1.0 - x) / 2.0};
}

// ---------------------------------------------------------------------------
// Mechanical resonator in a flux-qubit circuit, dressed-state blocks
// ---------------------------------------------------------------------------

/// Resonator/qubit parameters for the dressed-state block model.
struct MRParams {
    double omega_m = 1.0;  // resonator frequency
    double delta = 1.0;    // qubit tunneling amplitude
    double g = 0.1;        // coupling constant
    int n_max = 1;         // Fock truncation

    void validate() const {
        if (g < 0.0) throw InvalidInput("MRParams: g must be >= 0");
        if (n_max < 1) throw InvalidInput("MRParams: n_max must be >= 1");
    }
};

/// Dressing angle of the n-th doublet, alpha_n = atan2(2 g sqrt(n),
/// delta - omega_m) / 2. Continuous through resonance, where it is pi/4.
inline double dressed_angle(int n, const MRParams& p) {
    if (n < 1) throw InvalidInput("dressed_angle: n must be >= 1");
    p.validate();
    return 0.5 * std::atan2(2.0 * p.g * std::sqrt(static_cast<double>(n)),
                            p.delta - p.omega_m);
}

/// 2x2 unitary acting on the n-th dressed doublet under a dephasing
/// realization exp(-i theta a†a). The off-diagonal carries cos a sin a
/// (first powers), which is what unitarity requires.
inline ComplexMatrix mr_block_kraus(int n, double theta, const MRParams& p) {
    const double a = dressed_angle(n, p);
    const double c = std::cos(a), s = std::sin(a);
    const Complex phase =
        std::exp(Complex(0.0, -theta * static_cast<double>(n - 1)));
    const Complex w = std::exp(Complex(0.0, -theta));
    ComplexMatrix e(2, 2);
    e(0, 0) = phase * (c * c + w * s * s);
    e(1, 1) = phase * (s * s + w * c * c);
    e(0, 1) = phase * (1.0 - w) * c * s;
    e(1, 0) = e(0, 1);
    return e;
}

/// Block-diagonal state: the |0,g> population plus one 2x2 density block per
/// dressed doublet n = 1..n_max.
struct BlockState {
    double p0 = 0.0;
    std::vector<ComplexMatrix> blocks;

    BlockState(double p0_in, std::vector<ComplexMatrix> blocks_in)
        : p0(p0_in), blocks(std::move(blocks_in)) {
        double total = p0;
        for (const auto& b : blocks) {
            if (b.rows() != 2 || b.cols() != 2)
                throw InvalidInput("BlockState: blocks must be 2x2");
            require_hermitian(b, "BlockState block");
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(
                b, Eigen::EigenvaluesOnly);
            if (es.eigenvalues().minCoeff() < -tol::eigenvalue_clamp)
                throw InvalidInput("BlockState: block not PSD");
            total += b.trace().real();
        }
        if (p0 < -tol::eigenvalue_clamp || std::abs(total - 1.0) > 1e-10)
            throw InvalidInput("BlockState: populations do not sum to 1");
    }

    int n_max() const { return static_cast<int>(blocks.size()); }
};

/// Ensemble-averaged block evolution. The n = 0 population is untouched and
/// each block keeps its trace P_n.
inline BlockState mr_apply(const NoiseEnsemble& ens, const BlockState& state,
                           const MRParams& p) {
    p.validate();
    if (p.n_max != state.n_max())
        throw InvalidInput("mr_apply: truncation mismatch");
    std::vector<ComplexMatrix> out;
    out.reserve(state.blocks.size());
    for (int n = 1; n <= state.n_max(); ++n) {
        ComplexMatrix acc = ComplexMatrix::Zero(2, 2);
        for (std::size_t k = 0; k < ens.size(); ++k) {
            const ComplexMatrix e = mr_block_kraus(n, ens.thetas[k], p);
            acc += ens.lambdas[k] *
                   (e * state.blocks[static_cast<std::size_t>(n - 1)] *
                    e.adjoint());
        }
        acc = 0.5 * (acc + ComplexMatrix(acc.adjoint()));
        out.push_back(std::move(acc));
    }
    return BlockState(state.p0, std::move(out));
}

/// Unit vector (mu1, mu2, mu3) tracking how one dephasing realization moves
/// the block polarization. mu1 carries the 1/2 that the normalization
/// sum_j mu_j^2 = 1 requires.
inline std::array<double, 3> mr_mu(int n, double theta, const MRParams& p) {
    const double a = dressed_angle(n, p);
    const double s2 = std::sin(2.0 * a);
    const double sh = std::sin(0.5 * theta);
    return {0.5 * (1.0 - std::cos(theta)) * std::sin(4.0 * a),
            std::sin(theta) * s2, 1.0 - 2.0 * sh * sh * s2 * s2};
}

/// Y_n = sum_j (sum_k lambda_k mu_j(theta_k))^2, in [0, 1]. The block
/// populations of a diagonal input block are (P_n +/- X_n)/2 with
/// X_n = (P_1n - P_2n) sqrt(Y_n).
inline double mr_Yn(const NoiseEnsemble& ens, int n, const MRParams& p) {
    std::array<double, 3> avg{0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < ens.size(); ++k) {
        const auto mu = mr_mu(n, ens.thetas[k], p);
        for (int j = 0; j < 3; ++j)
            avg[static_cast<std::size_t>(j)] +=
                ens.lambdas[k] * mu[static_cast<std::size_t>(j)];
    }
    return avg[0] * avg[0] + avg[1] * avg[1] + avg[2] * avg[2];
}

// ---------------------------------------------------------------------------
// STIRAP transfer unitary
// ---------------------------------------------------------------------------

enum class NoisyParameter { theta, alpha };

/// Which STIRAP parameter fluctuates, and the values of both.
struct StirapParams {
    double theta = 0.0;
    double alpha = 0.0;
    NoisyParameter noisy = NoisyParameter::theta;
};

/// The 3x3 transfer operator U(theta, alpha) of inverse-engineered STIRAP.
inline UnitaryRealization stirap_unitary(double theta, double alpha) {
    if (!std::isfinite(theta) || !std::isfinite(alpha))
        throw InvalidInput("stirap_unitary: non-finite angle");
    const double ct = std::cos(theta), st = std::sin(theta);
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    ComplexMatrix u(3, 3);
    u << ct * ca, ct * sa, -st,
         -sa,     ca,      0.0,
         st * ca, st * sa, ct;
    return UnitaryRealization(std::move(u));
}

/// Random-unitary channel with the tagged parameter replaced by the ensemble
/// angles: (lambda_k, U(theta_k, alpha)) or (lambda_k, U(theta, alpha_k)).
inline RandomUnitaryChannel stirap_channel(const StirapParams& params,
                                           const NoiseEnsemble& ens) {
    std::vector<RandomUnitaryChannel::Realization> reals;
    reals.reserve(ens.size());
    for (std::size_t k = 0; k < ens.size(); ++k) {
        const double th = params.noisy == NoisyParameter::theta
                              ? ens.thetas[k]
                              : params.theta;
        const double al = params.noisy == NoisyParameter::alpha
                              ? ens.thetas[k]
                              : params.alpha;
        reals.push_back({ens.lambdas[k], stirap_unitary(th, al)});
    }
    return RandomUnitaryChannel(3, std::move(reals));
}

}  // namespace coollab

#endif
