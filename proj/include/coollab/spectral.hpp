#ifndef COOLLAB_SPECTRAL_HPP
#define COOLLAB_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "coollab/matrix.hpp"
#include "coollab/rng.hpp"

namespace coollab {

/// Hermitian, positive-semidefinite, unit-trace matrix. Validated on
/// construction; immutable afterwards.
class DensityMatrix {
  public:
    explicit DensityMatrix(ComplexMatrix m, double herm_tol = tol::hermitian,
                           double trace_tol = tol::trace,
                           double psd_tol = tol::eigenvalue_clamp)
        : mat_(std::move(m)) {
        require_square(mat_, "DensityMatrix");
        if (!all_finite(mat_))
            throw InvalidState("DensityMatrix: non-finite entries");
        if (hermiticity_defect(mat_) > herm_tol)
            throw InvalidState("DensityMatrix: not Hermitian within tolerance");
        if (std::abs(mat_.trace().real() - 1.0) > trace_tol ||
            std::abs(mat_.trace().imag()) > trace_tol)
            throw InvalidState("DensityMatrix: trace is not 1 within tolerance");
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(mat_,
                                                        Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -psd_tol)
            throw InvalidState(
                "DensityMatrix: negative eigenvalue beyond tolerance");
    }

    Eigen::Index dim() const { return mat_.rows(); }
    const ComplexMatrix& mat() const { return mat_; }

    static DensityMatrix maximally_mixed(Eigen::Index dim) {
        return DensityMatrix(ComplexMatrix::Identity(dim, dim) /
                             static_cast<double>(dim));
    }

    static DensityMatrix diagonal(const std::vector<double>& populations) {
        ComplexMatrix m = ComplexMatrix::Zero(
            static_cast<Eigen::Index>(populations.size()),
            static_cast<Eigen::Index>(populations.size()));
        for (std::size_t i = 0; i < populations.size(); ++i)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) =
                populations[i];
        return DensityMatrix(m);
    }

  private:
    ComplexMatrix mat_;
};

/// Eigenvalues of a state, descending. probs[0] is the maximum population.
struct SortedSpectrum {
    std::vector<double> probs;

    double max() const { return probs.front(); }
};

struct EigenSystem {
    std::vector<double> values;  // descending
    ComplexMatrix vectors;       // columns match values
};

/// Spectral decomposition of a Hermitian matrix with descending eigenvalues.
inline EigenSystem diagonalize_hermitian(const ComplexMatrix& m,
                                         double herm_tol = tol::hermitian) {
    require_hermitian(m, "diagonalize_hermitian", herm_tol);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
    if (es.info() != Eigen::Success)
        throw InvalidInput("diagonalize_hermitian: eigensolver failed");
    const Eigen::Index d = m.rows();
    EigenSystem out;
    out.values.resize(static_cast<std::size_t>(d));
    out.vectors.resize(d, d);
    // Eigen returns ascending order; reverse.
    for (Eigen::Index i = 0; i < d; ++i) {
        out.values[static_cast<std::size_t>(i)] = es.eigenvalues()(d - 1 - i);
        out.vectors.col(i) = es.eigenvectors().col(d - 1 - i);
    }
    return out;
}

/// Descending eigenvalues of a state; tiny negatives from floating-point
/// eigensolvers (within the clamp tolerance) are set to zero.
inline SortedSpectrum sorted_spectrum(const DensityMatrix& rho,
                                      double clamp = tol::eigenvalue_clamp) {
    auto sys = diagonalize_hermitian(rho.mat());
    for (auto& v : sys.values)
        if (v < 0.0 && v >= -clamp) v = 0.0;
    return SortedSpectrum{std::move(sys.values)};
}

/// Flat Dirichlet weights over the (n-1)-simplex, deterministic per seed.
inline std::vector<double> random_simplex_weights(std::size_t n, RngSeed seed) {
    if (n == 0)
        throw InvalidInput("random_simplex_weights: n must be >= 1");
    Rng rng(seed);
    return rng.dirichlet_flat(n);
}

namespace detail {

/// Haar unitary from a Ginibre matrix: QR with the phase convention that the
/// triangular factor has positive diagonal.
inline ComplexMatrix haar_unitary(Eigen::Index dim, Rng& rng) {
    const ComplexMatrix g = rng.ginibre(dim);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < dim; ++j) {
        const Complex d = r(j, j);
        const double a = std::abs(d);
        q.col(j) *= (a > 0.0) ? d / a : Complex(1.0, 0.0);
    }
    return q;
}

/// Flat-Dirichlet spectrum conjugated by a Haar-random basis, drawn from an
/// existing stream.
inline DensityMatrix random_density_matrix(Eigen::Index dim, Rng& rng);

}  // namespace detail

/// Random state: flat-Dirichlet spectrum conjugated by a Haar-random basis.
inline DensityMatrix random_density_matrix(Eigen::Index dim, RngSeed seed) {
    if (dim < 2)
        throw InvalidInput("random_density_matrix: dim must be >= 2");
    Rng rng(seed);
    return detail::random_density_matrix(dim, rng);
}

inline DensityMatrix detail::random_density_matrix(Eigen::Index dim,
                                                   Rng& rng) {
    const auto evals = rng.dirichlet_flat(static_cast<std::size_t>(dim));
    const ComplexMatrix u = detail::haar_unitary(dim, rng);
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        m += evals[static_cast<std::size_t>(i)] *
             (u.col(i) * u.col(i).adjoint());
    // Symmetrize away eigensolver-level round-off before validation.
    m = 0.5 * (m + ComplexMatrix(m.adjoint()));
    return DensityMatrix(std::move(m));
}

/// Energy gap and Boltzmann-constant scale for the Gibbs inversion.
struct TemperatureSpec {
    double omega = 1.0;
    double k_B = 1.0;

    void validate() const {
        if (!(omega > 0.0) || !(k_B > 0.0))
            throw InvalidInput("TemperatureSpec: omega and k_B must be > 0");
    }
};

/// Gibbs-inversion temperature of a two-level population pair,
/// T = omega / (k_B ln(p1/(1-p1))). p1 = 1 maps to 0, p1 = 1/2 to +infinity.
inline double effective_temperature(double p1, const TemperatureSpec& spec) {
    spec.validate();
    if (p1 < 0.5 || p1 > 1.0)
        throw InvalidInput("effective_temperature: p1 must lie in [0.5, 1]");
    if (p1 == 1.0) return 0.0;
    if (p1 == 0.5) return std::numeric_limits<double>::infinity();
    return spec.omega / (spec.k_B * std::log(p1 / (1.0 - p1)));
}

struct TemperatureReport {
    double t_initial = 0.0;
    double t_final = 0.0;
    bool equal_gaps = true;
    /// Equal gaps: T_f >= T_i - 1e-12. Unequal gaps: T_f >= (omega_f/omega_i) T_i.
    double ratio_bound = 0.0;
    bool monotone = false;
};

/// Checks the conclusion that the effective temperature cannot decrease under
/// a population pair obeying q1 <= p1 (at equal gaps).
inline TemperatureReport temperature_monotonicity_check(
    double p1_initial, double q1_final, const TemperatureSpec& spec_initial,
    const TemperatureSpec& spec_final, double tolerance = 1e-12) {
    TemperatureReport rep;
    rep.t_initial = effective_temperature(p1_initial, spec_initial);
    rep.t_final = effective_temperature(q1_final, spec_final);
    rep.equal_gaps = spec_initial.omega == spec_final.omega;
    rep.ratio_bound = rep.equal_gaps
                          ? rep.t_initial
                          : (spec_final.omega / spec_initial.omega) *
                                rep.t_initial;
    if (std::isinf(rep.t_final))
        rep.monotone = true;
    else if (std::isinf(rep.ratio_bound))
        rep.monotone = false;
    else
        rep.monotone = rep.t_final >= rep.ratio_bound - tolerance;
    // At equal gaps T_f >= T_i is exactly equivalent to q1 <= p1, and the
    // population domain is where round-off is bounded; near p1 = 1/2 the
    // temperature derivative diverges and a one-ulp population excess would
    // otherwise read as a spurious violation.
    if (!rep.monotone && rep.equal_gaps)
        rep.monotone = q1_final <= p1_initial + tolerance;
    return rep;
}

}  // namespace coollab

#endif
