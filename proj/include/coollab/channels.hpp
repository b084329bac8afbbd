#ifndef COOLLAB_CHANNELS_HPP
#define COOLLAB_CHANNELS_HPP

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coollab/matrix.hpp"
#include "coollab/rng.hpp"
#include "coollab/spectral.hpp"

namespace coollab {

/// One unitary realization K of a stochastic evolution.
struct UnitaryRealization {
    ComplexMatrix k;

    explicit UnitaryRealization(ComplexMatrix m,
                                double tolerance = tol::unitary)
        : k(std::move(m)) {
        require_square(k, "UnitaryRealization");
        const double defect = unitarity_defect(k);
        if (defect > tolerance)
            throw InvalidInput("UnitaryRealization: unitarity defect " +
                               std::to_string(defect) + " exceeds tolerance");
    }

    Eigen::Index dim() const { return k.rows(); }
};

/// Weighted ensemble of unitary realizations: rho -> sum_k w_k K_k rho K_k†.
class RandomUnitaryChannel {
  public:
    struct Realization {
        double weight;
        UnitaryRealization k;
    };

    RandomUnitaryChannel(Eigen::Index dim, std::vector<Realization> reals)
        : dim_(dim), realizations_(std::move(reals)) {
        if (realizations_.empty())
            throw InvalidInput("RandomUnitaryChannel: empty realization list");
        double total = 0.0;
        for (const auto& r : realizations_) {
            if (r.weight < 0.0)
                throw InvalidInput("RandomUnitaryChannel: negative weight");
            if (r.k.dim() != dim_)
                throw InvalidInput(
                    "RandomUnitaryChannel: realization dimension mismatch");
            total += r.weight;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw InvalidInput(
                "RandomUnitaryChannel: weights do not sum to 1");
    }

    Eigen::Index dim() const { return dim_; }
    const std::vector<Realization>& realizations() const {
        return realizations_;
    }

  private:
    Eigen::Index dim_;
    std::vector<Realization> realizations_;
};

/// General Kraus operator list. Shape consistency is enforced on
/// construction; the completeness relation is checked where it matters
/// (apply_kraus rejects, certify reports the defect).
class KrausChannel {
  public:
    explicit KrausChannel(std::vector<ComplexMatrix> ops)
        : ops_(std::move(ops)) {
        if (ops_.empty())
            throw InvalidInput("KrausChannel: empty operator list");
        dim_out_ = ops_.front().rows();
        dim_in_ = ops_.front().cols();
        for (const auto& e : ops_) {
            if (e.rows() != dim_out_ || e.cols() != dim_in_)
                throw InvalidInput("KrausChannel: inconsistent operator shapes");
            if (!all_finite(e))
                throw InvalidInput("KrausChannel: non-finite entries");
        }
    }

    Eigen::Index dim_in() const { return dim_in_; }
    Eigen::Index dim_out() const { return dim_out_; }
    const std::vector<ComplexMatrix>& ops() const { return ops_; }

    /// Max-entry defect of sum E†E - I.
    double cptp_defect() const {
        ComplexMatrix acc = ComplexMatrix::Zero(dim_in_, dim_in_);
        for (const auto& e : ops_) acc += e.adjoint() * e;
        return max_abs(acc - ComplexMatrix::Identity(dim_in_, dim_in_));
    }

    /// Max-entry defect of sum E E† - I.
    double unital_defect() const {
        ComplexMatrix acc = ComplexMatrix::Zero(dim_out_, dim_out_);
        for (const auto& e : ops_) acc += e * e.adjoint();
        return max_abs(acc - ComplexMatrix::Identity(dim_out_, dim_out_));
    }

  private:
    Eigen::Index dim_in_ = 0;
    Eigen::Index dim_out_ = 0;
    std::vector<ComplexMatrix> ops_;
};

inline DensityMatrix apply_random_unitary(const RandomUnitaryChannel& ch,
                                          const DensityMatrix& rho) {
    if (ch.dim() != rho.dim())
        throw InvalidInput("apply_random_unitary: dimension mismatch");
    ComplexMatrix out = ComplexMatrix::Zero(rho.dim(), rho.dim());
    for (const auto& r : ch.realizations())
        out += r.weight * (r.k.k * rho.mat() * r.k.k.adjoint());
    out = 0.5 * (out + ComplexMatrix(out.adjoint()));
    return DensityMatrix(std::move(out));
}

inline DensityMatrix apply_kraus(const KrausChannel& ch,
                                 const DensityMatrix& rho,
                                 double cptp_tol = tol::cptp) {
    if (ch.dim_in() != rho.dim())
        throw InvalidInput("apply_kraus: dimension mismatch");
    const double defect = ch.cptp_defect();
    if (defect > cptp_tol)
        throw RejectedChannel("apply_kraus: CPTP defect " +
                              std::to_string(defect) + " exceeds tolerance");
    ComplexMatrix out = ComplexMatrix::Zero(ch.dim_out(), ch.dim_out());
    for (const auto& e : ch.ops()) out += e * rho.mat() * e.adjoint();
    out = 0.5 * (out + ComplexMatrix(out.adjoint()));
    return DensityMatrix(std::move(out));
}

/// Outcome of checking Q_m <= P_1 between two states.
struct TheoremReport {
    double p1 = 0.0;
    double q1 = 0.0;
    double margin = 0.0;  // p1 - q1
    bool pass = false;    // q1 <= p1 + tol
    std::vector<double> q;       // full final spectrum, descending
    bool all_indices_pass = false;  // every Q_m <= P_1 + tol
};

inline TheoremReport theorem_check(const DensityMatrix& rho_initial,
                                   const DensityMatrix& rho_final,
                                   double tolerance = tol::theorem) {
    if (rho_initial.dim() != rho_final.dim())
        throw InvalidInput("theorem_check: dimension mismatch");
    TheoremReport rep;
    rep.p1 = sorted_spectrum(rho_initial).max();
    rep.q = sorted_spectrum(rho_final).probs;
    rep.q1 = rep.q.front();
    rep.margin = rep.p1 - rep.q1;
    rep.pass = rep.q1 <= rep.p1 + tolerance;
    rep.all_indices_pass = true;
    for (double qm : rep.q)
        if (qm > rep.p1 + tolerance) rep.all_indices_pass = false;
    return rep;
}

/// Witness attached to a certificate when the row-sum condition fails:
/// the maximally mixed input and its spectra before/after the channel.
struct CoolingWitness {
    SortedSpectrum before;
    SortedSpectrum after;
};

/// Structural report on a Kraus set against the row-sum cooling condition.
struct ChannelCertificate {
    double cptp_defect = 0.0;
    double unital_defect = 0.0;
    bool is_mixed_unitary = false;
    std::vector<double> row_sums;  // s_m = sum_{k,n} |E_k[m,n]|^2
    bool cooling_impossible = false;
    std::optional<CoolingWitness> witness;
};

/// Evaluates the certificate. Row sums are taken in the computational basis;
/// callers intending the eigenbases of the initial/final states must rotate
/// the operators first. Mixed-unitary detection uses the sufficient per-
/// operator test E†E proportional to I.
inline ChannelCertificate certify(const KrausChannel& ch,
                                  double tolerance = tol::unitary) {
    ChannelCertificate cert;
    cert.cptp_defect = ch.cptp_defect();
    cert.unital_defect = ch.unital_defect();

    cert.is_mixed_unitary = ch.dim_in() == ch.dim_out();
    for (const auto& e : ch.ops()) {
        if (!cert.is_mixed_unitary) break;
        const ComplexMatrix gram = e.adjoint() * e;
        const double scale =
            gram.trace().real() / static_cast<double>(ch.dim_in());
        if (scale < -tolerance ||
            max_abs(gram - scale * ComplexMatrix::Identity(ch.dim_in(),
                                                           ch.dim_in())) >
                tolerance)
            cert.is_mixed_unitary = false;
    }

    cert.row_sums.assign(static_cast<std::size_t>(ch.dim_out()), 0.0);
    for (const auto& e : ch.ops())
        for (Eigen::Index m = 0; m < ch.dim_out(); ++m)
            cert.row_sums[static_cast<std::size_t>(m)] +=
                e.row(m).squaredNorm();

    cert.cooling_impossible = true;
    for (double s : cert.row_sums)
        if (s > 1.0 + tolerance) cert.cooling_impossible = false;

    if (!cert.cooling_impossible && ch.dim_in() == ch.dim_out() &&
        cert.cptp_defect <= tol::cptp) {
        const auto probe = DensityMatrix::maximally_mixed(ch.dim_in());
        cert.witness = CoolingWitness{sorted_spectrum(probe),
                                      sorted_spectrum(apply_kraus(ch, probe))};
    }
    return cert;
}

/// Kraus form of a random-unitary channel: E_k = sqrt(w_k) K_k.
inline KrausChannel to_kraus(const RandomUnitaryChannel& ch) {
    std::vector<ComplexMatrix> ops;
    ops.reserve(ch.realizations().size());
    for (const auto& r : ch.realizations())
        ops.push_back(std::sqrt(r.weight) * r.k.k);
    return KrausChannel(std::move(ops));
}

/// Piecewise-constant Hamiltonian segment, hbar = 1.
struct HamiltonianSegment {
    ComplexMatrix h;
    double duration = 0.0;
};

/// Propagator of a piecewise-constant Hamiltonian: ordered product, latest
/// segment leftmost, of exp(-i H_j t_j) via spectral decomposition.
inline UnitaryRealization propagator(
    const std::vector<HamiltonianSegment>& segments, Eigen::Index dim = 0) {
    if (segments.empty() && dim <= 0)
        throw InvalidInput("propagator: empty segment list needs a dimension");
    const Eigen::Index d = segments.empty() ? dim : segments.front().h.rows();
    ComplexMatrix u = ComplexMatrix::Identity(d, d);
    for (const auto& seg : segments) {
        require_hermitian(seg.h, "propagator segment");
        if (seg.h.rows() != d)
            throw InvalidInput("propagator: segment dimension mismatch");
        if (seg.duration < 0.0)
            throw InvalidInput("propagator: negative duration");
        const auto sys = diagonalize_hermitian(seg.h);
        ComplexMatrix phases = ComplexMatrix::Zero(d, d);
        for (Eigen::Index i = 0; i < d; ++i)
            phases(i, i) = std::exp(
                Complex(0.0, -sys.values[static_cast<std::size_t>(i)] *
                                  seg.duration));
        u = (sys.vectors * phases * sys.vectors.adjoint() * u).eval();
    }
    return UnitaryRealization(std::move(u));
}

enum class StandardChannelKind { bit_flip, phase_flip, bit_phase_flip, depolarizing };

inline const char* to_string(StandardChannelKind kind) {
    switch (kind) {
        case StandardChannelKind::bit_flip: return "bit_flip";
        case StandardChannelKind::phase_flip: return "phase_flip";
        case StandardChannelKind::bit_phase_flip: return "bit_phase_flip";
        case StandardChannelKind::depolarizing: return "depolarizing";
    }
    return "unknown";
}

/// The four textbook qubit channels with operator lists as conventionally
/// written: {sqrt(p) I, sqrt(1-p) sigma} for the flip family and
/// {sqrt(1-3p/4) I, sqrt(p)/2 sigma_xyz} for depolarizing.
inline KrausChannel standard_channel(StandardChannelKind kind, double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw InvalidInput("standard_channel: p must lie in [0, 1]");
    const ComplexMatrix eye = ComplexMatrix::Identity(2, 2);
    std::vector<ComplexMatrix> ops;
    switch (kind) {
        case StandardChannelKind::bit_flip:
            ops = {std::sqrt(p) * eye, std::sqrt(1.0 - p) * pauli_x()};
            break;
        case StandardChannelKind::phase_flip:
            ops = {std::sqrt(p) * eye, std::sqrt(1.0 - p) * pauli_z()};
            break;
        case StandardChannelKind::bit_phase_flip:
            ops = {std::sqrt(p) * eye, std::sqrt(1.0 - p) * pauli_y()};
            break;
        case StandardChannelKind::depolarizing:
            ops = {std::sqrt(1.0 - 0.75 * p) * eye,
                   0.5 * std::sqrt(p) * pauli_x(),
                   0.5 * std::sqrt(p) * pauli_y(),
                   0.5 * std::sqrt(p) * pauli_z()};
            break;
    }
    return KrausChannel(std::move(ops));
}

/// Relaxation channel; the negative control whose row sums exceed 1.
inline KrausChannel amplitude_damping(double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0))
        throw InvalidInput("amplitude_damping: gamma must lie in [0, 1]");
    ComplexMatrix e0(2, 2), e1(2, 2);
    e0 << 1, 0, 0, std::sqrt(1.0 - gamma);
    e1 << 0, std::sqrt(gamma), 0, 0;
    return KrausChannel({e0, e1});
}

inline UnitaryRealization haar_random_unitary(Eigen::Index dim, RngSeed seed) {
    if (dim < 1)
        throw InvalidInput("haar_random_unitary: dim must be >= 1");
    Rng rng(seed);
    return UnitaryRealization(detail::haar_unitary(dim, rng));
}

}  // namespace coollab

#endif
