#ifndef COOLLAB_MATRIX_HPP
#define COOLLAB_MATRIX_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace coollab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Invalid argument to an operation (bad dimension, out-of-range parameter,
/// malformed input file, ...). CLI maps this family to exit code 2.
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A matrix handed in as a quantum state fails the density-matrix contract.
struct InvalidState : InvalidInput {
    using InvalidInput::InvalidInput;
};

/// A Kraus set was rejected because its completeness defect exceeds tolerance.
struct RejectedChannel : InvalidInput {
    using InvalidInput::InvalidInput;
};

namespace tol {
// Centralized defaults; every checking routine takes the tolerance as a
// defaulted argument so callers can override per call.
inline constexpr double hermitian = 1e-12;
inline constexpr double trace = 1e-12;
inline constexpr double eigenvalue_clamp = 1e-10;
inline constexpr double unitary = 1e-10;
inline constexpr double cptp = 1e-10;
inline constexpr double theorem = 1e-9;
}  // namespace tol

/// Max absolute entry. All defect norms in this library are basis-explicit
/// entrywise maxima; dimensions stay <= 64 so nothing sharper is needed.
inline double max_abs(const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double hermiticity_defect(const ComplexMatrix& m) {
    return max_abs(m - m.adjoint());
}

inline double unitarity_defect(const ComplexMatrix& m) {
    return max_abs(m.adjoint() * m -
                   ComplexMatrix::Identity(m.cols(), m.cols()));
}

inline bool all_finite(const ComplexMatrix& m) {
    return m.allFinite();
}

inline void require_square(const ComplexMatrix& m, const std::string& what) {
    if (m.rows() != m.cols())
        throw InvalidInput(what + ": matrix is not square (" +
                           std::to_string(m.rows()) + "x" +
                           std::to_string(m.cols()) + ")");
}

inline void require_hermitian(const ComplexMatrix& m, const std::string& what,
                              double tolerance = tol::hermitian) {
    require_square(m, what);
    const double defect = hermiticity_defect(m);
    if (defect > tolerance)
        throw InvalidInput(what + ": Hermiticity defect " +
                           std::to_string(defect) + " exceeds tolerance");
}

// Pauli matrices and the 2x2 identity.
inline ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline ComplexMatrix pauli_y() {
    ComplexMatrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

inline ComplexMatrix pauli_z() {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

}  // namespace coollab

#endif
