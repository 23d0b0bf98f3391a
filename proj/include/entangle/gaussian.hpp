#pragma once

// Dense 6x6 Gaussian-state machinery. Quadrature order is fixed everywhere as
// (X+, Y+, X-, Y-, Xb, Yb); vacuum covariance is I/2.

#include <Eigen/Dense>

#include <array>

namespace entangle {

using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat4 = Eigen::Matrix<double, 4, 4>;
using Mat2 = Eigen::Matrix<double, 2, 2>;
using Vec6 = Eigen::Matrix<double, 6, 1>;

using DriftMatrix = Mat6;
using DiffusionMatrix = Mat6;

/// Lyapunov residual bound: ||R V + V R^T + D||_F <= kLyapunovResidualTol ||D||_F.
inline constexpr double kLyapunovResidualTol = 1e-9;
/// Eigen/Routh-Hurwitz disagreement is tolerated only this close to the boundary
/// (same units as R).
inline constexpr double kStabilityBoundaryBand = 1e-9;

struct StabilityReport {
    bool stable = false;        ///< all eigenvalues have negative real part
    double max_re_eig = 0.0;    ///< same units as R
    bool routh_hurwitz = false; ///< independent verdict from the characteristic polynomial
};

struct GaussianState {
    Mat6 covariance = Mat6::Zero();
    bool stable = false;
    double max_re_eig = 0.0;  ///< rad/s
};

enum class ModePair { PlusMinus, PlusB, MinusB };

/// V4 = [V1, V12; V12^T, V2] for the two selected modes (first-named first).
struct TwoModeCM {
    Mat4 matrix = Mat4::Zero();

    Mat2 first() const { return matrix.topLeftCorner<2, 2>(); }
    Mat2 second() const { return matrix.bottomRightCorner<2, 2>(); }
    Mat2 cross() const { return matrix.topRightCorner<2, 2>(); }
};

/// Eigenvalue-based stability verdict, cross-checked with Routh-Hurwitz.
/// Throws Error(Numerical) if the eigensolver fails or the two verdicts
/// disagree farther than kStabilityBoundaryBand from the boundary.
StabilityReport stability(const DriftMatrix& drift);

/// Coefficients c[0..5] of det(lambda I - A) = lambda^6 + c5 lambda^5 + ... + c0
/// (Faddeev-LeVerrier; no eigenvalues involved).
std::array<double, 6> characteristic_polynomial(const Mat6& a);

/// True iff every root of the monic degree-6 polynomial has negative real
/// part, judged from the first column of the Routh array. A zero pivot counts
/// as not strictly stable.
bool routh_hurwitz_stable(const std::array<double, 6>& coeffs);

/// Solves R V + V R^T = -D for symmetric V. R must be strictly stable
/// (Error(NoSteadyState) otherwise). The 21 independent entries of V are solved
/// directly with full-pivot LU and one step of iterative refinement.
/// Throws Error(Numerical) on a singular system or when the residual exceeds
/// kLyapunovResidualTol.
Mat6 solve_lyapunov(const DriftMatrix& drift, const DiffusionMatrix& diffusion);

/// ||R V + V R^T + D||_F / ||D||_F.
double lyapunov_relative_residual(const Mat6& drift, const Mat6& v, const Mat6& diffusion);

TwoModeCM reduce_two_mode(const Mat6& covariance, ModePair pair);

/// Smallest symplectic eigenvalue of the partial transpose of V4.
double partial_transpose_symplectic_min(const TwoModeCM& v4);

/// E_N = max[0, -ln(2 eta-)]. Throws Error(InvalidState) for covariance
/// matrices that cannot be physical (Sigma^2 - 4 det V4 < -1e-10).
double log_negativity(const TwoModeCM& v4);

/// Minimum eigenvalue of V + (i/2) J for a 2n x 2n covariance matrix, with J
/// the direct sum of [[0, 1], [-1, 0]] blocks. Physical states give >= 0.
double physicality_margin(const Eigen::MatrixXd& covariance);

}  // namespace entangle
