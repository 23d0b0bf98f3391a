#include "entangle/gaussian.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "entangle/errors.hpp"

namespace entangle {
namespace {

constexpr int kDim = 6;
constexpr int kUnknowns = kDim * (kDim + 1) / 2;

using SymSystem = Eigen::Matrix<double, kUnknowns, kUnknowns>;
using SymVector = Eigen::Matrix<double, kUnknowns, 1>;

// Row-major packing of the upper triangle, (0,0), (0,1), ..., (5,5).
constexpr int packed_index(int i, int j) {
    if (i > j) {
        std::swap(i, j);
    }
    return i * kDim - i * (i - 1) / 2 + (j - i);
}

SymVector pack(const Mat6& m) {
    SymVector v;
    for (int i = 0; i < kDim; ++i) {
        for (int j = i; j < kDim; ++j) {
            v(packed_index(i, j)) = m(i, j);
        }
    }
    return v;
}

Mat6 unpack(const SymVector& v) {
    Mat6 m;
    for (int i = 0; i < kDim; ++i) {
        for (int j = i; j < kDim; ++j) {
            m(i, j) = m(j, i) = v(packed_index(i, j));
        }
    }
    return m;
}

// Matrix of the map V -> R V + V R^T restricted to symmetric V.
SymSystem lyapunov_operator(const Mat6& r) {
    SymSystem op;
    for (int i = 0; i < kDim; ++i) {
        for (int j = i; j < kDim; ++j) {
            Mat6 basis = Mat6::Zero();
            basis(i, j) = 1.0;
            basis(j, i) = 1.0;
            const Mat6 image = r * basis + basis * r.transpose();
            op.col(packed_index(i, j)) = pack(image);
        }
    }
    return op;
}

std::string describe(const Mat6& m) {
    std::ostringstream os;
    os.precision(17);
    os << m;
    return os.str();
}

}  // namespace

std::array<double, 6> characteristic_polynomial(const Mat6& a) {
    // M_k = A M_{k-1} + c_{n-k+1} I,  c_{n-k} = -tr(A M_k) / k
    std::array<double, 6> c{};
    Mat6 m = Mat6::Zero();
    double previous = 1.0;  // c_n
    for (int k = 1; k <= kDim; ++k) {
        m = a * m + previous * Mat6::Identity();
        const double next = -(a * m).trace() / k;
        c[static_cast<std::size_t>(kDim - k)] = next;
        previous = next;
    }
    return c;
}

bool routh_hurwitz_stable(const std::array<double, 6>& coeffs) {
    // Descending powers: 1, c5, c4, ..., c0.
    std::array<double, 7> a{};
    a[0] = 1.0;
    for (int k = 1; k <= kDim; ++k) {
        a[static_cast<std::size_t>(k)] = coeffs[static_cast<std::size_t>(kDim - k)];
    }

    constexpr int width = 4;
    std::array<double, width> upper{};
    std::array<double, width> lower{};
    for (int j = 0; j < width; ++j) {
        const int even = 2 * j;
        const int odd = 2 * j + 1;
        upper[static_cast<std::size_t>(j)] = even <= kDim ? a[static_cast<std::size_t>(even)] : 0.0;
        lower[static_cast<std::size_t>(j)] = odd <= kDim ? a[static_cast<std::size_t>(odd)] : 0.0;
    }

    for (int row = 1; row <= kDim; ++row) {
        if (!(lower[0] > 0.0)) {
            return false;
        }
        std::array<double, width> next{};
        for (int j = 0; j + 1 < width; ++j) {
            next[static_cast<std::size_t>(j)] =
                (lower[0] * upper[static_cast<std::size_t>(j + 1)] - upper[0] * lower[static_cast<std::size_t>(j + 1)]) /
                lower[0];
        }
        upper = lower;
        lower = next;
    }
    return true;
}

StabilityReport stability(const DriftMatrix& drift) {
    if (!drift.allFinite()) {
        throw Error(ErrorKind::Numerical, "stability: drift matrix has non-finite entries");
    }
    Eigen::EigenSolver<Mat6> solver(drift, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::Numerical, "stability: eigenvalue iteration did not converge for\n" + describe(drift));
    }

    StabilityReport report;
    report.max_re_eig = solver.eigenvalues().real().maxCoeff();
    report.stable = report.max_re_eig < 0.0;
    report.routh_hurwitz = routh_hurwitz_stable(characteristic_polynomial(drift));

    if (report.stable != report.routh_hurwitz && std::abs(report.max_re_eig) >= kStabilityBoundaryBand) {
        std::ostringstream os;
        os.precision(17);
        os << "stability: eigenvalues (max Re = " << report.max_re_eig
           << ") and Routh-Hurwitz disagree away from the boundary for\n"
           << drift;
        throw Error(ErrorKind::Numerical, os.str());
    }
    return report;
}

double lyapunov_relative_residual(const Mat6& drift, const Mat6& v, const Mat6& diffusion) {
    const double residual = (drift * v + v * drift.transpose() + diffusion).norm();
    const double scale = diffusion.norm();
    return scale > 0.0 ? residual / scale : residual;
}

Mat6 solve_lyapunov(const DriftMatrix& drift, const DiffusionMatrix& diffusion) {
    const StabilityReport report = stability(drift);
    if (!report.stable) {
        std::ostringstream os;
        os << "solve_lyapunov: drift is not strictly stable (max Re eig = " << report.max_re_eig << ")";
        throw Error(ErrorKind::NoSteadyState, os.str());
    }
    if (!diffusion.allFinite()) {
        throw Error(ErrorKind::Numerical, "solve_lyapunov: diffusion matrix has non-finite entries");
    }

    const SymSystem op = lyapunov_operator(drift);
    const Eigen::FullPivLU<SymSystem> lu(op);
    const double rcond = lu.rcond();
    if (!lu.isInvertible() || !(rcond > 1e-15)) {
        std::ostringstream os;
        os << "solve_lyapunov: singular vectorized system (rcond ~ " << rcond << ")";
        throw Error(ErrorKind::Numerical, os.str());
    }

    const SymVector rhs = -pack(diffusion);
    SymVector x = lu.solve(rhs);
    x += lu.solve(rhs - op * x);

    Mat6 v = unpack(x);
    const double rel = lyapunov_relative_residual(drift, v, diffusion);
    if (!(rel <= kLyapunovResidualTol)) {
        std::ostringstream os;
        os << "solve_lyapunov: residual " << rel << " exceeds " << kLyapunovResidualTol << " (rcond ~ " << rcond
           << ")";
        throw Error(ErrorKind::Numerical, os.str());
    }
    return v;
}

TwoModeCM reduce_two_mode(const Mat6& covariance, ModePair pair) {
    std::array<int, 2> modes{};
    switch (pair) {
        case ModePair::PlusMinus: modes = {0, 1}; break;
        case ModePair::PlusB: modes = {0, 2}; break;
        case ModePair::MinusB: modes = {1, 2}; break;
    }
    const std::array<int, 4> idx{2 * modes[0], 2 * modes[0] + 1, 2 * modes[1], 2 * modes[1] + 1};
    TwoModeCM out;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            out.matrix(i, j) = covariance(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
        }
    }
    return out;
}

double partial_transpose_symplectic_min(const TwoModeCM& v4) {
    const double sigma = v4.first().determinant() + v4.second().determinant() - 2.0 * v4.cross().determinant();
    const double det = v4.matrix.determinant();
    double disc = sigma * sigma - 4.0 * det;
    if (disc < -1e-10 * std::max(1.0, sigma * sigma)) {
        std::ostringstream os;
        os << "log_negativity: Sigma^2 - 4 det V4 = " << disc << " < 0; not a covariance matrix";
        throw Error(ErrorKind::InvalidState, os.str());
    }
    disc = std::max(disc, 0.0);
    const double eta_sq = 0.5 * (sigma - std::sqrt(disc));
    if (!(eta_sq > 0.0)) {
        throw Error(ErrorKind::InvalidState, "log_negativity: non-positive symplectic eigenvalue");
    }
    return std::sqrt(eta_sq);
}

double log_negativity(const TwoModeCM& v4) {
    const double twice_eta = 2.0 * partial_transpose_symplectic_min(v4);
    // Rounding overshoots just below 1 are not entanglement.
    if (twice_eta - 1.0 >= -1e-10) {
        return 0.0;
    }
    return -std::log(twice_eta);
}

double physicality_margin(const Eigen::MatrixXd& covariance) {
    const Eigen::Index n = covariance.rows();
    if (n != covariance.cols() || n % 2 != 0 || n == 0) {
        throw Error(ErrorKind::InvalidState, "physicality_margin: need a square 2n x 2n matrix");
    }
    Eigen::MatrixXcd m = covariance.cast<std::complex<double>>();
    for (Eigen::Index k = 0; k < n; k += 2) {
        m(k, k + 1) += std::complex<double>(0.0, 0.5);
        m(k + 1, k) -= std::complex<double>(0.0, 0.5);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::Numerical, "physicality_margin: eigensolver failed");
    }
    return solver.eigenvalues().minCoeff();
}

}  // namespace entangle
