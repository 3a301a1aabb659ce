#include "coughsum/factorization.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace coughsum {

namespace {

constexpr unsigned kInitSeed = 0x5eed0u;  // fixed: results must be reproducible
constexpr int kMaxSweeps = 1500;
constexpr double kRitzTol = 1e-12;

Eigen::MatrixXd orthonormal_start(Eigen::Index dim, Eigen::Index block) {
    std::mt19937 gen(kInitSeed);
    std::normal_distribution<double> dist(0.0, 1.0);
    Eigen::MatrixXd q(dim, block);
    for (Eigen::Index j = 0; j < block; ++j)
        for (Eigen::Index i = 0; i < dim; ++i) q(i, j) = dist(gen);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(q);
    return qr.householderQ() * Eigen::MatrixXd::Identity(dim, block);
}

// Orthonormal basis for the dominant r-dimensional eigenspace of the
// symmetric PSD matrix G, by block power iteration with Rayleigh-Ritz
// extraction. Ritz values increase monotonically, so a stable plateau of
// the top r means the basis has converged.
Eigen::MatrixXd dominant_eigenspace(const Eigen::MatrixXd& gram, int r) {
    const Eigen::Index dim = gram.rows();
    const Eigen::Index block = std::min<Eigen::Index>(dim, 2 * r + 6);

    Eigen::MatrixXd q = orthonormal_start(dim, block);
    Eigen::VectorXd prev = Eigen::VectorXd::Zero(r);
    int stable = 0;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        Eigen::MatrixXd z = gram * q;
        Eigen::MatrixXd small = q.transpose() * z;
        small = 0.5 * (small + small.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(small);

        Eigen::VectorXd ritz(r);
        for (int i = 0; i < r; ++i) ritz(i) = es.eigenvalues()(block - 1 - i);

        const double scale = std::max(ritz(0), 1e-300);
        if (sweep > 0 && (ritz - prev).cwiseAbs().maxCoeff() <= kRitzTol * scale) {
            if (++stable >= 2) {
                Eigen::MatrixXd top(block, r);
                for (int i = 0; i < r; ++i) top.col(i) = es.eigenvectors().col(block - 1 - i);
                return q * top;
            }
        } else {
            stable = 0;
        }
        prev = ritz;

        Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
        q = qr.householderQ() * Eigen::MatrixXd::Identity(dim, block);
    }

    // Plateau never fully settled; return the best basis found.
    Eigen::MatrixXd z = gram * q;
    Eigen::MatrixXd small = q.transpose() * z;
    small = 0.5 * (small + small.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(small);
    Eigen::MatrixXd top(block, r);
    for (int i = 0; i < r; ++i) top.col(i) = es.eigenvectors().col(block - 1 - i);
    return q * top;
}

void apply_sign_convention(Eigen::MatrixXd& spectra, Eigen::MatrixXd& activations) {
    for (Eigen::Index j = 0; j < spectra.cols(); ++j) {
        Eigen::Index imax = 0;
        spectra.col(j).cwiseAbs().maxCoeff(&imax);
        if (spectra(imax, j) < 0.0) {
            spectra.col(j) = -spectra.col(j);
            activations.col(j) = -activations.col(j);
        }
    }
}

}  // namespace

SvdResult truncated_svd(const Eigen::MatrixXd& matrix, int rank) {
    if (!matrix.allFinite()) throw std::invalid_argument("truncated_svd: non-finite input");
    if (rank < 0) throw std::invalid_argument("truncated_svd: negative rank");

    const Eigen::Index rows = matrix.rows();
    const Eigen::Index cols = matrix.cols();
    const auto max_rank = static_cast<int>(std::min(rows, cols));
    if (rank > max_rank) {
        std::fprintf(stderr, "coughsum: warning: rank %d exceeds matrix dimensions, clamped to %d\n",
                     rank, max_rank);
        rank = max_rank;
    }

    SvdResult result;
    result.rank = rank;
    if (rank == 0) {
        result.spectra.resize(rows, 0);
        result.singular_values.resize(0);
        result.activations.resize(cols, 0);
        return result;
    }

    // Iterate on the smaller Gram matrix; the long side is touched only
    // twice (forming the Gram product and recovering the other factor).
    const bool left = rows <= cols;
    Eigen::MatrixXd basis;  // rows x r or cols x r, orthonormal
    if (left) {
        Eigen::MatrixXd gram = matrix * matrix.transpose();
        basis = dominant_eigenspace(gram, rank);
    } else {
        Eigen::MatrixXd gram = matrix.transpose() * matrix;
        basis = dominant_eigenspace(gram, rank);
    }

    // Project onto the converged subspace and finish with a dense SVD of
    // the small r x r core, which restores machine-precision
    // orthonormality on both sides. With X^T B = Q R the left case gives
    // X ~ B R^T Q^T, the right case X ~ Q R B^T.
    Eigen::MatrixXd projected =
        left ? Eigen::MatrixXd(matrix.transpose() * basis) : Eigen::MatrixXd(matrix * basis);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(projected);
    Eigen::MatrixXd q2 =
        qr.householderQ() * Eigen::MatrixXd::Identity(projected.rows(), rank);
    Eigen::MatrixXd rfac = qr.matrixQR().topRows(rank).triangularView<Eigen::Upper>();

    if (left) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(rfac.transpose(),
                                              Eigen::ComputeFullU | Eigen::ComputeFullV);
        result.spectra = basis * svd.matrixU();
        result.activations = q2 * svd.matrixV();
        result.singular_values = svd.singularValues();
    } else {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(rfac, Eigen::ComputeFullU | Eigen::ComputeFullV);
        result.spectra = q2 * svd.matrixU();
        result.activations = basis * svd.matrixV();
        result.singular_values = svd.singularValues();
    }

    apply_sign_convention(result.spectra, result.activations);
    return result;
}

SvdResult truncated_svd(const MagnitudeSpectrogram& spec, int rank) {
    return truncated_svd(spec.values, rank);
}

Eigen::MatrixXd reconstruct(const SvdResult& svd) {
    if (svd.rank == 0)
        return Eigen::MatrixXd::Zero(svd.spectra.rows(), svd.activations.rows());
    return svd.spectra * svd.singular_values.asDiagonal() * svd.activations.transpose();
}

}  // namespace coughsum
