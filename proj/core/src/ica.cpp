#include "coughsum/ica.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace coughsum {

namespace {

// (W W^T)^{-1/2} W via eigendecomposition of the symmetric product.
Eigen::MatrixXd symmetric_orthogonalize(const Eigen::MatrixXd& w) {
    Eigen::MatrixXd wwt = w * w.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (wwt + wwt.transpose()));
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw std::runtime_error("fastica: unmixing estimate lost rank");
    Eigen::VectorXd inv_sqrt = es.eigenvalues().cwiseSqrt().cwiseInverse();
    return es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose() * w;
}

double column_skewness(const Eigen::VectorXd& v) {
    const double mean = v.mean();
    const Eigen::ArrayXd d = v.array() - mean;
    const double m2 = d.square().mean();
    if (m2 <= 0.0) return 0.0;
    const double m3 = d.cube().mean();
    return m3 / std::pow(m2, 1.5);
}

struct Whitening {
    Eigen::MatrixXd whitened;      // frames x r, zero mean, identity covariance
    Eigen::MatrixXd half;          // C^{1/2}
    Eigen::MatrixXd inverse_half;  // C^{-1/2}
    Eigen::VectorXd mean;
};

Whitening compute_whitening(const SvdResult& svd) {
    const Eigen::MatrixXd& v = svd.activations;
    const auto frames = v.rows();
    const auto r = v.cols();
    if (r == 0 || frames < 2) throw std::invalid_argument("whiten: empty activations");

    Whitening w;
    w.mean = v.colwise().mean();
    Eigen::MatrixXd centered = v.rowwise() - w.mean.transpose();

    for (Eigen::Index j = 0; j < r; ++j) {
        const double var = centered.col(j).squaredNorm() / frames;
        if (var <= 1e-30)
            throw std::invalid_argument("whiten: constant activation column (degenerate spectrogram)");
    }

    Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(frames);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (cov + cov.transpose()));
    const double floor = 1e-12 * es.eigenvalues().maxCoeff();
    if (es.eigenvalues().minCoeff() <= floor)
        throw std::invalid_argument("whiten: activations span a degenerate subspace");

    Eigen::VectorXd sqrt_ev = es.eigenvalues().cwiseSqrt();
    w.half = es.eigenvectors() * sqrt_ev.asDiagonal() * es.eigenvectors().transpose();
    w.inverse_half =
        es.eigenvectors() * sqrt_ev.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
    w.whitened = centered * w.inverse_half;
    return w;
}

}  // namespace

Eigen::MatrixXd whiten_activations(const SvdResult& svd) {
    return compute_whitening(svd).whitened;
}

IcaResult fastica(const SvdResult& svd, const IcaOptions& opts) {
    const auto r = svd.activations.cols();
    const auto frames = svd.activations.rows();
    if (r < 2) throw std::invalid_argument("fastica: need at least 2 components");
    if (frames <= r) throw std::invalid_argument("fastica: need more frames than components");
    if (opts.max_iterations < 1) throw std::invalid_argument("fastica: max_iterations < 1");
    if (opts.tolerance <= 0.0) throw std::invalid_argument("fastica: tolerance must be positive");

    const Whitening wh = compute_whitening(svd);
    // Components in rows for the update loop.
    const Eigen::MatrixXd y = wh.whitened.transpose();  // r x M
    const double m = static_cast<double>(frames);

    Eigen::MatrixXd w;
    if (opts.random_init) {
        std::mt19937_64 gen(opts.seed);
        std::normal_distribution<double> dist(0.0, 1.0);
        w.resize(r, r);
        for (Eigen::Index i = 0; i < r; ++i)
            for (Eigen::Index j = 0; j < r; ++j) w(i, j) = dist(gen);
        w = symmetric_orthogonalize(w);
    } else {
        w = Eigen::MatrixXd::Identity(r, r);
    }

    IcaResult result;
    result.converged = false;
    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        const Eigen::MatrixXd s = w * y;  // current source estimates
        Eigen::MatrixXd w_new(r, r);
        if (opts.contrast == Contrast::cubic) {
            const Eigen::MatrixXd g = s.array().cube().matrix();
            const Eigen::VectorXd g_prime_mean =
                (3.0 * s.array().square()).rowwise().mean().matrix();
            w_new = g * y.transpose() / m - g_prime_mean.asDiagonal() * w;
        } else {
            const Eigen::MatrixXd g = s.array().tanh().matrix();
            const Eigen::VectorXd g_prime_mean =
                (1.0 - g.array().square()).rowwise().mean().matrix();
            w_new = g * y.transpose() / m - g_prime_mean.asDiagonal() * w;
        }
        w_new = symmetric_orthogonalize(w_new);

        // Alignment of each new unmixing vector with its previous value.
        const double min_diag = (w_new * w.transpose()).diagonal().cwiseAbs().minCoeff();
        w = w_new;
        if (1.0 - min_diag < opts.tolerance) {
            result.converged = true;
            ++it;
            break;
        }
    }
    result.iterations_used = it;

    // Fix signs so every component has non-negative skewness.
    Eigen::MatrixXd sources = y.transpose() * w.transpose();  // frames x r
    for (Eigen::Index j = 0; j < r; ++j) {
        if (column_skewness(sources.col(j)) < 0.0) w.row(j) = -w.row(j);
    }

    // Publish activations in uncentered whitened coordinates (the
    // per-component offsets W C^{-1/2} mu come along), and fold the
    // inverse transform into the spectra so that
    // spectra * activations^T == U S V^T exactly.
    result.unmixing = w;
    const Eigen::VectorXd offsets = w * (wh.inverse_half * wh.mean);
    result.activations = wh.whitened * w.transpose();
    result.activations.rowwise() += offsets.transpose();
    result.spectra = svd.spectra * svd.singular_values.asDiagonal() * wh.half * w.transpose();
    return result;
}

}  // namespace coughsum
