#pragma once

#include <Eigen/Dense>

#include "coughsum/spectrogram.hpp"

namespace coughsum {

// Rank-r factorization X ~ spectra * diag(singular_values) * activations^T.
// Columns of `spectra` (bins x r) are frequency-basis spectra, columns of
// `activations` (frames x r) are time-activation functions; both sets are
// orthonormal. Singular values are sorted descending. Each spectrum/
// activation pair is sign-flipped so the largest-magnitude entry of the
// spectrum column is positive, which makes results reproducible.
struct SvdResult {
    Eigen::MatrixXd spectra;
    Eigen::VectorXd singular_values;
    Eigen::MatrixXd activations;
    int rank = 0;
};

// Truncated SVD of an arbitrary matrix (rows play the role of bins).
// Deterministic: fixed internal seed and iteration order. If rank exceeds
// min(rows, cols) it is clamped with a warning on stderr. Throws on
// non-finite input.
SvdResult truncated_svd(const Eigen::MatrixXd& matrix, int rank);

SvdResult truncated_svd(const MagnitudeSpectrogram& spec, int rank);

// spectra * diag(singular_values) * activations^T; the zero matrix for
// rank 0.
Eigen::MatrixXd reconstruct(const SvdResult& svd);

}  // namespace coughsum
