#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "coughsum/factorization.hpp"

namespace coughsum {

enum class Contrast {
    cubic,  // g(u) = u^3, targets kurtosis directly
    tanh_,
};

struct IcaOptions {
    int max_iterations = 1000;
    double tolerance = 1e-6;
    Contrast contrast = Contrast::cubic;
    bool random_init = false;  // default: identity start, fully reproducible
    std::uint64_t seed = 0;    // used only when random_init is set
};

// Result of rotating the decorrelated time-activation functions into
// statistically independent ones. `activations` (frames x r) are the
// whitened activations in uncentered coordinates transformed by the
// unmixing matrix; each column is sign-normalized so its skewness is
// >= 0. `spectra` (bins x r) carries the inverse transform back to the
// frequency side, so spectra * activations^T reproduces the rank-r
// reconstruction exactly.
struct IcaResult {
    Eigen::MatrixXd activations;
    Eigen::MatrixXd spectra;
    Eigen::MatrixXd unmixing;  // r x r, orthogonal
    int iterations_used = 0;
    bool converged = false;
};

// Centers and decorrelates the SVD activations: every column of the
// result has mean 0 and variance 1, and distinct columns are
// uncorrelated. Throws if any activation column is constant (degenerate
// spectrogram).
Eigen::MatrixXd whiten_activations(const SvdResult& svd);

// FastICA fixed-point iteration with symmetric orthogonalization.
// Deterministic for fixed input and options. Non-convergence within
// max_iterations is reported via the converged flag, not an error.
// Requires rank >= 2 and more frames than components.
IcaResult fastica(const SvdResult& svd, const IcaOptions& opts = {});

}  // namespace coughsum
