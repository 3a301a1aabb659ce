#pragma once

#include <Eigen/Dense>

#include "coughsum/audio_io.hpp"

namespace coughsum {

enum class Window {
    hann,
    hamming,
    rectangular,
};

struct StftParams {
    int frame_size = 2048;  // must be a power of two
    int hop_size = 512;     // 0 < hop <= frame
    Window window = Window::hann;

    void validate() const;  // throws std::invalid_argument
};

// Magnitude STFT: rows are frequency bins 0..N/2, columns are frames.
// All entries are finite and >= 0.
struct MagnitudeSpectrogram {
    Eigen::MatrixXd values;
    StftParams params;
    int sample_rate = 0;

    Eigen::Index bins() const { return values.rows(); }
    Eigen::Index frames() const { return values.cols(); }
};

// Frame m covers samples [m*hop, m*hop + frame); frames that would run
// past the end of the signal are dropped, so the count is
// floor((len - frame) / hop) + 1. Each column holds |DFT(w .* x_frame)|
// for bins 0..N/2. Throws if the buffer is shorter than one frame.
MagnitudeSpectrogram stft_magnitude(const AudioBuffer& buf, const StftParams& params = {});

// Window samples w(0..N-1) for the given window type (periodic form, so
// w has period N when tiled).
std::vector<double> window_samples(Window window, int frame_size);

// Center time of frame m in seconds: (m*hop + frame/2) / sample_rate.
double frame_to_seconds(Eigen::Index frame, const StftParams& params, int sample_rate);

// Frame index -> seconds mapping carried alongside detections.
struct FrameTimeMap {
    StftParams params;
    int sample_rate = 0;

    double at(Eigen::Index frame) const { return frame_to_seconds(frame, params, sample_rate); }
};

}  // namespace coughsum
