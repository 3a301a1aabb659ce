#include "coughsum/spectrogram.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

namespace coughsum {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

struct PlanDeleter {
    void operator()(fftw_plan p) const { fftw_destroy_plan(p); }
};

}  // namespace

void StftParams::validate() const {
    if (!is_power_of_two(frame_size))
        throw std::invalid_argument("stft: frame_size must be a power of two");
    if (hop_size <= 0 || hop_size > frame_size)
        throw std::invalid_argument("stft: need 0 < hop_size <= frame_size");
}

std::vector<double> window_samples(Window window, int frame_size) {
    std::vector<double> w(static_cast<std::size_t>(frame_size), 1.0);
    const double step = 2.0 * M_PI / frame_size;
    switch (window) {
        case Window::hann:
            for (int n = 0; n < frame_size; ++n) w[n] = 0.5 * (1.0 - std::cos(step * n));
            break;
        case Window::hamming:
            for (int n = 0; n < frame_size; ++n) w[n] = 0.54 - 0.46 * std::cos(step * n);
            break;
        case Window::rectangular:
            break;
    }
    return w;
}

MagnitudeSpectrogram stft_magnitude(const AudioBuffer& buf, const StftParams& params) {
    params.validate();
    const int N = params.frame_size;
    const int H = params.hop_size;
    const auto len = static_cast<Eigen::Index>(buf.samples.size());
    if (len < N) throw std::invalid_argument("stft: buffer shorter than one frame");

    const Eigen::Index n_frames = (len - N) / H + 1;
    const Eigen::Index n_bins = N / 2 + 1;
    const std::vector<double> w = window_samples(params.window, N);

    MagnitudeSpectrogram spec;
    spec.params = params;
    spec.sample_rate = buf.sample_rate;
    spec.values.resize(n_bins, n_frames);

    double* in = fftw_alloc_real(static_cast<std::size_t>(N));
    fftw_complex* out = fftw_alloc_complex(static_cast<std::size_t>(n_bins));
    // FFTW_ESTIMATE keeps planning cheap and reproducible.
    std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDeleter> plan(
        fftw_plan_dft_r2c_1d(N, in, out, FFTW_ESTIMATE));
    if (!plan) {
        fftw_free(in);
        fftw_free(out);
        throw std::runtime_error("stft: FFT planning failed");
    }

    for (Eigen::Index m = 0; m < n_frames; ++m) {
        const double* x = buf.samples.data() + m * H;
        for (int n = 0; n < N; ++n) in[n] = w[n] * x[n];
        fftw_execute(plan.get());
        for (Eigen::Index k = 0; k < n_bins; ++k)
            spec.values(k, m) = std::hypot(out[k][0], out[k][1]);
    }

    fftw_free(in);
    fftw_free(out);
    return spec;
}

double frame_to_seconds(Eigen::Index frame, const StftParams& params, int sample_rate) {
    if (frame < 0) throw std::invalid_argument("frame_to_seconds: negative frame index");
    if (sample_rate <= 0) throw std::invalid_argument("frame_to_seconds: invalid sample rate");
    return (static_cast<double>(frame) * params.hop_size + params.frame_size / 2.0) / sample_rate;
}

}  // namespace coughsum
