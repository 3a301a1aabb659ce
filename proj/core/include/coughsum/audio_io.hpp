#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

namespace coughsum {

// Mono audio signal. Samples are nominally in [-1, 1]; intermediate
// processing may exceed that range, writers clamp.
struct AudioBuffer {
    std::vector<double> samples;
    int sample_rate = 0;

    double duration_s() const {
        return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
    }
};

// Reads a RIFF/WAV file (PCM16 or IEEE float32). Multichannel input is
// averaged to mono; 16-bit samples map to q/32768 so that -32768 -> -1.0.
// Throws std::runtime_error on unreadable files, unsupported encodings,
// or zero-length audio.
AudioBuffer load_audio(const std::filesystem::path& path);

// Band-limited sample-rate conversion (windowed-sinc). Output duration
// matches the input within one sample period. Identity when the rates
// already agree.
AudioBuffer resample(const AudioBuffer& buf, int target_rate);

// Writes 16-bit PCM WAV, little-endian. Out-of-range samples are clamped
// to [-1, 1]; returns the number of clamped samples so callers can warn.
// Throws on I/O failure or an empty buffer.
std::size_t save_audio(const AudioBuffer& buf, const std::filesystem::path& path);

}  // namespace coughsum
