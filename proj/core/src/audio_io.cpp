#include "coughsum/audio_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace coughsum {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatIeeeFloat = 3;

std::uint16_t read_u16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void append_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void append_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

// Zeroth-order modified Bessel function, power series.
double bessel_i0(double x) {
    double sum = 1.0;
    double term = 1.0;
    const double half_x = x / 2.0;
    for (int k = 1; k < 64; ++k) {
        term *= (half_x / k) * (half_x / k);
        sum += term;
        if (term < sum * 1e-18) break;
    }
    return sum;
}

}  // namespace

AudioBuffer load_audio(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open audio file: " + path.string());

    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (bytes.size() < 44 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
        throw std::runtime_error("not a RIFF/WAVE file: " + path.string());
    }

    std::uint16_t format = 0;
    std::uint16_t channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t bits = 0;
    const std::uint8_t* data = nullptr;
    std::size_t data_size = 0;
    bool have_fmt = false;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
        const std::uint32_t chunk_size = read_u32(bytes.data() + pos + 4);
        const std::size_t body = pos + 8;
        if (body + chunk_size > bytes.size()) break;
        if (std::memcmp(id, "fmt ", 4) == 0 && chunk_size >= 16) {
            format = read_u16(bytes.data() + body);
            channels = read_u16(bytes.data() + body + 2);
            sample_rate = read_u32(bytes.data() + body + 4);
            bits = read_u16(bytes.data() + body + 14);
            have_fmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            data = bytes.data() + body;
            data_size = chunk_size;
        }
        pos = body + chunk_size + (chunk_size & 1);  // chunks are word-aligned
    }

    if (!have_fmt || data == nullptr)
        throw std::runtime_error("missing fmt/data chunk: " + path.string());
    if (channels == 0 || sample_rate == 0)
        throw std::runtime_error("malformed fmt chunk: " + path.string());

    const bool pcm16 = format == kFormatPcm && bits == 16;
    const bool f32 = format == kFormatIeeeFloat && bits == 32;
    if (!pcm16 && !f32)
        throw std::runtime_error("unsupported WAV encoding (need PCM16 or float32): " +
                                 path.string());

    const std::size_t bytes_per_sample = bits / 8;
    const std::size_t n_frames = data_size / (bytes_per_sample * channels);
    if (n_frames == 0) throw std::runtime_error("zero-length audio: " + path.string());

    AudioBuffer buf;
    buf.sample_rate = static_cast<int>(sample_rate);
    buf.samples.resize(n_frames);
    const double inv_channels = 1.0 / channels;

    for (std::size_t i = 0; i < n_frames; ++i) {
        double acc = 0.0;
        for (std::uint16_t c = 0; c < channels; ++c) {
            const std::uint8_t* p = data + (i * channels + c) * bytes_per_sample;
            if (pcm16) {
                std::int16_t q;
                std::memcpy(&q, p, 2);
                acc += q / 32768.0;
            } else {
                float f;
                std::memcpy(&f, p, 4);
                acc += std::clamp(static_cast<double>(f), -1.0, 1.0);
            }
        }
        buf.samples[i] = acc * inv_channels;
    }

    for (double s : buf.samples) {
        if (!std::isfinite(s)) throw std::runtime_error("non-finite sample in " + path.string());
    }
    return buf;
}

AudioBuffer resample(const AudioBuffer& buf, int target_rate) {
    if (target_rate <= 0) throw std::invalid_argument("resample: target rate must be positive");
    if (buf.sample_rate <= 0) throw std::invalid_argument("resample: invalid source rate");
    if (target_rate == buf.sample_rate) return buf;

    const std::size_t n_in = buf.samples.size();
    const double ratio = static_cast<double>(target_rate) / buf.sample_rate;
    const std::size_t n_out = static_cast<std::size_t>(std::llround(n_in * ratio));

    // Kaiser-windowed sinc, cutoff just below the narrower Nyquist.
    constexpr int kHalfWidth = 48;
    constexpr double kBeta = 10.0;
    const double cutoff = 0.945 * std::min(1.0, ratio);
    const double i0_beta = bessel_i0(kBeta);

    AudioBuffer out;
    out.sample_rate = target_rate;
    out.samples.resize(n_out);

    for (std::size_t n = 0; n < n_out; ++n) {
        const double t = n / ratio;  // position in input samples
        const auto center = static_cast<long long>(std::floor(t));
        double acc = 0.0;
        double norm = 0.0;
        for (long long k = center - kHalfWidth + 1; k <= center + kHalfWidth; ++k) {
            const double u = t - k;
            const double frac = u / kHalfWidth;
            if (frac <= -1.0 || frac >= 1.0) continue;
            const double window = bessel_i0(kBeta * std::sqrt(1.0 - frac * frac)) / i0_beta;
            const double x = cutoff * u;
            const double sinc = x == 0.0 ? 1.0 : std::sin(M_PI * x) / (M_PI * x);
            const double h = cutoff * sinc * window;
            norm += h;
            if (k >= 0 && k < static_cast<long long>(n_in)) acc += buf.samples[k] * h;
        }
        out.samples[n] = norm > 0.0 ? acc / norm : 0.0;
    }
    return out;
}

std::size_t save_audio(const AudioBuffer& buf, const std::filesystem::path& path) {
    if (buf.samples.empty()) throw std::invalid_argument("save_audio: empty buffer");
    if (buf.sample_rate <= 0) throw std::invalid_argument("save_audio: invalid sample rate");

    const std::uint32_t n = static_cast<std::uint32_t>(buf.samples.size());
    const std::uint32_t data_size = n * 2;

    std::vector<std::uint8_t> out;
    out.reserve(44 + data_size);
    out.insert(out.end(), {'R', 'I', 'F', 'F'});
    append_u32(out, 36 + data_size);
    out.insert(out.end(), {'W', 'A', 'V', 'E'});
    out.insert(out.end(), {'f', 'm', 't', ' '});
    append_u32(out, 16);
    append_u16(out, kFormatPcm);
    append_u16(out, 1);  // mono
    append_u32(out, static_cast<std::uint32_t>(buf.sample_rate));
    append_u32(out, static_cast<std::uint32_t>(buf.sample_rate) * 2);
    append_u16(out, 2);
    append_u16(out, 16);
    out.insert(out.end(), {'d', 'a', 't', 'a'});
    append_u32(out, data_size);

    std::size_t clamped = 0;
    for (double s : buf.samples) {
        if (!std::isfinite(s)) throw std::invalid_argument("save_audio: non-finite sample");
        double v = s;
        if (v < -1.0 || v > 1.0) {
            v = std::clamp(v, -1.0, 1.0);
            ++clamped;
        }
        auto q = static_cast<long>(std::lrint(v * 32768.0));
        q = std::clamp(q, -32768L, 32767L);
        append_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
    }

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
    f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!f) throw std::runtime_error("short write: " + path.string());
    return clamped;
}

}  // namespace coughsum
