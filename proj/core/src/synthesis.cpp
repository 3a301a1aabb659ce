#include "coughsum/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace coughsum {

namespace {

double rms(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc / static_cast<double>(v.size()));
}

// Background bed of at least n samples, looping the source with a short
// crossfade when it is too short.
std::vector<double> tile_background(const std::vector<double>& src, std::size_t n) {
    if (src.empty()) throw std::invalid_argument("synthesize_scene: empty background");
    if (src.size() >= n) return {src.begin(), src.begin() + static_cast<std::ptrdiff_t>(n)};

    const std::size_t fade = std::min<std::size_t>(src.size() / 4, 4410);
    std::vector<double> out;
    out.reserve(n + src.size());
    out.insert(out.end(), src.begin(), src.end());
    while (out.size() < n) {
        const std::size_t base = out.size() - fade;
        for (std::size_t i = 0; i < fade; ++i) {
            const double t = static_cast<double>(i + 1) / static_cast<double>(fade + 1);
            out[base + i] = out[base + i] * (1.0 - t) + src[i] * t;
        }
        out.insert(out.end(), src.begin() + static_cast<std::ptrdiff_t>(fade), src.end());
    }
    out.resize(n);
    return out;
}

struct PlacedEvent {
    std::size_t onset = 0;
    std::size_t length = 0;
};

bool far_enough(const std::vector<PlacedEvent>& placed, std::size_t onset, std::size_t length,
                std::size_t gap) {
    for (const PlacedEvent& p : placed) {
        const bool before = onset + length + gap <= p.onset;
        const bool after = p.onset + p.length + gap <= onset;
        if (!before && !after) return false;
    }
    return true;
}

std::vector<AudioBuffer> load_clip_dir(const std::filesystem::path& dir, int sample_rate) {
    if (!std::filesystem::is_directory(dir))
        throw std::runtime_error("clip directory not found: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".wav")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw std::runtime_error("no .wav clips in " + dir.string());

    std::vector<AudioBuffer> clips;
    clips.reserve(files.size());
    for (const auto& f : files) {
        AudioBuffer clip = load_audio(f);
        if (clip.sample_rate != sample_rate) clip = resample(clip, sample_rate);
        clips.push_back(std::move(clip));
    }
    return clips;
}

std::vector<AudioBuffer> burst_clip_set(std::uint64_t seed, int sample_rate, int variants) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> duration(0.3, 0.55);
    std::vector<AudioBuffer> clips;
    clips.reserve(static_cast<std::size_t>(variants));
    for (int i = 0; i < variants; ++i) {
        const double d = duration(gen);
        const std::uint64_t clip_seed = gen();
        clips.push_back(synth_burst(d, sample_rate, clip_seed));
    }
    return clips;
}

}  // namespace

void SceneSpec::validate() const {
    if (duration_s <= 0.0) throw std::invalid_argument("scene: duration must be positive");
    if (n_coughs < 0 || n_foregrounds < 0)
        throw std::invalid_argument("scene: negative event count");
    if (min_event_gap_s < 0.0) throw std::invalid_argument("scene: negative event gap");
    if (sample_rate <= 0) throw std::invalid_argument("scene: invalid sample rate");
    if (background_rms <= 0.0) throw std::invalid_argument("scene: background rms must be positive");
}

AudioBuffer pink_noise(double duration_s, int sample_rate, double target_rms,
                       std::uint64_t seed) {
    const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> white(0.0, 1.0);

    AudioBuffer out;
    out.sample_rate = sample_rate;
    out.samples.resize(n);

    // Kellet's 1/f filter approximation.
    double b0 = 0, b1 = 0, b2 = 0, b3 = 0, b4 = 0, b5 = 0, b6 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = white(gen);
        b0 = 0.99886 * b0 + w * 0.0555179;
        b1 = 0.99332 * b1 + w * 0.0750759;
        b2 = 0.96900 * b2 + w * 0.1538520;
        b3 = 0.86650 * b3 + w * 0.3104856;
        b4 = 0.55000 * b4 + w * 0.5329522;
        b5 = -0.7616 * b5 - w * 0.0168980;
        out.samples[i] = b0 + b1 + b2 + b3 + b4 + b5 + b6 + w * 0.5362;
        b6 = w * 0.115926;
    }

    const double current = rms(out.samples);
    const double gain = current > 0.0 ? target_rms / current : 0.0;
    for (double& s : out.samples) s *= gain;
    return out;
}

AudioBuffer synth_burst(double duration_s, int sample_rate, std::uint64_t seed) {
    if (duration_s < 0.2 || duration_s > 1.0)
        throw std::invalid_argument("synth_burst: duration must lie in [0.2, 1.0]");
    if (sample_rate <= 0) throw std::invalid_argument("synth_burst: invalid sample rate");

    const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> white(0.0, 1.0);
    std::uniform_real_distribution<double> pitch(150.0, 230.0);
    const double f0 = pitch(gen);

    constexpr double kAttack = 0.003;
    constexpr double kExplosive = 0.060;
    constexpr double kDecayTau = 0.060;
    const bool voiced = duration_s >= 0.3;

    AudioBuffer out;
    out.sample_rate = sample_rate;
    out.samples.resize(n);

    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / sample_rate;
        double env;
        if (t < kAttack) {
            env = t / kAttack;
        } else if (t < kExplosive) {
            env = 1.0;
        } else {
            env = std::exp(-(t - kExplosive) / kDecayTau);
        }
        double s = env * white(gen);
        if (voiced && t >= 0.08) {
            s += 0.25 * std::exp(-(t - 0.08) / 0.12) * std::sin(2.0 * M_PI * f0 * t);
        }
        out.samples[i] = s;
    }

    double peak = 0.0;
    for (double s : out.samples) peak = std::max(peak, std::abs(s));
    if (peak > 0.0) {
        const double gain = 0.9 / peak;
        for (double& s : out.samples) s *= gain;
    }
    return out;
}

std::pair<AudioBuffer, AnnotationList> synthesize_scene(const SceneSpec& spec) {
    spec.validate();
    const int rate = spec.sample_rate;
    const auto n_total = static_cast<std::size_t>(std::llround(spec.duration_s * rate));

    std::mt19937_64 gen(spec.rng_seed);

    // Background bed.
    AudioBuffer bed;
    if (spec.background_path.empty() || spec.background_path == "pink") {
        bed = pink_noise(spec.duration_s, rate, spec.background_rms, gen());
    } else {
        AudioBuffer src = load_audio(spec.background_path);
        if (src.sample_rate != rate) src = resample(src, rate);
        bed.sample_rate = rate;
        bed.samples = tile_background(src.samples, n_total);
    }
    bed.samples.resize(n_total, 0.0);
    const double bed_rms = rms(bed.samples);
    if (bed_rms <= 0.0) throw std::runtime_error("synthesize_scene: silent background bed");

    // Clip libraries. The burst surrogates keep the synthesizer usable
    // with no external audio at all.
    std::vector<AudioBuffer> cough_clips;
    std::vector<AudioBuffer> foreground_clips;
    std::string foreground_label = "distractor";
    if (spec.use_synth_bursts) {
        cough_clips = burst_clip_set(gen(), rate, 8);
        foreground_clips = burst_clip_set(gen(), rate, 8);
    } else {
        if (spec.n_coughs > 0) cough_clips = load_clip_dir(spec.cough_clip_dir, rate);
        if (spec.n_foregrounds > 0) {
            foreground_clips = load_clip_dir(spec.foreground_clip_dir, rate);
            foreground_label =
                std::filesystem::path(spec.foreground_clip_dir).filename().string();
            if (foreground_label.empty()) foreground_label = "foreground";
        }
    }

    std::size_t max_clip = 0;
    for (const auto& c : cough_clips) max_clip = std::max(max_clip, c.samples.size());
    for (const auto& c : foreground_clips) max_clip = std::max(max_clip, c.samples.size());
    const double max_clip_s = static_cast<double>(max_clip) / rate;
    const double budget =
        (spec.n_coughs + spec.n_foregrounds) * (max_clip_s + spec.min_event_gap_s);
    if (budget > spec.duration_s)
        throw std::invalid_argument("scene: events cannot fit in the requested duration");

    AudioBuffer mix = bed;
    AnnotationList annotations;
    annotations.signal_duration_s = static_cast<double>(n_total) / rate;

    const auto gap = static_cast<std::size_t>(std::llround(spec.min_event_gap_s * rate));
    std::vector<PlacedEvent> placed;

    auto place_events = [&](const std::vector<AudioBuffer>& clips, int count,
                            double snr_db, const std::string& label) {
        if (count == 0) return;
        std::uniform_int_distribution<std::size_t> pick(0, clips.size() - 1);
        for (int e = 0; e < count; ++e) {
            const AudioBuffer& clip = clips[pick(gen)];
            const std::size_t len = clip.samples.size();
            if (len == 0 || len >= n_total)
                throw std::runtime_error("scene: clip longer than the scene");

            std::uniform_int_distribution<std::size_t> onset_dist(0, n_total - len);
            bool ok = false;
            std::size_t onset = 0;
            for (int attempt = 0; attempt < 10000; ++attempt) {
                onset = onset_dist(gen);
                if (far_enough(placed, onset, len, gap)) {
                    ok = true;
                    break;
                }
            }
            if (!ok)
                throw std::runtime_error("scene: could not place events without overlap");

            const double clip_rms = rms(clip.samples);
            if (clip_rms <= 0.0) throw std::runtime_error("scene: silent event clip");
            const double gain = bed_rms * std::pow(10.0, snr_db / 20.0) / clip_rms;
            for (std::size_t i = 0; i < len; ++i) mix.samples[onset + i] += gain * clip.samples[i];

            placed.push_back({onset, len});
            Annotation a;
            a.onset_s = static_cast<double>(onset) / rate;
            a.offset_s = static_cast<double>(onset + len) / rate;
            a.label = label;
            annotations.items.push_back(std::move(a));
        }
    };

    place_events(cough_clips, spec.n_coughs, spec.cough_snr_db, "cough");
    place_events(foreground_clips, spec.n_foregrounds, spec.foreground_snr_db, foreground_label);

    std::stable_sort(annotations.items.begin(), annotations.items.end(),
                     [](const Annotation& a, const Annotation& b) { return a.onset_s < b.onset_s; });
    annotations.validate();
    return {std::move(mix), std::move(annotations)};
}

}  // namespace coughsum
