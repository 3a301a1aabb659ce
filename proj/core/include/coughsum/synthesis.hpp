#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>

#include "coughsum/audio_io.hpp"
#include "coughsum/evaluation.hpp"

namespace coughsum {

// Recipe for an annotated test scene: events drawn from clip libraries
// (or built-in burst surrogates) mixed over a background bed at a
// controlled SNR. Fully deterministic for a fixed seed.
struct SceneSpec {
    double duration_s = 600.0;
    int n_coughs = 20;
    int n_foregrounds = 10;
    std::string cough_clip_dir;
    std::string foreground_clip_dir;
    // Path to a background WAV, or "pink" for the built-in pink-noise
    // bed. A bed shorter than the scene is looped with a crossfade.
    std::string background_path = "pink";
    double background_rms = 0.05;
    double cough_snr_db = 0.0;
    double foreground_snr_db = 0.0;
    double min_event_gap_s = 2.0;
    std::uint64_t rng_seed = 0;
    bool use_synth_bursts = false;  // ignore clip dirs, use synth_burst
    int sample_rate = 44100;

    void validate() const;  // throws std::invalid_argument

    static SceneSpec from_file(const std::filesystem::path& path);
    std::string to_json() const;
};

// Places n_coughs cough events and n_foregrounds distractor events at
// uniformly random non-overlapping positions (gaps >= min_event_gap_s
// between any two event intervals), each gain-matched so its RMS sits at
// the requested SNR above the bed RMS. Returns the mixed scene and the
// exact event annotations. Throws when events cannot be placed or a clip
// directory is empty.
std::pair<AudioBuffer, AnnotationList> synthesize_scene(const SceneSpec& spec);

// Cough-like test sound: a wideband noise burst with a sharp attack, an
// exponentially decaying noise tail, and (for longer durations) a weak
// low-frequency voiced tail. Peak-normalized; deterministic per seed.
// duration_s must lie in [0.2, 1.0].
AudioBuffer synth_burst(double duration_s, int sample_rate, std::uint64_t seed = 0);

// One second of the Kellet pink-noise filter emits a bed with roughly
// equal energy per octave; scaled to the requested RMS.
AudioBuffer pink_noise(double duration_s, int sample_rate, double rms, std::uint64_t seed);

}  // namespace coughsum
