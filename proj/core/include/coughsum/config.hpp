#pragma once

#include <filesystem>
#include <string>

#include "coughsum/ica.hpp"
#include "coughsum/spectrogram.hpp"

namespace coughsum {

// Every tunable of the detection pipeline in one place. Defaults match
// the values the rest of the library documents per stage.
struct PipelineConfig {
    StftParams stft{};
    int rank = 9;
    IcaOptions ica{};
    int n_candidates = 3;
    double threshold_a = 6.0;      // soft bound 4 < a < 8
    double min_separation_s = 0.5;
    double clip_length_s = 1.0;
    double rho_dtc = 0.3;
    double ref_window_s = 0.5;

    void validate() const;  // throws std::invalid_argument

    // Reads a TOML (.toml) or JSON (.json) config file. Unknown keys are
    // rejected so typos do not silently fall back to defaults.
    static PipelineConfig from_file(const std::filesystem::path& path);

    std::string to_json() const;
};

std::string window_name(Window w);
Window window_from_name(const std::string& name);
std::string contrast_name(Contrast c);
Contrast contrast_from_name(const std::string& name);

}  // namespace coughsum
