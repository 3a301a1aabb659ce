#pragma once

#include <filesystem>
#include <string>

#include "coughsum/config.hpp"
#include "coughsum/synthesis.hpp"

namespace coughsum {

// CLI entry points. Each returns a process exit status (0 = every
// requested output was written) and reports failures on stderr rather
// than throwing.

struct DetectOptions {
    std::filesystem::path input;
    std::filesystem::path output_dir = ".";
    PipelineConfig config{};
    int only_candidate = 0;     // 0 = all candidates
    bool write_summary = true;  // summary WAV + manifest per candidate
};
int cmd_detect(const DetectOptions& opts);

struct EvaluateOptions {
    std::filesystem::path detections;
    std::filesystem::path annotations;
    PipelineConfig config{};
    std::filesystem::path report_path;  // empty = stdout only
};
int cmd_evaluate(const EvaluateOptions& opts);

struct SweepOptions {
    std::filesystem::path scene_dir;  // holds (stem.wav, stem.csv) pairs
    std::filesystem::path output_dir = ".";
    PipelineConfig config{};
    std::string a_range;  // optional "lo:step:hi" threshold sweep
    int jobs = 1;
};
int cmd_sweep(const SweepOptions& opts);

struct SynthOptions {
    SceneSpec spec{};
    std::filesystem::path output_dir = ".";
    std::string name = "scene";  // basename for wav/csv/json outputs
};
int cmd_synth(const SynthOptions& opts);

struct SummarizeOptions {
    std::filesystem::path input;
    std::filesystem::path detections;
    std::filesystem::path output_dir = ".";
    int candidate = 1;
    double clip_length_s = 0.0;  // 0 = take from the detections header
};
int cmd_summarize(const SummarizeOptions& opts);

}  // namespace coughsum
