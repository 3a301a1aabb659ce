#pragma once

#include <string>
#include <utility>
#include <vector>

#include "coughsum/audio_io.hpp"
#include "coughsum/detection.hpp"

namespace coughsum {

struct SummaryEntry {
    double summary_offset_s = 0.0;  // position of this clip in the summary
    double original_time_s = 0.0;   // detection time in the source signal
    int candidate_rank = 0;
    double score = 0.0;
};

struct SummaryManifest {
    std::vector<SummaryEntry> entries;
    double total_duration_s = 0.0;
    double clip_length_s = 0.0;
    std::string source_path;
};

// Cuts a clip_length_s window centered on every detection, applies a
// 5 ms linear fade at both clip edges, and concatenates the clips in
// time order. Windows that overrun the signal edges are zero-padded.
// Empty detections yield an empty buffer and manifest.
std::pair<AudioBuffer, SummaryManifest> summarize(const AudioBuffer& buf,
                                                  const DetectionList& detections,
                                                  double clip_length_s = 1.0);

}  // namespace coughsum
