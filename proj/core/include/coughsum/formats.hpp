#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "coughsum/config.hpp"
#include "coughsum/detection.hpp"
#include "coughsum/evaluation.hpp"
#include "coughsum/summarizer.hpp"

namespace coughsum {

// Detections travel as JSON Lines: a header object with the resolved
// config and run diagnostics, then one object per event
// {"time_s": ..., "score": ..., "candidate": 1|2|3}.
void write_detections_jsonl(std::ostream& out, const DetectResult& result,
                            const PipelineConfig& cfg, const std::string& source,
                            int only_candidate = 0);

struct LoadedDetections {
    std::vector<DetectionList> per_candidate;  // index 0 = candidate 1
    double duration_s = 0.0;
    double clip_length_s = 1.0;
    std::string source;
    std::string header_json;  // raw header line, echoed into reports
};

LoadedDetections read_detections_jsonl(std::istream& in);
LoadedDetections read_detections_jsonl(const std::filesystem::path& path);

std::string diagnostics_to_json(const DetectResult& result, const PipelineConfig& cfg,
                                const std::string& source);

std::string manifest_to_json(const SummaryManifest& manifest);

// Per-candidate evaluation row as printed in report tables.
struct CandidateMetrics {
    int candidate = 0;
    int n_detections = 0;
    EvalReport report;
    double summary_minutes = 0.0;  // n_detections * clip_length / 60
};

std::string report_to_json(const std::vector<CandidateMetrics>& rows,
                           const PipelineConfig& cfg, const std::string& detections_path,
                           const std::string& annotations_path);

// Table with columns: candidate, r_TP (%), R_FP (min^-1), T (min).
std::string format_metrics_table(const std::vector<CandidateMetrics>& rows);

}  // namespace coughsum
