#include "coughsum/formats.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace coughsum {

using nlohmann::ordered_json;

namespace {

ordered_json header_object(const DetectResult& result, const PipelineConfig& cfg,
                           const std::string& source) {
    ordered_json thresholds = ordered_json::array();
    ordered_json sources = ordered_json::array();
    ordered_json candidate_kurtosis = ordered_json::array();
    for (std::size_t i = 0; i < result.detections.size(); ++i) {
        thresholds.push_back(result.detections[i].threshold_used);
        sources.push_back(result.candidates[i].source_index);
        candidate_kurtosis.push_back(result.candidates[i].kurtosis);
    }
    return ordered_json{
        {"type", "header"},
        {"source", source},
        {"duration_s", result.duration_s},
        {"config", ordered_json::parse(cfg.to_json())},
        {"diagnostics",
         {{"rank_used", result.rank_used},
          {"ica_converged", result.ica_converged},
          {"ica_iterations", result.ica_iterations},
          {"component_kurtosis", result.component_kurtosis},
          {"candidate_kurtosis", candidate_kurtosis},
          {"candidate_sources", sources},
          {"thresholds", thresholds}}},
    };
}

}  // namespace

void write_detections_jsonl(std::ostream& out, const DetectResult& result,
                            const PipelineConfig& cfg, const std::string& source,
                            int only_candidate) {
    out << header_object(result, cfg, source).dump() << '\n';
    for (std::size_t c = 0; c < result.detections.size(); ++c) {
        const int candidate = static_cast<int>(c) + 1;
        if (only_candidate != 0 && candidate != only_candidate) continue;
        for (const DetectionEvent& ev : result.detections[c].events) {
            out << ordered_json{{"time_s", ev.time_s},
                                {"score", ev.score},
                                {"candidate", candidate}}
                       .dump()
                << '\n';
        }
    }
}

LoadedDetections read_detections_jsonl(std::istream& in) {
    LoadedDetections loaded;
    std::string line;
    std::size_t line_no = 0;
    int max_candidate = 0;
    std::vector<DetectionEvent> events;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ordered_json j;
        try {
            j = ordered_json::parse(line);
        } catch (const std::exception& e) {
            throw std::runtime_error("detections line " + std::to_string(line_no) + ": " +
                                     e.what());
        }
        if (j.value("type", "") == "header") {
            loaded.header_json = line;
            loaded.duration_s = j.value("duration_s", 0.0);
            loaded.source = j.value("source", "");
            if (j.contains("config") && j.at("config").contains("summary"))
                loaded.clip_length_s = j.at("config").at("summary").value("clip_length_s", 1.0);
            continue;
        }
        DetectionEvent ev;
        ev.time_s = j.at("time_s").get<double>();
        ev.score = j.at("score").get<double>();
        ev.candidate_rank = j.at("candidate").get<int>();
        if (ev.candidate_rank < 1)
            throw std::runtime_error("detections line " + std::to_string(line_no) +
                                     ": bad candidate index");
        max_candidate = std::max(max_candidate, ev.candidate_rank);
        events.push_back(ev);
    }

    loaded.per_candidate.resize(static_cast<std::size_t>(std::max(max_candidate, 1)));
    for (const DetectionEvent& ev : events)
        loaded.per_candidate[static_cast<std::size_t>(ev.candidate_rank - 1)].events.push_back(ev);
    for (DetectionList& list : loaded.per_candidate) {
        std::stable_sort(
            list.events.begin(), list.events.end(),
            [](const DetectionEvent& a, const DetectionEvent& b) { return a.time_s < b.time_s; });
    }
    return loaded;
}

LoadedDetections read_detections_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open detections: " + path.string());
    return read_detections_jsonl(in);
}

std::string diagnostics_to_json(const DetectResult& result, const PipelineConfig& cfg,
                                const std::string& source) {
    ordered_json j = header_object(result, cfg, source);
    j.erase("type");
    ordered_json counts = ordered_json::array();
    for (const DetectionList& list : result.detections)
        counts.push_back(list.events.size());
    j["diagnostics"]["detection_counts"] = counts;
    return j.dump(2);
}

std::string manifest_to_json(const SummaryManifest& manifest) {
    ordered_json entries = ordered_json::array();
    for (const SummaryEntry& e : manifest.entries) {
        entries.push_back(ordered_json{{"summary_offset_s", e.summary_offset_s},
                                       {"original_time_s", e.original_time_s},
                                       {"candidate", e.candidate_rank},
                                       {"score", e.score}});
    }
    return ordered_json{{"source", manifest.source_path},
                        {"clip_length_s", manifest.clip_length_s},
                        {"total_duration_s", manifest.total_duration_s},
                        {"entries", entries}}
        .dump(2);
}

std::string report_to_json(const std::vector<CandidateMetrics>& rows,
                           const PipelineConfig& cfg, const std::string& detections_path,
                           const std::string& annotations_path) {
    ordered_json out = ordered_json::array();
    for (const CandidateMetrics& row : rows) {
        ordered_json pairs = ordered_json::array();
        for (const MatchedPair& p : row.report.matched_pairs)
            pairs.push_back(
                ordered_json{{"detection", p.detection_index},
                             {"annotation", p.annotation_index},
                             {"overlap_ratio", p.overlap_ratio}});
        out.push_back(ordered_json{{"candidate", row.candidate},
                                   {"n_detections", row.n_detections},
                                   {"n_tp", row.report.n_tp},
                                   {"n_fp", row.report.n_fp},
                                   {"n_fn", row.report.n_fn},
                                   {"r_tp", row.report.r_tp},
                                   {"r_fp_per_min", row.report.r_fp_per_min},
                                   {"summary_minutes", row.summary_minutes},
                                   {"matched_pairs", pairs}});
    }
    return ordered_json{{"results", out},
                        {"detections", detections_path},
                        {"annotations", annotations_path},
                        {"config", ordered_json::parse(cfg.to_json())}}
        .dump(2);
}

std::string format_metrics_table(const std::vector<CandidateMetrics>& rows) {
    std::ostringstream out;
    char buf[128];
    out << "c   r_TP (%)   R_FP (min^-1)   T (min)\n";
    for (const CandidateMetrics& row : rows) {
        std::snprintf(buf, sizeof buf, "%-3d %8.2f %15.2f %9.2f\n", row.candidate,
                      100.0 * row.report.r_tp, row.report.r_fp_per_min, row.summary_minutes);
        out << buf;
    }
    return out.str();
}

}  // namespace coughsum
