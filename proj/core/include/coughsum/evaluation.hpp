#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "coughsum/detection.hpp"

namespace coughsum {

struct Annotation {
    double onset_s = 0.0;
    double offset_s = 0.0;
    std::string label;
};

// Ground-truth labeled intervals, sorted by onset. Only items labeled
// "cough" count as positives; other labels ride along for reporting.
struct AnnotationList {
    std::vector<Annotation> items;
    double signal_duration_s = 0.0;

    int cough_count() const;
    void validate() const;  // throws std::invalid_argument
};

struct MatchedPair {
    int detection_index = 0;
    int annotation_index = 0;
    double overlap_ratio = 0.0;
};

struct EvalReport {
    int n_tp = 0;
    int n_fp = 0;
    int n_fn = 0;
    double r_tp = 0.0;          // n_tp / P
    double r_fp_per_min = 0.0;  // n_fp / minutes
    std::vector<MatchedPair> matched_pairs;
};

// Overlap between the detection's reference window
// [t - ref_window/2, t + ref_window/2] and the annotation interval,
// expressed as a fraction of the reference window.
double overlap_ratio(double detection_time_s, const Annotation& annotation,
                     double ref_window_s = 0.5);

// Greedy one-to-one matching in ascending detection-time order: each
// detection claims the unmatched cough annotation with the highest
// overlap ratio and is a TP when that ratio exceeds rho_dtc (the
// annotation is only consumed on success). Unclaimed cough annotations
// are FNs. Throws if annotations exceed the signal duration.
EvalReport match(const DetectionList& detections, const AnnotationList& annotations,
                 double rho_dtc = 0.3, double ref_window_s = 0.5);

// CSV rows "onset_s,offset_s,label"; a header row is optional. When the
// true signal duration is unknown pass a negative value and the largest
// offset is used instead.
AnnotationList load_annotations(const std::filesystem::path& path,
                                double signal_duration_s = -1.0);

void save_annotations(const AnnotationList& annotations, const std::filesystem::path& path);

}  // namespace coughsum
