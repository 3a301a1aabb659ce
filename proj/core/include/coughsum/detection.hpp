#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "coughsum/config.hpp"
#include "coughsum/ica.hpp"

namespace coughsum {

// Raw (non-excess) kurtosis with population moments:
// (sum (v - mean)^4 / M) / sigma^4, ~3 for Gaussian data.
// Throws for fewer than 4 samples or zero standard deviation.
double kurtosis(std::span<const double> v);
double kurtosis(const Eigen::VectorXd& v);

// One retained time-activation function: half-wave rectified values plus
// the kurtosis it was ranked by. `rank` is 1-based, 1 = highest kurtosis.
struct CandidateActivation {
    Eigen::VectorXd values;  // rectified, all >= 0
    double kurtosis = 0.0;   // measured before rectification
    int source_index = 0;    // column in the ICA output
    int rank = 0;
};

// Ranks ICA components by descending kurtosis of their activations
// (ties broken by source index, ascending), keeps the top n_keep and
// rectifies them. Throws if a component has zero variance.
std::vector<CandidateActivation> select_candidates(const IcaResult& ica, int n_keep = 3);

struct DetectionEvent {
    double time_s = 0.0;
    Eigen::Index frame = 0;
    double score = 0.0;      // activation value at the peak
    int candidate_rank = 0;  // 1..3
};

struct DetectionList {
    std::vector<DetectionEvent> events;  // sorted by time
    double threshold_used = 0.0;         // tau = a * sigma_c
    double a = 0.0;
};

// Thresholds the rectified activation at tau = a * sigma_c (population
// std of the rectified values) and keeps strict local maxima above tau.
// Peaks closer than min_separation_s are merged, keeping the larger
// score. Values of `a` outside (4, 8) warn on stderr but are accepted.
DetectionList pick_peaks(const CandidateActivation& candidate, double a,
                         double min_separation_s, const FrameTimeMap& frame_map);

// Full pipeline output: one DetectionList per candidate, plus the
// diagnostics a reviewer needs to trust (or distrust) a run.
struct DetectResult {
    std::vector<DetectionList> detections;       // index 0 = candidate 1
    std::vector<CandidateActivation> candidates;
    std::vector<double> component_kurtosis;      // all r components, pre-selection
    bool ica_converged = false;
    int ica_iterations = 0;
    int rank_used = 0;
    double duration_s = 0.0;
};

// stft -> truncated svd -> fastica -> candidate selection -> peak
// picking. Stage errors propagate.
DetectResult detect(const AudioBuffer& buf, const PipelineConfig& cfg = {});

}  // namespace coughsum
