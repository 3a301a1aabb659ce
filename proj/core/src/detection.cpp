#include "coughsum/detection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "coughsum/factorization.hpp"

namespace coughsum {

double kurtosis(std::span<const double> v) {
    const std::size_t m = v.size();
    if (m < 4) throw std::invalid_argument("kurtosis: need at least 4 samples");
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(m);
    double m2 = 0.0;
    double m4 = 0.0;
    for (double x : v) {
        const double d = x - mean;
        const double d2 = d * d;
        m2 += d2;
        m4 += d2 * d2;
    }
    m2 /= static_cast<double>(m);
    m4 /= static_cast<double>(m);
    if (m2 <= 0.0) throw std::invalid_argument("kurtosis: zero standard deviation");
    return m4 / (m2 * m2);
}

double kurtosis(const Eigen::VectorXd& v) {
    return kurtosis(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
}

std::vector<CandidateActivation> select_candidates(const IcaResult& ica, int n_keep) {
    const auto r = ica.activations.cols();
    if (n_keep < 1) throw std::invalid_argument("select_candidates: n_keep < 1");
    if (r < n_keep) throw std::invalid_argument("select_candidates: fewer components than n_keep");

    std::vector<std::pair<double, int>> ranked;  // (kurtosis, source index)
    ranked.reserve(static_cast<std::size_t>(r));
    for (Eigen::Index j = 0; j < r; ++j)
        ranked.emplace_back(kurtosis(Eigen::VectorXd(ica.activations.col(j))),
                            static_cast<int>(j));

    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;  // ties: lower source index first
    });

    std::vector<CandidateActivation> out;
    out.reserve(static_cast<std::size_t>(n_keep));
    for (int k = 0; k < n_keep; ++k) {
        CandidateActivation c;
        c.kurtosis = ranked[k].first;
        c.source_index = ranked[k].second;
        c.rank = k + 1;
        c.values = ica.activations.col(c.source_index).cwiseMax(0.0);
        out.push_back(std::move(c));
    }
    return out;
}

DetectionList pick_peaks(const CandidateActivation& candidate, double a,
                         double min_separation_s, const FrameTimeMap& frame_map) {
    if (min_separation_s <= 0.0)
        throw std::invalid_argument("pick_peaks: min_separation must be positive");
    if (a <= 4.0 || a >= 8.0)
        std::fprintf(stderr, "coughsum: warning: threshold multiplier a=%g outside (4, 8)\n", a);

    const Eigen::VectorXd& v = candidate.values;
    const auto m = v.size();

    double sigma = 0.0;
    if (m > 0) {
        const double mean = v.mean();
        sigma = std::sqrt((v.array() - mean).square().sum() / static_cast<double>(m));
    }
    const double tau = a * sigma;

    DetectionList list;
    list.a = a;
    list.threshold_used = tau;

    DetectionEvent current;
    bool have_current = false;
    for (Eigen::Index i = 0; i < m; ++i) {
        if (!(v(i) > tau)) continue;
        // Strict local maximum; a plateau credits its left edge.
        if (i > 0 && !(v(i) > v(i - 1))) continue;
        if (i + 1 < m && !(v(i) >= v(i + 1))) continue;

        DetectionEvent ev{frame_map.at(i), i, v(i), candidate.rank};
        if (have_current && ev.time_s - current.time_s < min_separation_s) {
            if (ev.score > current.score) current = ev;  // merge: larger peak wins
        } else {
            if (have_current) list.events.push_back(current);
            current = ev;
            have_current = true;
        }
    }
    if (have_current) list.events.push_back(current);
    return list;
}

DetectResult detect(const AudioBuffer& buf, const PipelineConfig& cfg) {
    cfg.validate();
    const MagnitudeSpectrogram spec = stft_magnitude(buf, cfg.stft);

    int rank = cfg.rank;
    const auto max_rank = static_cast<int>(std::min(spec.bins(), spec.frames()));
    if (rank > max_rank) {
        std::fprintf(stderr, "coughsum: warning: rank %d clamped to %d (short input)\n", rank,
                     max_rank);
        rank = max_rank;
    }

    const SvdResult svd = truncated_svd(spec, rank);
    const IcaResult ica = fastica(svd, cfg.ica);

    DetectResult result;
    result.rank_used = rank;
    result.ica_converged = ica.converged;
    result.ica_iterations = ica.iterations_used;
    result.duration_s = buf.duration_s();

    result.component_kurtosis.reserve(static_cast<std::size_t>(rank));
    for (Eigen::Index j = 0; j < ica.activations.cols(); ++j)
        result.component_kurtosis.push_back(kurtosis(Eigen::VectorXd(ica.activations.col(j))));

    result.candidates = select_candidates(ica, std::min(cfg.n_candidates, rank));

    const FrameTimeMap frame_map{cfg.stft, buf.sample_rate};
    result.detections.reserve(result.candidates.size());
    for (const CandidateActivation& c : result.candidates)
        result.detections.push_back(
            pick_peaks(c, cfg.threshold_a, cfg.min_separation_s, frame_map));
    return result;
}

}  // namespace coughsum
