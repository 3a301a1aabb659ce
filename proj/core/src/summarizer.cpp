#include "coughsum/summarizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coughsum {

std::pair<AudioBuffer, SummaryManifest> summarize(const AudioBuffer& buf,
                                                  const DetectionList& detections,
                                                  double clip_length_s) {
    if (clip_length_s <= 0.0) throw std::invalid_argument("summarize: clip length must be positive");
    if (buf.sample_rate <= 0) throw std::invalid_argument("summarize: invalid sample rate");

    const double duration = buf.duration_s();
    for (const DetectionEvent& ev : detections.events) {
        if (ev.time_s < 0.0 || ev.time_s > duration)
            throw std::invalid_argument("summarize: detection outside the signal");
    }

    const int rate = buf.sample_rate;
    const auto clip_len = static_cast<long long>(std::llround(clip_length_s * rate));
    const auto fade_len =
        std::min<long long>(clip_len / 2, std::llround(0.005 * rate));  // 5 ms edges
    const auto n_in = static_cast<long long>(buf.samples.size());

    AudioBuffer summary;
    summary.sample_rate = rate;
    summary.samples.resize(static_cast<std::size_t>(clip_len) * detections.events.size(), 0.0);

    SummaryManifest manifest;
    manifest.clip_length_s = clip_length_s;

    long long write_pos = 0;
    for (const DetectionEvent& ev : detections.events) {
        const long long start = std::llround(ev.time_s * rate) - clip_len / 2;
        for (long long i = 0; i < clip_len; ++i) {
            const long long src = start + i;
            double s = (src >= 0 && src < n_in) ? buf.samples[static_cast<std::size_t>(src)] : 0.0;
            if (fade_len > 0) {
                if (i < fade_len) s *= static_cast<double>(i + 1) / static_cast<double>(fade_len);
                const long long from_end = clip_len - 1 - i;
                if (from_end < fade_len)
                    s *= static_cast<double>(from_end + 1) / static_cast<double>(fade_len);
            }
            summary.samples[static_cast<std::size_t>(write_pos + i)] = s;
        }

        SummaryEntry entry;
        entry.summary_offset_s = static_cast<double>(write_pos) / rate;
        entry.original_time_s = ev.time_s;
        entry.candidate_rank = ev.candidate_rank;
        entry.score = ev.score;
        manifest.entries.push_back(entry);

        write_pos += clip_len;
    }

    manifest.total_duration_s = static_cast<double>(write_pos) / rate;
    return {std::move(summary), std::move(manifest)};
}

}  // namespace coughsum
