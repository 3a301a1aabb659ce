#include "coughsum/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "coughsum/audio_io.hpp"
#include "coughsum/detection.hpp"
#include "coughsum/evaluation.hpp"
#include "coughsum/formats.hpp"
#include "coughsum/summarizer.hpp"

namespace coughsum {

using nlohmann::ordered_json;

namespace {

constexpr int kAnalysisRate = 44100;

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write: " + path.string());
    out << text;
    if (!out) throw std::runtime_error("short write: " + path.string());
}

AudioBuffer load_at_analysis_rate(const std::filesystem::path& path) {
    AudioBuffer buf = load_audio(path);
    if (buf.sample_rate != kAnalysisRate) {
        std::fprintf(stderr, "coughsum: resampling %s from %d Hz to %d Hz\n",
                     path.string().c_str(), buf.sample_rate, kAnalysisRate);
        buf = resample(buf, kAnalysisRate);
    }
    return buf;
}

std::vector<CandidateMetrics> evaluate_candidates(const std::vector<DetectionList>& lists,
                                                  const AnnotationList& annotations,
                                                  const PipelineConfig& cfg) {
    std::vector<CandidateMetrics> rows;
    rows.reserve(lists.size());
    for (std::size_t c = 0; c < lists.size(); ++c) {
        CandidateMetrics row;
        row.candidate = static_cast<int>(c) + 1;
        row.n_detections = static_cast<int>(lists[c].events.size());
        row.report = match(lists[c], annotations, cfg.rho_dtc, cfg.ref_window_s);
        row.summary_minutes = row.n_detections * cfg.clip_length_s / 60.0;
        rows.push_back(std::move(row));
    }
    return rows;
}

// Best candidate of a scene: highest r_TP, then lowest R_FP, then the
// shortest summary, then the lowest index.
std::size_t best_candidate_index(const std::vector<CandidateMetrics>& rows) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& a = rows[i];
        const auto& b = rows[best];
        if (a.report.r_tp > b.report.r_tp ||
            (a.report.r_tp == b.report.r_tp &&
             (a.report.r_fp_per_min < b.report.r_fp_per_min ||
              (a.report.r_fp_per_min == b.report.r_fp_per_min &&
               a.summary_minutes < b.summary_minutes)))) {
            best = i;
        }
    }
    return best;
}

struct ARange {
    double lo = 0.0;
    double step = 0.0;
    double hi = 0.0;
};

ARange parse_a_range(const std::string& text) {
    ARange r;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &r.lo, &r.step, &r.hi, &extra) != 3 ||
        r.step <= 0.0 || r.hi < r.lo) {
        throw std::runtime_error("bad a-range (expected lo:step:hi): " + text);
    }
    return r;
}

}  // namespace

int cmd_detect(const DetectOptions& opts) {
    try {
        opts.config.validate();
        std::filesystem::create_directories(opts.output_dir);

        const AudioBuffer buf = load_at_analysis_rate(opts.input);
        const DetectResult result = detect(buf, opts.config);

        {
            std::ofstream out(opts.output_dir / "detections.jsonl", std::ios::trunc);
            if (!out) throw std::runtime_error("cannot write detections.jsonl");
            write_detections_jsonl(out, result, opts.config, opts.input.string(),
                                   opts.only_candidate);
        }
        write_text(opts.output_dir / "diagnostics.json",
                   diagnostics_to_json(result, opts.config, opts.input.string()) + "\n");

        if (opts.write_summary) {
            for (std::size_t c = 0; c < result.detections.size(); ++c) {
                const int candidate = static_cast<int>(c) + 1;
                if (opts.only_candidate != 0 && candidate != opts.only_candidate) continue;
                auto [audio, manifest] =
                    summarize(buf, result.detections[c], opts.config.clip_length_s);
                manifest.source_path = opts.input.string();
                const std::string stem = "summary_c" + std::to_string(candidate);
                if (!audio.samples.empty()) {
                    const std::size_t clamped =
                        save_audio(audio, opts.output_dir / (stem + ".wav"));
                    if (clamped > 0)
                        std::fprintf(stderr, "coughsum: warning: %zu samples clamped in %s.wav\n",
                                     clamped, stem.c_str());
                }
                write_text(opts.output_dir / (stem + ".json"),
                           manifest_to_json(manifest) + "\n");
            }
        }

        std::cout << "detect: " << opts.input.string() << ": ";
        for (std::size_t c = 0; c < result.detections.size(); ++c) {
            if (c > 0) std::cout << ", ";
            std::cout << "c" << c + 1 << "=" << result.detections[c].events.size();
        }
        std::cout << " events" << (result.ica_converged ? "" : " (ica did not converge)")
                  << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "coughsum detect: error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_evaluate(const EvaluateOptions& opts) {
    try {
        opts.config.validate();
        const LoadedDetections loaded = read_detections_jsonl(opts.detections);
        if (loaded.duration_s <= 0.0)
            throw std::runtime_error("detections header missing duration_s");
        const AnnotationList annotations =
            load_annotations(opts.annotations, loaded.duration_s);

        PipelineConfig cfg = opts.config;
        cfg.clip_length_s = loaded.clip_length_s;
        const std::vector<CandidateMetrics> rows =
            evaluate_candidates(loaded.per_candidate, annotations, cfg);

        const std::string report = report_to_json(rows, cfg, opts.detections.string(),
                                                  opts.annotations.string());
        std::cout << format_metrics_table(rows);
        std::cout << report << "\n";
        if (!opts.report_path.empty()) write_text(opts.report_path, report + "\n");
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "coughsum evaluate: error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_sweep(const SweepOptions& opts) {
    try {
        opts.config.validate();
        std::filesystem::create_directories(opts.output_dir);

        std::vector<std::filesystem::path> wavs;
        for (const auto& entry : std::filesystem::directory_iterator(opts.scene_dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".wav" &&
                std::filesystem::exists(entry.path().parent_path() /
                                        (entry.path().stem().string() + ".csv"))) {
                wavs.push_back(entry.path());
            }
        }
        std::sort(wavs.begin(), wavs.end());
        if (wavs.empty()) {
            std::cerr << "coughsum sweep: no (wav, csv) scene pairs in "
                      << opts.scene_dir.string() << "\n";
            return 1;
        }

        struct SceneOutcome {
            std::string name;
            bool ok = false;
            std::string error;
            std::vector<CandidateMetrics> rows;
            std::vector<std::vector<CandidateMetrics>> threshold_rows;  // per a value
        };

        std::vector<double> a_values;
        if (!opts.a_range.empty()) {
            const ARange r = parse_a_range(opts.a_range);
            for (double a = r.lo; a <= r.hi + 1e-9; a += r.step) a_values.push_back(a);
        }

        auto run_scene = [&](const std::filesystem::path& wav) {
            SceneOutcome outcome;
            outcome.name = wav.stem().string();
            try {
                const AudioBuffer buf = load_at_analysis_rate(wav);
                const AnnotationList annotations = load_annotations(
                    wav.parent_path() / (wav.stem().string() + ".csv"), buf.duration_s());
                const DetectResult result = detect(buf, opts.config);
                outcome.rows =
                    evaluate_candidates(result.detections, annotations, opts.config);

                const FrameTimeMap frame_map{opts.config.stft, buf.sample_rate};
                for (double a : a_values) {
                    std::vector<DetectionList> lists;
                    lists.reserve(result.candidates.size());
                    for (const CandidateActivation& c : result.candidates)
                        lists.push_back(
                            pick_peaks(c, a, opts.config.min_separation_s, frame_map));
                    PipelineConfig cfg_a = opts.config;
                    cfg_a.threshold_a = a;
                    outcome.threshold_rows.push_back(
                        evaluate_candidates(lists, annotations, cfg_a));
                }
                outcome.ok = true;
            } catch (const std::exception& e) {
                outcome.error = e.what();
            }
            return outcome;
        };

        std::vector<SceneOutcome> outcomes(wavs.size());
        const int jobs = std::max(1, opts.jobs);
        for (std::size_t base = 0; base < wavs.size(); base += jobs) {
            const std::size_t end = std::min(wavs.size(), base + jobs);
            std::vector<std::future<SceneOutcome>> running;
            for (std::size_t i = base; i < end; ++i)
                running.push_back(
                    std::async(std::launch::async, run_scene, wavs[i]));
            for (std::size_t i = base; i < end; ++i)
                outcomes[i] = running[i - base].get();
        }

        // Per-scene rows.
        std::ostringstream per_scene;
        per_scene << "scene,candidate,n_tp,n_fp,n_fn,r_tp_pct,r_fp_per_min,t_min\n";
        char buf[256];
        int failures = 0;
        const int n_cand = opts.config.n_candidates;
        std::vector<double> mean_tp(n_cand + 1, 0.0);
        std::vector<double> mean_fp(n_cand + 1, 0.0);
        std::vector<double> mean_t(n_cand + 1, 0.0);
        int scenes_ok = 0;
        double best_tp = 0.0;
        double best_fp = 0.0;
        double best_t = 0.0;
        std::ostringstream best_rows;
        best_rows << "scene,candidate,r_tp_pct,r_fp_per_min,t_min\n";

        for (const SceneOutcome& outcome : outcomes) {
            if (!outcome.ok) {
                ++failures;
                std::cerr << "coughsum sweep: scene " << outcome.name
                          << " failed: " << outcome.error << "\n";
                continue;
            }
            ++scenes_ok;
            for (const CandidateMetrics& row : outcome.rows) {
                std::snprintf(buf, sizeof buf, "%s,%d,%d,%d,%d,%.2f,%.4f,%.4f\n",
                              outcome.name.c_str(), row.candidate, row.report.n_tp,
                              row.report.n_fp, row.report.n_fn, 100.0 * row.report.r_tp,
                              row.report.r_fp_per_min, row.summary_minutes);
                per_scene << buf;
                if (row.candidate <= 3) {
                    mean_tp[row.candidate] += row.report.r_tp;
                    mean_fp[row.candidate] += row.report.r_fp_per_min;
                    mean_t[row.candidate] += row.summary_minutes;
                }
            }
            const std::size_t b = best_candidate_index(outcome.rows);
            const CandidateMetrics& row = outcome.rows[b];
            std::snprintf(buf, sizeof buf, "%s,%d,%.2f,%.4f,%.4f\n", outcome.name.c_str(),
                          row.candidate, 100.0 * row.report.r_tp, row.report.r_fp_per_min,
                          row.summary_minutes);
            best_rows << buf;
            best_tp += row.report.r_tp;
            best_fp += row.report.r_fp_per_min;
            best_t += row.summary_minutes;
        }

        if (scenes_ok == 0) {
            std::cerr << "coughsum sweep: all scenes failed\n";
            return 1;
        }

        std::ostringstream means;
        means << "candidate,r_tp_pct,r_fp_per_min,t_min\n";
        std::vector<CandidateMetrics> mean_table;
        for (int c = 1; c <= 3; ++c) {
            std::snprintf(buf, sizeof buf, "%d,%.2f,%.4f,%.4f\n", c,
                          100.0 * mean_tp[c] / scenes_ok, mean_fp[c] / scenes_ok,
                          mean_t[c] / scenes_ok);
            means << buf;
            CandidateMetrics m;
            m.candidate = c;
            m.report.r_tp = mean_tp[c] / scenes_ok;
            m.report.r_fp_per_min = mean_fp[c] / scenes_ok;
            m.summary_minutes = mean_t[c] / scenes_ok;
            mean_table.push_back(m);
        }
        std::snprintf(buf, sizeof buf, "mean,,%.2f,%.4f,%.4f\n", 100.0 * best_tp / scenes_ok,
                      best_fp / scenes_ok, best_t / scenes_ok);
        best_rows << buf;

        write_text(opts.output_dir / "sweep_per_scene.csv", per_scene.str());
        write_text(opts.output_dir / "sweep_candidate_means.csv", means.str());
        write_text(opts.output_dir / "sweep_best_case.csv", best_rows.str());

        if (!a_values.empty()) {
            std::ostringstream sweep_a;
            sweep_a << "scene,a,candidate,n_tp,n_fp,r_tp_pct,r_fp_per_min\n";
            for (const SceneOutcome& outcome : outcomes) {
                if (!outcome.ok) continue;
                for (std::size_t ai = 0; ai < a_values.size(); ++ai) {
                    for (const CandidateMetrics& row : outcome.threshold_rows[ai]) {
                        std::snprintf(buf, sizeof buf, "%s,%.3f,%d,%d,%d,%.2f,%.4f\n",
                                      outcome.name.c_str(), a_values[ai], row.candidate,
                                      row.report.n_tp, row.report.n_fp,
                                      100.0 * row.report.r_tp, row.report.r_fp_per_min);
                        sweep_a << buf;
                    }
                }
            }
            write_text(opts.output_dir / "sweep_threshold.csv", sweep_a.str());
        }

        std::cout << "per-candidate means over " << scenes_ok << " scenes:\n"
                  << format_metrics_table(mean_table);
        std::snprintf(buf, sizeof buf,
                      "best-case mean: r_TP %.2f %%, R_FP %.2f /min, T %.2f min\n",
                      100.0 * best_tp / scenes_ok, best_fp / scenes_ok, best_t / scenes_ok);
        std::cout << buf;

        return failures == static_cast<int>(wavs.size()) ? 1 : 0;
    } catch (const std::exception& e) {
        std::cerr << "coughsum sweep: error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_synth(const SynthOptions& opts) {
    try {
        opts.spec.validate();
        std::filesystem::create_directories(opts.output_dir);

        auto [audio, annotations] = synthesize_scene(opts.spec);
        const std::size_t clamped =
            save_audio(audio, opts.output_dir / (opts.name + ".wav"));
        if (clamped > 0)
            std::fprintf(stderr, "coughsum: warning: %zu samples clamped in scene wav\n",
                         clamped);
        save_annotations(annotations, opts.output_dir / (opts.name + ".csv"));
        write_text(opts.output_dir / (opts.name + "_spec.json"), opts.spec.to_json() + "\n");

        std::cout << "synth: wrote " << (opts.output_dir / (opts.name + ".wav")).string()
                  << " (" << annotations.items.size() << " events)\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "coughsum synth: error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_summarize(const SummarizeOptions& opts) {
    try {
        std::filesystem::create_directories(opts.output_dir);
        const LoadedDetections loaded = read_detections_jsonl(opts.detections);
        if (opts.candidate < 1 ||
            opts.candidate > static_cast<int>(loaded.per_candidate.size()))
            throw std::runtime_error("candidate index out of range");

        const AudioBuffer buf = load_at_analysis_rate(opts.input);
        const double clip_length =
            opts.clip_length_s > 0.0 ? opts.clip_length_s : loaded.clip_length_s;
        auto [audio, manifest] = summarize(
            buf, loaded.per_candidate[static_cast<std::size_t>(opts.candidate - 1)],
            clip_length);
        manifest.source_path = opts.input.string();

        const std::string stem = "summary_c" + std::to_string(opts.candidate);
        if (!audio.samples.empty()) save_audio(audio, opts.output_dir / (stem + ".wav"));
        write_text(opts.output_dir / (stem + ".json"), manifest_to_json(manifest) + "\n");
        std::cout << "summarize: " << manifest.entries.size() << " clips, "
                  << manifest.total_duration_s << " s\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "coughsum summarize: error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace coughsum
