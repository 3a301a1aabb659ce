#include "coughsum/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "coughsum/synthesis.hpp"
#include "toml_lite.hpp"

namespace coughsum {

using nlohmann::ordered_json;

std::string window_name(Window w) {
    switch (w) {
        case Window::hann: return "hann";
        case Window::hamming: return "hamming";
        case Window::rectangular: return "rectangular";
    }
    return "hann";
}

Window window_from_name(const std::string& name) {
    if (name == "hann") return Window::hann;
    if (name == "hamming") return Window::hamming;
    if (name == "rectangular") return Window::rectangular;
    throw std::invalid_argument("unknown window: " + name);
}

std::string contrast_name(Contrast c) {
    return c == Contrast::cubic ? "cubic" : "tanh";
}

Contrast contrast_from_name(const std::string& name) {
    if (name == "cubic") return Contrast::cubic;
    if (name == "tanh") return Contrast::tanh_;
    throw std::invalid_argument("unknown ica contrast: " + name);
}

void PipelineConfig::validate() const {
    stft.validate();
    if (rank < 1) throw std::invalid_argument("config: rank must be >= 1");
    if (n_candidates < 1) throw std::invalid_argument("config: n_candidates must be >= 1");
    if (n_candidates > rank)
        throw std::invalid_argument("config: n_candidates cannot exceed rank");
    if (threshold_a <= 0.0) throw std::invalid_argument("config: threshold_a must be positive");
    if (min_separation_s <= 0.0)
        throw std::invalid_argument("config: min_separation_s must be positive");
    if (clip_length_s <= 0.0) throw std::invalid_argument("config: clip_length_s must be positive");
    if (rho_dtc <= 0.0 || rho_dtc > 1.0)
        throw std::invalid_argument("config: need 0 < rho_dtc <= 1");
    if (ref_window_s <= 0.0) throw std::invalid_argument("config: ref_window_s must be positive");
    if (ica.max_iterations < 1)
        throw std::invalid_argument("config: ica.max_iterations must be >= 1");
    if (ica.tolerance <= 0.0) throw std::invalid_argument("config: ica.tolerance must be positive");
}

namespace {

const std::set<std::string> kPipelineKeys = {
    "stft.frame_size",  "stft.hop_size",       "stft.window",
    "svd.rank",         "ica.max_iterations",  "ica.tolerance",
    "ica.contrast",     "ica.random_init",     "ica.seed",
    "detection.n_candidates", "detection.threshold_a", "detection.min_separation_s",
    "summary.clip_length_s",  "evaluation.rho_dtc",    "evaluation.ref_window_s",
};

PipelineConfig pipeline_from_toml(const toml_lite::Table& t) {
    for (const std::string& key : t.keys()) {
        if (!kPipelineKeys.count(key))
            throw std::runtime_error("config: unknown key: " + key);
    }
    PipelineConfig cfg;
    cfg.stft.frame_size = static_cast<int>(t.get_int("stft.frame_size", cfg.stft.frame_size));
    cfg.stft.hop_size = static_cast<int>(t.get_int("stft.hop_size", cfg.stft.hop_size));
    cfg.stft.window = window_from_name(t.get_string("stft.window", window_name(cfg.stft.window)));
    cfg.rank = static_cast<int>(t.get_int("svd.rank", cfg.rank));
    cfg.ica.max_iterations =
        static_cast<int>(t.get_int("ica.max_iterations", cfg.ica.max_iterations));
    cfg.ica.tolerance = t.get_double("ica.tolerance", cfg.ica.tolerance);
    cfg.ica.contrast =
        contrast_from_name(t.get_string("ica.contrast", contrast_name(cfg.ica.contrast)));
    cfg.ica.random_init = t.get_bool("ica.random_init", cfg.ica.random_init);
    cfg.ica.seed = static_cast<std::uint64_t>(t.get_int("ica.seed", 0));
    cfg.n_candidates =
        static_cast<int>(t.get_int("detection.n_candidates", cfg.n_candidates));
    cfg.threshold_a = t.get_double("detection.threshold_a", cfg.threshold_a);
    cfg.min_separation_s = t.get_double("detection.min_separation_s", cfg.min_separation_s);
    cfg.clip_length_s = t.get_double("summary.clip_length_s", cfg.clip_length_s);
    cfg.rho_dtc = t.get_double("evaluation.rho_dtc", cfg.rho_dtc);
    cfg.ref_window_s = t.get_double("evaluation.ref_window_s", cfg.ref_window_s);
    return cfg;
}

ordered_json pipeline_to_json_obj(const PipelineConfig& cfg) {
    return ordered_json{
        {"stft",
         {{"frame_size", cfg.stft.frame_size},
          {"hop_size", cfg.stft.hop_size},
          {"window", window_name(cfg.stft.window)}}},
        {"svd", {{"rank", cfg.rank}}},
        {"ica",
         {{"max_iterations", cfg.ica.max_iterations},
          {"tolerance", cfg.ica.tolerance},
          {"contrast", contrast_name(cfg.ica.contrast)},
          {"random_init", cfg.ica.random_init},
          {"seed", cfg.ica.seed}}},
        {"detection",
         {{"n_candidates", cfg.n_candidates},
          {"threshold_a", cfg.threshold_a},
          {"min_separation_s", cfg.min_separation_s}}},
        {"summary", {{"clip_length_s", cfg.clip_length_s}}},
        {"evaluation", {{"rho_dtc", cfg.rho_dtc}, {"ref_window_s", cfg.ref_window_s}}},
    };
}

PipelineConfig pipeline_from_json(const ordered_json& j) {
    PipelineConfig cfg;
    if (j.contains("stft")) {
        const auto& s = j.at("stft");
        cfg.stft.frame_size = s.value("frame_size", cfg.stft.frame_size);
        cfg.stft.hop_size = s.value("hop_size", cfg.stft.hop_size);
        cfg.stft.window = window_from_name(s.value("window", window_name(cfg.stft.window)));
    }
    if (j.contains("svd")) cfg.rank = j.at("svd").value("rank", cfg.rank);
    if (j.contains("ica")) {
        const auto& s = j.at("ica");
        cfg.ica.max_iterations = s.value("max_iterations", cfg.ica.max_iterations);
        cfg.ica.tolerance = s.value("tolerance", cfg.ica.tolerance);
        cfg.ica.contrast = contrast_from_name(s.value("contrast", contrast_name(cfg.ica.contrast)));
        cfg.ica.random_init = s.value("random_init", cfg.ica.random_init);
        cfg.ica.seed = s.value("seed", cfg.ica.seed);
    }
    if (j.contains("detection")) {
        const auto& s = j.at("detection");
        cfg.n_candidates = s.value("n_candidates", cfg.n_candidates);
        cfg.threshold_a = s.value("threshold_a", cfg.threshold_a);
        cfg.min_separation_s = s.value("min_separation_s", cfg.min_separation_s);
    }
    if (j.contains("summary"))
        cfg.clip_length_s = j.at("summary").value("clip_length_s", cfg.clip_length_s);
    if (j.contains("evaluation")) {
        const auto& s = j.at("evaluation");
        cfg.rho_dtc = s.value("rho_dtc", cfg.rho_dtc);
        cfg.ref_window_s = s.value("ref_window_s", cfg.ref_window_s);
    }
    return cfg;
}

}  // namespace

PipelineConfig PipelineConfig::from_file(const std::filesystem::path& path) {
    PipelineConfig cfg;
    const std::string ext = path.extension().string();
    if (ext == ".json") {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open config: " + path.string());
        cfg = pipeline_from_json(ordered_json::parse(in));
    } else if (ext == ".toml") {
        cfg = pipeline_from_toml(toml_lite::Table::parse_file(path));
    } else {
        throw std::runtime_error("config: expected .toml or .json, got " + path.string());
    }
    cfg.validate();
    return cfg;
}

std::string PipelineConfig::to_json() const { return pipeline_to_json_obj(*this).dump(); }

namespace {

const std::set<std::string> kSceneKeys = {
    "scene.duration_s",        "scene.n_coughs",        "scene.n_foregrounds",
    "scene.cough_clip_dir",    "scene.foreground_clip_dir", "scene.background_path",
    "scene.background_rms",    "scene.cough_snr_db",    "scene.foreground_snr_db",
    "scene.min_event_gap_s",   "scene.rng_seed",        "scene.use_synth_bursts",
    "scene.sample_rate",
};

SceneSpec scene_from_toml(const toml_lite::Table& t) {
    for (const std::string& key : t.keys()) {
        // Flat files (no [scene] table) are accepted too.
        const std::string dotted = key.find('.') == std::string::npos ? "scene." + key : key;
        if (!kSceneKeys.count(dotted)) throw std::runtime_error("scene: unknown key: " + key);
    }
    auto pick = [&](const char* name) {
        return t.contains(std::string("scene.") + name) ? std::string("scene.") + name
                                                        : std::string(name);
    };
    SceneSpec s;
    s.duration_s = t.get_double(pick("duration_s"), s.duration_s);
    s.n_coughs = static_cast<int>(t.get_int(pick("n_coughs"), s.n_coughs));
    s.n_foregrounds = static_cast<int>(t.get_int(pick("n_foregrounds"), s.n_foregrounds));
    s.cough_clip_dir = t.get_string(pick("cough_clip_dir"), s.cough_clip_dir);
    s.foreground_clip_dir = t.get_string(pick("foreground_clip_dir"), s.foreground_clip_dir);
    s.background_path = t.get_string(pick("background_path"), s.background_path);
    s.background_rms = t.get_double(pick("background_rms"), s.background_rms);
    s.cough_snr_db = t.get_double(pick("cough_snr_db"), s.cough_snr_db);
    s.foreground_snr_db = t.get_double(pick("foreground_snr_db"), s.foreground_snr_db);
    s.min_event_gap_s = t.get_double(pick("min_event_gap_s"), s.min_event_gap_s);
    s.rng_seed = static_cast<std::uint64_t>(t.get_int(pick("rng_seed"), 0));
    s.use_synth_bursts = t.get_bool(pick("use_synth_bursts"), s.use_synth_bursts);
    s.sample_rate = static_cast<int>(t.get_int(pick("sample_rate"), s.sample_rate));
    return s;
}

SceneSpec scene_from_json(const ordered_json& root) {
    const ordered_json& j = root.contains("scene") ? root.at("scene") : root;
    SceneSpec s;
    s.duration_s = j.value("duration_s", s.duration_s);
    s.n_coughs = j.value("n_coughs", s.n_coughs);
    s.n_foregrounds = j.value("n_foregrounds", s.n_foregrounds);
    s.cough_clip_dir = j.value("cough_clip_dir", s.cough_clip_dir);
    s.foreground_clip_dir = j.value("foreground_clip_dir", s.foreground_clip_dir);
    s.background_path = j.value("background_path", s.background_path);
    s.background_rms = j.value("background_rms", s.background_rms);
    s.cough_snr_db = j.value("cough_snr_db", s.cough_snr_db);
    s.foreground_snr_db = j.value("foreground_snr_db", s.foreground_snr_db);
    s.min_event_gap_s = j.value("min_event_gap_s", s.min_event_gap_s);
    s.rng_seed = j.value("rng_seed", s.rng_seed);
    s.use_synth_bursts = j.value("use_synth_bursts", s.use_synth_bursts);
    s.sample_rate = j.value("sample_rate", s.sample_rate);
    return s;
}

}  // namespace

SceneSpec SceneSpec::from_file(const std::filesystem::path& path) {
    SceneSpec spec;
    const std::string ext = path.extension().string();
    if (ext == ".json") {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open scene spec: " + path.string());
        spec = scene_from_json(ordered_json::parse(in));
    } else if (ext == ".toml") {
        spec = scene_from_toml(toml_lite::Table::parse_file(path));
    } else {
        throw std::runtime_error("scene spec: expected .toml or .json, got " + path.string());
    }
    spec.validate();
    return spec;
}

std::string SceneSpec::to_json() const {
    return ordered_json{{"scene",
                         {{"duration_s", duration_s},
                          {"n_coughs", n_coughs},
                          {"n_foregrounds", n_foregrounds},
                          {"cough_clip_dir", cough_clip_dir},
                          {"foreground_clip_dir", foreground_clip_dir},
                          {"background_path", background_path},
                          {"background_rms", background_rms},
                          {"cough_snr_db", cough_snr_db},
                          {"foreground_snr_db", foreground_snr_db},
                          {"min_event_gap_s", min_event_gap_s},
                          {"rng_seed", rng_seed},
                          {"use_synth_bursts", use_synth_bursts},
                          {"sample_rate", sample_rate}}}}
        .dump(2);
}

}  // namespace coughsum
