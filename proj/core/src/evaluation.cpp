#include "coughsum/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace coughsum {

namespace {

constexpr const char* kCoughLabel = "cough";

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

int AnnotationList::cough_count() const {
    return static_cast<int>(
        std::count_if(items.begin(), items.end(),
                      [](const Annotation& a) { return a.label == kCoughLabel; }));
}

void AnnotationList::validate() const {
    for (const Annotation& a : items) {
        if (a.onset_s < 0.0 || a.onset_s >= a.offset_s)
            throw std::invalid_argument("annotation: need 0 <= onset < offset");
        if (a.offset_s > signal_duration_s)
            throw std::invalid_argument("annotation: exceeds signal duration");
    }
    for (std::size_t i = 1; i < items.size(); ++i) {
        if (items[i].onset_s < items[i - 1].onset_s)
            throw std::invalid_argument("annotation: items not sorted by onset");
    }
}

double overlap_ratio(double detection_time_s, const Annotation& annotation,
                     double ref_window_s) {
    if (ref_window_s <= 0.0) throw std::invalid_argument("overlap_ratio: ref window <= 0");
    const double lo = detection_time_s - ref_window_s / 2.0;
    const double hi = detection_time_s + ref_window_s / 2.0;
    const double overlap =
        std::min(hi, annotation.offset_s) - std::max(lo, annotation.onset_s);
    return std::max(overlap, 0.0) / ref_window_s;
}

EvalReport match(const DetectionList& detections, const AnnotationList& annotations,
                 double rho_dtc, double ref_window_s) {
    if (rho_dtc <= 0.0 || rho_dtc > 1.0)
        throw std::invalid_argument("match: need 0 < rho_dtc <= 1");
    annotations.validate();
    if (annotations.signal_duration_s <= 0.0)
        throw std::invalid_argument("match: signal duration must be positive");

    std::vector<int> cough_indices;
    for (std::size_t i = 0; i < annotations.items.size(); ++i) {
        if (annotations.items[i].label == kCoughLabel)
            cough_indices.push_back(static_cast<int>(i));
    }
    std::vector<bool> taken(cough_indices.size(), false);

    EvalReport report;
    for (std::size_t d = 0; d < detections.events.size(); ++d) {
        int best = -1;
        double best_ratio = -1.0;
        for (std::size_t a = 0; a < cough_indices.size(); ++a) {
            if (taken[a]) continue;
            const double ratio = overlap_ratio(detections.events[d].time_s,
                                               annotations.items[cough_indices[a]],
                                               ref_window_s);
            if (ratio > best_ratio) {
                best_ratio = ratio;
                best = static_cast<int>(a);
            }
        }
        if (best >= 0 && best_ratio > rho_dtc) {
            taken[best] = true;
            ++report.n_tp;
            report.matched_pairs.push_back(
                {static_cast<int>(d), cough_indices[best], best_ratio});
        } else {
            ++report.n_fp;
        }
    }

    const int positives = static_cast<int>(cough_indices.size());
    report.n_fn = positives - report.n_tp;
    report.r_tp = positives > 0 ? static_cast<double>(report.n_tp) / positives : 0.0;
    report.r_fp_per_min = report.n_fp / (annotations.signal_duration_s / 60.0);
    return report;
}

AnnotationList load_annotations(const std::filesystem::path& path, double signal_duration_s) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open annotations: " + path.string());

    AnnotationList list;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string row = trim(line);
        if (row.empty() || row[0] == '#') continue;

        std::stringstream ss(row);
        std::string onset_str;
        std::string offset_str;
        std::string label;
        if (!std::getline(ss, onset_str, ',') || !std::getline(ss, offset_str, ',') ||
            !std::getline(ss, label)) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": malformed annotation row");
        }
        onset_str = trim(onset_str);
        offset_str = trim(offset_str);
        label = trim(label);

        if (line_no == 1 && (onset_str == "onset_s" || onset_str == "onset")) continue;

        Annotation a;
        try {
            std::size_t used = 0;
            a.onset_s = std::stod(onset_str, &used);
            if (used != onset_str.size()) throw std::invalid_argument("trailing junk");
            a.offset_s = std::stod(offset_str, &used);
            if (used != offset_str.size()) throw std::invalid_argument("trailing junk");
        } catch (const std::exception&) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": non-numeric onset/offset");
        }
        a.label = label;
        if (a.onset_s < 0.0 || a.offset_s <= a.onset_s)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": need 0 <= onset < offset");
        list.items.push_back(std::move(a));
    }

    std::stable_sort(list.items.begin(), list.items.end(),
                     [](const Annotation& a, const Annotation& b) { return a.onset_s < b.onset_s; });

    double max_offset = 0.0;
    for (const Annotation& a : list.items) max_offset = std::max(max_offset, a.offset_s);
    list.signal_duration_s = signal_duration_s > 0.0 ? signal_duration_s : max_offset;
    list.validate();
    return list;
}

void save_annotations(const AnnotationList& annotations, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write annotations: " + path.string());
    out << "onset_s,offset_s,label\n";
    char buf[128];
    for (const Annotation& a : annotations.items) {
        std::snprintf(buf, sizeof buf, "%.6f,%.6f,%s\n", a.onset_s, a.offset_s, a.label.c_str());
        out << buf;
    }
    if (!out) throw std::runtime_error("short write: " + path.string());
}

}  // namespace coughsum
