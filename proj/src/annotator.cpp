#include "foleylab/annotator.hpp"

#include <algorithm>
#include <cmath>

namespace foleylab {

namespace {

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
        m = 0.5 * (m + lo);
    }
    return m;
}

double round_ms(double t) { return std::round(t * 1000.0) / 1000.0; }

} // namespace

std::vector<EventSpan> detect_onsets(const AudioClip& clip, double alpha, double min_gap_s,
                                     double min_len_s, double floor_db) {
    if (alpha <= 0.0) throw_invalid("detect_onsets: alpha must be positive");
    if (clip.channels > 2) throw_invalid("detect_onsets: mono or stereo only");
    const auto env = rms_envelope(clip);
    if (env.empty()) return {};

    const double med = median_of(env);
    std::vector<double> dev(env.size());
    for (std::size_t i = 0; i < env.size(); ++i) dev[i] = std::abs(env[i] - med);
    const double mad = median_of(dev);
    const double thr = std::max(med + alpha * mad, std::pow(10.0, floor_db / 20.0));

    // Envelope sample k describes the window centered at k*hop + win/2.
    const double center_off = kRmsWindowS / 2.0;
    const double dur = clip.duration_s();

    std::vector<EventSpan> spans;
    bool open = false;
    std::size_t run_start = 0;
    double peak = 0.0;
    for (std::size_t k = 0; k <= env.size(); ++k) {
        const bool above = k < env.size() && env[k] > thr;
        if (above && !open) {
            open = true;
            run_start = k;
            peak = env[k];
        } else if (above) {
            peak = std::max(peak, env[k]);
        } else if (open) {
            open = false;
            EventSpan s;
            s.start_s = round_ms(std::max(0.0, static_cast<double>(run_start) * kRmsHopS + center_off));
            s.end_s = round_ms(std::min(dur, static_cast<double>(k - 1) * kRmsHopS + center_off));
            s.peak_db = 20.0 * std::log10(std::max(peak, 1e-12));
            if (s.end_s > s.start_s) spans.push_back(s);
        }
    }

    spans = merge_intervals(std::move(spans), min_gap_s);
    std::erase_if(spans, [&](const EventSpan& s) { return s.end_s - s.start_s < min_len_s; });
    return spans;
}

std::vector<EventSpan> merge_intervals(std::vector<EventSpan> spans, double min_gap_s) {
    for (std::size_t i = 1; i < spans.size(); ++i)
        if (spans[i].start_s < spans[i - 1].start_s)
            throw_invalid("merge_intervals: spans must be sorted by start time");
    if (spans.empty()) return spans;

    std::vector<EventSpan> out;
    out.push_back(spans.front());
    for (std::size_t i = 1; i < spans.size(); ++i) {
        EventSpan& last = out.back();
        if (spans[i].start_s - last.end_s < min_gap_s) {
            last.end_s = std::max(last.end_s, spans[i].end_s);
            last.peak_db = std::max(last.peak_db, spans[i].peak_db);
        } else {
            out.push_back(spans[i]);
        }
    }
    return out;
}

std::vector<int> activation_vector(const std::vector<EventSpan>& spans, double fps,
                                   std::size_t total_frames) {
    if (fps <= 0.0) throw_invalid("activation_vector: fps must be positive");
    if (total_frames == 0) throw_invalid("activation_vector: need at least one frame");
    std::vector<int> c(total_frames, 0);
    for (std::size_t t = 0; t < total_frames; ++t) {
        const double center = (static_cast<double>(t) + 0.5) / fps;
        for (const auto& s : spans) {
            if (center >= s.start_s && center < s.end_s) {
                c[t] = 1;
                break;
            }
        }
    }
    return c;
}

} // namespace foleylab
