#pragma once

#include <vector>

#include "foleylab/audio.hpp"

namespace foleylab {

/// One detected sound event, millisecond-resolution timestamps.
struct EventSpan {
    double start_s = 0.0;
    double end_s = 0.0;
    double peak_db = -120.0; // dBFS at the loudest envelope sample inside the span
};

struct OnsetConfig {
    double alpha = 3.0;      // threshold = median + alpha * MAD, floored at floor_db
    double min_gap_s = 0.2;  // spans closer than this merge into one event
    double min_len_s = 0.05; // shorter spans are dropped
    double floor_db = -40.0;
};

/// Amplitude-peak event detection on the channel-mean envelope (25 ms RMS
/// windows, 10 ms hop). The threshold adapts to the clip: median + alpha*MAD
/// of the envelope, never below floor_db relative to full scale.
std::vector<EventSpan> detect_onsets(const AudioClip& clip, double alpha = 3.0,
                                     double min_gap_s = 0.2, double min_len_s = 0.05,
                                     double floor_db = -40.0);

/// Merges adjacent spans whose gap is below min_gap_s. Input must be sorted;
/// idempotent.
std::vector<EventSpan> merge_intervals(std::vector<EventSpan> spans, double min_gap_s);

/// Per-video-frame activation: frame t is active iff its center time
/// t/fps + 1/(2 fps) lies inside any span.
std::vector<int> activation_vector(const std::vector<EventSpan>& spans, double fps,
                                   std::size_t total_frames);

} // namespace foleylab
