#pragma once

#include <functional>
#include <string>
#include <vector>

#include "foleylab/annotator.hpp"
#include "foleylab/audio.hpp"
#include "foleylab/spatializer.hpp"

namespace foleylab {

/// Whole-clip azimuth estimate from the PHAT-weighted generalized cross
/// correlation between channels: peak lag within the physically possible
/// range, parabolic sub-sample refinement, inverted through the ITD model and
/// clamped to [0, 180]. Throws an estimation error on silent input.
double gcc_phat_azimuth(const AudioClip& stereo, double interaural_m = kDefaultInterauralM);

/// Signed inter-channel lag in seconds (positive: left delayed / source
/// right). Exposed for windowed analyses.
double gcc_phat_lag(const AudioClip& stereo, double max_lag_s);

double azimuth_mae(const std::vector<double>& estimates, const std::vector<double>& truths);

/// Interval IoU between two internally disjoint span sets. Both empty is
/// defined as 1.0 (perfect agreement on absence).
double temporal_iou(const std::vector<EventSpan>& pred, const std::vector<EventSpan>& truth);

/// |lufs(a) - lufs(b)| in LU. Throws an estimation error if either side is
/// silence.
double loudness_error(const AudioClip& a, const AudioClip& b);

/// Mean over STFT frames (1024/256, Hann) of the RMS over bins of the log
/// power difference, in dB. The shorter clip is zero-padded (diagnostic).
double log_spectral_distance(const AudioClip& a, const AudioClip& b, Diagnostics* diag = nullptr);

/// |estimated RT60 - target|, seconds. Throws if the decay is unusable.
double rt60_error(const AudioClip& a, double target_s);

/// Hook for learned similarity metrics (Fréchet-style distances over clip
/// embeddings). No default backend ships; the port stays null unless the
/// caller supplies one.
using EmbeddingPort = std::function<std::vector<double>(const AudioClip&)>;

struct MetricItem {
    std::string id;
    double azimuth_est_deg = 0.0;
    double azimuth_truth_deg = 0.0;
    double iou = 0.0;
    double loudness_error_lu = 0.0;
    double lsd_db = 0.0;
    double rt60_error_s = 0.0;
};

struct MetricReport {
    double gcc_mae_deg = 0.0;
    double iou = 0.0;
    double loudness_error_lu = 0.0;
    double lsd_db = 0.0;
    double rt60_error_s = 0.0;
    std::vector<MetricItem> items;
};

} // namespace foleylab
