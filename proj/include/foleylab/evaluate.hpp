#pragma once

#include <filesystem>

#include "foleylab/dataset.hpp"
#include "foleylab/metrics.hpp"

namespace foleylab {

/// Batch evaluation of rendered predictions against a dataset manifest.
/// Predictions pair with entries as <pred_dir>/<sample_id>.wav; azimuth truth
/// is the sample's trajectory-midpoint azimuth, IoU compares re-detected
/// events against the manifest annotation, loudness error and LSD compare
/// against the manifest's rendered reference, RT60 error against the preset
/// decay. Metrics undefined for an item (silence, no decay) are recorded as
/// -1 and excluded from the aggregates.
MetricReport evaluate_predictions(const std::filesystem::path& pred_dir,
                                  const std::filesystem::path& manifest_jsonl,
                                  Diagnostics* diag = nullptr);

} // namespace foleylab
