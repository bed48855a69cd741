#include "foleylab/evaluate.hpp"

#include <cmath>
#include <fstream>

#include "foleylab/json_io.hpp"

namespace foleylab {

namespace {

double midpoint_azimuth(const SampleParams& p) {
    if (p.dynamic && p.end) return 0.5 * (p.start.azimuth_deg() + p.end->azimuth_deg());
    return p.start.azimuth_deg();
}

double preset_target_rt60(RoomSpec::Preset p) { return RoomSpec::from_preset(p).rt60_s; }

} // namespace

MetricReport evaluate_predictions(const std::filesystem::path& pred_dir,
                                  const std::filesystem::path& manifest_jsonl,
                                  Diagnostics* diag) {
    std::ifstream mf(manifest_jsonl);
    if (!mf) throw Error(ErrorCode::io_error, "cannot open manifest " + manifest_jsonl.string());

    MetricReport report;
    double mae_sum = 0.0, iou_sum = 0.0, le_sum = 0.0, lsd_sum = 0.0, rt60_sum = 0.0;
    std::size_t mae_n = 0, iou_n = 0, le_n = 0, lsd_n = 0, rt60_n = 0;

    std::string line;
    while (std::getline(mf, line)) {
        if (line.empty()) continue;
        const ManifestEntry entry =
            jsonio::manifest_entry_from_json(jsonio::parse(line, "manifest line"));
        const auto pred_path = pred_dir / (entry.sample_id + ".wav");
        if (!std::filesystem::exists(pred_path)) {
            diag_add(diag, "evaluate", Diagnostic::Severity::warning,
                     "missing prediction for " + entry.sample_id);
            continue;
        }

        MetricItem item;
        item.id = entry.sample_id;
        item.azimuth_truth_deg = midpoint_azimuth(entry.params);
        const AudioClip pred = load_wav(pred_path);

        try {
            item.azimuth_est_deg = gcc_phat_azimuth(pred);
            mae_sum += std::abs(item.azimuth_est_deg - item.azimuth_truth_deg);
            ++mae_n;
        } catch (const Error&) {
            item.azimuth_est_deg = -1.0;
        }

        item.iou = temporal_iou(detect_onsets(pred), entry.events);
        iou_sum += item.iou;
        ++iou_n;

        try {
            const AudioClip ref = load_wav(entry.rendered_path);
            item.loudness_error_lu = loudness_error(pred, ref);
            le_sum += item.loudness_error_lu;
            ++le_n;
            item.lsd_db = log_spectral_distance(pred, ref, diag);
            lsd_sum += item.lsd_db;
            ++lsd_n;
        } catch (const Error& e) {
            diag_add(diag, "evaluate", Diagnostic::Severity::warning,
                     entry.sample_id + ": " + e.what());
            item.loudness_error_lu = -1.0;
            item.lsd_db = -1.0;
        }

        try {
            item.rt60_error_s = rt60_error(pred, preset_target_rt60(entry.params.reverb));
            rt60_sum += item.rt60_error_s;
            ++rt60_n;
        } catch (const Error&) {
            item.rt60_error_s = -1.0;
        }

        report.items.push_back(std::move(item));
    }

    report.gcc_mae_deg = mae_n > 0 ? mae_sum / static_cast<double>(mae_n) : 0.0;
    report.iou = iou_n > 0 ? iou_sum / static_cast<double>(iou_n) : 0.0;
    report.loudness_error_lu = le_n > 0 ? le_sum / static_cast<double>(le_n) : 0.0;
    report.lsd_db = lsd_n > 0 ? lsd_sum / static_cast<double>(lsd_n) : 0.0;
    report.rt60_error_s = rt60_n > 0 ? rt60_sum / static_cast<double>(rt60_n) : 0.0;
    return report;
}

} // namespace foleylab
