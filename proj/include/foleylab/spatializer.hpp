#pragma once

#include <string>
#include <utility>

#include "foleylab/audio.hpp"
#include "foleylab/trajectory.hpp"

namespace foleylab {

inline constexpr double kSpeedOfSoundMps = 343.0;
inline constexpr double kDefaultInterauralM = 0.17;

/// Parametric room model: decay time plus wet/dry balance. Presets mirror the
/// usual studio families.
struct RoomSpec {
    enum class Preset { dry, room, chamber, hall, plate, custom };

    Preset preset = Preset::dry;
    double rt60_s = 0.0;
    double wet_ratio = 0.25;
    double interaural_m = kDefaultInterauralM;

    static RoomSpec from_preset(Preset p, double wet = 0.25, double interaural = kDefaultInterauralM);
    static RoomSpec from_preset(const std::string& name, double wet = 0.25,
                                double interaural = kDefaultInterauralM);
    void validate(bool strict_interaural = true) const;
};

const char* preset_name(RoomSpec::Preset p);

/// Signed interaural time difference in seconds for a source at
/// `azimuth_deg`; positive means the left channel is delayed (source right).
double itd_of(double azimuth_deg, double interaural_m = kDefaultInterauralM);

/// Constant-power pan gains with broadband 1/r distance attenuation
/// referenced to d_ref. Returns (g_left, g_right).
std::pair<double, double> pan_gains(double azimuth_deg, double depth_m, double d_ref = 1.0);

/// Schroeder reverberator: 4 parallel combs (29.7/37.1/41.1/43.7 ms, feedback
/// set so each decays 60 dB in rt60) into 2 series allpasses (5.0/1.7 ms,
/// g=0.7). Output is (1-wet)*dry + wet*reverb with the tail extended by rt60.
/// rt60 == 0 or wet == 0 returns the input unchanged.
AudioClip schroeder_reverb(const AudioClip& clip, const RoomSpec& room);

/// Renders a mono event to stereo along a trajectory: 20 ms blocks with 50%
/// overlap and Hann crossfade, per-block constant-power pan and
/// fractional-delay ITD taken at the block center, inactive frames rendered
/// as silence (10 ms boundary fades placed inside the active region), reverb
/// on the summed stereo.
AudioClip render_event(const AudioClip& mono, const Trajectory& traj, const RoomSpec& room);

} // namespace foleylab
