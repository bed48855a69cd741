#include <cmath>

#include "foleylab/audio.hpp"

namespace foleylab {

namespace {

constexpr double kPi = 3.14159265358979323846;

BiquadCoeffs design_section(BiquadSpec::Kind kind, double f0, double q, double gain_db,
                            int sample_rate) {
    const double w0 = 2.0 * kPi * f0 / sample_rate;
    const double cw = std::cos(w0);
    const double sw = std::sin(w0);
    double b0, b1, b2, a0, a1, a2;

    switch (kind) {
    case BiquadSpec::Kind::lowpass: {
        const double alpha = sw / (2.0 * q);
        b0 = (1.0 - cw) / 2.0;
        b1 = 1.0 - cw;
        b2 = (1.0 - cw) / 2.0;
        a0 = 1.0 + alpha;
        a1 = -2.0 * cw;
        a2 = 1.0 - alpha;
        break;
    }
    case BiquadSpec::Kind::highpass: {
        const double alpha = sw / (2.0 * q);
        b0 = (1.0 + cw) / 2.0;
        b1 = -(1.0 + cw);
        b2 = (1.0 + cw) / 2.0;
        a0 = 1.0 + alpha;
        a1 = -2.0 * cw;
        a2 = 1.0 - alpha;
        break;
    }
    case BiquadSpec::Kind::peaking: {
        const double a = std::pow(10.0, gain_db / 40.0);
        const double alpha = sw / (2.0 * q);
        b0 = 1.0 + alpha * a;
        b1 = -2.0 * cw;
        b2 = 1.0 - alpha * a;
        a0 = 1.0 + alpha / a;
        a1 = -2.0 * cw;
        a2 = 1.0 - alpha / a;
        break;
    }
    case BiquadSpec::Kind::lowshelf:
    case BiquadSpec::Kind::highshelf: {
        // Shelf slope S = 1.
        const double a = std::pow(10.0, gain_db / 40.0);
        const double alpha = sw / 2.0 * std::sqrt(2.0);
        const double two_sqrt_a_alpha = 2.0 * std::sqrt(a) * alpha;
        if (kind == BiquadSpec::Kind::lowshelf) {
            b0 = a * ((a + 1.0) - (a - 1.0) * cw + two_sqrt_a_alpha);
            b1 = 2.0 * a * ((a - 1.0) - (a + 1.0) * cw);
            b2 = a * ((a + 1.0) - (a - 1.0) * cw - two_sqrt_a_alpha);
            a0 = (a + 1.0) + (a - 1.0) * cw + two_sqrt_a_alpha;
            a1 = -2.0 * ((a - 1.0) + (a + 1.0) * cw);
            a2 = (a + 1.0) + (a - 1.0) * cw - two_sqrt_a_alpha;
        } else {
            b0 = a * ((a + 1.0) + (a - 1.0) * cw + two_sqrt_a_alpha);
            b1 = -2.0 * a * ((a - 1.0) + (a + 1.0) * cw);
            b2 = a * ((a + 1.0) + (a - 1.0) * cw - two_sqrt_a_alpha);
            a0 = (a + 1.0) - (a - 1.0) * cw + two_sqrt_a_alpha;
            a1 = 2.0 * ((a - 1.0) - (a + 1.0) * cw);
            a2 = (a + 1.0) - (a - 1.0) * cw - two_sqrt_a_alpha;
        }
        break;
    }
    default:
        throw_invalid("biquad_design: bad kind");
    }
    return BiquadCoeffs{b0 / a0, b1 / a0, b2 / a0, a1 / a0, a2 / a0};
}

} // namespace

std::vector<BiquadCoeffs> biquad_design(const BiquadSpec& spec, int sample_rate) {
    if (sample_rate <= 0) throw_invalid("biquad_design: bad sample rate");
    if (!(spec.cutoff_or_center_hz > 0.0 && spec.cutoff_or_center_hz < sample_rate / 2.0))
        throw_invalid("biquad_design: cutoff must lie in (0, Nyquist)");
    if (spec.q <= 0.0) throw_invalid("biquad_design: q must be positive");
    if (spec.order < 2 || spec.order % 2 != 0) throw_invalid("biquad_design: order must be even, >= 2");

    const bool cascade_kind =
        spec.kind == BiquadSpec::Kind::lowpass || spec.kind == BiquadSpec::Kind::highpass;
    if (!cascade_kind && spec.order != 2)
        throw_invalid("biquad_design: shelf/peaking sections are order 2");

    std::vector<BiquadCoeffs> sections;
    const int n_sections = spec.order / 2;
    for (int i = 0; i < n_sections; ++i) {
        double q = spec.q;
        if (cascade_kind && spec.order > 2) {
            // Butterworth pole-Q distribution for a maximally flat response.
            const double theta = (2.0 * i + 1.0) * kPi / (2.0 * spec.order);
            q = 1.0 / (2.0 * std::cos(theta));
        }
        sections.push_back(
            design_section(spec.kind, spec.cutoff_or_center_hz, q, spec.gain_db, sample_rate));
    }
    return sections;
}

void biquad_run(const BiquadCoeffs& c, std::vector<double>& x) {
    // Transposed direct form II, zero initial state.
    double s1 = 0.0, s2 = 0.0;
    for (double& v : x) {
        const double y = c.b0 * v + s1;
        s1 = c.b1 * v - c.a1 * y + s2;
        s2 = c.b2 * v - c.a2 * y;
        v = y;
    }
}

AudioClip biquad_apply(const AudioClip& clip, const BiquadSpec& spec) {
    const auto sections = biquad_design(spec, clip.sample_rate);
    AudioClip out = clip;
    for (int ch = 0; ch < clip.channels; ++ch) {
        auto x = clip.channel(ch);
        for (const auto& s : sections) biquad_run(s, x);
        out.set_channel(ch, x);
    }
    return out;
}

} // namespace foleylab
