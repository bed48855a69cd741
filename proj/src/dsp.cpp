#include "dsp.hpp"

#include <cmath>

namespace foleylab::detail {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void fft(std::vector<cplx>& data, bool inverse) {
    const std::size_t n = data.size();
    if (n <= 1) return;

    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * kPi / static_cast<double>(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = data[i + k];
                const cplx v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }

    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& c : data) c *= scale;
    }
}

std::vector<double> hann_window(std::size_t n) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n));
    return w;
}

std::vector<std::vector<cplx>> stft(const std::vector<double>& x, std::size_t win,
                                    std::size_t hop) {
    const auto w = hann_window(win);
    const std::size_t n = x.size();
    const std::size_t n_frames = n < win ? 1 : (n - win) / hop + 2;
    std::vector<std::vector<cplx>> frames;
    frames.reserve(n_frames);
    for (std::size_t t = 0; t < n_frames; ++t) {
        std::vector<cplx> frame(win);
        const std::size_t start = t * hop;
        for (std::size_t i = 0; i < win; ++i) {
            const std::size_t idx = start + i;
            frame[i] = cplx(idx < n ? x[idx] * w[i] : 0.0, 0.0);
        }
        fft(frame, false);
        frames.push_back(std::move(frame));
    }
    return frames;
}

std::vector<double> istft(const std::vector<std::vector<cplx>>& frames, std::size_t win,
                          std::size_t hop, std::size_t out_len) {
    const auto w = hann_window(win);
    const std::size_t total = frames.empty() ? out_len : (frames.size() - 1) * hop + win;
    std::vector<double> acc(total, 0.0);
    std::vector<double> norm(total, 0.0);
    std::vector<cplx> buf;
    for (std::size_t t = 0; t < frames.size(); ++t) {
        buf = frames[t];
        fft(buf, true);
        const std::size_t start = t * hop;
        for (std::size_t i = 0; i < win; ++i) {
            acc[start + i] += buf[i].real() * w[i];
            norm[start + i] += w[i] * w[i];
        }
    }
    std::vector<double> out(out_len, 0.0);
    for (std::size_t i = 0; i < out_len && i < total; ++i)
        out[i] = norm[i] > 1e-12 ? acc[i] / norm[i] : 0.0;
    return out;
}

} // namespace foleylab::detail
