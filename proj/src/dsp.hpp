#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace foleylab::detail {

using cplx = std::complex<double>;

std::size_t next_pow2(std::size_t n);

// In-place iterative radix-2 Cooley-Tukey. data.size() must be a power of two.
void fft(std::vector<cplx>& data, bool inverse);

// Periodic Hann window of length n.
std::vector<double> hann_window(std::size_t n);

// STFT frames of a mono signal: Hann-windowed, `win` samples per frame,
// `hop` samples apart, frame start at k*hop (signal zero-padded at the end so
// every sample is covered). Returns frames[t][bin], bins = win complex values.
std::vector<std::vector<cplx>> stft(const std::vector<double>& x, std::size_t win,
                                    std::size_t hop);

// Inverse of stft() with synthesis windowing and overlap-add normalization.
// Result is truncated/padded to out_len samples.
std::vector<double> istft(const std::vector<std::vector<cplx>>& frames, std::size_t win,
                          std::size_t hop, std::size_t out_len);

} // namespace foleylab::detail
