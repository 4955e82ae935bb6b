#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace wirssi::dsp {

/// In-place iterative radix-2 FFT, forward kernel e^{-j2πnk/N}.
/// Size must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& x);

/// Full zero-padded transform of a real sequence. The result has fft_size
/// bins at frequencies m/(fft_size·dt); used as the diagnostic full-grid
/// transform (Parseval checks, plots), not on the pipeline's pruned grid.
std::vector<std::complex<double>> zero_padded_fft(std::span<const double> x, std::size_t fft_size);

std::size_t next_pow2(std::size_t n);

/// Median of a sequence (copies; average of middle pair for even length).
double median(std::span<const double> v);

/// Median absolute deviation about a given center.
double mad(std::span<const double> v, double center);

/// Order-statistic quantile: value at index ceil(q·n)-1 of the sorted data.
double quantile(std::span<const double> v, double q);

double mean(std::span<const double> v);
double stddev(std::span<const double> v);

}  // namespace wirssi::dsp
