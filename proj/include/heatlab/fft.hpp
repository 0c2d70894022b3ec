#pragma once

#include <complex>
#include <vector>

#include "heatlab/grid.hpp"

namespace heatlab {

/// In-place radix-2 Cooley-Tukey transform. n = data.size() must be a
/// power of two. inverse=true applies the 1/n-normalized inverse.
void fft_inplace(std::vector<std::complex<double>>& data, bool inverse);

/// Forward transform of an n-dimensional row-major array, applied axis by
/// axis. shape is spec.points_per_axis along each of spec.dim axes.
void fft_nd(std::vector<std::complex<double>>& data, const GridSpec& spec, bool inverse);

}  // namespace heatlab
