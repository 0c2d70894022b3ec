#include "heatlab/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace heatlab {

void fft_inplace(std::vector<std::complex<double>>& data, bool inverse) {
    const std::size_t n = data.size();
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft: size must be a power of two");

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    const double sgn = inverse ? 1.0 : -1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sgn * 2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = data[i + k];
                const std::complex<double> v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& z : data) z *= inv;
    }
}

void fft_nd(std::vector<std::complex<double>>& data, const GridSpec& spec, bool inverse) {
    const std::size_t n = static_cast<std::size_t>(spec.points_per_axis);
    const std::size_t total = spec.total_points();
    if (data.size() != total) throw std::invalid_argument("fft_nd: size mismatch");

    std::vector<std::complex<double>> line(n);
    for (int axis = 0; axis < spec.dim; ++axis) {
        // row-major: stride of the last axis is 1; earlier axes have larger strides
        std::size_t stride = 1;
        for (int a = spec.dim - 1; a > axis; --a) stride *= n;
        const std::size_t block = stride * n;
        for (std::size_t base = 0; base < total; base += block) {
            for (std::size_t off = 0; off < stride; ++off) {
                for (std::size_t k = 0; k < n; ++k) line[k] = data[base + off + k * stride];
                fft_inplace(line, inverse);
                for (std::size_t k = 0; k < n; ++k) data[base + off + k * stride] = line[k];
            }
        }
    }
}

}  // namespace heatlab
