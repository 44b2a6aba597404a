#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace bolab::fft {

enum class Direction { kForward, kBackward };

/// Unnormalized complex DFT of length in.size(); in and out must not alias.
/// Forward uses exp(-i...), backward exp(+i...). Thread-safe.
void transform(std::span<const std::complex<double>> in, std::span<std::complex<double>> out,
               Direction direction);

/// Unnormalized 2D complex DFT on a row-major rows x cols array.
void transform_2d(std::span<const std::complex<double>> in,
                  std::span<std::complex<double>> out, std::size_t rows, std::size_t cols,
                  Direction direction);

}  // namespace bolab::fft
