#ifndef NONLOC_FFT_HPP
#define NONLOC_FFT_HPP

#include <complex>
#include <vector>

#include "nonloc/core.hpp"

namespace nonloc {

/** Half-complex spectrum length for a real transform on grid g. */
std::size_t spectral_size(const GridSpec& g);

/** Real-to-complex forward DFT (unnormalized, FFTW layout: last axis of
 * length n/2+1). Plans are cached per shape and reused. */
void fft_forward(const GridSpec& g, const std::vector<double>& in,
                 std::vector<std::complex<double>>& out);

/** Complex-to-real inverse DFT, normalized by 1/n^N. */
void fft_inverse(const GridSpec& g, const std::vector<std::complex<double>>& in,
                 std::vector<double>& out);

/** |xi|^2 at every half-complex spectral index, xi_k = 2 pi k / L. */
std::vector<double> spectral_k2(const GridSpec& g);

}  // namespace nonloc

#endif
