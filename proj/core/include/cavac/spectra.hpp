#ifndef CAVAC_SPECTRA_HPP
#define CAVAC_SPECTRA_HPP

#include <cstddef>
#include <vector>

#include "cavac/numkit.hpp"

namespace cavac {

/// Uniformly sampled real signal.
struct TimeSeries {
    std::vector<double> samples;
    double dt = 1.0;

    double sample_rate() const { return 1.0 / dt; }
};

struct Spectrum {
    CVector bins;       // length N, power of two
    double sample_rate = 1.0;

    std::size_t size() const { return bins.size(); }
};

/// Lumped cavity-and-neck resonator. l_eff = l + eta*r_neck.
struct ResonatorSpec {
    double c;       // speed of sound, m/s
    double A;       // neck cross-sectional area, m^2
    double V;       // cavity volume, m^3
    double l;       // geometric neck length, m
    double eta;     // empirical end-correction coefficient
    double r_neck;  // neck radius, m
};

/// P_f = P - P_bar, elementwise. Lengths and dt must match.
TimeSeries extract_fluctuation(const TimeSeries& P, const TimeSeries& P_bar);

/// Forward radix-2 DFT, X_k = sum_n x_n exp(-2*pi*i*k*n/N). Input longer
/// than N is truncated, shorter is zero-padded. N must be a power of two.
Spectrum fft(const TimeSeries& x, std::size_t N);
CVector fft(const CVector& x, std::size_t N);
CVector ifft(const CVector& X);

/// One-sided PSD, length N/2+1: |X_k|^2/N with interior bins doubled.
std::vector<double> psd(const Spectrum& s);

struct DominantFrequency {
    double f_peak;  // Hz
    double power;
};

/// Argmax over bins 1..N/2 (DC excluded), ties to the lower bin.
/// Throws on an all-zero PSD.
DominantFrequency dominant_frequency(const std::vector<double>& psd_bins,
                                     double sample_rate);

/// f = (c/2*pi) * sqrt(A / (l_eff * V)) with l_eff = l + eta*r_neck.
double resonator_frequency(const ResonatorSpec& spec);

}  // namespace cavac

#endif
