#include "cavac/spectra.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cavac {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 transform, decimation in time.
// sign = -1 forward, +1 inverse (without the 1/N factor).
void transform(CVector& a, int sign) {
    const std::size_t n = a.size();
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const Complex wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            Complex w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                Complex u = a[i + k];
                Complex v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

}  // namespace

TimeSeries extract_fluctuation(const TimeSeries& P, const TimeSeries& P_bar) {
    if (P.samples.size() != P_bar.samples.size())
        throw std::invalid_argument("extract_fluctuation: length mismatch");
    if (P.dt != P_bar.dt)
        throw std::invalid_argument("extract_fluctuation: dt mismatch");
    TimeSeries out;
    out.dt = P.dt;
    out.samples.resize(P.samples.size());
    for (std::size_t i = 0; i < P.samples.size(); ++i)
        out.samples[i] = P.samples[i] - P_bar.samples[i];
    return out;
}

CVector fft(const CVector& x, std::size_t N) {
    if (!is_pow2(N))
        throw std::invalid_argument("fft: N must be a power of two");
    CVector a(N, Complex(0.0));
    const std::size_t m = std::min(N, x.size());
    for (std::size_t i = 0; i < m; ++i) a[i] = x[i];
    transform(a, -1);
    return a;
}

Spectrum fft(const TimeSeries& x, std::size_t N) {
    CVector a(x.samples.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = Complex(x.samples[i]);
    Spectrum s;
    s.bins = fft(a, N);
    s.sample_rate = x.sample_rate();
    return s;
}

CVector ifft(const CVector& X) {
    if (!is_pow2(X.size()))
        throw std::invalid_argument("ifft: length must be a power of two");
    CVector a = X;
    transform(a, +1);
    const double inv = 1.0 / static_cast<double>(a.size());
    for (Complex& z : a) z *= inv;
    return a;
}

std::vector<double> psd(const Spectrum& s) {
    const std::size_t N = s.size();
    std::vector<double> out(N / 2 + 1, 0.0);
    if (N == 0) return out;
    for (std::size_t k = 0; k <= N / 2; ++k) {
        double p = std::norm(s.bins[k]) / static_cast<double>(N);
        if (k != 0 && k != N / 2) p *= 2.0;  // one-sided
        out[k] = p;
    }
    return out;
}

DominantFrequency dominant_frequency(const std::vector<double>& psd_bins,
                                     double sample_rate) {
    if (psd_bins.size() < 2)
        throw std::invalid_argument("dominant_frequency: need at least 2 bins");
    std::size_t best = 0;
    double best_p = 0.0;
    for (std::size_t k = 1; k < psd_bins.size(); ++k) {
        if (psd_bins[k] > best_p) {
            best_p = psd_bins[k];
            best = k;
        }
    }
    if (best == 0)
        throw std::runtime_error("dominant_frequency: no dominant component");
    // psd has N/2+1 bins for an N-point transform
    const std::size_t N = 2 * (psd_bins.size() - 1);
    DominantFrequency d;
    d.f_peak = static_cast<double>(best) * sample_rate / static_cast<double>(N);
    d.power = best_p;
    return d;
}

double resonator_frequency(const ResonatorSpec& spec) {
    if (spec.c <= 0 || spec.A <= 0 || spec.V <= 0 || spec.l <= 0 ||
        spec.eta <= 0 || spec.r_neck <= 0)
        throw std::invalid_argument("resonator_frequency: nonpositive field");
    const double l_eff = spec.l + spec.eta * spec.r_neck;
    return spec.c / (2.0 * std::numbers::pi) *
           std::sqrt(spec.A / (l_eff * spec.V));
}

}  // namespace cavac
