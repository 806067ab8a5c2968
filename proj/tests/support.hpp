#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "fieldnoise/spectral.hpp"

namespace support {

// Time-domain side of Parseval for an averaged modified periodogram: the mean
// over 50%-overlapping segments of sum((x - mean) w)^2 / sum(w^2), less the
// zero-frequency bin (sum((x - mean) w))^2 / N that the estimator does not report.
inline double windowed_variance(std::span<const double> x, std::size_t seg, fieldnoise::Window window)
{
    std::vector<double> w(seg, 1.0);
    if (window == fieldnoise::Window::hann)
        for (std::size_t i = 0; i < seg; ++i)
            w[i] = 0.5 - 0.5 * std::cos(2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(seg));
    double wp = 0;
    for (double v : w)
        wp += v * v;
    const std::size_t n_seg = (x.size() - seg) / (seg / 2) + 1;
    double total = 0;
    for (std::size_t s = 0; s < n_seg; ++s) {
        const auto part = x.subspan(s * seg / 2, seg);
        double m = 0;
        for (double v : part)
            m += v;
        m /= static_cast<double>(seg);
        double dc = 0;
        for (std::size_t i = 0; i < seg; ++i) {
            total += (part[i] - m) * (part[i] - m) * w[i] * w[i];
            dc += (part[i] - m) * w[i];
        }
        total -= dc * dc / static_cast<double>(seg);
    }
    return total / (wp * static_cast<double>(n_seg));
}

inline double variance(std::span<const double> x)
{
    double m = 0, v = 0;
    for (double a : x)
        m += a;
    m /= static_cast<double>(x.size());
    for (double a : x)
        v += (a - m) * (a - m);
    return v / static_cast<double>(x.size());
}

inline double integrated_psd(const fieldnoise::PsdEstimate& est)
{
    double total = 0;
    for (double p : est.psd)
        total += p * est.resolution;
    return total;
}

} // namespace support
