#pragma once

#include <span>
#include <vector>

namespace wirssi {

struct SmootherConfig {
    int hampel_window = 7;        ///< odd
    double hampel_threshold = 1.0;  ///< in scaled-MAD standard deviations
    int sg_window = 101;          ///< odd, > sg_order
    int sg_order = 2;

    void validate() const;
};

struct HampelResult {
    std::vector<double> filtered;
    std::vector<bool> outlier_mask;  ///< true where a point was replaced
};

/// Hampel outlier filter: points deviating from the windowed median by more
/// than threshold·1.4826·MAD are replaced by that median. Edge samples
/// without a full centered window pass through unchanged. When MAD is zero,
/// a point is replaced only if it deviates from the median by more than
/// 1e-9 absolute.
HampelResult hampel_filter(std::span<const double> series, const SmootherConfig& cfg);

/// Savitzky-Golay smoother: local least-squares polynomial evaluated at the
/// window center. Edge windows shrink to the widest odd width available;
/// interpolating fits at the extremes return the sample unchanged.
/// Throws SeriesTooShort when the series has fewer than sg_order + 2 points.
std::vector<double> savitzky_golay(std::span<const double> series, const SmootherConfig& cfg);

/// Center-point convolution weights of the full-width SG kernel, exposed for
/// variance diagnostics.
std::vector<double> savitzky_golay_kernel(int window, int order);

}  // namespace wirssi
