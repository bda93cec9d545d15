#pragma once

#include "bubbleuq/mask.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace bubbleuq {

/// Pixelwise counts with DRY as the positive class.
struct ConfusionMatrix {
    std::uint64_t tp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const noexcept { return tp + tn + fp + fn; }
    ConfusionMatrix& operator+=(const ConfusionMatrix& o) noexcept {
        tp += o.tp;
        tn += o.tn;
        fp += o.fp;
        fn += o.fn;
        return *this;
    }
    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Throws ArgumentError on a dimension mismatch.
ConfusionMatrix confusion(const BinaryMask& pred, const BinaryMask& truth);

/// A metric is nullopt when its denominator is zero.
struct MetricSet {
    std::optional<double> accuracy;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> specificity;
    std::optional<double> f1;
    std::optional<double> iou;
    std::optional<double> mcc;
};

MetricSet metrics(const ConfusionMatrix& cm);

enum class Metric { Accuracy, Precision, Recall, Specificity, F1, IoU, MCC };
inline constexpr std::array<Metric, 7> kAllMetrics = {Metric::Accuracy, Metric::Precision, Metric::Recall,
                                                      Metric::Specificity, Metric::F1, Metric::IoU,
                                                      Metric::MCC};
std::string_view to_string(Metric m);
const std::optional<double>& get(const MetricSet& s, Metric m);

/// Per-metric statistics over frames; undefined entries are skipped and
/// counted.
struct MetricStats {
    std::size_t defined = 0;
    std::size_t undefined = 0;
    std::optional<double> mean;
    std::optional<double> min;
    std::optional<double> max;
    std::optional<double> stddev;  // sample (n-1); 0 for a single entry
};

MetricStats aggregate(std::span<const MetricSet> frames, Metric m);

/// Pooled-pixel (micro) metrics: metrics of the summed confusion matrix.
MetricSet micro_average(std::span<const ConfusionMatrix> frames);

} // namespace bubbleuq
