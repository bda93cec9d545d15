#include "bubbleuq/seg_eval.hpp"

#include "bubbleuq/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bubbleuq {

ConfusionMatrix confusion(const BinaryMask& pred, const BinaryMask& truth) {
    if (pred.width() != truth.width() || pred.height() != truth.height()) {
        throw ArgumentError("confusion: prediction is " + std::to_string(pred.width()) + "x" +
                            std::to_string(pred.height()) + " but truth is " + std::to_string(truth.width()) +
                            "x" + std::to_string(truth.height()));
    }
    ConfusionMatrix cm;
    const auto p = pred.pixels();
    const auto t = truth.pixels();
    for (std::size_t i = 0; i < p.size(); ++i) {
        const bool pd = p[i] == Pixel::Dry;
        const bool td = t[i] == Pixel::Dry;
        if (pd && td) ++cm.tp;
        else if (!pd && !td) ++cm.tn;
        else if (pd) ++cm.fp;
        else ++cm.fn;
    }
    return cm;
}

namespace {

std::optional<double> ratio(double num, double den) {
    if (den == 0.0) return std::nullopt;
    return num / den;
}

} // namespace

MetricSet metrics(const ConfusionMatrix& cm) {
    const auto tp = static_cast<double>(cm.tp);
    const auto tn = static_cast<double>(cm.tn);
    const auto fp = static_cast<double>(cm.fp);
    const auto fn = static_cast<double>(cm.fn);
    MetricSet s;
    s.accuracy = ratio(tp + tn, tp + tn + fp + fn);
    s.precision = ratio(tp, tp + fp);
    s.recall = ratio(tp, tp + fn);
    s.specificity = ratio(tn, tn + fp);
    s.f1 = ratio(2.0 * tp, 2.0 * tp + fp + fn);
    s.iou = ratio(tp, tp + fp + fn);
    // Product of four marginals can exceed 2^53; take the root of each pair.
    const double den = std::sqrt((tp + fp) * (tp + fn)) * std::sqrt((tn + fp) * (tn + fn));
    s.mcc = ratio(tp * tn - fp * fn, den);
    return s;
}

std::string_view to_string(Metric m) {
    switch (m) {
    case Metric::Accuracy: return "accuracy";
    case Metric::Precision: return "precision";
    case Metric::Recall: return "recall";
    case Metric::Specificity: return "specificity";
    case Metric::F1: return "f1";
    case Metric::IoU: return "iou";
    case Metric::MCC: return "mcc";
    }
    return "?";
}

const std::optional<double>& get(const MetricSet& s, Metric m) {
    switch (m) {
    case Metric::Accuracy: return s.accuracy;
    case Metric::Precision: return s.precision;
    case Metric::Recall: return s.recall;
    case Metric::Specificity: return s.specificity;
    case Metric::F1: return s.f1;
    case Metric::IoU: return s.iou;
    case Metric::MCC: return s.mcc;
    }
    return s.accuracy;
}

MetricStats aggregate(std::span<const MetricSet> frames, Metric m) {
    MetricStats st;
    double sum = 0.0;
    for (const MetricSet& f : frames) {
        const auto& v = get(f, m);
        if (!v) {
            ++st.undefined;
            continue;
        }
        ++st.defined;
        sum += *v;
        st.min = st.min ? std::min(*st.min, *v) : *v;
        st.max = st.max ? std::max(*st.max, *v) : *v;
    }
    if (st.defined == 0) return st;
    const double mean = sum / static_cast<double>(st.defined);
    st.mean = mean;
    double ss = 0.0;
    for (const MetricSet& f : frames) {
        if (const auto& v = get(f, m)) ss += (*v - mean) * (*v - mean);
    }
    st.stddev = st.defined > 1 ? std::sqrt(ss / static_cast<double>(st.defined - 1)) : 0.0;
    return st;
}

MetricSet micro_average(std::span<const ConfusionMatrix> frames) {
    ConfusionMatrix pooled;
    for (const ConfusionMatrix& cm : frames) pooled += cm;
    return metrics(pooled);
}

} // namespace bubbleuq
