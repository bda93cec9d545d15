#pragma once

#include "bubbleuq/boiling_metrics.hpp"
#include "bubbleuq/bubbles.hpp"
#include "bubbleuq/calibration.hpp"
#include "bubbleuq/seg_eval.hpp"
#include "bubbleuq/uq_sim.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace bubbleuq {

// All numeric CSV cells use shortest round-trip formatting (format_double).

struct FrameMetrics {
    std::string frame_id;
    BoilingMetrics metrics;
};

void write_boiling_csv(std::ostream& out, std::span<const FrameMetrics> rows);
nlohmann::json boiling_json(std::span<const FrameMetrics> rows);

struct FrameBubbles {
    std::string frame_id;
    std::vector<BubbleRecord> records;
};

void write_bubbles_csv(std::ostream& out, std::span<const FrameBubbles> frames);
nlohmann::json bubbles_json(std::span<const FrameBubbles> frames);

void write_histogram_csv(std::ostream& out, const Histogram& hist);
/// Reads columns lo, hi, count (any order, by header name); `# scale:` comment
/// optional.
Histogram read_histogram_csv(std::istream& in);

void write_grouped_csv(std::ostream& out, const GroupedDistribution& dist);

void write_matrix_csv(std::ostream& out, const ErrorMatrix& matrix);
ErrorMatrix read_matrix_csv(std::istream& in);
nlohmann::json matrix_json(const ErrorMatrix& matrix);

void write_trace_csv(std::ostream& out, std::span<const TracePoint> trace);

/// Rows as S/N, frequency, area PRE, area ME, perimeter PRE, perimeter ME
/// (then bin edges and matched radius); a final `summary` row holds the
/// weighted averages.
void write_uncertainty_csv(std::ostream& out, const UncertaintyTable& table);
UncertaintyTable read_uncertainty_csv(std::istream& in);
void write_comparison_csv(std::ostream& out, const BoundaryComparison& cmp);

struct EvalFrame {
    std::string frame_id;
    ConfusionMatrix confusion;
    MetricSet metrics;
};

struct EvalReport {
    std::string modality;
    std::string model;
    std::vector<EvalFrame> frames;
};

/// Per-frame rows, then `micro` (pooled pixels) and `macro_*` (per-frame
/// statistics) rows. Undefined metrics print as "undefined".
void write_eval_csv(std::ostream& out, const EvalReport& report);
nlohmann::json eval_json(const EvalReport& report);

/// Splits one CSV line on commas (no quoting).
std::vector<std::string_view> split_csv_line(std::string_view line);

} // namespace bubbleuq
