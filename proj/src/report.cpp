#include "bubbleuq/report.hpp"

#include "bubbleuq/error.hpp"
#include "bubbleuq/numfmt.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>

namespace bubbleuq {

namespace {

std::string opt(const std::optional<double>& v, std::string_view missing = "") {
    return v ? format_double(*v) : std::string(missing);
}

nlohmann::json opt_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

// Reads non-empty, non-comment lines. Comment lines go to `comments`.
std::vector<std::pair<std::size_t, std::string>> data_lines(std::istream& in,
                                                            std::vector<std::string>* comments = nullptr) {
    std::vector<std::pair<std::size_t, std::string>> lines;
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string_view t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '#') {
            if (comments) comments->emplace_back(trim(t.substr(1)));
            continue;
        }
        lines.emplace_back(no, std::string(t));
    }
    return lines;
}

double need_double(std::string_view cell, std::size_t line, const char* what) {
    const auto v = parse_double(cell);
    if (!v) throw FormatError(std::string("expected a number for ") + what, line);
    return *v;
}

std::map<std::string, std::size_t, std::less<>> header_index(std::string_view header) {
    std::map<std::string, std::size_t, std::less<>> idx;
    const auto cols = split_csv_line(header);
    for (std::size_t i = 0; i < cols.size(); ++i) idx.emplace(std::string(trim(cols[i])), i);
    return idx;
}

std::size_t column(const std::map<std::string, std::size_t, std::less<>>& idx, std::string_view name,
                   std::size_t line) {
    const auto it = idx.find(name);
    if (it == idx.end()) throw FormatError("missing column '" + std::string(name) + "'", line);
    return it->second;
}

} // namespace

std::vector<std::string_view> split_csv_line(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            cells.push_back(line.substr(pos));
            break;
        }
        cells.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return cells;
}

void write_boiling_csv(std::ostream& out, std::span<const FrameMetrics> rows) {
    out << "frame_id,theta_dry,rho_cl_pixel,rho_cl_physical\n";
    for (const FrameMetrics& r : rows) {
        out << r.frame_id << ',' << format_double(r.metrics.theta_dry) << ','
            << format_double(r.metrics.rho_cl_pixel) << ',' << opt(r.metrics.rho_cl_physical) << '\n';
    }
}

nlohmann::json boiling_json(std::span<const FrameMetrics> rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const FrameMetrics& r : rows) {
        arr.push_back({{"frame_id", r.frame_id},
                       {"total_pixels", r.metrics.total_pixels},
                       {"dry_pixels", r.metrics.dry_pixels},
                       {"contact_pixels", r.metrics.contact_pixels},
                       {"theta_dry", r.metrics.theta_dry},
                       {"rho_cl_pixel", r.metrics.rho_cl_pixel},
                       {"rho_cl_physical", opt_json(r.metrics.rho_cl_physical)}});
    }
    return arr;
}

void write_bubbles_csv(std::ostream& out, std::span<const FrameBubbles> frames) {
    out << "frame,label,area_px,perimeter_px,area_phys,perimeter_phys,equiv_radius_phys\n";
    for (const FrameBubbles& f : frames) {
        for (const BubbleRecord& r : f.records) {
            out << f.frame_id << ',' << r.label << ',' << r.area_px << ',' << r.perimeter_px << ','
                << opt(r.area_phys) << ',' << opt(r.perimeter_phys) << ',' << opt(r.equiv_radius_phys) << '\n';
        }
    }
}

nlohmann::json bubbles_json(std::span<const FrameBubbles> frames) {
    nlohmann::json arr = nlohmann::json::array();
    for (const FrameBubbles& f : frames) {
        for (const BubbleRecord& r : f.records) {
            arr.push_back({{"frame", f.frame_id},
                           {"label", r.label},
                           {"area_px", r.area_px},
                           {"perimeter_px", r.perimeter_px},
                           {"area_phys", opt_json(r.area_phys)},
                           {"perimeter_phys", opt_json(r.perimeter_phys)},
                           {"equiv_radius_phys", opt_json(r.equiv_radius_phys)}});
        }
    }
    return arr;
}

void write_histogram_csv(std::ostream& out, const Histogram& hist) {
    out << "# scale: " << to_string(hist.scale) << '\n';
    out << "bin,lo,hi,count\n";
    for (std::size_t i = 0; i < hist.bins(); ++i) {
        out << i << ',' << format_double(hist.edges[i]) << ',' << format_double(hist.edges[i + 1]) << ','
            << format_double(hist.counts[i]) << '\n';
    }
}

Histogram read_histogram_csv(std::istream& in) {
    std::vector<std::string> comments;
    const auto lines = data_lines(in, &comments);
    if (lines.size() < 2) throw FormatError("histogram CSV needs a header and at least one bin", 1);
    Histogram hist;
    for (const std::string& c : comments) {
        if (c.rfind("scale:", 0) == 0) hist.scale = parse_histogram_scale(trim(std::string_view(c).substr(6)));
    }
    const auto idx = header_index(lines[0].second);
    const std::size_t c_lo = column(idx, "lo", lines[0].first);
    const std::size_t c_hi = column(idx, "hi", lines[0].first);
    const std::size_t c_count = column(idx, "count", lines[0].first);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& [no, text] = lines[i];
        const auto cells = split_csv_line(text);
        if (cells.size() != idx.size()) throw FormatError("ragged histogram row", no);
        const double lo = need_double(cells[c_lo], no, "lo");
        const double hi = need_double(cells[c_hi], no, "hi");
        const double count = need_double(cells[c_count], no, "count");
        if (!(hi > lo)) throw FormatError("bin edges must ascend", no);
        if (count < 0.0) throw FormatError("negative bin count", no);
        if (hist.edges.empty()) {
            hist.edges.push_back(lo);
        } else if (lo != hist.edges.back()) {
            throw FormatError("bins must be contiguous", no);
        }
        hist.edges.push_back(hi);
        hist.counts.push_back(count);
    }
    return hist;
}

void write_grouped_csv(std::ostream& out, const GroupedDistribution& dist) {
    out << "# scale: " << to_string(dist.scale) << '\n';
    out << "group,bin,lo,hi,count\n";
    for (std::size_t g = 0; g < dist.group_values.size(); ++g) {
        for (std::size_t b = 0; b + 1 < dist.edges.size(); ++b) {
            out << format_double(dist.group_values[g]) << ',' << b << ',' << format_double(dist.edges[b]) << ','
                << format_double(dist.edges[b + 1]) << ',' << format_double(dist.counts[g][b]) << '\n';
        }
    }
}

void write_matrix_csv(std::ostream& out, const ErrorMatrix& matrix) {
    out << "N,R,mode,mean_area,mean_perim,pre_area,pre_perim,me_area,me_perim\n";
    for (const CellResult& c : matrix.cells) {
        out << format_double(c.cell_size) << ',' << format_double(c.radius) << ','
            << to_string(matrix.boundary_mode) << ',' << format_double(c.mean_area) << ','
            << format_double(c.mean_perimeter) << ',' << format_double(c.pre_area) << ','
            << format_double(c.pre_perimeter) << ',' << format_double(c.me_area) << ','
            << format_double(c.me_perimeter) << '\n';
    }
}

ErrorMatrix read_matrix_csv(std::istream& in) {
    const auto lines = data_lines(in);
    if (lines.size() < 2) throw FormatError("matrix CSV needs a header and at least one row", 1);
    const auto idx = header_index(lines[0].second);
    const std::size_t hl = lines[0].first;
    const std::size_t cN = column(idx, "N", hl), cR = column(idx, "R", hl), cMode = column(idx, "mode", hl);
    const std::size_t cMA = column(idx, "mean_area", hl), cMP = column(idx, "mean_perim", hl);
    const std::size_t cPA = column(idx, "pre_area", hl), cPP = column(idx, "pre_perim", hl);
    const std::size_t cEA = column(idx, "me_area", hl), cEP = column(idx, "me_perim", hl);

    std::vector<CellResult> cells;
    std::optional<BoundaryMode> mode;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& [no, text] = lines[i];
        const auto cs = split_csv_line(text);
        if (cs.size() != idx.size()) throw FormatError("ragged matrix row", no);
        CellResult c;
        c.cell_size = need_double(cs[cN], no, "N");
        c.radius = need_double(cs[cR], no, "R");
        c.mean_area = need_double(cs[cMA], no, "mean_area");
        c.mean_perimeter = need_double(cs[cMP], no, "mean_perim");
        c.pre_area = need_double(cs[cPA], no, "pre_area");
        c.pre_perimeter = need_double(cs[cPP], no, "pre_perim");
        c.me_area = need_double(cs[cEA], no, "me_area");
        c.me_perimeter = need_double(cs[cEP], no, "me_perim");
        BoundaryMode m;
        try {
            m = parse_boundary_mode(trim(cs[cMode]));
        } catch (const ArgumentError& e) {
            throw FormatError(e.what(), no);
        }
        if (mode && *mode != m) throw FormatError("matrix CSV mixes boundary modes", no);
        mode = m;
        cells.push_back(c);
    }

    ErrorMatrix matrix;
    matrix.boundary_mode = *mode;
    for (const CellResult& c : cells) {
        matrix.cell_sizes.push_back(c.cell_size);
        matrix.radii.push_back(c.radius);
    }
    for (auto* axis : {&matrix.cell_sizes, &matrix.radii}) {
        std::sort(axis->begin(), axis->end());
        axis->erase(std::unique(axis->begin(), axis->end()), axis->end());
    }
    const std::size_t nr = matrix.radii.size();
    if (cells.size() != matrix.cell_sizes.size() * nr) {
        throw FormatError("matrix CSV is not a dense N x R grid", lines.back().first);
    }
    matrix.cells.resize(cells.size());
    std::vector<bool> filled(cells.size(), false);
    for (const CellResult& c : cells) {
        const auto in_ = static_cast<std::size_t>(
            std::lower_bound(matrix.cell_sizes.begin(), matrix.cell_sizes.end(), c.cell_size) -
            matrix.cell_sizes.begin());
        const auto ir = static_cast<std::size_t>(
            std::lower_bound(matrix.radii.begin(), matrix.radii.end(), c.radius) - matrix.radii.begin());
        const std::size_t flat = in_ * nr + ir;
        if (filled[flat]) throw FormatError("duplicate (N, R) cell in matrix CSV", lines.back().first);
        filled[flat] = true;
        matrix.cells[flat] = c;
    }
    return matrix;
}

nlohmann::json matrix_json(const ErrorMatrix& matrix) {
    nlohmann::json cells = nlohmann::json::array();
    for (const CellResult& c : matrix.cells) {
        cells.push_back({{"N", c.cell_size},
                         {"R", c.radius},
                         {"iterations", c.iterations},
                         {"mean_area", c.mean_area},
                         {"mean_perim", c.mean_perimeter},
                         {"pre_area", c.pre_area},
                         {"pre_perim", c.pre_perimeter},
                         {"me_area", c.me_area},
                         {"me_perim", c.me_perimeter}});
    }
    return {{"mode", std::string(to_string(matrix.boundary_mode))},
            {"cell_sizes", matrix.cell_sizes},
            {"radii", matrix.radii},
            {"cells", cells}};
}

void write_trace_csv(std::ostream& out, std::span<const TracePoint> trace) {
    out << "iterations,mean_area,mean_perim,pre_area,pre_perim\n";
    for (const TracePoint& t : trace) {
        out << t.iterations << ',' << format_double(t.mean_area) << ',' << format_double(t.mean_perimeter) << ','
            << format_double(t.pre_area) << ',' << format_double(t.pre_perimeter) << '\n';
    }
}

void write_uncertainty_csv(std::ostream& out, const UncertaintyTable& table) {
    out << "# cell_size: " << format_double(table.cell_size) << '\n';
    out << "# mode: " << to_string(table.boundary_mode) << '\n';
    out << "sn,frequency,area_pre,area_me,perim_pre,perim_me,bin_lo,bin_hi,matched_r\n";
    double total = 0.0;
    for (const UncertaintyRow& r : table.rows) {
        total += r.frequency;
        out << r.serial << ',' << format_double(r.frequency) << ',' << format_double(r.pre_area) << ','
            << format_double(r.me_area) << ',' << format_double(r.pre_perimeter) << ','
            << format_double(r.me_perimeter) << ',' << format_double(r.bin_lo) << ',' << format_double(r.bin_hi)
            << ',' << format_double(r.matched_radius) << '\n';
    }
    const ErrorSummary& s = table.summary;
    out << "summary," << format_double(total) << ',' << format_double(s.pre_area) << ','
        << format_double(s.me_area) << ',' << format_double(s.pre_perimeter) << ','
        << format_double(s.me_perimeter) << ",,,\n";
}

UncertaintyTable read_uncertainty_csv(std::istream& in) {
    std::vector<std::string> comments;
    const auto lines = data_lines(in, &comments);
    if (lines.size() < 2) throw FormatError("uncertainty CSV needs a header and rows", 1);
    UncertaintyTable table;
    for (const std::string& c : comments) {
        if (c.rfind("cell_size:", 0) == 0) table.cell_size = need_double(std::string_view(c).substr(10), 0, "cell_size");
        if (c.rfind("mode:", 0) == 0) table.boundary_mode = parse_boundary_mode(trim(std::string_view(c).substr(5)));
    }
    bool have_summary = false;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& [no, text] = lines[i];
        const auto cs = split_csv_line(text);
        if (cs.size() != 9) throw FormatError("uncertainty row needs 9 columns", no);
        if (trim(cs[0]) == "summary") {
            table.summary = {need_double(cs[2], no, "area_pre"), need_double(cs[3], no, "area_me"),
                             need_double(cs[4], no, "perim_pre"), need_double(cs[5], no, "perim_me")};
            have_summary = true;
            continue;
        }
        UncertaintyRow r;
        const auto sn = parse_int(cs[0]);
        if (!sn || *sn < 1) throw FormatError("bad serial number", no);
        r.serial = static_cast<std::size_t>(*sn);
        r.frequency = need_double(cs[1], no, "frequency");
        r.pre_area = need_double(cs[2], no, "area_pre");
        r.me_area = need_double(cs[3], no, "area_me");
        r.pre_perimeter = need_double(cs[4], no, "perim_pre");
        r.me_perimeter = need_double(cs[5], no, "perim_me");
        r.bin_lo = need_double(cs[6], no, "bin_lo");
        r.bin_hi = need_double(cs[7], no, "bin_hi");
        r.matched_radius = need_double(cs[8], no, "matched_r");
        table.rows.push_back(r);
    }
    if (!have_summary) throw FormatError("uncertainty CSV has no summary row", lines.back().first);
    return table;
}

void write_comparison_csv(std::ostream& out, const BoundaryComparison& cmp) {
    const ErrorSummary& e = cmp.eroded.summary;
    const ErrorSummary& d = cmp.dilated.summary;
    out << "# cell_size: " << format_double(cmp.eroded.cell_size) << '\n';
    out << "column,erode,dilate\n";
    out << "area_pre," << format_double(e.pre_area) << ',' << format_double(d.pre_area) << '\n';
    out << "area_me," << format_double(e.me_area) << ',' << format_double(d.me_area) << '\n';
    out << "perim_pre," << format_double(e.pre_perimeter) << ',' << format_double(d.pre_perimeter) << '\n';
    out << "perim_me," << format_double(e.me_perimeter) << ',' << format_double(d.me_perimeter) << '\n';
}

void write_eval_csv(std::ostream& out, const EvalReport& report) {
    out << "modality,model,frame,tp,tn,fp,fn";
    for (Metric m : kAllMetrics) out << ',' << to_string(m);
    out << '\n';
    const auto prefix = [&](std::string_view frame) {
        out << report.modality << ',' << report.model << ',' << frame;
    };
    std::vector<ConfusionMatrix> cms;
    std::vector<MetricSet> sets;
    for (const EvalFrame& f : report.frames) {
        cms.push_back(f.confusion);
        sets.push_back(f.metrics);
        prefix(f.frame_id);
        out << ',' << f.confusion.tp << ',' << f.confusion.tn << ',' << f.confusion.fp << ',' << f.confusion.fn;
        for (Metric m : kAllMetrics) out << ',' << opt(get(f.metrics, m), "undefined");
        out << '\n';
    }
    ConfusionMatrix pooled;
    for (const ConfusionMatrix& cm : cms) pooled += cm;
    const MetricSet micro = metrics(pooled);
    prefix("micro");
    out << ',' << pooled.tp << ',' << pooled.tn << ',' << pooled.fp << ',' << pooled.fn;
    for (Metric m : kAllMetrics) out << ',' << opt(get(micro, m), "undefined");
    out << '\n';

    std::vector<MetricStats> stats;
    for (Metric m : kAllMetrics) stats.push_back(aggregate(sets, m));
    const auto stat_row = [&](std::string_view name, auto field) {
        prefix(name);
        out << ",,,,";
        for (const MetricStats& s : stats) out << ',' << field(s);
        out << '\n';
    };
    stat_row("macro_mean", [](const MetricStats& s) { return opt(s.mean, "undefined"); });
    stat_row("macro_min", [](const MetricStats& s) { return opt(s.min, "undefined"); });
    stat_row("macro_max", [](const MetricStats& s) { return opt(s.max, "undefined"); });
    stat_row("macro_std", [](const MetricStats& s) { return opt(s.stddev, "undefined"); });
    stat_row("macro_undefined_count", [](const MetricStats& s) { return std::to_string(s.undefined); });
}

nlohmann::json eval_json(const EvalReport& report) {
    const auto set_json = [](const MetricSet& s) {
        nlohmann::json j;
        for (Metric m : kAllMetrics) j[std::string(to_string(m))] = opt_json(get(s, m));
        return j;
    };
    nlohmann::json frames = nlohmann::json::array();
    std::vector<ConfusionMatrix> cms;
    std::vector<MetricSet> sets;
    for (const EvalFrame& f : report.frames) {
        cms.push_back(f.confusion);
        sets.push_back(f.metrics);
        frames.push_back({{"frame", f.frame_id},
                          {"tp", f.confusion.tp},
                          {"tn", f.confusion.tn},
                          {"fp", f.confusion.fp},
                          {"fn", f.confusion.fn},
                          {"metrics", set_json(f.metrics)}});
    }
    nlohmann::json macro;
    for (Metric m : kAllMetrics) {
        const MetricStats s = aggregate(sets, m);
        macro[std::string(to_string(m))] = {{"mean", opt_json(s.mean)},     {"min", opt_json(s.min)},
                                            {"max", opt_json(s.max)},       {"std", opt_json(s.stddev)},
                                            {"defined", s.defined},         {"undefined", s.undefined}};
    }
    return {{"modality", report.modality},
            {"model", report.model},
            {"frames", frames},
            {"micro", set_json(micro_average(cms))},
            {"macro", macro}};
}

} // namespace bubbleuq
