// bubbleuq command-line front end.
//
// Exit codes: 0 ok, 1 some input could not be processed, 2 usage/config error.

#include "bubbleuq/boiling_metrics.hpp"
#include "bubbleuq/bubbles.hpp"
#include "bubbleuq/calibration.hpp"
#include "bubbleuq/config.hpp"
#include "bubbleuq/error.hpp"
#include "bubbleuq/mask_io.hpp"
#include "bubbleuq/numfmt.hpp"
#include "bubbleuq/report.hpp"
#include "bubbleuq/seg_eval.hpp"
#include "bubbleuq/svg.hpp"
#include "bubbleuq/uq_sim.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace bubbleuq;

namespace {

constexpr int kOk = 0;
constexpr int kDataError = 1;
constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Everything a command produces. Files are held in memory until the command
// finishes so replay can compare instead of write.
struct Run {
    std::string command;
    json config = json::object();
    std::vector<std::string> inputs;
    std::optional<std::uint64_t> seed;
    std::vector<std::pair<std::string, std::string>> files;
    std::string stdout_text;
    std::string manifest_path;
    int exit_code = kOk;
};

void emit(Run& run, const std::string& path, std::string content) {
    if (path.empty() || path == "-") {
        run.stdout_text += content;
    } else {
        run.files.emplace_back(path, std::move(content));
    }
}

void data_error(Run& run, const std::string& what) {
    std::cerr << "error: " << what << '\n';
    run.exit_code = kDataError;
}

int default_threads() {
    const char* env = std::getenv("BUBBLEUQ_THREADS");
    if (!env || !*env) return 0;
    const auto v = parse_int(env);
    if (!v || *v < 1) {
        std::cerr << "warning: ignoring BUBBLEUQ_THREADS='" << env << "'\n";
        return 0;
    }
    return static_cast<int>(*v);
}

// Mask files found under directories, sorted by file name; plain paths kept
// as given so a missing file is reported where it occurs.
std::vector<std::string> expand_inputs(const std::vector<std::string>& paths) {
    std::vector<std::string> out;
    for (const std::string& p : paths) {
        std::error_code ec;
        if (fs::is_directory(p, ec)) {
            std::vector<fs::path> found;
            for (const auto& entry : fs::directory_iterator(p)) {
                if (!entry.is_regular_file()) continue;
                std::string ext = entry.path().extension().string();
                std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
                if (ext == ".pgm" || ext == ".csv") found.push_back(entry.path());
            }
            std::sort(found.begin(), found.end(),
                      [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
            for (const fs::path& f : found) out.push_back(f.string());
        } else {
            out.push_back(p);
        }
    }
    return out;
}

std::string absolute(const std::string& p) {
    std::error_code ec;
    const fs::path a = fs::absolute(p, ec);
    return ec ? p : a.lexically_normal().string();
}

BinaryMask load(const std::string& path, std::optional<double> resolution) {
    BinaryMask mask = load_mask_file(path);
    if (resolution) mask.set_resolution(Resolution(*resolution));
    return mask;
}

std::vector<double> range_arg(const std::string& text, const char* name) {
    try {
        return parse_range(text);
    } catch (const ArgumentError& e) {
        throw UsageError(std::string("--") + name + ": " + e.what());
    }
}

std::pair<double, double> pair_arg(const std::string& text, const char* name) {
    const auto colon = text.find(':');
    const auto lo = parse_double(std::string_view(text).substr(0, colon));
    const auto hi = colon == std::string::npos ? std::nullopt : parse_double(std::string_view(text).substr(colon + 1));
    if (!lo || !hi || !(*hi > *lo)) throw UsageError(std::string("--") + name + " expects lo:hi with hi > lo");
    return {*lo, *hi};
}

BoundaryMode mode_arg(const std::string& text) {
    try {
        return parse_boundary_mode(text);
    } catch (const ArgumentError& e) {
        throw UsageError(std::string("--boundary: ") + e.what());
    }
}

std::string fmt_json(const json& j) { return j.dump(2) + "\n"; }

// Options shared by the sweep-running commands.
struct SweepOpts {
    double length = 1000.0;
    std::string radii = "5:200:5";
    std::uint64_t iters = 20000;
    std::uint64_t seed = 1;
    std::string boundary = "none";
    int threads = 0;
};

void add_sweep_opts(CLI::App* sub, SweepOpts& o, bool with_radii) {
    sub->add_option("--length", o.length, "Domain side L in um")->capture_default_str();
    if (with_radii) sub->add_option("--radii", o.radii, "Bubble radii: start:stop:step or list")->capture_default_str();
    sub->add_option("--iters", o.iters, "Monte Carlo draws per cell")->capture_default_str();
    sub->add_option("--seed", o.seed, "Master seed")->capture_default_str();
    sub->add_option("--boundary", o.boundary, "Boundary mode: none, erode, dilate")->capture_default_str();
    sub->add_option("--threads", o.threads, "Worker threads (default: BUBBLEUQ_THREADS or OpenMP default)");
}

SimConfig sim_config(const SweepOpts& o, std::vector<double> cells) {
    SimConfig c;
    c.domain_length = o.length;
    c.cell_sizes = std::move(cells);
    c.radii = range_arg(o.radii, "radii");
    c.iterations = o.iters;
    c.seed = o.seed;
    c.boundary_mode = mode_arg(o.boundary);
    try {
        validate(c);
    } catch (const ArgumentError& e) {
        throw UsageError(e.what());
    }
    return c;
}

json sim_json(const SimConfig& c) {
    return {{"length", c.domain_length},
            {"cells", c.cell_sizes},
            {"radii", c.radii},
            {"iters", c.iterations},
            {"seed", c.seed},
            {"boundary", std::string(to_string(c.boundary_mode))}};
}

// ---- metrics ---------------------------------------------------------------

struct MetricsOpts {
    std::vector<std::string> paths;
    std::optional<double> resolution;
    std::string format = "csv";
    std::string output;
};

void cmd_metrics(const MetricsOpts& o, Run& run) {
    if (o.resolution && !(*o.resolution > 0)) throw UsageError("--resolution must be positive");
    std::vector<FrameMetrics> rows;
    for (const std::string& path : expand_inputs(o.paths)) {
        run.inputs.push_back(absolute(path));
        try {
            const BinaryMask mask = load(path, o.resolution);
            rows.push_back({fs::path(path).filename().string(), compute_boiling_metrics(mask)});
        } catch (const std::exception& e) {
            data_error(run, path + ": " + e.what());
        }
    }
    run.config = {{"resolution", o.resolution ? json(*o.resolution) : json()}, {"format", o.format}};
    std::ostringstream s;
    if (o.format == "json") {
        s << fmt_json(boiling_json(rows));
    } else {
        write_boiling_csv(s, rows);
    }
    emit(run, o.output, s.str());
}

// ---- simulate --------------------------------------------------------------

struct SimulateOpts {
    SweepOpts sweep;
    std::string cells = "5:50:5";
    std::string format = "csv";
    std::string output;
};

void cmd_simulate(const SimulateOpts& o, Run& run) {
    const SimConfig c = sim_config(o.sweep, range_arg(o.cells, "cells"));
    run.config = sim_json(c);
    run.config["format"] = o.format;
    run.seed = c.seed;
    const auto t0 = std::chrono::steady_clock::now();
    const ErrorMatrix m = run_sweep(c, o.sweep.threads);
    run.config["compute_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream s;
    if (o.format == "json") {
        s << fmt_json(matrix_json(m));
    } else {
        write_matrix_csv(s, m);
    }
    emit(run, o.output, s.str());
}

// ---- calibrate -------------------------------------------------------------

struct CalibrateOpts {
    SweepOpts sweep;
    std::string histogram;
    std::string mask;
    std::optional<double> resolution;
    std::size_t bins = 8;
    std::string scale = "linear";
    std::string range;
    int connectivity = 8;
    std::string matrix;
    std::string matrix_erode;
    std::string matrix_dilate;
    std::optional<double> cell_size;
    bool compare = false;
    std::string output;
};

ErrorMatrix read_matrix_file(const std::string& path, Run& run) {
    run.inputs.push_back(absolute(path));
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return read_matrix_csv(in);
    } catch (const FormatError& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void cmd_calibrate(const CalibrateOpts& o, Run& run) {
    if (o.histogram.empty() == o.mask.empty()) throw UsageError("give exactly one of --histogram or --mask");
    if (o.compare && !o.matrix.empty()) throw UsageError("--compare-boundary takes --matrix-erode/--matrix-dilate");
    if (o.matrix_erode.empty() != o.matrix_dilate.empty()) {
        throw UsageError("--matrix-erode and --matrix-dilate go together");
    }
    if (!o.matrix_erode.empty() && !o.compare) throw UsageError("--matrix-erode/--matrix-dilate need --compare-boundary");

    Histogram hist;
    std::optional<double> cell = o.cell_size;
    if (!o.histogram.empty()) {
        run.inputs.push_back(absolute(o.histogram));
        std::ifstream in(o.histogram);
        if (!in) throw std::runtime_error("cannot open " + o.histogram);
        try {
            hist = read_histogram_csv(in);
        } catch (const FormatError& e) {
            throw std::runtime_error(o.histogram + ": " + e.what());
        }
    } else {
        run.inputs.push_back(absolute(o.mask));
        const BinaryMask mask = load(o.mask, o.resolution);
        if (!mask.resolution()) {
            throw UsageError(o.mask + " has no embedded resolution; pass --resolution");
        }
        if (!cell) cell = mask.resolution()->um_per_px();
        const auto records = measure_bubbles(mask, parse_connectivity(o.connectivity));
        std::vector<double> radii;
        for (const BubbleRecord& r : records) radii.push_back(field_value(r, BubbleField::Radius));
        if (radii.empty()) throw std::runtime_error(o.mask + ": no DRY bubbles to build a histogram from");
        std::optional<std::pair<double, double>> range;
        if (!o.range.empty()) range = pair_arg(o.range, "range");
        hist = build_histogram(radii, o.bins, parse_histogram_scale(o.scale), range);
    }
    if (!cell) throw UsageError("--cell-size is required with --histogram");
    if (!(*cell > 0)) throw UsageError("--cell-size must be positive");

    run.config = {{"cell_size", *cell}, {"compare_boundary", o.compare}};
    if (!o.mask.empty()) {
        run.config["bins"] = o.bins;
        run.config["scale"] = o.scale;
        run.config["connectivity"] = o.connectivity;
        if (!o.range.empty()) run.config["range"] = o.range;
    }

    const auto sweep = [&](BoundaryMode mode) {
        SweepOpts so = o.sweep;
        so.boundary = std::string(to_string(mode));
        const SimConfig c = sim_config(so, {*cell});
        run.config["sweep"] = sim_json(c);
        run.config["sweep"].erase("boundary");
        run.seed = c.seed;
        return run_sweep(c, o.sweep.threads);
    };

    std::ostringstream s;
    if (o.compare) {
        ErrorMatrix er, di;
        if (!o.matrix_erode.empty()) {
            er = read_matrix_file(o.matrix_erode, run);
            di = read_matrix_file(o.matrix_dilate, run);
        } else {
            er = sweep(BoundaryMode::Erode);
            di = sweep(BoundaryMode::Dilate);
        }
        if (er.boundary_mode != BoundaryMode::Erode || di.boundary_mode != BoundaryMode::Dilate) {
            throw UsageError("--matrix-erode/--matrix-dilate must hold erode and dilate sweeps");
        }
        const BoundaryComparison cmp = compare_boundary_modes(hist, er, di, *cell);
        write_comparison_csv(s, cmp);
        if (!o.output.empty() && o.output != "-") {
            std::ostringstream e, d;
            write_uncertainty_csv(e, cmp.eroded);
            write_uncertainty_csv(d, cmp.dilated);
            const fs::path out(o.output);
            const fs::path stem = out.parent_path() / out.stem();
            emit(run, stem.string() + ".erode.csv", e.str());
            emit(run, stem.string() + ".dilate.csv", d.str());
        }
    } else {
        ErrorMatrix m;
        if (!o.matrix.empty()) {
            m = read_matrix_file(o.matrix, run);
        } else {
            m = sweep(mode_arg(o.sweep.boundary));
            run.config["sweep"]["boundary"] = std::string(to_string(m.boundary_mode));
        }
        write_uncertainty_csv(s, build_uncertainty_table(hist, m, *cell));
    }
    // The primary output goes first so the manifest lands next to it.
    run.files.insert(run.files.begin(), {o.output, s.str()});
    if (o.output.empty() || o.output == "-") {
        run.stdout_text = run.files.front().second;
        run.files.erase(run.files.begin());
    }
}

// ---- evaluate --------------------------------------------------------------

struct EvaluateOpts {
    std::vector<std::string> pred;
    std::vector<std::string> truth;
    std::string modality = "unspecified";
    std::string model = "unspecified";
    std::string format = "csv";
    std::string output;
};

void cmd_evaluate(const EvaluateOpts& o, Run& run) {
    const auto pred = expand_inputs(o.pred);
    const auto truth = expand_inputs(o.truth);
    if (pred.size() != truth.size()) {
        throw UsageError("--pred has " + std::to_string(pred.size()) + " masks but --truth has " +
                         std::to_string(truth.size()));
    }
    EvalReport report{o.modality, o.model, {}};
    for (std::size_t i = 0; i < pred.size(); ++i) {
        run.inputs.push_back(absolute(pred[i]));
        run.inputs.push_back(absolute(truth[i]));
        try {
            const ConfusionMatrix cm = confusion(load(pred[i], std::nullopt), load(truth[i], std::nullopt));
            report.frames.push_back({fs::path(pred[i]).filename().string(), cm, metrics(cm)});
        } catch (const std::exception& e) {
            data_error(run, "pair (" + pred[i] + ", " + truth[i] + "): " + e.what());
        }
    }
    run.config = {{"modality", o.modality}, {"model", o.model}, {"format", o.format}};
    std::ostringstream s;
    if (o.format == "json") {
        s << fmt_json(eval_json(report));
    } else {
        write_eval_csv(s, report);
    }
    emit(run, o.output, s.str());
}

// ---- bubbles ---------------------------------------------------------------

struct BubblesOpts {
    std::vector<std::string> paths;
    std::optional<double> resolution;
    int connectivity = 8;
    std::string field = "radius";
    std::size_t bins = 10;
    std::string scale = "linear";
    std::string range;
    std::string format = "csv";
    std::string table;
    std::string histogram;
    std::string svg;
    std::string group_values;
    std::string grouped;
};

void cmd_bubbles(const BubblesOpts& o, Run& run) {
    const Connectivity conn = parse_connectivity(o.connectivity);
    const BubbleField field = parse_bubble_field(o.field);
    const HistogramScale scale = parse_histogram_scale(o.scale);
    if (o.bins == 0) throw UsageError("--bins must be at least 1");
    std::optional<std::pair<double, double>> range;
    if (!o.range.empty()) range = pair_arg(o.range, "range");
    const auto paths = expand_inputs(o.paths);
    std::vector<double> groups;
    if (!o.group_values.empty()) {
        groups = range_arg(o.group_values, "group-values");
        if (groups.size() != paths.size()) {
            throw UsageError("--group-values has " + std::to_string(groups.size()) + " values for " +
                             std::to_string(paths.size()) + " masks");
        }
    }
    if (!o.grouped.empty() && groups.empty()) throw UsageError("--grouped needs --group-values");

    std::vector<FrameBubbles> frames;
    std::vector<BubbleGroup> grouped;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        run.inputs.push_back(absolute(paths[i]));
        try {
            const BinaryMask mask = load(paths[i], o.resolution);
            frames.push_back({fs::path(paths[i]).filename().string(), measure_bubbles(mask, conn)});
            if (!groups.empty()) grouped.emplace_back(groups[i], frames.back().records);
        } catch (const std::exception& e) {
            data_error(run, paths[i] + ": " + e.what());
        }
    }
    run.config = {{"resolution", o.resolution ? json(*o.resolution) : json()},
                  {"connectivity", o.connectivity},
                  {"field", o.field},
                  {"bins", o.bins},
                  {"scale", o.scale},
                  {"range", o.range},
                  {"format", o.format}};

    std::ostringstream t;
    if (o.format == "json") {
        t << fmt_json(bubbles_json(frames));
    } else {
        write_bubbles_csv(t, frames);
    }
    emit(run, o.table, t.str());

    if (!o.histogram.empty() || !o.svg.empty()) {
        std::vector<double> values;
        for (const FrameBubbles& f : frames) {
            for (const BubbleRecord& r : f.records) values.push_back(field_value(r, field));
        }
        if (values.empty() && !range) {
            data_error(run, "no bubbles found; histogram not written");
        } else {
            const Histogram h = build_histogram(values, o.bins, scale, range);
            if (!o.histogram.empty()) {
                std::ostringstream s;
                write_histogram_csv(s, h);
                emit(run, o.histogram, s.str());
            }
            if (!o.svg.empty()) emit(run, o.svg, histogram_svg(h, std::string(to_string(field))));
        }
    }
    if (!o.grouped.empty()) {
        BinSpec spec{field, o.bins, scale, range};
        std::ostringstream s;
        write_grouped_csv(s, grouped_distribution(grouped, spec));
        emit(run, o.grouped, s.str());
    }
}

// ---- convergence -----------------------------------------------------------

struct ConvergenceOpts {
    SweepOpts sweep;
    double cell_size = 0;
    double radius = 0;
    std::string milestones = "5000,10000,15000,20000";
    std::string output;
    std::string svg;
};

void cmd_convergence(const ConvergenceOpts& o, Run& run) {
    std::vector<std::uint64_t> ms;
    try {
        ms = parse_milestones(o.milestones);
    } catch (const ArgumentError& e) {
        throw UsageError(std::string("--milestones: ") + e.what());
    }
    const BoundaryMode mode = mode_arg(o.sweep.boundary);
    std::vector<TracePoint> trace;
    try {
        trace = convergence_trace(GridSpec(o.sweep.length, o.cell_size), o.radius, ms, o.sweep.seed, mode);
    } catch (const ArgumentError& e) {
        throw UsageError(e.what());
    }
    run.seed = o.sweep.seed;
    run.config = {{"length", o.sweep.length},     {"cell_size", o.cell_size}, {"radius", o.radius},
                  {"milestones", ms},               {"seed", o.sweep.seed},
                  {"boundary", std::string(to_string(mode))}};
    std::ostringstream s;
    write_trace_csv(s, trace);
    emit(run, o.output, s.str());
    if (!o.svg.empty()) emit(run, o.svg, trace_svg(trace));
}

// ---- driver ----------------------------------------------------------------

// Config-file keys become `--key=value` arguments unless the key is already on
// the command line. The effective argument list is what the manifest records.
std::vector<std::string> inject_config(std::vector<std::string> args) {
    // args[0] is the subcommand.
    std::string path;
    std::vector<std::string> rest;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (path.empty()) return args;
    std::map<std::string, std::string> kv;
    try {
        kv = load_config_file(path);
    } catch (const FormatError& e) {
        throw UsageError(path + ": " + e.what());
    } catch (const ArgumentError& e) {
        throw UsageError(e.what());
    }
    std::vector<std::string> out{args[0]};
    for (const auto& [key, value] : kv) {
        const std::string flag = "--" + key;
        const bool given = std::any_of(rest.begin(), rest.end(), [&](const std::string& a) {
            return a == flag || a.rfind(flag + "=", 0) == 0;
        });
        if (!given) out.push_back(flag + "=" + value);
    }
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

enum class Mode { Normal, Check };

int execute(std::vector<std::string> args, Mode mode);

int cmd_replay(const std::string& manifest_path, bool check) {
    std::ifstream in(manifest_path);
    if (!in) {
        std::cerr << "error: cannot open manifest " << manifest_path << '\n';
        return kUsageError;
    }
    json m;
    try {
        m = json::parse(in);
    } catch (const json::exception& e) {
        std::cerr << "error: " << manifest_path << ": " << e.what() << '\n';
        return kUsageError;
    }
    if (!m.contains("argv") || !m["argv"].is_array() || !m.contains("cwd")) {
        std::cerr << "error: " << manifest_path << " is not a bubbleuq manifest\n";
        return kUsageError;
    }
    std::error_code ec;
    fs::current_path(m["cwd"].get<std::string>(), ec);
    if (ec) {
        std::cerr << "error: cannot enter " << m["cwd"].get<std::string>() << ": " << ec.message() << '\n';
        return kDataError;
    }
    return execute(m["argv"].get<std::vector<std::string>>(), check ? Mode::Check : Mode::Normal);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return {};
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int finish(Run& run, const std::vector<std::string>& argv, Mode mode, double wall_seconds) {
    if (mode == Mode::Check) {
        bool same = true;
        for (const auto& [path, content] : run.files) {
            if (read_file(path) != content) {
                std::cerr << "differs: " << path << '\n';
                same = false;
            }
        }
        if (run.files.empty()) std::cerr << "note: run wrote only to stdout; nothing to compare\n";
        std::cout << (same ? "replay: outputs identical\n" : "replay: outputs differ\n");
        return same ? run.exit_code : kDataError;
    }
    for (const auto& [path, content] : run.files) {
        const fs::path p(path);
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        std::ofstream out(p, std::ios::binary);
        out << content;
        if (!out) {
            data_error(run, "cannot write " + path);
        }
    }
    std::cout << run.stdout_text;

    std::string manifest = run.manifest_path;
    if (manifest.empty() && !run.files.empty()) manifest = run.files.front().first + ".manifest.json";
    if (!manifest.empty()) {
        json outputs = json::array();
        for (const auto& f : run.files) outputs.push_back(absolute(f.first));
        json j = {{"tool", "bubbleuq"},
                  {"version", BUBBLEUQ_VERSION},
                  {"command", run.command},
                  {"argv", argv},
                  {"cwd", fs::current_path().string()},
                  {"config", run.config},
                  {"inputs", run.inputs},
                  {"seed", run.seed ? json(*run.seed) : json()},
                  {"outputs", outputs},
                  {"exit_code", run.exit_code},
                  {"wall_seconds", wall_seconds}};
        std::ofstream out(manifest);
        out << j.dump(2) << '\n';
        if (!out) data_error(run, "cannot write manifest " + manifest);
    }
    return run.exit_code;
}

int execute(std::vector<std::string> args, Mode mode) {
    CLI::App app{"Boiling-surface mask analysis and pixelation uncertainty toolkit", "bubbleuq"};
    app.set_version_flag("--version", BUBBLEUQ_VERSION);
    app.require_subcommand(1);
    const int env_threads = default_threads();

    std::string manifest_path;
    std::string config_path;  // consumed by inject_config; declared for --help
    const auto add_common = [&](CLI::App* sub, std::string& output, const char* output_help) {
        sub->add_option("-o,--output", output, output_help);
        sub->add_option("--manifest", manifest_path, "Manifest path (default: <output>.manifest.json)");
        sub->add_option("--config", config_path, "key = value config file; flags override it");
    };

    MetricsOpts mo;
    auto* metrics = app.add_subcommand("metrics", "Dry area fraction and contact line density per mask");
    metrics->add_option("paths", mo.paths, "Mask files or directories")->required();
    metrics->add_option("--resolution", mo.resolution, "um per pixel (overrides embedded)");
    metrics->add_option("--format", mo.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    add_common(metrics, mo.output, "Output file (default stdout)");

    SimulateOpts so;
    so.sweep.threads = env_threads;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo error matrix over (N, R)");
    simulate->add_option("--cells", so.cells, "Cell sizes N in um: start:stop:step or list")->capture_default_str();
    add_sweep_opts(simulate, so.sweep, true);
    simulate->add_option("--format", so.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    add_common(simulate, so.output, "Output file (default stdout)");

    CalibrateOpts co;
    co.sweep.threads = env_threads;
    auto* calibrate = app.add_subcommand("calibrate", "Frequency-weighted uncertainty table");
    calibrate->add_option("--histogram", co.histogram, "Radius histogram CSV (lo,hi,count)");
    calibrate->add_option("--mask", co.mask, "Mask to measure bubble radii from");
    calibrate->add_option("--resolution", co.resolution, "um per pixel for --mask");
    calibrate->add_option("--bins", co.bins, "Histogram bins for --mask")->capture_default_str();
    calibrate->add_option("--scale", co.scale, "linear or log")->capture_default_str();
    calibrate->add_option("--range", co.range, "Histogram range lo:hi for --mask");
    calibrate->add_option("--connectivity", co.connectivity)->check(CLI::IsMember({4, 8}))->capture_default_str();
    calibrate->add_option("--matrix", co.matrix, "Error matrix CSV (default: run the sweep at --cell-size)");
    calibrate->add_option("--matrix-erode", co.matrix_erode, "Erode-mode matrix CSV for --compare-boundary");
    calibrate->add_option("--matrix-dilate", co.matrix_dilate, "Dilate-mode matrix CSV for --compare-boundary");
    calibrate->add_option("--cell-size", co.cell_size, "N in um (default: mask resolution)");
    calibrate->add_flag("--compare-boundary", co.compare, "Erode and dilate summaries side by side");
    add_sweep_opts(calibrate, co.sweep, true);
    add_common(calibrate, co.output, "Output file (default stdout)");

    EvaluateOpts eo;
    auto* evaluate = app.add_subcommand("evaluate", "Segmentation metrics of predicted vs truth masks");
    evaluate->add_option("--pred", eo.pred, "Predicted masks or directories")->required();
    evaluate->add_option("--truth", eo.truth, "Ground-truth masks or directories")->required();
    evaluate->add_option("--modality", eo.modality)->capture_default_str();
    evaluate->add_option("--model", eo.model)->capture_default_str();
    evaluate->add_option("--format", eo.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    add_common(evaluate, eo.output, "Output file (default stdout)");

    BubblesOpts bo;
    auto* bubbles = app.add_subcommand("bubbles", "Per-bubble table and size histograms");
    bubbles->add_option("paths", bo.paths, "Mask files or directories")->required();
    bubbles->add_option("--resolution", bo.resolution, "um per pixel (overrides embedded)");
    bubbles->add_option("--connectivity", bo.connectivity)->check(CLI::IsMember({4, 8}))->capture_default_str();
    bubbles->add_option("--field", bo.field, "radius, area or perimeter")->capture_default_str();
    bubbles->add_option("--bins", bo.bins)->capture_default_str();
    bubbles->add_option("--scale", bo.scale, "linear or log")->capture_default_str();
    bubbles->add_option("--range", bo.range, "Histogram range lo:hi");
    bubbles->add_option("--format", bo.format, "Table format")->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    bubbles->add_option("--histogram", bo.histogram, "Histogram CSV output");
    bubbles->add_option("--svg", bo.svg, "Histogram SVG output");
    bubbles->add_option("--group-values", bo.group_values, "One group value per mask (e.g. heat flux)");
    bubbles->add_option("--grouped", bo.grouped, "Grouped distribution CSV output");
    add_common(bubbles, bo.table, "Bubble table output (default stdout)");

    ConvergenceOpts vo;
    auto* convergence = app.add_subcommand("convergence", "Running PRE at iteration milestones");
    convergence->add_option("--cell-size", vo.cell_size, "N in um")->required();
    convergence->add_option("--radius", vo.radius, "R in um")->required();
    convergence->add_option("--milestones", vo.milestones)->capture_default_str();
    convergence->add_option("--svg", vo.svg, "Trace SVG output");
    add_sweep_opts(convergence, vo.sweep, false);
    add_common(convergence, vo.output, "Trace CSV output (default stdout)");

    std::string replay_manifest;
    bool replay_check = false;
    auto* replay = app.add_subcommand("replay", "Re-run a command from its manifest");
    replay->add_option("manifest", replay_manifest)->required();
    replay->add_flag("--check", replay_check, "Compare against the recorded outputs instead of writing");

    const auto t0 = std::chrono::steady_clock::now();
    Run run;
    try {
        if (!args.empty() && args[0] != "replay") args = inject_config(std::move(args));
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsageError;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsageError;
    }

    if (replay->parsed()) return cmd_replay(replay_manifest, replay_check);

    try {
        if (metrics->parsed()) {
            run.command = "metrics";
            cmd_metrics(mo, run);
        } else if (simulate->parsed()) {
            run.command = "simulate";
            cmd_simulate(so, run);
        } else if (calibrate->parsed()) {
            run.command = "calibrate";
            cmd_calibrate(co, run);
        } else if (evaluate->parsed()) {
            run.command = "evaluate";
            cmd_evaluate(eo, run);
        } else if (bubbles->parsed()) {
            run.command = "bubbles";
            cmd_bubbles(bo, run);
        } else if (convergence->parsed()) {
            run.command = "convergence";
            cmd_convergence(vo, run);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const ArgumentError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDataError;
    }
    run.manifest_path = manifest_path;
    // --threads changes nothing observable; keep it out of the replay argv.
    std::vector<std::string> recorded;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--threads") {
            ++i;
            continue;
        }
        if (args[i].rfind("--threads=", 0) == 0) continue;
        recorded.push_back(args[i]);
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return finish(run, recorded, mode, wall);
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return execute(std::move(args), Mode::Normal);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDataError;
    }
}
