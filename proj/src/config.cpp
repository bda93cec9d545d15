#include "bubbleuq/config.hpp"

#include "bubbleuq/error.hpp"
#include "bubbleuq/numfmt.hpp"
#include "bubbleuq/report.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>

namespace bubbleuq {

std::vector<double> parse_range(std::string_view text) {
    const std::string_view t = trim(text);
    if (t.empty()) throw ArgumentError("empty range");
    const auto num = [&](std::string_view s) {
        const auto v = parse_double(s);
        if (!v || !std::isfinite(*v)) throw ArgumentError("bad number '" + std::string(s) + "' in range '" + std::string(t) + "'");
        return *v;
    };
    std::vector<double> out;
    if (t.find(':') != std::string_view::npos) {
        const std::size_t a = t.find(':');
        const std::size_t b = t.find(':', a + 1);
        if (b == std::string_view::npos || t.find(':', b + 1) != std::string_view::npos) {
            throw ArgumentError("range must be start:stop:step, got '" + std::string(t) + "'");
        }
        const double start = num(t.substr(0, a));
        const double stop = num(t.substr(a + 1, b - a - 1));
        const double step = num(t.substr(b + 1));
        if (!(step > 0)) throw ArgumentError("range step must be positive");
        if (stop < start) throw ArgumentError("range stop is below start");
        const double span = (stop - start) / step;
        const auto n = static_cast<std::uint64_t>(std::floor(span + 1e-9));
        if (n > 10'000'000) throw ArgumentError("range has too many values");
        for (std::uint64_t i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
        // Snap the last value to `stop` when the step lands on it.
        if (std::abs(span - static_cast<double>(n)) < 1e-9) out.back() = stop;
        return out;
    }
    for (std::string_view cell : split_csv_line(t)) out.push_back(num(trim(cell)));
    return out;
}

std::vector<std::uint64_t> parse_milestones(std::string_view text) {
    std::vector<std::uint64_t> out;
    for (double v : parse_range(text)) {
        if (v < 1 || v != std::floor(v) || v > 1e15) {
            throw ArgumentError("milestones must be positive integers, got " + format_double(v));
        }
        out.push_back(static_cast<std::uint64_t>(v));
    }
    return out;
}

std::map<std::string, std::string> parse_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        std::string_view t = line;
        if (const auto hash = t.find('#'); hash != std::string_view::npos) t = t.substr(0, hash);
        t = trim(t);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string_view::npos) throw FormatError("config line is not 'key = value'", no);
        const std::string key(trim(t.substr(0, eq)));
        if (key.empty()) throw FormatError("config line has an empty key", no);
        kv[key] = std::string(trim(t.substr(eq + 1)));
    }
    return kv;
}

std::map<std::string, std::string> load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open config file '" + path + "'");
    return parse_config(in);
}

} // namespace bubbleuq
