#include "bubbleuq/mask_io.hpp"

#include "bubbleuq/error.hpp"
#include "bubbleuq/numfmt.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <sstream>

namespace bubbleuq {

namespace {

constexpr std::string_view kResolutionKey = "resolution:";

// Returns the resolution if `comment` (text after '#') is a resolution line.
std::optional<Resolution> resolution_from_comment(std::string_view comment, std::size_t offset) {
    comment = trim(comment);
    if (comment.substr(0, kResolutionKey.size()) != kResolutionKey) {
        return std::nullopt;
    }
    try {
        return parse_resolution(comment.substr(kResolutionKey.size()));
    } catch (const ArgumentError& e) {
        throw FormatError(std::string("bad resolution comment: ") + e.what(), offset);
    }
}

class PgmReader {
public:
    explicit PgmReader(std::string_view bytes) : bytes_(bytes) {}

    BinaryMask read() {
        if (bytes_.size() < 2 || bytes_[0] != 'P' || (bytes_[1] != '2' && bytes_[1] != '5')) {
            throw FormatError("not a PGM file: expected magic P2 or P5", 0);
        }
        const bool binary = bytes_[1] == '5';
        pos_ = 2;
        const std::size_t width_at = skip_space_and_comments();
        const long long width = read_header_int();
        skip_space_and_comments();
        const long long height = read_header_int();
        const std::size_t maxval_at = skip_space_and_comments();
        const long long maxval = read_header_int();
        if (width <= 0 || height <= 0) {
            throw FormatError("PGM dimensions must be >= 1", width_at);
        }
        if (maxval < 1 || maxval > 255) {
            throw FormatError("PGM maxval must be in [1, 255]", maxval_at);
        }
        const auto w = static_cast<std::size_t>(width);
        const auto h = static_cast<std::size_t>(height);
        std::vector<Pixel> pixels;
        pixels.reserve(w * h);

        if (binary) {
            // Exactly one whitespace byte separates maxval from the raster.
            if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
                throw FormatError("expected whitespace before P5 raster", pos_);
            }
            ++pos_;
            if (bytes_.size() - pos_ < w * h) {
                throw FormatError("P5 raster truncated: need " + std::to_string(w * h) + " bytes",
                                  bytes_.size());
            }
            for (std::size_t i = 0; i < w * h; ++i) {
                const auto v = static_cast<unsigned char>(bytes_[pos_ + i]);
                if (v > maxval) {
                    throw FormatError("pixel value exceeds maxval", pos_ + i);
                }
                pixels.push_back(v > 0 ? Pixel::Dry : Pixel::Wet);
            }
        } else {
            for (std::size_t i = 0; i < w * h; ++i) {
                const std::size_t at = skip_space_and_comments();
                if (at >= bytes_.size()) {
                    throw FormatError("P2 raster truncated after " + std::to_string(i) + " values", at);
                }
                const long long v = read_header_int();
                if (v < 0 || v > maxval) {
                    throw FormatError("pixel value outside [0, maxval]", at);
                }
                pixels.push_back(v > 0 ? Pixel::Dry : Pixel::Wet);
            }
        }
        BinaryMask mask(w, h, std::move(pixels));
        mask.set_resolution(resolution_);
        return mask;
    }

private:
    std::size_t skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const char c = bytes_[pos_];
            if (c == '#') {
                const std::size_t start = pos_;
                std::size_t end = bytes_.find('\n', pos_);
                if (end == std::string_view::npos) end = bytes_.size();
                if (auto r = resolution_from_comment(bytes_.substr(start + 1, end - start - 1), start)) {
                    resolution_ = r;
                }
                pos_ = end;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
        return pos_;
    }

    long long read_header_int() {
        const std::size_t start = pos_;
        while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
            ++pos_;
        }
        if (start == pos_) {
            throw FormatError("expected a non-negative integer", start);
        }
        const auto v = parse_int(bytes_.substr(start, pos_ - start));
        if (!v) {
            throw FormatError("integer out of range", start);
        }
        return *v;
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
    std::optional<Resolution> resolution_;
};

BinaryMask read_csv(std::string_view bytes) {
    std::vector<Pixel> pixels;
    std::optional<Resolution> resolution;
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        std::size_t end = bytes.find('\n', pos);
        if (end == std::string_view::npos) end = bytes.size();
        std::string_view line = bytes.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        const std::string_view t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '#') {
            if (auto r = resolution_from_comment(t.substr(1), line_no)) resolution = r;
            continue;
        }
        std::size_t cols = 0;
        std::size_t cpos = 0;
        while (true) {
            std::size_t comma = t.find(',', cpos);
            const std::string_view cell = t.substr(cpos, comma == std::string_view::npos ? t.size() - cpos : comma - cpos);
            const auto v = parse_int(cell);
            if (!v) {
                throw FormatError("CSV cell " + std::to_string(cols + 1) + " is not an integer", line_no);
            }
            if (*v < 0) throw FormatError("CSV cell " + std::to_string(cols + 1) + " is negative", line_no);
            pixels.push_back(*v > 0 ? Pixel::Dry : Pixel::Wet);
            ++cols;
            if (comma == std::string_view::npos) break;
            cpos = comma + 1;
        }
        if (height == 0) {
            width = cols;
        } else if (cols != width) {
            throw FormatError("ragged CSV row: " + std::to_string(cols) + " columns, expected " +
                                  std::to_string(width),
                              line_no);
        }
        ++height;
    }
    if (height == 0) {
        throw FormatError("CSV mask has no rows", line_no);
    }
    BinaryMask mask(width, height, std::move(pixels));
    mask.set_resolution(resolution);
    return mask;
}

void write_resolution_comment(std::ostream& out, const BinaryMask& mask) {
    if (mask.resolution()) {
        out << "# " << kResolutionKey << ' ' << format_double(mask.resolution()->um_per_px()) << '\n';
    }
}

} // namespace

Resolution parse_resolution(std::string_view text) {
    const auto v = parse_double(text);
    if (!v) {
        throw ArgumentError("resolution is not a number: '" + std::string(trim(text)) + "'");
    }
    return Resolution(*v);
}

BinaryMask load_mask(std::string_view bytes, MaskFormat format) {
    return format == MaskFormat::Pgm ? PgmReader(bytes).read() : read_csv(bytes);
}

BinaryMask load_mask(std::istream& in, MaskFormat format) {
    const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return load_mask(bytes, format);
}

BinaryMask load_mask_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    std::string ext = path.extension().string();
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    MaskFormat format;
    if (ext == ".pgm") {
        format = MaskFormat::Pgm;
    } else if (ext == ".csv") {
        format = MaskFormat::Csv;
    } else {
        format = (bytes.size() >= 2 && bytes[0] == 'P') ? MaskFormat::Pgm : MaskFormat::Csv;
    }
    return load_mask(bytes, format);
}

void save_mask(std::ostream& out, const BinaryMask& mask, MaskFormat format, PgmEncoding encoding) {
    if (format == MaskFormat::Csv) {
        write_resolution_comment(out, mask);
        for (std::size_t y = 0; y < mask.height(); ++y) {
            for (std::size_t x = 0; x < mask.width(); ++x) {
                if (x) out << ',';
                out << (mask.dry(x, y) ? '1' : '0');
            }
            out << '\n';
        }
        return;
    }
    out << (encoding == PgmEncoding::Binary ? "P5" : "P2") << '\n';
    write_resolution_comment(out, mask);
    out << mask.width() << ' ' << mask.height() << "\n255\n";
    if (encoding == PgmEncoding::Binary) {
        for (Pixel p : mask.pixels()) {
            out.put(p == Pixel::Dry ? static_cast<char>(255) : '\0');
        }
        return;
    }
    for (std::size_t y = 0; y < mask.height(); ++y) {
        for (std::size_t x = 0; x < mask.width(); ++x) {
            if (x) out << ' ';
            out << (mask.dry(x, y) ? "255" : "0");
        }
        out << '\n';
    }
}

std::string save_mask(const BinaryMask& mask, MaskFormat format, PgmEncoding encoding) {
    std::ostringstream out;
    save_mask(out, mask, format, encoding);
    return out.str();
}

void save_mask_file(const std::filesystem::path& path, const BinaryMask& mask, PgmEncoding encoding) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    std::string ext = path.extension().string();
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    save_mask(out, mask, ext == ".csv" ? MaskFormat::Csv : MaskFormat::Pgm, encoding);
}

} // namespace bubbleuq
