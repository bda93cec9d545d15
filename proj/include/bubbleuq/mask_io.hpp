#pragma once

#include "bubbleuq/mask.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace bubbleuq {

enum class MaskFormat { Pgm, Csv };

/// PGM output encoding. Reading accepts either.
enum class PgmEncoding { Ascii /* P2 */, Binary /* P5 */ };

// Any pixel value > 0 is DRY. A `# resolution: <um/px>` comment (PGM header
// or a leading CSV line) attaches a physical resolution to the mask.
BinaryMask load_mask(std::string_view bytes, MaskFormat format);
BinaryMask load_mask(std::istream& in, MaskFormat format);

/// Format chosen by extension (.pgm / .csv), falling back to the magic bytes.
BinaryMask load_mask_file(const std::filesystem::path& path);

void save_mask(std::ostream& out, const BinaryMask& mask, MaskFormat format,
               PgmEncoding encoding = PgmEncoding::Ascii);
std::string save_mask(const BinaryMask& mask, MaskFormat format,
                      PgmEncoding encoding = PgmEncoding::Ascii);
void save_mask_file(const std::filesystem::path& path, const BinaryMask& mask,
                    PgmEncoding encoding = PgmEncoding::Ascii);

/// Parses the text form used for resolution comments, e.g. "12.6".
Resolution parse_resolution(std::string_view text);

} // namespace bubbleuq
