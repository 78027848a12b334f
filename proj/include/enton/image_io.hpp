#pragma once

#include <string>

#include "enton/model.hpp"

namespace enton {

/// Reads PGM (P2/P5) and PPM (P3/P6) images; pixels are normalized to [0, 1]
/// by the file's maxval. Throws std::runtime_error on malformed input.
Image read_pnm(const std::string& path);

/// Writes a PGM/PPM file (binary P5/P6, maxval 255). Used by tests.
void write_pnm(const Image& image, const std::string& path);

}  // namespace enton
