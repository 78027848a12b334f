#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "enton/model.hpp"

namespace enton {

enum class PlyErrorCode {
    MalformedHeader,
    TruncatedBody,
    UnsupportedBigEndian,
    UnsupportedType,
    UnsupportedElement,
    Io,
};

class PlyError : public std::runtime_error {
public:
    PlyError(PlyErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}
    PlyErrorCode code() const { return code_; }

private:
    PlyErrorCode code_;
};

enum class PlyFormat { Ascii, BinaryLittleEndian };

struct PlyContents {
    GaussianSet set;
    std::vector<double> eigenentropy;      // empty when the file has no channel
    bool has_gaussian_properties = false;  // scale/rotation/opacity were present
};

/// Reads ascii or binary_little_endian vertex clouds. All recognized
/// properties are 32-bit floats; unknown float properties are skipped.
/// Missing optional properties default to scale (1,1,1), identity rotation,
/// opacity 1, so bare x/y/z clouds load for eval-only use.
PlyContents read_ply(const std::string& path);

struct PlyWriteOptions {
    PlyFormat format = PlyFormat::BinaryLittleEndian;
    bool gaussian_properties = true;  // write scale_0..2, rot_0..3, opacity
    const std::vector<double>* eigenentropy = nullptr;  // optional extra channel
};

/// Property order is fixed: x, y, z, scale_0..2, rot_0..3, opacity,
/// eigenentropy. Output bytes are deterministic for a fixed input; ascii
/// floats are printed with enough digits to round-trip float32 exactly.
void write_ply(const GaussianSet& set, const std::string& path,
               const PlyWriteOptions& options = {});

}  // namespace enton
