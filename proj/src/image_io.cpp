#include "enton/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace enton {

namespace {

// Next whitespace-separated token, skipping '#' comments.
std::string next_token(std::istream& in) {
    std::string token;
    for (;;) {
        const int c = in.peek();
        if (c == EOF) throw std::runtime_error("unexpected end of image header");
        if (std::isspace(c)) {
            in.get();
            continue;
        }
        if (c == '#') {
            std::string line;
            std::getline(in, line);
            continue;
        }
        in >> token;
        return token;
    }
}

long parse_long(const std::string& token, const char* what, long min_allowed) {
    std::size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(token, &pos);
    } catch (const std::exception&) {
        throw std::runtime_error(std::string("bad ") + what + " value");
    }
    if (pos != token.size() || v < min_allowed)
        throw std::runtime_error(std::string("bad ") + what + " value");
    return v;
}

}  // namespace

Image read_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open image: " + path);

    const std::string magic = next_token(in);
    bool binary;
    int channels;
    if (magic == "P2") { binary = false; channels = 1; }
    else if (magic == "P5") { binary = true; channels = 1; }
    else if (magic == "P3") { binary = false; channels = 3; }
    else if (magic == "P6") { binary = true; channels = 3; }
    else throw std::runtime_error("unsupported image magic: " + magic);

    Image img;
    img.channels = channels;
    img.width = static_cast<int>(parse_long(next_token(in), "width", 1));
    img.height = static_cast<int>(parse_long(next_token(in), "height", 1));
    const long maxval = parse_long(next_token(in), "maxval", 1);
    if (maxval > 65535) throw std::runtime_error("maxval too large");

    const std::size_t count = img.expected_size();
    img.pixels.resize(count);

    if (binary) {
        in.get();  // single whitespace after maxval
        const int bytes = maxval > 255 ? 2 : 1;
        std::vector<unsigned char> raw(count * bytes);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (static_cast<std::size_t>(in.gcount()) != raw.size())
            throw std::runtime_error("unexpected end of image data");
        for (std::size_t i = 0; i < count; ++i) {
            const long v = bytes == 1 ? raw[i]
                                      : (static_cast<long>(raw[2 * i]) << 8) | raw[2 * i + 1];
            img.pixels[i] = static_cast<double>(v) / static_cast<double>(maxval);
        }
    } else {
        // Comments are legal between ascii samples too.
        for (std::size_t i = 0; i < count; ++i) {
            long v;
            try {
                v = parse_long(next_token(in), "pixel", 0);
            } catch (const std::runtime_error&) {
                throw std::runtime_error("unexpected end of image data");
            }
            if (v > maxval) throw std::runtime_error("pixel value out of range");
            img.pixels[i] = static_cast<double>(v) / static_cast<double>(maxval);
        }
    }
    return img;
}

void write_pnm(const Image& image, const std::string& path) {
    if (image.channels != 1 && image.channels != 3)
        throw std::invalid_argument("image must have 1 or 3 channels");
    if (image.pixels.size() != image.expected_size())
        throw std::invalid_argument("pixel buffer size mismatch");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write image: " + path);
    out << (image.channels == 1 ? "P5" : "P6") << "\n"
        << image.width << " " << image.height << "\n255\n";
    for (double p : image.pixels) {
        const double clamped = std::clamp(p, 0.0, 1.0);
        out.put(static_cast<char>(std::lround(clamped * 255.0)));
    }
}

}  // namespace enton
