#include "enton/ply_io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace enton {

namespace {

// Write-side property order; also the recognized read-side names.
enum PropertyId {
    kX, kY, kZ,
    kScale0, kScale1, kScale2,
    kRot0, kRot1, kRot2, kRot3,
    kOpacity, kEigenentropy,
    kUnknown,
};

PropertyId property_id(const std::string& name) {
    if (name == "x") return kX;
    if (name == "y") return kY;
    if (name == "z") return kZ;
    if (name == "scale_0") return kScale0;
    if (name == "scale_1") return kScale1;
    if (name == "scale_2") return kScale2;
    if (name == "rot_0") return kRot0;
    if (name == "rot_1") return kRot1;
    if (name == "rot_2") return kRot2;
    if (name == "rot_3") return kRot3;
    if (name == "opacity") return kOpacity;
    if (name == "eigenentropy") return kEigenentropy;
    return kUnknown;
}

std::string format_float(float v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(v));
    return buf;
}

struct Header {
    PlyFormat format = PlyFormat::Ascii;
    std::size_t vertex_count = 0;
    std::vector<PropertyId> properties;
    std::string units;
};

Header parse_header(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw PlyError(PlyErrorCode::MalformedHeader, "empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "ply") throw PlyError(PlyErrorCode::MalformedHeader, "missing ply magic");

    Header header;
    bool have_format = false;
    bool in_vertex_element = false;
    bool have_vertex_element = false;

    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ss(line);
        std::string keyword;
        ss >> keyword;
        if (keyword.empty()) continue;

        if (keyword == "end_header") {
            if (!have_format)
                throw PlyError(PlyErrorCode::MalformedHeader, "missing format line");
            if (!have_vertex_element)
                throw PlyError(PlyErrorCode::MalformedHeader, "missing vertex element");
            bool has_x = false, has_y = false, has_z = false;
            for (PropertyId p : header.properties) {
                has_x |= p == kX;
                has_y |= p == kY;
                has_z |= p == kZ;
            }
            if (!has_x || !has_y || !has_z)
                throw PlyError(PlyErrorCode::MalformedHeader, "missing x/y/z properties");
            return header;
        }
        if (keyword == "format") {
            std::string fmt, version;
            ss >> fmt >> version;
            if (fmt == "ascii") header.format = PlyFormat::Ascii;
            else if (fmt == "binary_little_endian") header.format = PlyFormat::BinaryLittleEndian;
            else if (fmt == "binary_big_endian")
                throw PlyError(PlyErrorCode::UnsupportedBigEndian,
                               "big-endian ply files are not supported");
            else
                throw PlyError(PlyErrorCode::MalformedHeader, "unknown format: " + fmt);
            if (version != "1.0")
                throw PlyError(PlyErrorCode::MalformedHeader, "unsupported ply version");
            have_format = true;
        } else if (keyword == "comment" || keyword == "obj_info") {
            std::string tag;
            ss >> tag;
            if (tag == "units") ss >> header.units;
        } else if (keyword == "element") {
            std::string name;
            long long count = -1;
            ss >> name >> count;
            if (name == "vertex") {
                if (count < 0)
                    throw PlyError(PlyErrorCode::MalformedHeader, "bad vertex count");
                header.vertex_count = static_cast<std::size_t>(count);
                in_vertex_element = true;
                have_vertex_element = true;
            } else {
                throw PlyError(PlyErrorCode::UnsupportedElement,
                               "unsupported element: " + name);
            }
        } else if (keyword == "property") {
            if (!in_vertex_element)
                throw PlyError(PlyErrorCode::MalformedHeader, "property outside element");
            std::string type, name;
            ss >> type >> name;
            if (type == "list")
                throw PlyError(PlyErrorCode::UnsupportedType, "list properties not supported");
            if (type != "float" && type != "float32")
                throw PlyError(PlyErrorCode::UnsupportedType,
                               "only 32-bit float properties are supported, got " + type);
            header.properties.push_back(property_id(name));
        } else {
            throw PlyError(PlyErrorCode::MalformedHeader, "unknown header keyword: " + keyword);
        }
    }
    throw PlyError(PlyErrorCode::MalformedHeader, "missing end_header");
}

}  // namespace

PlyContents read_ply(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PlyError(PlyErrorCode::Io, "cannot open " + path);
    const Header header = parse_header(in);
    const std::size_t nprops = header.properties.size();

    std::vector<float> row(nprops);
    PlyContents out;
    out.set.units = header.units;
    out.set.gaussians.reserve(header.vertex_count);

    bool saw_entropy = false;
    for (PropertyId p : header.properties)
        if (p == kEigenentropy) saw_entropy = true;
    for (PropertyId p : header.properties)
        if (p >= kScale0 && p <= kOpacity) out.has_gaussian_properties = true;
    if (saw_entropy) out.eigenentropy.reserve(header.vertex_count);

    std::vector<char> body;
    std::size_t body_pos = 0;
    if (header.format == PlyFormat::BinaryLittleEndian) {
        const std::size_t need = header.vertex_count * nprops * sizeof(float);
        body.resize(need);
        in.read(body.data(), static_cast<std::streamsize>(need));
        if (static_cast<std::size_t>(in.gcount()) != need)
            throw PlyError(PlyErrorCode::TruncatedBody, "unexpected end of vertex data");
    }

    for (std::size_t v = 0; v < header.vertex_count; ++v) {
        if (header.format == PlyFormat::Ascii) {
            for (std::size_t p = 0; p < nprops; ++p) {
                double value;
                if (!(in >> value))
                    throw PlyError(PlyErrorCode::TruncatedBody, "unexpected end of vertex data");
                row[p] = static_cast<float>(value);
            }
        } else {
            std::memcpy(row.data(), body.data() + body_pos, nprops * sizeof(float));
            body_pos += nprops * sizeof(float);
        }

        Gaussian g;
        double entropy = 0.0;
        for (std::size_t p = 0; p < nprops; ++p) {
            const double value = static_cast<double>(row[p]);
            switch (header.properties[p]) {
                case kX: g.center.x = value; break;
                case kY: g.center.y = value; break;
                case kZ: g.center.z = value; break;
                case kScale0: g.scale.x = value; break;
                case kScale1: g.scale.y = value; break;
                case kScale2: g.scale.z = value; break;
                case kRot0: g.rotation.w = value; break;
                case kRot1: g.rotation.x = value; break;
                case kRot2: g.rotation.y = value; break;
                case kRot3: g.rotation.z = value; break;
                case kOpacity: g.opacity = value; break;
                case kEigenentropy: entropy = value; break;
                case kUnknown: break;
            }
        }
        out.set.gaussians.push_back(g);
        if (saw_entropy) out.eigenentropy.push_back(entropy);
    }
    out.set.reset_grad_stats();
    return out;
}

void write_ply(const GaussianSet& set, const std::string& path,
               const PlyWriteOptions& options) {
    if (options.eigenentropy && options.eigenentropy->size() != set.size())
        throw std::invalid_argument("eigenentropy channel length mismatch");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw PlyError(PlyErrorCode::Io, "cannot write " + path);

    std::vector<std::string> names = {"x", "y", "z"};
    if (options.gaussian_properties) {
        const char* extra[] = {"scale_0", "scale_1", "scale_2",
                               "rot_0", "rot_1", "rot_2", "rot_3", "opacity"};
        names.insert(names.end(), std::begin(extra), std::end(extra));
    }
    if (options.eigenentropy) names.push_back("eigenentropy");

    out << "ply\n";
    out << (options.format == PlyFormat::Ascii ? "format ascii 1.0\n"
                                               : "format binary_little_endian 1.0\n");
    if (!set.units.empty()) out << "comment units " << set.units << "\n";
    out << "element vertex " << set.size() << "\n";
    for (const auto& name : names) out << "property float " << name << "\n";
    out << "end_header\n";

    std::vector<float> row;
    row.reserve(names.size());
    for (std::size_t i = 0; i < set.size(); ++i) {
        const Gaussian& g = set.gaussians[i];
        row.clear();
        row.push_back(static_cast<float>(g.center.x));
        row.push_back(static_cast<float>(g.center.y));
        row.push_back(static_cast<float>(g.center.z));
        if (options.gaussian_properties) {
            row.push_back(static_cast<float>(g.scale.x));
            row.push_back(static_cast<float>(g.scale.y));
            row.push_back(static_cast<float>(g.scale.z));
            row.push_back(static_cast<float>(g.rotation.w));
            row.push_back(static_cast<float>(g.rotation.x));
            row.push_back(static_cast<float>(g.rotation.y));
            row.push_back(static_cast<float>(g.rotation.z));
            row.push_back(static_cast<float>(g.opacity));
        }
        if (options.eigenentropy)
            row.push_back(static_cast<float>((*options.eigenentropy)[i]));

        if (options.format == PlyFormat::Ascii) {
            for (std::size_t p = 0; p < row.size(); ++p) {
                if (p > 0) out << ' ';
                out << format_float(row[p]);
            }
            out << '\n';
        } else {
            out.write(reinterpret_cast<const char*>(row.data()),
                      static_cast<std::streamsize>(row.size() * sizeof(float)));
        }
    }
    if (!out) throw PlyError(PlyErrorCode::Io, "write failed: " + path);
}

}  // namespace enton
