#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "enton/csv_io.hpp"
#include "enton/image_io.hpp"
#include "enton/ply_io.hpp"
#include "enton/rng.hpp"
#include "enton/synth.hpp"

using namespace enton;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(std::string p) : path(std::move(p)) {}
    ~TempFile() { std::remove(path.c_str()); }
};

GaussianSet sample_set(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    GaussianSet set;
    set.units = "mm";
    for (std::size_t i = 0; i < n; ++i) {
        Gaussian g;
        g.center = {rng.uniform01() * 10, rng.uniform01() * 10, rng.uniform01()};
        g.scale = {0.01 + rng.uniform01(), 0.01 + rng.uniform01(), 0.01 + rng.uniform01()};
        const double half = rng.uniform01();
        g.rotation = {std::cos(half), 0.0, 0.0, std::sin(half)};
        g.opacity = rng.uniform01();
        set.push_back(g);
    }
    return set;
}

// One write/read cycle quantizes doubles to the file's float32 grid.
GaussianSet quantized(const GaussianSet& set) {
    const char* path = "quantize_tmp.ply";
    write_ply(set, path);
    PlyContents loaded = read_ply(path);
    std::remove(path);
    loaded.set.units = set.units;
    return loaded.set;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("binary round trip is exact for float32-valued sets") {
    const GaussianSet set = quantized(sample_set(100, 1));
    TempFile f("roundtrip_bin.ply");
    write_ply(set, f.path);
    const PlyContents loaded = read_ply(f.path);
    CHECK(loaded.has_gaussian_properties);
    CHECK(loaded.set.units == "mm");
    REQUIRE(loaded.set.size() == set.size());
    for (std::size_t i = 0; i < set.size(); ++i) {
        CHECK(loaded.set.gaussians[i].center.x == set.gaussians[i].center.x);
        CHECK(loaded.set.gaussians[i].center.z == set.gaussians[i].center.z);
        CHECK(loaded.set.gaussians[i].scale.y == set.gaussians[i].scale.y);
        CHECK(loaded.set.gaussians[i].rotation.w == set.gaussians[i].rotation.w);
        CHECK(loaded.set.gaussians[i].rotation.z == set.gaussians[i].rotation.z);
        CHECK(loaded.set.gaussians[i].opacity == set.gaussians[i].opacity);
    }
}

TEST_CASE("ascii round trip is exact for float32-valued sets") {
    // %.9g prints enough digits to recover every float32 bit pattern.
    const GaussianSet set = quantized(sample_set(60, 2));
    TempFile f("roundtrip_ascii.ply");
    PlyWriteOptions opts;
    opts.format = PlyFormat::Ascii;
    write_ply(set, f.path, opts);
    const PlyContents loaded = read_ply(f.path);
    REQUIRE(loaded.set.size() == set.size());
    for (std::size_t i = 0; i < set.size(); ++i) {
        CHECK(loaded.set.gaussians[i].center.x == set.gaussians[i].center.x);
        CHECK(loaded.set.gaussians[i].scale.z == set.gaussians[i].scale.z);
        CHECK(loaded.set.gaussians[i].opacity == set.gaussians[i].opacity);
    }
}

TEST_CASE("write is deterministic and idempotent after quantization") {
    const GaussianSet set = sample_set(80, 3);
    TempFile f1("det_1.ply");
    TempFile f2("det_2.ply");
    write_ply(set, f1.path);
    write_ply(set, f2.path);
    CHECK(slurp(f1.path) == slurp(f2.path));

    // write -> read -> write reproduces the same bytes
    const PlyContents loaded = read_ply(f1.path);
    TempFile f3("det_3.ply");
    write_ply(loaded.set, f3.path);
    CHECK(slurp(f1.path) == slurp(f3.path));
}

TEST_CASE("bare xyz ascii cloud loads with defaults") {
    TempFile f("bare.ply");
    {
        std::ofstream out(f.path);
        out << "ply\nformat ascii 1.0\nelement vertex 2\n"
               "property float x\nproperty float y\nproperty float z\nend_header\n"
               "0 0 0\n1 2 3\n";
    }
    const PlyContents loaded = read_ply(f.path);
    CHECK(!loaded.has_gaussian_properties);
    REQUIRE(loaded.set.size() == 2);
    CHECK(loaded.set.gaussians[1].center.y == 2.0);
    CHECK(loaded.set.gaussians[0].scale.x == 1.0);
    CHECK(loaded.set.gaussians[0].rotation.w == 1.0);
    CHECK(loaded.set.gaussians[0].opacity == 1.0);
}

TEST_CASE("eigenentropy channel round trips") {
    const GaussianSet set = quantized(sample_set(40, 4));
    std::vector<double> entropy;
    for (std::size_t i = 0; i < set.size(); ++i) entropy.push_back(0.01 * double(i));

    TempFile f("entropy.ply");
    PlyWriteOptions opts;
    opts.eigenentropy = &entropy;
    write_ply(set, f.path, opts);
    const PlyContents loaded = read_ply(f.path);
    REQUIRE(loaded.eigenentropy.size() == set.size());
    for (std::size_t i = 0; i < set.size(); ++i)
        CHECK(loaded.eigenentropy[i] ==
              doctest::Approx(entropy[i]).epsilon(1e-6));

    // without the channel the header must not mention it
    TempFile g("no_entropy.ply");
    write_ply(set, g.path);
    CHECK(slurp(g.path).find("eigenentropy") == std::string::npos);
}

TEST_CASE("truncated binary body") {
    const GaussianSet set = quantized(sample_set(10, 5));
    TempFile f("trunc.ply");
    write_ply(set, f.path);
    const std::string bytes = slurp(f.path);
    {
        std::ofstream out(f.path, std::ios::binary | std::ios::trunc);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() - 7));
    }
    try {
        read_ply(f.path);
        FAIL("expected PlyError");
    } catch (const PlyError& e) {
        CHECK(e.code() == PlyErrorCode::TruncatedBody);
        CHECK(std::string(e.what()) == "unexpected end of vertex data");
    }
}

TEST_CASE("distinct header error codes") {
    TempFile f("bad.ply");
    auto write_file = [&](const std::string& text) {
        std::ofstream out(f.path, std::ios::trunc);
        out << text;
    };
    auto code_of = [&]() {
        try {
            read_ply(f.path);
        } catch (const PlyError& e) {
            return e.code();
        }
        return PlyErrorCode::Io;
    };

    write_file("not a ply\n");
    CHECK(code_of() == PlyErrorCode::MalformedHeader);

    write_file("ply\nformat binary_big_endian 1.0\nelement vertex 0\n"
               "property float x\nproperty float y\nproperty float z\nend_header\n");
    CHECK(code_of() == PlyErrorCode::UnsupportedBigEndian);

    write_file("ply\nformat ascii 1.0\nelement vertex 0\nproperty float x\n"
               "property float y\nproperty float z\nelement face 0\nend_header\n");
    CHECK(code_of() == PlyErrorCode::UnsupportedElement);

    write_file("ply\nformat ascii 1.0\nelement vertex 0\nproperty uchar x\nend_header\n");
    CHECK(code_of() == PlyErrorCode::UnsupportedType);

    write_file("ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\n"
               "property float y\nend_header\n0 0\n");
    CHECK(code_of() == PlyErrorCode::MalformedHeader);  // missing z

    CHECK_THROWS_AS(read_ply("does_not_exist.ply"), PlyError);
}

TEST_CASE("unknown float properties are skipped") {
    TempFile f("extra.ply");
    {
        std::ofstream out(f.path);
        out << "ply\nformat ascii 1.0\nelement vertex 1\n"
               "property float x\nproperty float confidence\nproperty float y\n"
               "property float z\nend_header\n"
               "1 99 2 3\n";
    }
    const PlyContents loaded = read_ply(f.path);
    REQUIRE(loaded.set.size() == 1);
    CHECK(loaded.set.gaussians[0].center.x == 1.0);
    CHECK(loaded.set.gaussians[0].center.y == 2.0);
    CHECK(loaded.set.gaussians[0].center.z == 3.0);
}

TEST_CASE("pnm round trip and ascii parsing") {
    Image img;
    img.width = 3;
    img.height = 2;
    img.channels = 1;
    img.pixels = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    TempFile f("img.pgm");
    write_pnm(img, f.path);
    const Image loaded = read_pnm(f.path);
    CHECK(loaded.width == 3);
    CHECK(loaded.height == 2);
    CHECK(loaded.channels == 1);
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        CHECK(std::abs(loaded.pixels[i] - img.pixels[i]) <= 0.5 / 255.0);

    TempFile a("ascii.pgm");
    {
        std::ofstream out(a.path);
        out << "P2\n# a comment\n2 2\n255\n0 128\n# another\n255 64\n";
    }
    const Image parsed = read_pnm(a.path);
    CHECK(parsed.pixels[1] == doctest::Approx(128.0 / 255.0));
    CHECK(parsed.pixels[2] == doctest::Approx(1.0));

    TempFile c("color.ppm");
    Image rgb;
    rgb.width = 2;
    rgb.height = 1;
    rgb.channels = 3;
    rgb.pixels = {1, 0, 0, 0, 1, 0};
    write_pnm(rgb, c.path);
    const Image rgb_loaded = read_pnm(c.path);
    CHECK(rgb_loaded.channels == 3);
    CHECK(rgb_loaded.pixels[0] == doctest::Approx(1.0));
    CHECK(rgb_loaded.pixels[4] == doctest::Approx(1.0));
}

TEST_CASE("pnm error paths") {
    TempFile f("bad.pgm");
    {
        std::ofstream out(f.path);
        out << "P7\n2 2\n255\n";
    }
    CHECK_THROWS_AS(read_pnm(f.path), std::runtime_error);
    {
        std::ofstream out(f.path, std::ios::trunc);
        out << "P2\n2 2\n255\n0 1\n";  // only 2 of 4 pixels
    }
    CHECK_THROWS_AS(read_pnm(f.path), std::runtime_error);
    CHECK_THROWS_AS(read_pnm("missing.pgm"), std::runtime_error);
}

TEST_CASE("trace csv carries the threshold echo and fixed columns") {
    std::vector<EventRecord> trace;
    EventRecord e;
    e.t = 3100;
    e.phase = Phase::Entropy;
    e.k = 50;
    e.n_before = 100;
    e.n_split = 5;
    e.n_after = 110;
    e.mean_entropy_before = 0.9;
    e.mean_entropy_after = 0.85;
    trace.push_back(e);

    TraceMeta meta;
    meta.seed = 7;
    meta.grad_source = "zero";
    TempFile f("trace.csv");
    write_trace_csv(f.path, trace, meta);
    const std::string text = slurp(f.path);
    CHECK(text.find("tau_low=0.6931") != std::string::npos);
    CHECK(text.find("tau_high=0.95") != std::string::npos);
    CHECK(text.find("t,phase,k,n_before,n_split,n_clone,n_prune_entropy,"
                     "n_prune_opacity,n_after,mean_entropy_before,mean_entropy_after") !=
          std::string::npos);
    CHECK(text.find("3100,entropy,50,100,5,0,0,0,110,") != std::string::npos);
}

TEST_CASE("chamfer report csv has the fixed header") {
    ChamferReport r;
    r.mean_a_to_b = 0.001;
    r.mean_b_to_a = 0.002;
    r.symmetric_mean = 0.0015;
    r.inlier_count_a = 10;
    r.inlier_count_b = 11;
    r.excluded_count_a = 1;
    r.excluded_count_b = 0;
    r.mask_radius = 0.01;
    TempFile f("report.csv");
    write_chamfer_csv(f.path, r);
    const std::string text = slurp(f.path);
    CHECK(text.find("mean_a_to_b,mean_b_to_a,symmetric_mean,inlier_count_a,"
                     "inlier_count_b,excluded_count_a,excluded_count_b,mask_radius") !=
          std::string::npos);
    CHECK(text.find("0.001") != std::string::npos);
}
