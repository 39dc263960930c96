#include "dilation/emit.hpp"

#include "dilation/exact_matrix.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace dilation;

namespace {

LiftedFunction half_tiles() {
    // the two half-tiles of the twin dragon, values 0 and 1
    LiftedFunction data;
    data.depth = 1;
    data.cells.emplace_back(RadixAddress::parse(DilationKind::TwinDragonPlane, "0"), 0.0);
    data.cells.emplace_back(RadixAddress::parse(DilationKind::TwinDragonPlane, "1"), 1.0);
    return data;
}

RasterSpec small_spec() {
    RasterSpec spec;
    spec.width = 64;
    spec.height = 64;
    spec.x_min = -0.55;
    spec.x_max = 0.75;
    spec.y_min = -1.45;
    spec.y_max = 0.35;
    spec.sampling_depth = 12;
    return spec;
}

}  // namespace

TEST_CASE("signed colormap anchors zero and separates signs") {
    auto zero = signed_colormap(0.0, 1.0);
    auto pos = signed_colormap(1.0, 1.0);
    auto neg = signed_colormap(-1.0, 1.0);
    CHECK(zero[0] > 200);  // near-white
    CHECK(zero[1] > 200);
    CHECK(pos[2] > pos[0]);  // blue side
    CHECK(neg[0] > neg[2]);  // amber side
    CHECK(pos != neg);
}

TEST_CASE("raster of the half-tile data is deterministic and two-colored") {
    Image a = raster_tile_values(half_tiles(), small_spec());
    Image b = raster_tile_values(half_tiles(), small_spec());
    CHECK(a == b);
    std::string ppm = encode_ppm(a);
    CHECK(ppm.rfind("P6\n64 64\n255\n", 0) == 0);
    CHECK(ppm.size() == 13 + 3u * 64 * 64);
    CHECK(encode_ppm(a) == encode_ppm(b));

    // both cell colors appear, plus untouched background
    auto zero_rgb = signed_colormap(0.0, 1.0);
    auto one_rgb = signed_colormap(1.0, 1.0);
    bool saw_zero = false, saw_one = false, saw_background = false;
    for (std::size_t i = 0; i < a.rgb.size(); i += 3) {
        if (a.rgb[i] == zero_rgb[0] && a.rgb[i + 1] == zero_rgb[1] && a.rgb[i + 2] == zero_rgb[2])
            saw_zero = true;
        if (a.rgb[i] == one_rgb[0] && a.rgb[i + 1] == one_rgb[1] && a.rgb[i + 2] == one_rgb[2])
            saw_one = true;
        if (a.rgb[i] == 255 && a.rgb[i + 1] == 255 && a.rgb[i + 2] == 255) saw_background = true;
    }
    CHECK(saw_zero);
    CHECK(saw_one);
    CHECK(saw_background);
}

TEST_CASE("constant data renders monochrome") {
    LiftedFunction data;
    data.depth = 0;
    data.cells.emplace_back(RadixAddress{DilationKind::TwinDragonPlane, {}}, 0.5);
    Image img = raster_tile_values(data, small_spec());
    auto rgb = signed_colormap(0.5, 0.5);
    bool only_expected = true;
    for (std::size_t i = 0; i < img.rgb.size(); i += 3) {
        bool bg = img.rgb[i] == 255 && img.rgb[i + 1] == 255 && img.rgb[i + 2] == 255;
        bool fg = img.rgb[i] == rgb[0] && img.rgb[i + 1] == rgb[1] && img.rgb[i + 2] == rgb[2];
        only_expected = only_expected && (bg || fg);
    }
    CHECK(only_expected);
}

TEST_CASE("raster error paths") {
    LiftedFunction empty;
    CHECK_THROWS_AS(raster_tile_values(empty, small_spec()), std::invalid_argument);
    RasterSpec tiny = small_spec();
    tiny.sample_cap = 16;
    CHECK_THROWS_AS(raster_tile_values(half_tiles(), tiny), std::invalid_argument);
    LiftedFunction line;
    line.depth = 1;
    line.cells.emplace_back(RadixAddress::parse(DilationKind::DyadicLine, "0"), 1.0);
    CHECK_THROWS_AS(raster_tile_values(line, small_spec()), std::invalid_argument);
}

TEST_CASE("pgm is the grayscale of the same image") {
    Image img = raster_tile_values(half_tiles(), small_spec());
    std::string pgm = encode_pgm(img);
    CHECK(pgm.rfind("P5\n64 64\n255\n", 0) == 0);
    CHECK(pgm.size() == 13 + std::size_t(64) * 64);
}

TEST_CASE("exact dumps round-trip bit-exactly") {
    QuadMatrix m(2, 2);
    m(0, 0) = QuadScalar::parse("1/2+1/4*sqrt(3)");
    m(0, 1) = QuadScalar::parse("-7/3");
    m(1, 0) = QuadScalar();
    m(1, 1) = QuadScalar::parse("0/1-11/8*sqrt(2)");
    std::string csv = matrix_to_csv(m);
    CHECK(matrix_from_csv(csv) == m);
    CHECK(matrix_to_csv(matrix_from_csv(csv)) == csv);
}

TEST_CASE("file writer") {
    std::string path = "emit_test_scratch.ppm";
    Image img = raster_tile_values(half_tiles(), small_spec());
    write_file(path, encode_ppm(img));
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == encode_ppm(img));
    std::remove(path.c_str());
    CHECK_THROWS_AS(write_file("/nonexistent-dir/x.ppm", "data"), std::runtime_error);
}
