#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fakemix/boundary.hpp"
#include "fakemix/morphology.hpp"

#include "helpers.hpp"

using namespace fakemix;
using namespace test_helpers;

TEST_CASE("boundary_band validates its config") {
    CHECK_THROWS_AS(boundary_band(BinaryMask(4, 4), BoundaryBandConfig{0}),
                    std::invalid_argument);
}

TEST_CASE("empty mask has an empty band") {
    const BinaryMask band = boundary_band(BinaryMask(8, 8), BoundaryBandConfig{2});
    CHECK(band.count_ones() == 0);
}

TEST_CASE("centered 3x3 square in 7x7, thickness 1") {
    BinaryMask gs(7, 7);
    for (int y = 2; y <= 4; ++y)
        for (int x = 2; x <= 4; ++x) gs.at(y, x) = 1;

    // Growing the square reaches 5x5; shrinking leaves the center pixel.
    const BinaryMask band = boundary_band(gs, BoundaryBandConfig{1});
    for (int y = 0; y < 7; ++y)
        for (int x = 0; x < 7; ++x) {
            const bool in5 = y >= 1 && y <= 5 && x >= 1 && x <= 5;
            const bool center = y == 3 && x == 3;
            CHECK(band.at(y, x) == (in5 && !center ? 1 : 0));
        }
    CHECK(band.count_ones() == 24);
}

TEST_CASE("all-ones mask leaves a border ring") {
    const BinaryMask band = boundary_band(BinaryMask(6, 6, 1), BoundaryBandConfig{1});
    for (int y = 0; y < 6; ++y)
        for (int x = 0; x < 6; ++x) {
            const bool border = y == 0 || y == 5 || x == 0 || x == 5;
            CHECK(band.at(y, x) == (border ? 1 : 0));
        }
}

TEST_CASE("band is sandwiched between erosion and dilation") {
    for (int trial = 0; trial < 20; ++trial) {
        SeededRng rng(21, trial);
        const BinaryMask gs = random_mask(16, 16, rng, 0.4);
        const int t = 1 + static_cast<int>(rng.uniform_int(0, 2));
        const BinaryMask band = boundary_band(gs, BoundaryBandConfig{t});
        const BinaryMask grown = dilate(gs, t);
        const BinaryMask shrunk = erode(gs, t);
        for (int y = 0; y < 16; ++y)
            for (int x = 0; x < 16; ++x) {
                if (band.at(y, x)) CHECK(grown.at(y, x) == 1);
                CHECK_FALSE(bool(band.at(y, x) && shrunk.at(y, x)));
            }
    }
}

TEST_CASE("band is complement-symmetric away from the border") {
    for (int trial = 0; trial < 20; ++trial) {
        SeededRng rng(22, trial);
        const BinaryMask gs = random_mask(16, 16, rng);
        const int t = 1 + static_cast<int>(rng.uniform_int(0, 2));
        BinaryMask comp(16, 16);
        for (int y = 0; y < 16; ++y)
            for (int x = 0; x < 16; ++x) comp.at(y, x) = 1 - gs.at(y, x);

        const BinaryMask a = boundary_band(gs, BoundaryBandConfig{t});
        const BinaryMask b = boundary_band(comp, BoundaryBandConfig{t});
        for (int y = t + 1; y < 15 - t; ++y)
            for (int x = t + 1; x < 15 - t; ++x) CHECK(a.at(y, x) == b.at(y, x));
    }
}

TEST_CASE("band of a band differs from the band") {
    // Guards against accidentally computing edges of edges.
    BinaryMask gs(9, 9);
    for (int y = 2; y <= 6; ++y)
        for (int x = 2; x <= 6; ++x) gs.at(y, x) = 1;
    const BoundaryBandConfig cfg{1};
    const BinaryMask once = boundary_band(gs, cfg);
    const BinaryMask twice = boundary_band(once, cfg);
    CHECK_FALSE(once == twice);
}

TEST_CASE("multiclass_to_binary") {
    SUBCASE("all background") {
        CHECK(multiclass_to_binary(LabelMask(4, 4)).count_ones() == 0);
    }
    SUBCASE("mixed ids") {
        const LabelMask ids = labels_from(2, 3, {0, 1, 2, 2, 0, 1});
        const BinaryMask want = mask_from(2, 3, {0, 1, 1, 1, 0, 1});
        CHECK(multiclass_to_binary(ids) == want);
    }
    SUBCASE("random ids match the per-pixel oracle") {
        SeededRng rng(23, 0);
        LabelMask ids(8, 8);
        for (auto& v : ids.data()) v = static_cast<int32_t>(rng.uniform_int(0, 4));
        const BinaryMask got = multiclass_to_binary(ids);
        for (int y = 0; y < 8; ++y)
            for (int x = 0; x < 8; ++x) CHECK(got.at(y, x) == (ids.at(y, x) != 0 ? 1 : 0));
    }
    SUBCASE("negative ids rejected") {
        LabelMask ids(2, 2);
        ids.at(0, 0) = -1;
        CHECK_THROWS_AS(multiclass_to_binary(ids), std::invalid_argument);
    }
}

TEST_CASE("auto thickness scales with the short side") {
    CHECK(auto_band_thickness(512, 512) == 4);
    CHECK(auto_band_thickness(256, 512) == 2);
    CHECK(auto_band_thickness(512, 256) == 2);
    CHECK(auto_band_thickness(768, 768) == 6);
    CHECK(auto_band_thickness(64, 64) == 1);
    CHECK(auto_band_thickness(32, 32) == 1);  // never below 1
}
