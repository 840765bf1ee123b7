#include "egoflow/image.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "egoflow/image_io.hpp"
#include "egoflow/optical_flow.hpp"
#include "egoflow/rng.hpp"

namespace egoflow {
namespace {

namespace fs = std::filesystem;

fs::path temp_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

GrayImage checkerboard(int w, int h) {
    GrayImage img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            img.at(x, y) = ((x + y) & 1) ? 255.0f : 0.0f;
    return img;
}

TEST(Image, BilinearInterpolation) {
    GrayImage img(2, 2);
    img.at(0, 0) = 0.0f;
    img.at(1, 0) = 10.0f;
    img.at(0, 1) = 20.0f;
    img.at(1, 1) = 30.0f;
    EXPECT_NEAR(img.bilinear(0.0, 0.0), 0.0, 1e-6);
    EXPECT_NEAR(img.bilinear(0.5, 0.0), 5.0, 1e-6);
    EXPECT_NEAR(img.bilinear(0.0, 0.5), 10.0, 1e-6);
    EXPECT_NEAR(img.bilinear(0.5, 0.5), 15.0, 1e-6);
}

TEST(Image, WindowInside) {
    GrayImage img(30, 20);
    EXPECT_TRUE(img.window_inside(14.0, 9.0, 5));
    EXPECT_FALSE(img.window_inside(4.0, 9.0, 5));
    EXPECT_FALSE(img.window_inside(14.0, 18.5, 5));
    EXPECT_FALSE(img.window_inside(-1.0, 9.0, 0));
}

TEST(Pyramid, CheckerboardMeansToHalf) {
    // 2x2 mean over a 0/255 checkerboard is exactly 127.5; this pins both the
    // box-filter law and the float pixel storage.
    const Pyramid pyr = build_pyramid(checkerboard(64, 64), 2);
    ASSERT_EQ(pyr.levels.size(), 2u);
    for (float v : pyr.levels[1].pixels()) EXPECT_EQ(v, 127.5f);
}

TEST(Pyramid, DimensionsFloorHalve) {
    GrayImage img(101, 67, 10.0f);
    const Pyramid pyr = build_pyramid(img, 2);
    EXPECT_EQ(pyr.levels[1].width(), 50);
    EXPECT_EQ(pyr.levels[1].height(), 33);
    EXPECT_EQ(pyr.width(), 101);
    EXPECT_EQ(pyr.height(), 67);
}

TEST(Pyramid, RejectsUndersizedLevels) {
    GrayImage img(64, 64, 0.0f);
    EXPECT_THROW(build_pyramid(img, 3), TooManyLevels);  // 16 < 21
    EXPECT_NO_THROW(build_pyramid(img, 2));              // 32 >= 21
}

TEST(ImageIo, PgmRoundtrip) {
    const fs::path dir = temp_dir("egoflow_test_pgm");
    GrayImage img(33, 17);
    Rng rng(5);
    for (float& p : img.pixels()) p = static_cast<float>(rng.below(256));
    const fs::path file = dir / "img.pgm";
    save_pgm(img, file);
    const GrayImage back = load_gray(file);
    ASSERT_EQ(back.width(), img.width());
    ASSERT_EQ(back.height(), img.height());
    for (std::size_t i = 0; i < img.pixels().size(); ++i)
        EXPECT_EQ(back.pixels()[i], img.pixels()[i]);
    fs::remove_all(dir);
}

TEST(ImageIo, PngGrayRoundtrip) {
    const fs::path dir = temp_dir("egoflow_test_png");
    GrayImage img(21, 40);
    Rng rng(6);
    for (float& p : img.pixels()) p = static_cast<float>(rng.below(256));
    const fs::path file = dir / "img.png";
    save_png(img, file);
    const GrayImage back = load_gray(file);
    ASSERT_EQ(back.width(), img.width());
    ASSERT_EQ(back.height(), img.height());
    for (std::size_t i = 0; i < img.pixels().size(); ++i)
        EXPECT_EQ(back.pixels()[i], img.pixels()[i]);
    fs::remove_all(dir);
}

TEST(ImageIo, PngBytesAreDeterministic) {
    const fs::path dir = temp_dir("egoflow_test_pngdet");
    RgbImage img(25, 25);
    Rng rng(7);
    for (int y = 0; y < 25; ++y)
        for (int x = 0; x < 25; ++x) {
            const auto r = static_cast<std::uint8_t>(rng.below(256));
            const auto g = static_cast<std::uint8_t>(rng.below(256));
            const auto b = static_cast<std::uint8_t>(rng.below(256));
            img.set(x, y, r, g, b);
        }
    save_png(img, dir / "a.png");
    save_png(img, dir / "b.png");
    std::ifstream a(dir / "a.png", std::ios::binary);
    std::ifstream b(dir / "b.png", std::ios::binary);
    const std::string sa((std::istreambuf_iterator<char>(a)), {});
    const std::string sb((std::istreambuf_iterator<char>(b)), {});
    EXPECT_FALSE(sa.empty());
    EXPECT_EQ(sa, sb);
    fs::remove_all(dir);
}

TEST(ImageIo, MissingFileThrows) {
    EXPECT_THROW(load_gray("/nonexistent/egoflow/frame.pgm"), IoError);
}

TEST(ImageIo, GarbageFileThrows) {
    const fs::path dir = temp_dir("egoflow_test_garbage");
    const fs::path file = dir / "bad.pgm";
    std::ofstream(file) << "not an image";
    EXPECT_THROW(load_gray(file), IoError);
    fs::remove_all(dir);
}

}  // namespace
}  // namespace egoflow
