#pragma once

#include <filesystem>

#include "egoflow/image.hpp"

namespace egoflow {

/// Decodes a grayscale image from PGM (binary P5) or PNG. 8-bit PNG color
/// inputs are converted by the channel average. Throws IoError on anything
/// unreadable.
GrayImage load_gray(const std::filesystem::path& file);

/// Writes binary P5, maxval 255, rounding float samples to nearest.
void save_pgm(const GrayImage& img, const std::filesystem::path& file);

/// Writes an 8-bit RGB PNG with fixed encoder settings, so identical pixels
/// produce identical bytes.
void save_png(const RgbImage& img, const std::filesystem::path& file);

/// Writes an 8-bit grayscale PNG, same determinism guarantee.
void save_png(const GrayImage& img, const std::filesystem::path& file);

}  // namespace egoflow
