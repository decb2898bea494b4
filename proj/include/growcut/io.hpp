#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "growcut/image.hpp"

namespace growcut::io {

/// Reads a P5 PGM (maxval 255 or 65535) or an 8/16-bit grayscale PNG; the
/// format is sniffed from the file header. 16-bit samples are divided by 257.
GrayImage load_gray_image(const std::filesystem::path& path);

/// Writes P5 PGM when the extension is `.pgm`, PNG otherwise.
void save_gray_image(const GrayImage& img, const std::filesystem::path& path);

/// Masks are grayscale files where values >= 128 are foreground.
BinaryMask load_mask(const std::filesystem::path& path);
/// Written as 0 (background) / 255 (foreground).
void save_mask(const BinaryMask& mask, const std::filesystem::path& path);

GrayImage decode_image(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_png(const GrayImage& img);
std::vector<std::uint8_t> encode_pgm(const GrayImage& img);
/// 8-bit RGB, `rgb.size() == 3 * width * height`.
std::vector<std::uint8_t> encode_png_rgb(int width, int height, std::span<const std::uint8_t> rgb);

GrayImage mask_to_image(const BinaryMask& mask);
BinaryMask image_to_mask(const GrayImage& img);

/// `[{"x":int,"y":int,"label":"fg"|"bg"}, ...]`
SeedSet seeds_from_json(const nlohmann::json& j);
nlohmann::json seeds_to_json(const SeedSet& seeds);
/// `x,y,label` rows; a header row is optional.
SeedSet seeds_from_csv(std::string_view text);
std::string seeds_to_csv(const SeedSet& seeds);

/// Dispatches on extension: `.csv` is CSV, everything else JSON.
SeedSet load_seeds(const std::filesystem::path& path);
void save_seeds(const SeedSet& seeds, const std::filesystem::path& path);

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace growcut::io
