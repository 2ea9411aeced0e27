#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ldce/data.hpp"

namespace ldce::io {

// Dataset CSV: mandatory header, feature columns first, integer class id in a
// final column named "label". Features are written with max_digits10 so a
// save/load cycle is exact.
//
// When `class_count` is empty it is inferred as max(label) + 1 (at least 2).
Dataset load_csv(const std::filesystem::path& path,
                 std::optional<int> class_count = std::nullopt);
Dataset parse_csv(const std::string& text, std::optional<int> class_count = std::nullopt);
void save_csv(const Dataset& ds, const std::filesystem::path& path);
std::string format_csv(const Dataset& ds);

// IDX (MNIST) images 0x00000803 / labels 0x00000801, big-endian headers.
// Pixels are flattened row-major and divided by 255.
Dataset load_idx(const std::filesystem::path& images_path,
                 const std::filesystem::path& labels_path, int class_count);
Dataset decode_idx(std::span<const std::uint8_t> images, std::span<const std::uint8_t> labels,
                   int class_count);

// Encoders for fixtures and for exporting byte data.
std::vector<std::uint8_t> encode_idx_images(std::span<const std::uint8_t> pixels,
                                            std::uint32_t count, std::uint32_t rows,
                                            std::uint32_t cols);
std::vector<std::uint8_t> encode_idx_labels(std::span<const std::uint8_t> labels);

// Plain numeric matrix CSV: one row per line, no header unless `header` is
// non-empty, in which case it is written as a single "# ..." comment line.
// Used for transition matrices (c x c), centroids (d x c) and models (d x c).
void save_matrix_csv(const Matrix& m, const std::filesystem::path& path,
                     const std::string& header = {});
Matrix load_matrix_csv(const std::filesystem::path& path, std::string* header = nullptr);
std::string format_matrix_csv(const Matrix& m, const std::string& header = {});
Matrix parse_matrix_csv(const std::string& text, std::string* header = nullptr);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace ldce::io
