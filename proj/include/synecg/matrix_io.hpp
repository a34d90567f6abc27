#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace synecg {

inline constexpr int kFormatVersion = 1;

/// Row-major matrix read from any of the supported on-disk encodings.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  nlohmann::json meta = nlohmann::json::object();  // sidecar contents, if any

  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(values).subspan(r * cols, cols);
  }
  double sampling_rate(double fallback) const;
};

enum class Encoding { f32, u8, csv };

/// Sidecar path for a binary matrix file: same stem, ".json" extension.
std::filesystem::path sidecar_path(const std::filesystem::path& data);

/// Binary matrices: raw little-endian float32 or uint8, row-major, no header,
/// plus a JSON sidecar {format, format_version, dtype, endianness, rows, cols,
/// ...extra}. CSV matrices: one row per line, comma separated, no header;
/// float32 values are printed in shortest round-trip form.
void write_matrix_f32(const std::filesystem::path& path, std::span<const float> values,
                      std::size_t rows, std::size_t cols, const nlohmann::json& extra = {});
void write_matrix_u8(const std::filesystem::path& path, std::span<const std::uint8_t> values,
                     std::size_t rows, std::size_t cols, const nlohmann::json& extra = {});
void write_matrix_csv(const std::filesystem::path& path, std::span<const float> values,
                      std::size_t rows, std::size_t cols);
void write_matrix_csv(const std::filesystem::path& path, std::span<const std::uint8_t> values,
                      std::size_t rows, std::size_t cols);

/// Dispatches on extension: .f32 / .u8 need the sidecar, .csv reads an
/// optional sidecar for metadata. Throws IoError.
Matrix read_matrix(const std::filesystem::path& path);

/// A single-row matrix or single-column CSV as a flat series.
std::vector<double> read_series(const std::filesystem::path& path, double* sampling_rate = nullptr);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

/// Two-column CSV "record,index" with a header line. Rows need not be grouped.
struct IndexTable {
  std::vector<std::size_t> record;
  std::vector<std::size_t> index;
  /// Indices of one record, sorted ascending.
  std::vector<std::size_t> of(std::size_t rec) const;
  std::size_t record_count() const;  // max record id + 1, 0 when empty
};

void write_index_table(const std::filesystem::path& path, const IndexTable& table,
                       const std::string& header = "record,index");
/// Accepts an optional header; a single column is read as record 0.
IndexTable read_index_table(const std::filesystem::path& path);

std::string shortest(float v);
std::string shortest(double v);

}  // namespace synecg
