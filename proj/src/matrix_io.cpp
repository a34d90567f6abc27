#include "synecg/matrix_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "synecg/errors.hpp"

namespace synecg {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream os(path, mode | std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  return os;
}

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream is(path, mode);
  if (!is) throw IoError("cannot open '" + path.string() + "' for reading");
  return is;
}

json sidecar(const char* dtype, std::size_t rows, std::size_t cols, const json& extra) {
  json j = {{"format", "synecg-matrix"},
            {"format_version", kFormatVersion},
            {"dtype", dtype},
            {"endianness", "little"},
            {"rows", rows},
            {"cols", cols}};
  if (extra.is_object()) {
    for (const auto& [k, v] : extra.items()) j[k] = v;
  }
  return j;
}

void check_shape(std::size_t size, std::size_t rows, std::size_t cols) {
  if (size != rows * cols) {
    throw ConfigError("matrix: " + std::to_string(size) + " values do not fit " +
                      std::to_string(rows) + "x" + std::to_string(cols));
  }
}

std::uint32_t to_little(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    v = ((v & 0xFFu) << 24) | ((v & 0xFF00u) << 8) | ((v >> 8) & 0xFF00u) | (v >> 24);
  }
  return v;
}

double parse_double(std::string_view tok, const fs::path& path, std::size_t line) {
  while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
  while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t' || tok.back() == '\r')) {
    tok.remove_suffix(1);
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw IoError(path.string() + ":" + std::to_string(line) + ": not a number: '" +
                  std::string(tok) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                      : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool is_header(std::string_view line) {
  std::string_view tok = line.substr(0, line.find(','));
  while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
  while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\r')) tok.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  return ec != std::errc() || ptr != tok.data() + tok.size();
}

}  // namespace

double Matrix::sampling_rate(double fallback) const {
  if (meta.is_object() && meta.contains("sampling_rate") && meta.at("sampling_rate").is_number()) {
    return meta.at("sampling_rate").get<double>();
  }
  return fallback;
}

fs::path sidecar_path(const fs::path& data) {
  fs::path p = data;
  p.replace_extension(".json");
  return p;
}

std::string shortest(float v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string shortest(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream os = open_out(path);
  os << j.dump(2) << '\n';
  if (!os) throw IoError("write failed: '" + path.string() + "'");
}

json read_json(const fs::path& path) {
  std::ifstream is = open_in(path);
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw IoError("invalid JSON in '" + path.string() + "': " + e.what());
  }
}

void write_matrix_f32(const fs::path& path, std::span<const float> values, std::size_t rows,
                      std::size_t cols, const json& extra) {
  check_shape(values.size(), rows, cols);
  std::ofstream os = open_out(path, std::ios::out | std::ios::binary);
  std::vector<char> bytes(values.size() * 4);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::uint32_t bits = to_little(std::bit_cast<std::uint32_t>(values[i]));
    std::memcpy(bytes.data() + 4 * i, &bits, 4);
  }
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw IoError("write failed: '" + path.string() + "'");
  write_json(sidecar_path(path), sidecar("float32", rows, cols, extra));
}

void write_matrix_u8(const fs::path& path, std::span<const std::uint8_t> values, std::size_t rows,
                     std::size_t cols, const json& extra) {
  check_shape(values.size(), rows, cols);
  std::ofstream os = open_out(path, std::ios::out | std::ios::binary);
  os.write(reinterpret_cast<const char*>(values.data()), static_cast<std::streamsize>(values.size()));
  if (!os) throw IoError("write failed: '" + path.string() + "'");
  write_json(sidecar_path(path), sidecar("uint8", rows, cols, extra));
}

void write_matrix_csv(const fs::path& path, std::span<const float> values, std::size_t rows,
                      std::size_t cols) {
  check_shape(values.size(), rows, cols);
  std::ofstream os = open_out(path);
  std::string line;
  for (std::size_t r = 0; r < rows; ++r) {
    line.clear();
    for (std::size_t c = 0; c < cols; ++c) {
      if (c) line += ',';
      line += shortest(values[r * cols + c]);
    }
    os << line << '\n';
  }
  if (!os) throw IoError("write failed: '" + path.string() + "'");
}

void write_matrix_csv(const fs::path& path, std::span<const std::uint8_t> values, std::size_t rows,
                      std::size_t cols) {
  check_shape(values.size(), rows, cols);
  std::ofstream os = open_out(path);
  std::string line;
  for (std::size_t r = 0; r < rows; ++r) {
    line.clear();
    for (std::size_t c = 0; c < cols; ++c) {
      if (c) line += ',';
      line += std::to_string(values[r * cols + c]);
    }
    os << line << '\n';
  }
  if (!os) throw IoError("write failed: '" + path.string() + "'");
}

Matrix read_matrix(const fs::path& path) {
  Matrix m;
  const std::string ext = path.extension().string();
  if (ext == ".f32" || ext == ".u8") {
    const fs::path side = sidecar_path(path);
    if (!fs::exists(side)) throw IoError("missing sidecar '" + side.string() + "'");
    m.meta = read_json(side);
    try {
      m.rows = m.meta.at("rows").get<std::size_t>();
      m.cols = m.meta.at("cols").get<std::size_t>();
      const std::string dtype = m.meta.at("dtype").get<std::string>();
      const std::string endian = m.meta.value("endianness", std::string("little"));
      if (endian != "little") throw IoError("unsupported endianness in '" + side.string() + "'");
      if ((ext == ".f32") != (dtype == "float32") || (ext == ".u8") != (dtype == "uint8")) {
        throw IoError("dtype '" + dtype + "' does not match '" + path.string() + "'");
      }
    } catch (const json::exception& e) {
      throw IoError("bad sidecar '" + side.string() + "': " + e.what());
    }
    const std::size_t width = ext == ".f32" ? 4 : 1;
    std::ifstream is = open_in(path, std::ios::in | std::ios::binary);
    std::vector<char> bytes(m.rows * m.cols * width);
    is.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (static_cast<std::size_t>(is.gcount()) != bytes.size()) {
      throw IoError("'" + path.string() + "' is shorter than its sidecar shape");
    }
    m.values.resize(m.rows * m.cols);
    for (std::size_t i = 0; i < m.values.size(); ++i) {
      if (width == 4) {
        std::uint32_t bits = 0;
        std::memcpy(&bits, bytes.data() + 4 * i, 4);
        m.values[i] = std::bit_cast<float>(to_little(bits));
      } else {
        m.values[i] = static_cast<unsigned char>(bytes[i]);
      }
    }
    return m;
  }
  if (ext != ".csv") throw IoError("unknown matrix extension '" + ext + "' for '" + path.string() + "'");

  if (const fs::path side = sidecar_path(path); fs::exists(side)) m.meta = read_json(side);
  std::ifstream is = open_in(path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    if (lineno == 1 && is_header(line)) continue;
    const auto toks = split(line);
    if (m.rows == 0) {
      m.cols = toks.size();
    } else if (toks.size() != m.cols) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                    std::to_string(m.cols) + " columns, got " + std::to_string(toks.size()));
    }
    for (auto tok : toks) m.values.push_back(parse_double(tok, path, lineno));
    ++m.rows;
  }
  return m;
}

std::vector<double> read_series(const fs::path& path, double* sampling_rate) {
  Matrix m = read_matrix(path);
  if (sampling_rate) *sampling_rate = m.sampling_rate(*sampling_rate);
  if (m.rows == 1 || m.cols == 1) return std::move(m.values);
  throw IoError("'" + path.string() + "' is a " + std::to_string(m.rows) + "x" +
                std::to_string(m.cols) + " matrix, expected a single series");
}

std::vector<std::size_t> IndexTable::of(std::size_t rec) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < record.size(); ++i) {
    if (record[i] == rec) out.push_back(index[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t IndexTable::record_count() const {
  if (record.empty()) return 0;
  return *std::max_element(record.begin(), record.end()) + 1;
}

void write_index_table(const fs::path& path, const IndexTable& table, const std::string& header) {
  std::ofstream os = open_out(path);
  os << header << '\n';
  for (std::size_t i = 0; i < table.record.size(); ++i) {
    os << table.record[i] << ',' << table.index[i] << '\n';
  }
  if (!os) throw IoError("write failed: '" + path.string() + "'");
}

IndexTable read_index_table(const fs::path& path) {
  std::ifstream is = open_in(path);
  IndexTable t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    if (lineno == 1 && is_header(line)) continue;
    const auto toks = split(line);
    auto as_index = [&](std::string_view tok) {
      const double v = parse_double(tok, path, lineno);
      if (v < 0.0 || v != std::floor(v)) {
        throw IoError(path.string() + ":" + std::to_string(lineno) + ": not a sample index");
      }
      return static_cast<std::size_t>(v);
    };
    if (toks.size() == 1) {
      t.record.push_back(0);
      t.index.push_back(as_index(toks[0]));
    } else if (toks.size() >= 2) {
      t.record.push_back(as_index(toks[0]));
      t.index.push_back(as_index(toks[1]));
    }
  }
  return t;
}

}  // namespace synecg
