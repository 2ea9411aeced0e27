#include "ldce/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "ldce/error.hpp"

namespace ldce::io {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_double(const std::string& cell, double& out) {
  const std::string t = trim(cell);
  if (t.empty()) return false;
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_int(const std::string& cell, long long& out) {
  const std::string t = trim(cell);
  if (t.empty()) return false;
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, out);
  return ec == std::errc() && ptr == end;
}

[[noreturn]] void fail_cell(std::size_t row, std::size_t col, const std::string& what) {
  std::ostringstream msg;
  msg << "row " << row << ", column " << col << ": " << what;
  throw ParseError(msg.str());
}

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void write_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << contents;
  if (!out) throw IoError("write failed for " + path.string());
}

Dataset parse_csv(const std::string& text, std::optional<int> class_count) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line).empty()) throw ParseError("row 0: missing header");

  const auto header = split_fields(line);
  if (header.size() < 2 || trim(header.back()) != "label") {
    throw ParseError("row 0: header must end with a column named \"label\"");
  }
  const std::size_t d = header.size() - 1;

  std::vector<double> values;
  std::vector<int> labels;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split_fields(line);
    if (cells.size() != header.size()) {
      std::ostringstream msg;
      msg << "row " << row << ": expected " << header.size() << " columns, got " << cells.size();
      throw ParseError(msg.str());
    }
    for (std::size_t j = 0; j < d; ++j) {
      double v = 0.0;
      if (!parse_double(cells[j], v)) fail_cell(row, j, "non-numeric feature '" + cells[j] + "'");
      values.push_back(v);
    }
    long long y = 0;
    if (!parse_int(cells[d], y) || y < 0 || y > std::numeric_limits<int>::max()) {
      fail_cell(row, d, "label '" + cells[d] + "' is not a class id");
    }
    if (class_count && y >= *class_count) {
      std::ostringstream what;
      what << "label " << y << " outside [0, " << *class_count << ")";
      fail_cell(row, d, what.str());
    }
    labels.push_back(static_cast<int>(y));
  }
  if (labels.empty()) throw ParseError("no data rows");

  int c = 2;
  if (class_count) {
    c = *class_count;
  } else {
    for (int y : labels) c = std::max(c, y + 1);
  }

  const auto n = static_cast<Eigen::Index>(labels.size());
  Matrix x(n, static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(d); ++j)
      x(i, j) = values[static_cast<std::size_t>(i) * d + static_cast<std::size_t>(j)];
  return Dataset(std::move(x), std::move(labels), c, Provenance::clean);
}

Dataset load_csv(const std::filesystem::path& path, std::optional<int> class_count) {
  try {
    return parse_csv(read_file(path), class_count);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string format_csv(const Dataset& ds) {
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index j = 0; j < ds.dim(); ++j) out << 'f' << j << ',';
  out << "label\n";
  for (Eigen::Index i = 0; i < ds.size(); ++i) {
    for (Eigen::Index j = 0; j < ds.dim(); ++j) out << ds.features()(i, j) << ',';
    out << ds.label(i) << '\n';
  }
  return out.str();
}

void save_csv(const Dataset& ds, const std::filesystem::path& path) {
  write_file(path, format_csv(ds));
}

Dataset decode_idx(std::span<const std::uint8_t> images, std::span<const std::uint8_t> labels,
                   int class_count) {
  if (images.size() < 16) throw FormatError("image file truncated in header");
  if (labels.size() < 8) throw FormatError("label file truncated in header");
  if (read_be32(images, 0) != kImagesMagic) throw FormatError("bad image magic");
  if (read_be32(labels, 0) != kLabelsMagic) throw FormatError("bad label magic");

  const std::uint64_t n = read_be32(images, 4);
  const std::uint64_t rows = read_be32(images, 8);
  const std::uint64_t cols = read_be32(images, 12);
  const std::uint64_t n_labels = read_be32(labels, 4);
  if (n != n_labels) {
    std::ostringstream msg;
    msg << "image count " << n << " does not match label count " << n_labels;
    throw FormatError(msg.str());
  }
  const std::uint64_t pixels = rows * cols;
  if (images.size() - 16 < n * pixels) throw FormatError("image payload truncated");
  if (labels.size() - 8 < n) throw FormatError("label payload truncated");

  Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(pixels));
  std::vector<int> y(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    for (std::uint64_t p = 0; p < pixels; ++p) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p)) =
          static_cast<double>(images[16 + i * pixels + p]) / 255.0;
    }
    y[i] = labels[8 + i];
    if (y[i] >= class_count) {
      std::ostringstream msg;
      msg << "label " << y[i] << " at item " << i << " outside [0, " << class_count << ")";
      throw FormatError(msg.str());
    }
  }
  return Dataset(std::move(x), std::move(y), class_count, Provenance::clean);
}

Dataset load_idx(const std::filesystem::path& images_path,
                 const std::filesystem::path& labels_path, int class_count) {
  const auto images = read_bytes(images_path);
  const auto labels = read_bytes(labels_path);
  return decode_idx(images, labels, class_count);
}

std::vector<std::uint8_t> encode_idx_images(std::span<const std::uint8_t> pixels,
                                            std::uint32_t count, std::uint32_t rows,
                                            std::uint32_t cols) {
  if (pixels.size() != std::uint64_t{count} * rows * cols) {
    throw ValidationError("pixel buffer does not match count x rows x cols");
  }
  std::vector<std::uint8_t> out;
  out.reserve(16 + pixels.size());
  write_be32(out, kImagesMagic);
  write_be32(out, count);
  write_be32(out, rows);
  write_be32(out, cols);
  out.insert(out.end(), pixels.begin(), pixels.end());
  return out;
}

std::vector<std::uint8_t> encode_idx_labels(std::span<const std::uint8_t> labels) {
  std::vector<std::uint8_t> out;
  out.reserve(8 + labels.size());
  write_be32(out, kLabelsMagic);
  write_be32(out, static_cast<std::uint32_t>(labels.size()));
  out.insert(out.end(), labels.begin(), labels.end());
  return out;
}

std::string format_matrix_csv(const Matrix& m, const std::string& header) {
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  if (!header.empty()) out << "# " << header << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
  return out.str();
}

Matrix parse_matrix_csv(const std::string& text, std::string* header) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      if (header && rows.empty()) *header = trim(t.substr(1));
      continue;
    }
    const auto cells = split_fields(t);
    std::vector<double> values;
    for (std::size_t j = 0; j < cells.size(); ++j) {
      double v = 0.0;
      if (!parse_double(cells[j], v)) fail_cell(row, j, "non-numeric entry '" + cells[j] + "'");
      values.push_back(v);
    }
    if (!rows.empty() && values.size() != rows.front().size()) {
      std::ostringstream msg;
      msg << "row " << row << ": expected " << rows.front().size() << " columns";
      throw ParseError(msg.str());
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ParseError("matrix file has no rows");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

void save_matrix_csv(const Matrix& m, const std::filesystem::path& path,
                     const std::string& header) {
  write_file(path, format_matrix_csv(m, header));
}

Matrix load_matrix_csv(const std::filesystem::path& path, std::string* header) {
  try {
    return parse_matrix_csv(read_file(path), header);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace ldce::io
