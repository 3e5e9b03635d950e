#include "glmev/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "glmev/errors.hpp"

namespace glmev {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error(ErrorKind::kNumeric, "cannot format double");
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (text == "inf") return INFINITY;
  if (text == "-inf") return -INFINITY;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::kParseError, "not a number: '" + std::string(text) + "'");
  }
  return v;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = end + 1;
  }
  // A trailing blank line is a terminator, not a row.
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t end = line.find(',', pos);
    if (end == std::string_view::npos) {
      cells.push_back(line.substr(pos));
      return cells;
    }
    cells.push_back(line.substr(pos, end - pos));
    pos = end + 1;
  }
}

}  // namespace

Eigen::MatrixXd parse_numeric_csv(std::string_view text, std::string_view source) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw Error(ErrorKind::kParseError, std::string(source) + ": empty file");
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < lines.size(); ++r) {
    const auto cells = split_cells(lines[r]);
    std::vector<double> row;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      try {
        row.push_back(parse_double(cells[c]));
      } catch (const Error&) {
        throw Error(ErrorKind::kParseError, std::string(source) + ": row " + std::to_string(r + 1) + ", column " +
                                                std::to_string(c + 1) + ": '" + std::string(cells[c]) + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorKind::kParseError, std::string(source) + ": row " + std::to_string(r + 1) + " has " +
                                              std::to_string(row.size()) + " columns, expected " +
                                              std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return M;
}

Eigen::MatrixXd read_numeric_csv(const std::filesystem::path& path) {
  return parse_numeric_csv(read_text_file(path), path.string());
}

Dataset load_dataset(const std::filesystem::path& design_path, const std::filesystem::path& response_path,
                     FamilyKind family) {
  Eigen::MatrixXd X = read_numeric_csv(design_path);
  const Eigen::MatrixXd y = read_numeric_csv(response_path);
  if (y.cols() != 1) {
    throw Error(ErrorKind::kShapeMismatch, response_path.string() + ": response must have one column");
  }
  if (y.rows() != X.rows()) {
    throw Error(ErrorKind::kShapeMismatch, "response has " + std::to_string(y.rows()) + " rows, design has " +
                                               std::to_string(X.rows()));
  }
  return Dataset(std::move(X), y.col(0), family);
}

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& X) {
  std::string out;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      if (j) out += ',';
      out += format_double(X(i, j));
    }
    out += '\n';
  }
  write_text_file(path, out);
}

std::vector<std::vector<std::string>> split_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  for (auto line : split_lines(text)) {
    std::vector<std::string> row;
    for (auto c : split_cells(line)) row.emplace_back(c);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace glmev
