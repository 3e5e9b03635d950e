#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "glmev/glm.hpp"

namespace glmev {

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view text);

// Headerless numeric CSV: comma separated, '.' decimal, LF or CRLF.
// ParseError carries the 1-based row/column.
Eigen::MatrixXd read_numeric_csv(const std::filesystem::path& path);
Eigen::MatrixXd parse_numeric_csv(std::string_view text, std::string_view source = "<text>");

Dataset load_dataset(const std::filesystem::path& design_path, const std::filesystem::path& response_path,
                     FamilyKind family);

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& X);

// Splits CSV text with a header into rows of string cells (no quoting).
std::vector<std::vector<std::string>> split_csv(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace glmev
