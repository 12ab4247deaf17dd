#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "whkit/types.hpp"

namespace whkit {

// WHM1: magic "WHM1", rows (u64 LE), cols (u64 LE), rows*cols f64 LE row-major.
void write_whm(std::ostream& out, const Matrix& m);
Matrix read_whm(std::istream& in, const std::string& source = "<stream>");

void save_whm(const std::filesystem::path& path, const Matrix& m);
Matrix load_whm(const std::filesystem::path& path);

/// One value per line, 17 significant digits.
void save_values(const std::filesystem::path& path, const std::vector<double>& values);

}  // namespace whkit
