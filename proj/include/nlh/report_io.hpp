#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace nlh {

/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::string& path, const std::string& contents);

/// %.17g formatting of a double; "inf", "-inf" and "nan" for non-finite values.
std::string format_double(double v);

/// Comma separated table with a fixed header. Cells are written verbatim.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// JSON number, or a string for non-finite values.
nlohmann::json json_number(double v);

void write_json(const std::string& path, const nlohmann::json& j);

}  // namespace nlh
