#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace lindyn {

// Quotes a field iff it contains a comma, quote, or newline (quotes doubled).
std::string csv_escape(const std::string& field);

// Splits one line written by CsvWriter back into fields.
std::vector<std::string> csv_split(const std::string& line);

// Deterministic CSV writer: "\n" endings, binary mode, no padding.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  void row(const std::vector<std::string>& fields);
  void close();

 private:
  std::ofstream out_;
};

// Reads a whole CSV file back as rows of fields (used by the re-verification
// pass and the byte-identity checks).
std::vector<std::vector<std::string>> read_csv(const std::string& path);

}  // namespace lindyn
