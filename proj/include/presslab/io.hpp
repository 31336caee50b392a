#pragma once

#include <string>
#include <vector>

namespace presslab {

// %.17g round-trip formatting; the stable text form behind the byte-identical
// reruns contract.
std::string format_double(double v);

class CsvWriter {
 public:
  void header(const std::vector<std::string>& names);
  void cell(const std::string& v);
  void cell(double v);
  void cell(long long v);
  void cell(std::size_t v);
  void end_row();
  const std::string& str() const { return out_; }

 private:
  std::string out_;
  bool row_open_ = false;
  std::size_t columns_ = 0;
  std::size_t in_row_ = 0;
};

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace presslab
