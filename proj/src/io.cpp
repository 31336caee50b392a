#include "presslab/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "presslab/error.hpp"

namespace presslab {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void CsvWriter::header(const std::vector<std::string>& names) {
  columns_ = names.size();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out_ += ',';
    out_ += names[i];
  }
  out_ += '\n';
}

void CsvWriter::cell(const std::string& v) {
  if (row_open_) out_ += ',';
  out_ += v;
  row_open_ = true;
  ++in_row_;
}

void CsvWriter::cell(double v) { cell(format_double(v)); }
void CsvWriter::cell(long long v) { cell(std::to_string(v)); }
void CsvWriter::cell(std::size_t v) { cell(std::to_string(v)); }

void CsvWriter::end_row() {
  if (columns_ != 0 && in_row_ != columns_)
    throw Error("csv row has " + std::to_string(in_row_) + " cells, expected " +
                std::to_string(columns_));
  out_ += '\n';
  row_open_ = false;
  in_row_ = 0;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) throw Error("cannot create directory " + p.parent_path().string());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace presslab
