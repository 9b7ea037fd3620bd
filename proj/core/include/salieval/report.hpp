#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace salieval {

// Flat result table shared by the CSV and Markdown writers. Column order is
// fixed; the Markdown table mirrors the CSV header exactly.
struct ReportTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  static ReportTable eval_header();
};

void write_csv(const std::filesystem::path& path, const ReportTable& table);
void write_markdown(const std::filesystem::path& path, const ReportTable& table,
                    const std::string& title);
ReportTable read_csv(const std::filesystem::path& path);
std::string markdown_string(const ReportTable& table, const std::string& title);

std::string format_double(double v, int decimals);

}  // namespace salieval
