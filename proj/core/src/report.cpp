#include "salieval/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "salieval/error.hpp"

namespace salieval {

ReportTable ReportTable::eval_header() {
  ReportTable t;
  t.header = {"corpus", "shortcut", "model",     "method", "objective",
              "variant", "precision", "mean_rank", "n",      "verified"};
  return t;
}

std::string format_double(double v, int decimals) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

void write_csv(const std::filesystem::path& path, const ReportTable& table) {
  if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  for (size_t i = 0; i < table.header.size(); ++i)
    out << (i ? "," : "") << table.header[i];
  out << "\n";
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size())
      throw ContractError("report row width does not match the header");
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

ReportTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  ReportTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  if (first) throw ParseError("empty CSV: " + path.string());
  return table;
}

std::string markdown_string(const ReportTable& table, const std::string& title) {
  std::string out;
  if (!title.empty()) out += "# " + title + "\n\n";
  out += "|";
  for (const auto& h : table.header) out += " " + h + " |";
  out += "\n|";
  for (size_t i = 0; i < table.header.size(); ++i) out += " --- |";
  out += "\n";
  for (const auto& row : table.rows) {
    out += "|";
    for (const auto& cell : row) out += " " + cell + " |";
    out += "\n";
  }
  return out;
}

void write_markdown(const std::filesystem::path& path, const ReportTable& table,
                    const std::string& title) {
  if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << markdown_string(table, title);
}

}  // namespace salieval
