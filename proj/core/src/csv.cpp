#include "cs2d/csv.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cs2d/errors.hpp"

namespace cs2d {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string to_csv(const CsvTable& t) {
  std::ostringstream out;
  for (const auto& [k, v] : t.metadata) out << "# " << k << ": " << v << '\n';
  if (!t.units.empty()) {
    out << "# units:";
    for (std::size_t i = 0; i < t.columns.size(); ++i)
      out << ' ' << t.columns[i] << '[' << (i < t.units.size() ? t.units[i] : "")
          << ']';
    out << '\n';
  }
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  const fs::path tmp = p.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + tmp.string() + " for writing");
    f << content;
    if (!f) throw Error("write failed: " + tmp.string());
  }
  fs::rename(tmp, p);
}

}  // namespace cs2d
