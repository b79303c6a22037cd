#include "factlens/jsonl.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include <nlohmann/json.hpp>

namespace factlens::jsonl {

namespace fs = std::filesystem;

std::vector<json> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IOError("cannot open " + path.string());
  }
  std::vector<json> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.find_first_not_of(" \t") == std::string::npos) {
      continue;
    }
    json record = json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object()) {
      throw BadRecordError(path.string() + " line " + std::to_string(line_no) +
                           " is not a JSON object");
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::string to_lines(const std::vector<json>& records) {
  std::string out;
  for (const json& record : records) {
    out += record.dump();
    out += '\n';
  }
  return out;
}

void write_text_atomic(const fs::path& path, std::string_view text) {
  fs::path dir = path.parent_path();
  if (!dir.empty()) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
      throw IOError("cannot create " + dir.string() + ": " + ec.message());
    }
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IOError("cannot open " + tmp.string() + " for writing");
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
      throw IOError("short write to " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw IOError("cannot publish " + path.string() + ": " + ec.message());
  }
}

void write_file(const fs::path& path, const std::vector<json>& records) {
  write_text_atomic(path, to_lines(records));
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IOError("cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace factlens::jsonl
