#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "factlens/errors.hpp"

namespace factlens::jsonl {

// ordered_json keeps insertion order so serialized records are stable.
using json = nlohmann::ordered_json;

// Reads every non-blank line of `path` as one JSON object.
// Throws IOError if the file cannot be opened, BadRecordError on a line
// that is not a JSON object (message names the 1-based line number).
std::vector<json> read_file(const std::filesystem::path& path);

// Serializes one record per line, no trailing spaces, '\n' line ends.
std::string to_lines(const std::vector<json>& records);

// Writes via a sibling temp file and rename so readers never observe a
// partially written file.
void write_file(const std::filesystem::path& path, const std::vector<json>& records);

// Same atomic publish for arbitrary text payloads.
void write_text_atomic(const std::filesystem::path& path, std::string_view text);

// Slurps a whole file. Throws IOError if unreadable.
std::string read_text(const std::filesystem::path& path);

}  // namespace factlens::jsonl
