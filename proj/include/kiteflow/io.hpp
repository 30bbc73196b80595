#pragma once

// JSON file helpers shared by all modules.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace kiteflow
{

using json = nlohmann::json;

/// Throws IOError if the file cannot be read, ParseError with the line on bad JSON.
json read_json_file(const std::string& path);
/// Pretty-printed with a trailing newline; numbers use shortest round-trip form.
void write_json_file(const std::string& path, const json& doc);
std::string dump_json(const json& doc);

const json& require_field(const json& doc, const char* field);

/// Array of numbers; null entries are returned as empty optionals.
std::vector<std::optional<double>> read_number_array(const json& doc, const char* field,
                                                     const std::string& where);
std::vector<double> read_dense_array(const json& doc, const char* field, const std::string& where);

/// {"r": [...]} with one entry per white vertex (null for unknown).
std::vector<std::optional<double>> load_radii(const std::string& path);
void save_radii(const std::string& path, const std::vector<double>& r);

/// {"vertices": [...]}
std::vector<int> load_vertex_set(const std::string& path);
void save_vertex_set(const std::string& path, const std::vector<int>& vertices);

/// Writes text to a file, throwing IOError on failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace kiteflow
