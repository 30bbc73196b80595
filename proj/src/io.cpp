#include "kiteflow/io.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

#include "kiteflow/error.hpp"

namespace kiteflow
{

json read_json_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::IOError, "cannot open " + path);
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + upto, '\n');
        throw Error(ErrorKind::ParseError, path + ":" + std::to_string(line) + ": " + e.what());
    }
}

std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorKind::IOError, "cannot write " + path);
    out << text;
    if (!out)
        throw Error(ErrorKind::IOError, "write failed: " + path);
}

void write_json_file(const std::string& path, const json& doc) { write_text_file(path, dump_json(doc)); }

const json& require_field(const json& doc, const char* field)
{
    if (!doc.is_object() || !doc.contains(field))
        throw Error(ErrorKind::ParseError, std::string("missing field '") + field + "'");
    return doc.at(field);
}

std::vector<std::optional<double>> read_number_array(const json& doc, const char* field,
                                                     const std::string& where)
{
    const json& a = require_field(doc, field);
    if (!a.is_array())
        throw Error(ErrorKind::ParseError, where + ": field '" + field + "' must be an array");
    std::vector<std::optional<double>> out;
    out.reserve(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k].is_null())
            out.emplace_back();
        else if (a[k].is_number())
            out.emplace_back(a[k].get<double>());
        else
            throw Error(ErrorKind::ParseError,
                        where + ": " + field + "[" + std::to_string(k) + "] is not a number");
    }
    return out;
}

std::vector<double> read_dense_array(const json& doc, const char* field, const std::string& where)
{
    std::vector<double> out;
    const auto values = read_number_array(doc, field, where);
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!values[k])
            throw Error(ErrorKind::ParseError,
                        where + ": " + field + "[" + std::to_string(k) + "] is null");
        out.push_back(*values[k]);
    }
    return out;
}

std::vector<std::optional<double>> load_radii(const std::string& path)
{
    return read_number_array(read_json_file(path), "r", path);
}

void save_radii(const std::string& path, const std::vector<double>& r)
{
    json doc;
    doc["r"] = r;
    write_json_file(path, doc);
}

std::vector<int> load_vertex_set(const std::string& path)
{
    const json doc = read_json_file(path);
    const json& a = require_field(doc, "vertices");
    if (!a.is_array())
        throw Error(ErrorKind::ParseError, path + ": field 'vertices' must be an array");
    std::vector<int> out;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (!a[k].is_number_integer())
            throw Error(ErrorKind::ParseError,
                        path + ": vertices[" + std::to_string(k) + "] is not an integer");
        out.push_back(a[k].get<int>());
    }
    return out;
}

void save_vertex_set(const std::string& path, const std::vector<int>& vertices)
{
    json doc;
    doc["vertices"] = vertices;
    write_json_file(path, doc);
}

}  // namespace kiteflow
