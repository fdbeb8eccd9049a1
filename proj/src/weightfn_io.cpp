#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "transference/errors.hpp"
#include "transference/weightfn.hpp"

namespace transference {

using nlohmann::json;

FileFormat parse_file_format(std::string_view text) {
  if (text == "json") return FileFormat::json;
  if (text == "csv") return FileFormat::csv;
  throw PreconditionError("unknown format '" + std::string(text) + "'");
}

namespace {

std::string format_double(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

WeightFn parse_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line.rfind("N,k,tag", 0) != 0) {
    throw PreconditionError("CSV weight file must start with 'N,k,tag'");
  }
  if (!std::getline(in, line)) throw PreconditionError("CSV header truncated");
  std::uint64_t n = 0;
  int k = 0;
  std::string tag;
  {
    std::istringstream fields(line);
    std::string field;
    if (!std::getline(fields, field, ',')) throw PreconditionError("bad CSV header");
    n = std::stoull(field);
    if (!std::getline(fields, field, ',')) throw PreconditionError("bad CSV header");
    k = std::stoi(field);
    if (!std::getline(fields, tag)) throw PreconditionError("bad CSV header");
    while (!tag.empty() && (tag.back() == '\r' || tag.back() == ' ')) tag.pop_back();
  }
  std::vector<double> values;
  values.reserve(n);
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    values.push_back(std::stod(line));
  }
  return {Group::make(n, k), std::move(values), parse_weight_tag(tag)};
}

}  // namespace

std::string serialize(const WeightFn& w, FileFormat format) {
  if (format == FileFormat::csv) {
    std::string out = "N,k,tag\n";
    out += std::to_string(w.group().modulus()) + "," +
           std::to_string(w.group().ap_length()) + "," +
           std::string(to_string(w.tag())) + "\n";
    for (double v : w.values()) {
      out += format_double(v);
      out += '\n';
    }
    return out;
  }
  json doc;
  doc["N"] = w.group().modulus();
  doc["k"] = w.group().ap_length();
  doc["tag"] = std::string(to_string(w.tag()));
  doc["values"] = std::vector<double>(w.values().begin(), w.values().end());
  return doc.dump() + "\n";
}

WeightFn parse_weight_fn(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) throw PreconditionError("empty weight file");
  if (text[first] != '{') return parse_csv(text.substr(first));
  json doc;
  try {
    doc = json::parse(text);
    const auto n = doc.at("N").get<std::uint64_t>();
    const int k = doc.at("k").get<int>();
    const auto tag = parse_weight_tag(doc.at("tag").get<std::string>());
    auto values = doc.at("values").get<std::vector<double>>();
    return {Group::make(n, k), std::move(values), tag};
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("malformed weight JSON: ") + e.what());
  }
}

void write_weight_file(const std::filesystem::path& path, const WeightFn& w,
                       FileFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw StageError("cannot open " + path.string() + " for writing");
  out << serialize(w, format);
  if (!out) throw StageError("failed writing " + path.string());
}

WeightFn read_weight_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_weight_fn(buffer.str());
}

}  // namespace transference
