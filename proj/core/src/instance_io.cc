#include "gscp/instance_io.h"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gscp/error.h"

namespace gscp {

namespace {

using nlohmann::json;

class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  std::string next(const char* what) {
    std::string token;
    if (!(in_ >> token)) {
      throw Error(ErrorCode::kTruncatedStream,
                  std::string("stream ended while reading ") + what);
    }
    return token;
  }

  long long next_int(const char* what) {
    const std::string token = next(what);
    std::size_t used = 0;
    long long value = 0;
    try {
      value = std::stoll(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || token.empty()) {
      throw Error(ErrorCode::kMalformedFile,
                  "expected integer for " + std::string(what) + ", got '" +
                      token + "'");
    }
    return value;
  }

 private:
  std::istream& in_;
};

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedFile, what);
}

}  // namespace

ScpInstance parse_orlib(std::istream& in, const std::string& name) {
  TokenReader reader(in);
  const long long m = reader.next_int("m");
  const long long n = reader.next_int("n");
  if (m <= 0 || n <= 0) {
    throw Error(ErrorCode::kNonPositiveCount, "m and n must be positive");
  }
  std::vector<Cost> costs;
  costs.reserve(n);
  for (long long j = 0; j < n; ++j) costs.push_back(Cost::parse(reader.next("cost")));
  std::vector<std::vector<int>> rows(m);
  for (long long i = 0; i < m; ++i) {
    const long long k = reader.next_int("row count");
    if (k <= 0) {
      throw Error(ErrorCode::kNonPositiveCount,
                  "row " + std::to_string(i + 1) + " has count " + std::to_string(k));
    }
    rows[i].reserve(k);
    for (long long t = 0; t < k; ++t) {
      const long long col = reader.next_int("column index");
      if (col < 1 || col > n) {
        throw Error(ErrorCode::kIndexOutOfRange,
                    "row " + std::to_string(i + 1) + " references column " +
                        std::to_string(col));
      }
      rows[i].push_back(static_cast<int>(col - 1));
    }
  }
  return build_instance(static_cast<int>(m), static_cast<int>(n), std::move(rows),
                        std::move(costs), name);
}

ScpInstance parse_orlib_string(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  return parse_orlib(in, name);
}

void write_orlib(const ScpInstance& inst, std::ostream& out) {
  out << inst.num_rows() << ' ' << inst.num_cols() << '\n';
  // Twelve tokens per line, like the Beasley files.
  for (int j = 0; j < inst.num_cols(); ++j) {
    out << inst.cost(j).to_string()
        << ((j + 1) % 12 == 0 || j + 1 == inst.num_cols() ? '\n' : ' ');
  }
  for (int i = 0; i < inst.num_rows(); ++i) {
    const auto row = inst.row(i);
    out << row.size() << '\n';
    for (std::size_t t = 0; t < row.size(); ++t) {
      out << row[t] + 1 << ((t + 1) % 12 == 0 || t + 1 == row.size() ? '\n' : ' ');
    }
  }
}

std::string write_orlib_string(const ScpInstance& inst) {
  std::ostringstream out;
  write_orlib(inst, out);
  return out.str();
}

std::string to_native_string(const ScpInstance& inst) {
  json costs = json::array();
  for (Cost c : inst.costs()) {
    if (c.is_whole()) {
      costs.push_back(c.units() / Cost::kScale);
    } else {
      costs.push_back(c.to_string());
    }
  }
  // Rows are emitted one per line so large files stay diffable.
  std::string out = "{\n";
  out += "  \"format_version\": " + json(kNativeFormatVersion).dump() + ",\n";
  out += "  \"name\": " + json(inst.name()).dump() + ",\n";
  out += "  \"m\": " + std::to_string(inst.num_rows()) + ",\n";
  out += "  \"n\": " + std::to_string(inst.num_cols()) + ",\n";
  out += "  \"costs\": " + costs.dump() + ",\n";
  out += "  \"rows\": [\n";
  for (int i = 0; i < inst.num_rows(); ++i) {
    out += "    " + json(inst.rows()[i]).dump();
    out += i + 1 == inst.num_rows() ? "\n" : ",\n";
  }
  out += "  ]\n}\n";
  return out;
}

ScpInstance from_native_string(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    malformed(std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) malformed("top level must be an object");
  if (!doc.contains("format_version") || !doc["format_version"].is_string()) {
    malformed("missing format_version");
  }
  const std::string version = doc["format_version"].get<std::string>();
  if (version != kNativeFormatVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "unsupported format_version '" + version + "'");
  }
  for (const char* key : {"name", "m", "n", "costs", "rows"}) {
    if (!doc.contains(key)) malformed(std::string("missing field '") + key + "'");
  }
  if (!doc["name"].is_string() || !doc["m"].is_number_integer() ||
      !doc["n"].is_number_integer() || !doc["costs"].is_array() ||
      !doc["rows"].is_array()) {
    malformed("field has the wrong type");
  }
  const long long m = doc["m"].get<long long>();
  const long long n = doc["n"].get<long long>();
  if (m <= 0 || n <= 0) malformed("m and n must be positive");
  if (static_cast<long long>(doc["costs"].size()) != n) {
    malformed("costs has " + std::to_string(doc["costs"].size()) +
              " entries but n = " + std::to_string(n));
  }
  if (static_cast<long long>(doc["rows"].size()) != m) {
    malformed("rows has " + std::to_string(doc["rows"].size()) +
              " entries but m = " + std::to_string(m));
  }
  std::vector<Cost> costs;
  costs.reserve(n);
  for (const auto& c : doc["costs"]) {
    if (c.is_number_integer()) {
      costs.push_back(Cost::whole(c.get<long long>()));
    } else if (c.is_string()) {
      costs.push_back(Cost::parse(c.get<std::string>()));
    } else if (c.is_number_float()) {
      costs.push_back(Cost::from_double(c.get<double>()));
    } else {
      malformed("cost entries must be numbers or decimal strings");
    }
  }
  std::vector<std::vector<int>> rows(m);
  for (long long i = 0; i < m; ++i) {
    const auto& r = doc["rows"][i];
    if (!r.is_array()) malformed("row " + std::to_string(i) + " is not a list");
    for (const auto& v : r) {
      if (!v.is_number_integer()) malformed("row entries must be integers");
      rows[i].push_back(v.get<int>());
    }
  }
  return build_instance(static_cast<int>(m), static_cast<int>(n), std::move(rows),
                        std::move(costs), doc["name"].get<std::string>());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed for " + path.string());
}

void write_native(const ScpInstance& inst, const std::filesystem::path& path) {
  write_text_file(path, to_native_string(inst));
}

ScpInstance read_native(const std::filesystem::path& path) {
  return from_native_string(read_text_file(path));
}

}  // namespace gscp
