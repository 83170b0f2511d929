#include "prag/corpus.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <sstream>

#include "json_util.h"
#include "prag/error.h"

namespace prag {

using detail::json;

namespace {

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  if (from.empty()) return;
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

CorpusRecord delexicalize(const CorpusRecord& record,
                          const AttributeSchema& schema) {
  CorpusRecord out = record;
  for (const auto& a : schema.attributes()) {
    if (a.kind != AttributeKind::kDelexicalized) continue;
    auto v = out.mr.get(a.name);
    if (!v || *v == a.placeholder() || v->empty()) continue;
    replace_all(out.reference, *v, a.placeholder());
    out.mr.assignments[a.name] = a.placeholder();
    out.delex[a.placeholder()] = *v;
  }
  return out;
}

std::string relexicalize(std::string_view text,
                         const std::map<std::string, std::string>& delex) {
  std::string out(text);
  for (auto plh : {kNamePlhToken, kNearPlhToken}) {
    if (out.find(plh) == std::string::npos) continue;
    auto it = delex.find(std::string(plh));
    if (it == delex.end()) {
      warn("no surface form for placeholder " + std::string(plh));
      continue;
    }
    replace_all(out, plh, it->second);
  }
  return out;
}

namespace {

json record_to_json(const CorpusRecord& r) {
  return json{{"id", r.id},
              {"mr", r.mr.assignments},
              {"ref", r.reference},
              {"delex", r.delex}};
}

CorpusRecord record_from_json(const json& j) {
  for (const auto& [key, _] : j.items()) {
    if (key != "id" && key != "mr" && key != "ref" && key != "delex") {
      throw_data_loss("unknown record key '" + key + "'");
    }
  }
  CorpusRecord r;
  r.id = j.at("id").get<std::string>();
  r.mr.assignments = j.at("mr").get<std::map<std::string, std::string>>();
  r.reference = j.at("ref").get<std::string>();
  if (j.contains("delex")) {
    r.delex = j.at("delex").get<std::map<std::string, std::string>>();
  }
  return r;
}

}  // namespace

std::vector<CorpusRecord> parse_jsonl(std::string_view text) {
  std::vector<CorpusRecord> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      out.push_back(record_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw_data_loss("malformed record on line " + std::to_string(lineno) +
                      ": " + e.what());
    } catch (const Error& e) {
      throw_data_loss("malformed record on line " + std::to_string(lineno) +
                      ": " + e.what());
    }
  }
  return out;
}

std::vector<CorpusRecord> read_jsonl(const std::filesystem::path& path) {
  return parse_jsonl(detail::read_file(path));
}

std::string to_jsonl(std::span<const CorpusRecord> records) {
  std::string out;
  for (const auto& r : records) {
    out += record_to_json(r).dump();
    out.push_back('\n');
  }
  return out;
}

void write_jsonl(std::span<const CorpusRecord> records,
                 const std::filesystem::path& path) {
  detail::write_file(path, to_jsonl(records));
}

namespace {

// RFC 4180 style rows: quoted fields may hold commas, quotes ("") and
// newlines.
std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool row_has_data = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      row_has_data = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      row_has_data = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (row_has_data || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      row_has_data = false;
    } else {
      field.push_back(c);
      row_has_data = true;
    }
  }
  if (quoted) throw_data_loss("unterminated quoted CSV field");
  if (row_has_data || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

MeaningRepresentation parse_mr_string(std::string_view text,
                                      const AttributeSchema& schema) {
  MeaningRepresentation mr;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t open = text.find('[', pos);
    const std::size_t comma = text.find(',', pos);
    // A clause ends at its closing bracket; anything else is malformed.
    if (open == std::string_view::npos ||
        (comma != std::string_view::npos && comma < open)) {
      const std::size_t end =
          comma == std::string_view::npos ? text.size() : comma;
      throw_data_loss("malformed MR clause '" +
                      trim(text.substr(pos, end - pos)) + "'");
    }
    const std::size_t close = text.find(']', open);
    const std::size_t next_open = text.find('[', open + 1);
    if (close == std::string_view::npos ||
        (next_open != std::string_view::npos && next_open < close)) {
      const std::size_t end =
          comma == std::string_view::npos ? text.size() : comma;
      throw_data_loss("malformed MR clause '" +
                      trim(text.substr(pos, std::max(end, open + 1) - pos)) +
                      "'");
    }
    const std::string name = trim(text.substr(pos, open - pos));
    const std::string value = trim(text.substr(open + 1, close - open - 1));
    const Attribute* a = schema.find_case_insensitive(name);
    if (a == nullptr) throw_data_loss("unknown attribute '" + name + "'");
    std::string canonical = value;
    if (a->kind != AttributeKind::kDelexicalized) {
      auto it = std::find_if(a->values.begin(), a->values.end(),
                             [&](const std::string& v) {
                               return lower(v) == lower(value);
                             });
      if (it == a->values.end()) {
        throw_data_loss("value '" + value + "' not allowed for '" + a->name +
                        "'");
      }
      canonical = *it;
    }
    if (!mr.assignments.emplace(a->name, canonical).second) {
      throw_data_loss("attribute '" + a->name + "' assigned twice");
    }
    pos = close + 1;
    while (pos < text.size() &&
           (text[pos] == ',' ||
            std::isspace(static_cast<unsigned char>(text[pos])))) {
      ++pos;
    }
  }
  return mr;
}

std::vector<CorpusRecord> parse_e2e_csv_text(std::string_view text,
                                             const AttributeSchema& schema) {
  const auto rows = parse_csv(text);
  if (rows.empty()) throw_data_loss("CSV has no header row");
  const auto& header = rows.front();
  std::size_t mr_col = header.size();
  std::size_t ref_col = header.size();
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto h = lower(trim(header[c]));
    if (h == "mr") mr_col = c;
    if (h == "ref") ref_col = c;
  }
  if (mr_col == header.size() || ref_col == header.size()) {
    throw_data_loss("CSV header must name 'mr' and 'ref' columns");
  }
  std::vector<CorpusRecord> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() <= std::max(mr_col, ref_col)) {
      throw_data_loss("row " + std::to_string(r) + ": missing columns");
    }
    CorpusRecord rec;
    char id[32];
    std::snprintf(id, sizeof(id), "e2e-%06zu", r - 1);
    rec.id = id;
    try {
      rec.mr = parse_mr_string(row[mr_col], schema);
    } catch (const Error& e) {
      throw_data_loss("row " + std::to_string(r) + ": " + e.what());
    }
    rec.reference = row[ref_col];
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<CorpusRecord> parse_e2e_csv(const std::filesystem::path& path,
                                        const AttributeSchema& schema) {
  return parse_e2e_csv_text(detail::read_file(path), schema);
}

std::vector<CorpusRecord> load_dataset(const std::filesystem::path& path,
                                       const AttributeSchema& schema) {
  if (lower(path.extension().string()) == ".csv") {
    auto records = parse_e2e_csv(path, schema);
    for (auto& r : records) r = delexicalize(r, schema);
    return records;
  }
  return read_jsonl(path);
}

std::vector<std::vector<std::size_t>> group_documents(
    std::span<const CorpusRecord> records) {
  std::vector<std::vector<std::size_t>> docs;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& id = records[i].id;
    const auto slash = id.rfind('/');
    if (slash == std::string::npos) {
      docs.push_back({i});
      continue;
    }
    const std::string doc = id.substr(0, slash);
    auto [it, inserted] = index.emplace(doc, docs.size());
    if (inserted) docs.emplace_back();
    docs[it->second].push_back(i);
  }
  return docs;
}

}  // namespace prag
