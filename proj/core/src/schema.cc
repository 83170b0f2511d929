#include "prag/schema.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "json_util.h"
#include "prag/error.h"

namespace prag {
namespace detail {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_not_found("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& data) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_not_found("cannot write " + path.string());
  out << data;
  if (!out) throw_data_loss("short write to " + path.string());
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw_data_loss("malformed JSON in " + what + ": " + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json schema_to_json_value(const AttributeSchema& schema) {
  json attrs = json::array();
  for (const auto& a : schema.attributes()) {
    json ja = {{"name", a.name},
               {"kind", std::string(to_string(a.kind))},
               {"values", a.values}};
    if (!a.lexicon.empty()) ja["lexicon"] = a.lexicon;
    attrs.push_back(std::move(ja));
  }
  return json{{"attributes", std::move(attrs)}};
}

AttributeSchema schema_from_json_value(const json& j) {
  try {
    if (!j.is_object()) throw_invalid_argument("schema must be a JSON object");
    for (const auto& [key, _] : j.items()) {
      if (key != "attributes") {
        throw_invalid_argument("unknown schema key '" + key + "'");
      }
    }
    std::vector<Attribute> attrs;
    for (const auto& ja : j.at("attributes")) {
      for (const auto& [key, _] : ja.items()) {
        if (key != "name" && key != "kind" && key != "values" &&
            key != "lexicon") {
          throw_invalid_argument("unknown schema key '" + key + "'");
        }
      }
      Attribute a;
      a.name = ja.at("name").get<std::string>();
      a.kind = parse_attribute_kind(ja.at("kind").get<std::string>());
      a.values = ja.at("values").get<std::vector<std::string>>();
      if (ja.contains("lexicon")) {
        a.lexicon = ja.at("lexicon").get<std::vector<std::string>>();
      }
      attrs.push_back(std::move(a));
    }
    return AttributeSchema(std::move(attrs));
  } catch (const json::exception& e) {
    throw_invalid_argument(std::string("invalid schema: ") + e.what());
  }
}

}  // namespace detail

std::string_view to_string(AttributeKind kind) {
  switch (kind) {
    case AttributeKind::kCategorical:
      return "categorical";
    case AttributeKind::kDelexicalized:
      return "delexicalized";
    case AttributeKind::kBoolean:
      return "boolean";
  }
  return "categorical";
}

AttributeKind parse_attribute_kind(std::string_view s) {
  if (s == "categorical") return AttributeKind::kCategorical;
  if (s == "delexicalized") return AttributeKind::kDelexicalized;
  if (s == "boolean") return AttributeKind::kBoolean;
  throw_invalid_argument("unknown attribute kind '" + std::string(s) + "'");
}

bool Attribute::has_value(std::string_view v) const {
  return std::find(values.begin(), values.end(), v) != values.end();
}

AttributeSchema::AttributeSchema(std::vector<Attribute> attributes)
    : attributes_(std::move(attributes)) {
  std::set<std::string> seen;
  for (const auto& a : attributes_) {
    if (a.name.empty()) throw_invalid_argument("attribute name is empty");
    if (!seen.insert(a.name).second) {
      throw_invalid_argument("duplicate attribute '" + a.name + "'");
    }
    if (a.values.empty()) {
      throw_invalid_argument("attribute '" + a.name + "' has no values");
    }
    if (a.kind == AttributeKind::kDelexicalized &&
        (a.values.size() != 1 || !is_placeholder(a.values[0]))) {
      throw_invalid_argument("delexicalized attribute '" + a.name +
                             "' must carry exactly one placeholder value");
    }
    std::set<std::string> vals(a.values.begin(), a.values.end());
    if (vals.size() != a.values.size()) {
      throw_invalid_argument("attribute '" + a.name + "' repeats a value");
    }
  }
}

const Attribute* AttributeSchema::find(std::string_view name) const {
  for (const auto& a : attributes_) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

const Attribute* AttributeSchema::find_case_insensitive(
    std::string_view name) const {
  auto eq = [](std::string_view x, std::string_view y) {
    return x.size() == y.size() &&
           std::equal(x.begin(), x.end(), y.begin(), [](char a, char b) {
             return std::tolower(static_cast<unsigned char>(a)) ==
                    std::tolower(static_cast<unsigned char>(b));
           });
  };
  for (const auto& a : attributes_) {
    if (eq(a.name, name)) return &a;
  }
  return nullptr;
}

std::size_t AttributeSchema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].name == name) return i;
  }
  throw_invalid_argument("unknown attribute '" + std::string(name) + "'");
}

AttributeSchema default_e2e_schema() {
  using K = AttributeKind;
  return AttributeSchema({
      {"name", K::kDelexicalized, {std::string(kNamePlhToken)}, {}},
      {"eatType", K::kCategorical, {"coffee shop", "pub", "restaurant"}, {}},
      {"food",
       K::kCategorical,
       {"Chinese", "English", "Fast food", "French", "Indian", "Italian",
        "Japanese"},
       {}},
      {"priceRange",
       K::kCategorical,
       {"cheap", "moderate", "high", "less than £20", "£20-25",
        "more than £30"},
       {}},
      {"customerRating",
       K::kCategorical,
       {"1 out of 5", "3 out of 5", "5 out of 5", "low", "average", "high"},
       {}},
      {"area", K::kCategorical, {"city centre", "riverside"}, {}},
      {"familyFriendly",
       K::kBoolean,
       {"yes", "no"},
       {"family friendly", "family-friendly", "child friendly",
        "kid friendly"}},
      {"near", K::kDelexicalized, {std::string(kNearPlhToken)}, {}},
  });
}

AttributeSchema load_schema(const std::filesystem::path& path) {
  return parse_schema_json(detail::read_file(path));
}

AttributeSchema parse_schema_json(std::string_view text) {
  return detail::schema_from_json_value(
      detail::parse_json(std::string(text), "schema"));
}

std::string schema_to_json(const AttributeSchema& schema) {
  return detail::dump(detail::schema_to_json_value(schema));
}

std::optional<std::string> MeaningRepresentation::get(
    std::string_view attr) const {
  auto it = assignments.find(std::string(attr));
  if (it == assignments.end()) return std::nullopt;
  return it->second;
}

void validate_mr(const MeaningRepresentation& mr,
                 const AttributeSchema& schema) {
  for (const auto& [attr, value] : mr.assignments) {
    const Attribute* a = schema.find(attr);
    if (a == nullptr) {
      throw_invalid_argument("unknown attribute '" + attr + "'");
    }
    if (!a->has_value(value)) {
      throw_invalid_argument("value '" + value + "' not allowed for '" +
                             attr + "'");
    }
  }
}

std::string format_mr(const MeaningRepresentation& mr,
                      const AttributeSchema& schema) {
  std::string out;
  for (const auto& a : schema.attributes()) {
    auto v = mr.get(a.name);
    if (!v) continue;
    if (!out.empty()) out += ", ";
    out += a.name + "[" + *v + "]";
  }
  return out;
}

Document::Document(std::vector<InputUnit> units) : units_(std::move(units)) {
  if (units_.empty()) throw_invalid_argument("document has no units");
  for (const auto& u : units_) {
    if (u.index() != units_.front().index()) {
      throw_invalid_argument("document units must share one kind");
    }
  }
}

}  // namespace prag
