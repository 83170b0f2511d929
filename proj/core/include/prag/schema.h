#ifndef PRAG_SCHEMA_H_
#define PRAG_SCHEMA_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "prag/vocabulary.h"

namespace prag {

enum class AttributeKind { kCategorical, kDelexicalized, kBoolean };

std::string_view to_string(AttributeKind kind);
AttributeKind parse_attribute_kind(std::string_view s);

struct Attribute {
  std::string name;
  AttributeKind kind = AttributeKind::kCategorical;
  // For delexicalized attributes this is exactly {placeholder}.
  std::vector<std::string> values;
  // Surface phrases that count as a mention of a boolean attribute.
  std::vector<std::string> lexicon;

  bool has_value(std::string_view v) const;
  // The placeholder token of a delexicalized attribute.
  const std::string& placeholder() const { return values.front(); }

  bool operator==(const Attribute&) const = default;
};

class AttributeSchema {
 public:
  AttributeSchema() = default;
  // Validates: unique names, non-empty value sets, and a single placeholder
  // value for delexicalized attributes.
  explicit AttributeSchema(std::vector<Attribute> attributes);

  const std::vector<Attribute>& attributes() const { return attributes_; }
  std::size_t size() const { return attributes_.size(); }

  // nullptr when absent. Lookup is exact; see find_case_insensitive.
  const Attribute* find(std::string_view name) const;
  const Attribute* find_case_insensitive(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;

  bool operator==(const AttributeSchema&) const = default;

 private:
  std::vector<Attribute> attributes_;
};

// The eight-attribute restaurant schema used by the E2E dataset.
AttributeSchema default_e2e_schema();

AttributeSchema load_schema(const std::filesystem::path& path);
AttributeSchema parse_schema_json(std::string_view text);
std::string schema_to_json(const AttributeSchema& schema);

// Partial attribute -> value assignment.
struct MeaningRepresentation {
  std::map<std::string, std::string> assignments;

  bool has(std::string_view attr) const {
    return assignments.find(std::string(attr)) != assignments.end();
  }
  std::optional<std::string> get(std::string_view attr) const;
  std::size_t size() const { return assignments.size(); }
  bool empty() const { return assignments.empty(); }

  bool operator==(const MeaningRepresentation&) const = default;
  auto operator<=>(const MeaningRepresentation&) const = default;
};

// Throws kInvalidArgument for unknown attributes or out-of-set values.
void validate_mr(const MeaningRepresentation& mr,
                 const AttributeSchema& schema);

// "name[value], attr[value]" rendering in schema order.
std::string format_mr(const MeaningRepresentation& mr,
                      const AttributeSchema& schema);

// One conditioning input: either a structured MR or a token sequence such as
// an extracted document sentence.
using InputUnit = std::variant<MeaningRepresentation, TokenSequence>;

// An ordered, homogeneous, non-empty list of input units.
class Document {
 public:
  explicit Document(std::vector<InputUnit> units);

  const std::vector<InputUnit>& units() const { return units_; }
  std::size_t size() const { return units_.size(); }
  const InputUnit& operator[](std::size_t i) const { return units_[i]; }

 private:
  std::vector<InputUnit> units_;
};

}  // namespace prag

#endif  // PRAG_SCHEMA_H_
