#ifndef PRAG_DISTRACTOR_H_
#define PRAG_DISTRACTOR_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "prag/schema.h"

namespace prag {

// Per attribute: value -> occurrence count in the training corpus. Every
// schema attribute has a row, possibly empty.
class ValueFrequencyTable {
 public:
  ValueFrequencyTable() = default;
  explicit ValueFrequencyTable(const AttributeSchema& schema);

  void add(const std::string& attribute, const std::string& value);
  std::uint64_t count(std::string_view attribute,
                      std::string_view value) const;
  const std::map<std::string, std::uint64_t>& row(
      std::string_view attribute) const;

  // Highest count; ties and never-seen attributes resolve to the value that
  // comes first in schema order.
  std::string most_frequent(const Attribute& attribute) const;

 private:
  std::map<std::string, std::map<std::string, std::uint64_t>, std::less<>>
      rows_;
};

ValueFrequencyTable value_frequencies(
    std::span<const MeaningRepresentation> corpus,
    const AttributeSchema& schema);

// Distractor assigning the most frequent value to every attribute absent
// from `mr` and nothing else. A fully specified `mr` yields an empty MR.
MeaningRepresentation mask_all_distractor(const MeaningRepresentation& mr,
                                          const AttributeSchema& schema,
                                          const ValueFrequencyTable& freqs);

// Copy of `mr` without `attribute`. Throws kInvalidArgument("nothing to
// mask") when the attribute is not assigned.
MeaningRepresentation mask_single_distractor(const MeaningRepresentation& mr,
                                             std::string_view attribute);

// Unit index-1 of `doc`, or nothing for the first unit.
std::optional<InputUnit> previous_unit_distractor(const Document& doc,
                                                  std::size_t index);

namespace policy {
struct MaskAll {
  bool operator==(const MaskAll&) const = default;
};
struct MaskSingle {
  std::string attribute;
  bool operator==(const MaskSingle&) const = default;
};
struct PreviousUnit {
  bool operator==(const PreviousUnit&) const = default;
};
struct None {
  bool operator==(const None&) const = default;
};
}  // namespace policy

using DistractorPolicy = std::variant<policy::MaskAll, policy::MaskSingle,
                                      policy::PreviousUnit, policy::None>;

// Parses "mask-all", "mask-single:<attr>", "previous-unit" or "none".
// MaskSingle attributes are checked against `schema`.
DistractorPolicy parse_distractor_policy(std::string_view text,
                                         const AttributeSchema& schema);
std::string to_string(const DistractorPolicy& policy);

// Applies `policy` to unit `index` of `doc`. MaskAll needs `freqs`. Returns
// an empty list when the policy yields no distractor (None, the first unit
// under PreviousUnit, or MaskSingle on an input lacking the attribute).
std::vector<InputUnit> build_distractors(const DistractorPolicy& policy,
                                         const Document& doc,
                                         std::size_t index,
                                         const AttributeSchema& schema,
                                         const ValueFrequencyTable* freqs);

}  // namespace prag

#endif  // PRAG_DISTRACTOR_H_
