#include "prag/distractor.h"

#include "prag/error.h"

namespace prag {

ValueFrequencyTable::ValueFrequencyTable(const AttributeSchema& schema) {
  for (const auto& a : schema.attributes()) rows_[a.name];
}

void ValueFrequencyTable::add(const std::string& attribute,
                              const std::string& value) {
  ++rows_[attribute][value];
}

std::uint64_t ValueFrequencyTable::count(std::string_view attribute,
                                         std::string_view value) const {
  auto it = rows_.find(attribute);
  if (it == rows_.end()) return 0;
  auto jt = it->second.find(std::string(value));
  return jt == it->second.end() ? 0 : jt->second;
}

const std::map<std::string, std::uint64_t>& ValueFrequencyTable::row(
    std::string_view attribute) const {
  auto it = rows_.find(attribute);
  if (it == rows_.end()) {
    throw_invalid_argument("no frequency row for '" + std::string(attribute) +
                           "'");
  }
  return it->second;
}

std::string ValueFrequencyTable::most_frequent(
    const Attribute& attribute) const {
  std::string best = attribute.values.front();
  std::uint64_t best_count = 0;
  for (const auto& v : attribute.values) {
    const auto c = count(attribute.name, v);
    if (c > best_count) {
      best = v;
      best_count = c;
    }
  }
  return best;
}

ValueFrequencyTable value_frequencies(
    std::span<const MeaningRepresentation> corpus,
    const AttributeSchema& schema) {
  ValueFrequencyTable table(schema);
  for (const auto& mr : corpus) {
    for (const auto& [attr, value] : mr.assignments) {
      if (schema.find(attr) == nullptr) {
        throw_invalid_argument("unknown attribute '" + attr + "'");
      }
      table.add(attr, value);
    }
  }
  return table;
}

MeaningRepresentation mask_all_distractor(const MeaningRepresentation& mr,
                                          const AttributeSchema& schema,
                                          const ValueFrequencyTable& freqs) {
  validate_mr(mr, schema);
  MeaningRepresentation out;
  for (const auto& a : schema.attributes()) {
    if (!mr.has(a.name)) out.assignments[a.name] = freqs.most_frequent(a);
  }
  return out;
}

MeaningRepresentation mask_single_distractor(const MeaningRepresentation& mr,
                                             std::string_view attribute) {
  if (!mr.has(attribute)) {
    throw_invalid_argument("nothing to mask: '" + std::string(attribute) +
                           "' is not assigned");
  }
  MeaningRepresentation out = mr;
  out.assignments.erase(std::string(attribute));
  return out;
}

std::optional<InputUnit> previous_unit_distractor(const Document& doc,
                                                  std::size_t index) {
  if (index >= doc.size()) {
    throw_invalid_argument("unit index " + std::to_string(index) +
                           " out of range");
  }
  if (index == 0) return std::nullopt;
  return doc[index - 1];
}

DistractorPolicy parse_distractor_policy(std::string_view text,
                                         const AttributeSchema& schema) {
  if (text == "mask-all") return policy::MaskAll{};
  if (text == "previous-unit") return policy::PreviousUnit{};
  if (text == "none") return policy::None{};
  constexpr std::string_view kSingle = "mask-single:";
  if (text.substr(0, kSingle.size()) == kSingle) {
    std::string attr(text.substr(kSingle.size()));
    if (schema.find(attr) == nullptr) {
      throw_invalid_argument("mask-single names unknown attribute '" + attr +
                             "'");
    }
    return policy::MaskSingle{attr};
  }
  throw_invalid_argument("unknown distractor policy '" + std::string(text) +
                         "'");
}

std::string to_string(const DistractorPolicy& p) {
  struct Visitor {
    std::string operator()(const policy::MaskAll&) const { return "mask-all"; }
    std::string operator()(const policy::MaskSingle& s) const {
      return "mask-single:" + s.attribute;
    }
    std::string operator()(const policy::PreviousUnit&) const {
      return "previous-unit";
    }
    std::string operator()(const policy::None&) const { return "none"; }
  };
  return std::visit(Visitor{}, p);
}

std::vector<InputUnit> build_distractors(const DistractorPolicy& p,
                                         const Document& doc,
                                         std::size_t index,
                                         const AttributeSchema& schema,
                                         const ValueFrequencyTable* freqs) {
  if (index >= doc.size()) {
    throw_invalid_argument("unit index " + std::to_string(index) +
                           " out of range");
  }
  const InputUnit& unit = doc[index];
  std::vector<InputUnit> out;
  if (std::holds_alternative<policy::None>(p)) return out;
  if (std::holds_alternative<policy::PreviousUnit>(p)) {
    if (auto prev = previous_unit_distractor(doc, index)) {
      out.push_back(std::move(*prev));
    }
    return out;
  }
  const auto* mr = std::get_if<MeaningRepresentation>(&unit);
  if (mr == nullptr) {
    throw_invalid_argument(to_string(p) + " needs meaning-representation input");
  }
  if (std::holds_alternative<policy::MaskAll>(p)) {
    if (freqs == nullptr) {
      throw_invalid_argument("mask-all needs training value frequencies");
    }
    out.push_back(mask_all_distractor(*mr, schema, *freqs));
    return out;
  }
  const auto& single = std::get<policy::MaskSingle>(p);
  if (mr->has(single.attribute)) {
    out.push_back(mask_single_distractor(*mr, single.attribute));
  }
  return out;
}

}  // namespace prag
