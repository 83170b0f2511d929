#ifndef PRAG_CORPUS_H_
#define PRAG_CORPUS_H_

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "prag/schema.h"

namespace prag {

// One supervision pair. After delexicalization `mr` and `reference` carry
// placeholders and `delex` maps each placeholder back to its surface form.
struct CorpusRecord {
  std::string id;
  MeaningRepresentation mr;
  std::string reference;
  std::map<std::string, std::string> delex;

  bool operator==(const CorpusRecord&) const = default;
};

// Replaces the value of every delexicalized attribute in the MR and the
// reference by the attribute's placeholder. Already-delexicalized attributes
// are left alone.
CorpusRecord delexicalize(const CorpusRecord& record,
                          const AttributeSchema& schema);

// Replaces placeholder tokens by their mapped surface strings. Unmapped
// placeholders stay verbatim and trigger a warning.
std::string relexicalize(std::string_view text,
                         const std::map<std::string, std::string>& delex);

// Reference text with placeholders swapped back in.
inline std::string surface_reference(const CorpusRecord& r) {
  return relexicalize(r.reference, r.delex);
}

// JSONL, one record per line:
//   {"id": str, "mr": {attr: value}, "ref": str, "delex": {plh: str}}
// Blank lines are skipped. Malformed lines raise kDataLoss with the line
// number; a missing file raises kNotFound.
std::vector<CorpusRecord> read_jsonl(const std::filesystem::path& path);
std::vector<CorpusRecord> parse_jsonl(std::string_view text);
void write_jsonl(std::span<const CorpusRecord> records,
                 const std::filesystem::path& path);
std::string to_jsonl(std::span<const CorpusRecord> records);

// E2E CSV with a header row naming the "mr" and "ref" columns. MR clauses
// look like `attr[value]`; attribute names and categorical values match the
// schema case-insensitively. Records are returned lexicalized.
std::vector<CorpusRecord> parse_e2e_csv(const std::filesystem::path& path,
                                        const AttributeSchema& schema);
std::vector<CorpusRecord> parse_e2e_csv_text(std::string_view text,
                                             const AttributeSchema& schema);
MeaningRepresentation parse_mr_string(std::string_view text,
                                      const AttributeSchema& schema);

// Loads .csv (parsed and delexicalized) or JSONL datasets.
std::vector<CorpusRecord> load_dataset(const std::filesystem::path& path,
                                       const AttributeSchema& schema);

// Groups record indices into documents by the id prefix before the last
// '/'. Ids without '/' form single-unit documents. Order is preserved.
std::vector<std::vector<std::size_t>> group_documents(
    std::span<const CorpusRecord> records);

}  // namespace prag

#endif  // PRAG_CORPUS_H_
