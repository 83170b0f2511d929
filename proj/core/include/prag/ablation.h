#ifndef PRAG_ABLATION_H_
#define PRAG_ABLATION_H_

#include <span>
#include <string>
#include <vector>

#include "prag/corpus.h"
#include "prag/decode.h"
#include "prag/metrics.h"

namespace prag {

// Coverage ratios under single-attribute masking. Row 0 ("BASE") is plain
// beam search; row r > 0 masks attributes[r-1] in the distractor for every
// record assigning it (other records keep their base output). Columns are
// the measured attributes.
struct AblationMatrix {
  std::vector<std::string> attributes;
  std::vector<std::string> row_labels;
  std::vector<std::vector<double>> cells;

  // Header "masked,<attr>,...", then one line per row. Values use %.6f.
  std::string to_csv() const;
};

inline constexpr std::string_view kBaseRowLabel = "BASE";

// Non-delexicalized schema attributes, in schema order.
std::vector<std::string> default_ablation_attributes(
    const AttributeSchema& schema);

// `job.config` supplies beam size, max length and alpha; its mode and the
// job's policy are overridden per row.
AblationMatrix ablation_matrix(const DecodeJob& job,
                               std::span<const CorpusRecord> records,
                               const std::vector<std::string>& attributes,
                               const CoverageMatcher& matcher, int workers);

}  // namespace prag

#endif  // PRAG_ABLATION_H_
