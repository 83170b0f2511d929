#include "prag/ablation.h"

#include <cstdio>

#include "prag/error.h"
#include "prag/parallel.h"

namespace prag {

std::string AblationMatrix::to_csv() const {
  std::string out = "masked";
  for (const auto& a : attributes) out += "," + a;
  out.push_back('\n');
  for (std::size_t r = 0; r < row_labels.size(); ++r) {
    out += row_labels[r];
    for (double v : cells[r]) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), ",%.6f", v);
      out += buf;
    }
    out.push_back('\n');
  }
  return out;
}

std::vector<std::string> default_ablation_attributes(
    const AttributeSchema& schema) {
  std::vector<std::string> out;
  for (const auto& a : schema.attributes()) {
    if (a.kind != AttributeKind::kDelexicalized) out.push_back(a.name);
  }
  return out;
}

AblationMatrix ablation_matrix(const DecodeJob& job,
                               std::span<const CorpusRecord> records,
                               const std::vector<std::string>& attributes,
                               const CoverageMatcher& matcher, int workers) {
  for (const auto& a : attributes) {
    if (job.schema->find(a) == nullptr) {
      throw_invalid_argument("unknown attribute '" + a + "'");
    }
  }
  DecodeJob base_job = job;
  base_job.config.mode = DecodeMode::kBase;
  base_job.policy = policy::None{};
  const auto base = decode_records(base_job, records, workers);
  std::vector<std::string> base_outputs;
  for (const auto& p : base) base_outputs.push_back(p.output);

  auto coverage_row = [&](const std::vector<std::string>& outputs) {
    std::vector<double> row;
    for (const auto& a : attributes) {
      row.push_back(coverage_ratio(records, outputs, a, matcher));
    }
    return row;
  };

  AblationMatrix m;
  m.attributes = attributes;
  m.row_labels.emplace_back(kBaseRowLabel);
  m.cells.push_back(coverage_row(base_outputs));

  DecodeJob masked_job = job;
  masked_job.config.mode = DecodeMode::kDistractor;
  for (const auto& a : attributes) {
    std::vector<std::size_t> targets;
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (records[i].mr.has(a)) targets.push_back(i);
    }
    auto decoded = parallel_map(targets.size(), workers, [&](std::size_t t) {
      const auto& rec = records[targets[t]];
      return decode_record(masked_job, rec, {mask_single_distractor(rec.mr, a)});
    });
    std::vector<std::string> outputs = base_outputs;
    for (std::size_t t = 0; t < targets.size(); ++t) {
      outputs[targets[t]] = decoded[t].output;
    }
    m.row_labels.push_back(a);
    m.cells.push_back(coverage_row(outputs));
  }
  return m;
}

}  // namespace prag
