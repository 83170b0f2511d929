#include "prag/metrics.h"

#include <algorithm>
#include <array>
#include <cmath>

#include "json_util.h"
#include "prag/error.h"

namespace prag {

namespace {

using Ngram = std::vector<std::string>;

std::map<Ngram, int> ngram_counts(const std::vector<std::string>& words,
                                  std::size_t n) {
  std::map<Ngram, int> counts;
  for (std::size_t i = 0; i + n <= words.size(); ++i) {
    ++counts[Ngram(words.begin() + i, words.begin() + i + n)];
  }
  return counts;
}

void check_aligned(std::size_t a, std::size_t b) {
  if (a != b) throw_invalid_argument("hypothesis/reference count mismatch");
  if (a == 0) throw_invalid_argument("no hypothesis/reference pairs");
}

}  // namespace

double bleu(std::span<const std::string> hypotheses,
            std::span<const std::string> references) {
  check_aligned(hypotheses.size(), references.size());
  constexpr std::size_t kOrder = 4;
  std::array<long long, kOrder> matches{};
  std::array<long long, kOrder> totals{};
  long long hyp_len = 0;
  long long ref_len = 0;
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    const auto h = normalize_words(hypotheses[i]);
    const auto r = normalize_words(references[i]);
    hyp_len += static_cast<long long>(h.size());
    ref_len += static_cast<long long>(r.size());
    for (std::size_t n = 1; n <= kOrder; ++n) {
      const auto hc = ngram_counts(h, n);
      const auto rc = ngram_counts(r, n);
      for (const auto& [g, c] : hc) {
        auto it = rc.find(g);
        if (it != rc.end()) matches[n - 1] += std::min(c, it->second);
        totals[n - 1] += c;
      }
    }
  }
  double log_precision = 0.0;
  for (std::size_t n = 0; n < kOrder; ++n) {
    if (matches[n] == 0) return 0.0;
    log_precision += std::log(static_cast<double>(matches[n]) /
                              static_cast<double>(totals[n]));
  }
  log_precision /= static_cast<double>(kOrder);
  const double bp =
      hyp_len >= ref_len
          ? 1.0
          : std::exp(1.0 - static_cast<double>(ref_len) /
                               static_cast<double>(hyp_len));
  return 100.0 * bp * std::exp(log_precision);
}

double rouge_l(const std::string& hypothesis, const std::string& reference) {
  const auto h = normalize_words(hypothesis);
  const auto r = normalize_words(reference);
  if (h.empty() || r.empty()) return 0.0;
  std::vector<std::size_t> prev(r.size() + 1, 0);
  std::vector<std::size_t> cur(r.size() + 1, 0);
  for (std::size_t i = 1; i <= h.size(); ++i) {
    for (std::size_t j = 1; j <= r.size(); ++j) {
      cur[j] = h[i - 1] == r[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  const double lcs = static_cast<double>(prev[r.size()]);
  if (lcs == 0.0) return 0.0;
  const double p = lcs / static_cast<double>(h.size());
  const double rc = lcs / static_cast<double>(r.size());
  return 2.0 * p * rc / (p + rc);
}

double corpus_rouge_l(std::span<const std::string> hypotheses,
                      std::span<const std::string> references) {
  check_aligned(hypotheses.size(), references.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    sum += rouge_l(hypotheses[i], references[i]);
  }
  return sum / static_cast<double>(hypotheses.size());
}

CoverageMatcher::CoverageMatcher(const AttributeSchema& schema)
    : schema_(&schema) {
  for (const auto& a : schema.attributes()) {
    if (a.kind == AttributeKind::kBoolean) lexicons_[a.name] = a.lexicon;
  }
}

void CoverageMatcher::set_lexicon(const std::string& attribute,
                                  std::vector<std::string> phrases) {
  lexicons_[attribute] = std::move(phrases);
}

namespace {

bool contains_phrase(const std::string& padded_text, const std::string& phrase) {
  const std::string p = canonicalize(phrase);
  if (p.empty()) return false;
  return padded_text.find(" " + p + " ") != std::string::npos;
}

}  // namespace

bool CoverageMatcher::matches(const CorpusRecord& record,
                              const std::string& attribute,
                              const std::string& text) const {
  const Attribute* a = schema_->find(attribute);
  if (a == nullptr) {
    throw_invalid_argument("unknown attribute '" + attribute + "'");
  }
  auto value = record.mr.get(attribute);
  if (!value) return false;
  const std::string padded = " " + canonicalize(text) + " ";
  if (a->kind == AttributeKind::kBoolean) {
    auto it = lexicons_.find(attribute);
    if (it == lexicons_.end()) return false;
    return std::any_of(it->second.begin(), it->second.end(),
                       [&](const std::string& phrase) {
                         return contains_phrase(padded, phrase);
                       });
  }
  std::string surface = *value;
  if (auto it = record.delex.find(surface); it != record.delex.end()) {
    surface = it->second;
  }
  return contains_phrase(padded, surface);
}

double coverage_ratio(std::span<const CorpusRecord> records,
                      std::span<const std::string> outputs,
                      const std::string& attribute,
                      const CoverageMatcher& matcher) {
  if (records.size() != outputs.size()) {
    throw_invalid_argument("records and outputs are misaligned");
  }
  std::size_t assigned = 0;
  std::size_t covered = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!records[i].mr.has(attribute)) continue;
    ++assigned;
    const std::string text = relexicalize(outputs[i], records[i].delex);
    if (matcher.matches(records[i], attribute, text)) ++covered;
  }
  if (assigned == 0) {
    warn("no record assigns '" + attribute + "'; coverage defined as 1.0");
    return 1.0;
  }
  return static_cast<double>(covered) / static_cast<double>(assigned);
}

std::string metrics_to_json(const MetricsReport& report) {
  detail::json j = detail::json::object();
  if (report.bleu) j["bleu"] = *report.bleu;
  if (report.rouge_l) j["rouge_l"] = *report.rouge_l;
  if (!report.coverage.empty()) j["coverage"] = report.coverage;
  return detail::dump(j);
}

}  // namespace prag
