#ifndef PRAG_SPEAKER_IO_H_
#define PRAG_SPEAKER_IO_H_

#include <filesystem>
#include <string>
#include <vector>

#include "prag/ngram_speaker.h"
#include "prag/speaker.h"

namespace prag {

// Deterministic JSON (sorted keys):
//   {"type":"ngram","order":n,"k":k,"vocab":[...],
//    "counts":{"<history ids>":{"<id>":count}},
//    "feature_counts":{"<feature id>":{"<history ids>":{"<id>":count}}}}
// History keys are space-separated ids; the empty history is "".
std::string ngram_to_json(const NGramSpeaker& speaker);
NGramSpeaker ngram_from_json(std::string_view text);

void save_ngram_speaker(const NGramSpeaker& speaker,
                        const std::filesystem::path& path);

// {"type":"ensemble","w":w,"members":[path,path]}; member paths are stored
// as given and resolved against the ensemble file's directory on load.
void save_ensemble(const std::filesystem::path& path, double w,
                   const std::vector<std::string>& member_paths);

struct LoadedSpeaker {
  SpeakerPtr model;
  Vocabulary vocab;
};

// Loads either model type. Ensemble members must share one vocabulary.
LoadedSpeaker load_speaker(const std::filesystem::path& path);

}  // namespace prag

#endif  // PRAG_SPEAKER_IO_H_
