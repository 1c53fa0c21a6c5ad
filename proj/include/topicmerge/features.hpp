#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "topicmerge/corpus.hpp"
#include "topicmerge/embed.hpp"
#include "topicmerge/ontology.hpp"
#include "topicmerge/textfeat.hpp"

namespace topicmerge {

// A topic pair in canonical order: lexicographic by name, ties by id.
struct CandidatePair {
  std::string t1, t2;
  std::string provenance;  // merge | unmerge | neighbor | generated

  std::string key() const { return t1 + "\x1f" + t2; }
};

CandidatePair make_candidate_pair(const Corpus& corpus, const std::string& a,
                                  const std::string& b, const std::string& provenance);

struct FilterConfig {
  int64_t min_questions = 20;
  double jw_threshold = 0.8;       // pairs with JW >= threshold are dropped
  double cooccur_threshold = 0.25;  // minimum co-occurrence overlap to keep
};

// All unordered pairs of visible topics that pass the four filters:
// enough questions on both sides, names not near-duplicates (Jaro-Winkler),
// not an abbreviation pair, and co-occurring-topic overlap above threshold.
// Output is sorted by (name1, name2); provenance is "generated".
std::vector<CandidatePair> generate_candidates(const SnapshotView& v,
                                               const FilterConfig& cfg);

enum class FeatureGroup { question_content, ontology, external };

struct FeatureDef {
  std::string name;
  FeatureGroup group;
};

const std::vector<FeatureDef>& feature_catalog();
std::vector<std::string> feature_names();
std::vector<size_t> feature_indices(const std::vector<FeatureGroup>& groups);

// Tokenization is cutoff-independent, so it can be shared across snapshots.
struct TokenCache {
  std::vector<std::vector<std::string>> question_tokens;  // by question index

  static TokenCache build(const Corpus& corpus,
                          const std::unordered_set<std::string>* stopwords);
};

struct FeatureConfig {
  int topk = 5;               // co-occurring topics per band
  double max_path = 20.0;     // sentinel for unreachable ontology paths
  int64_t min_word_count = 5;  // embedding frequency floor
  int wup_terms = 10;         // tf-idf terms for the word-taxonomy feature
  double band_fraction = 0.2;
  const std::unordered_set<std::string>* stopwords = nullptr;
};

// Holds everything featurize needs for one corpus view. Optional inputs may
// be null: without an ontology the ontology features fall back to sentinels,
// without vectors the embedding cosines are 0, without a word taxonomy the
// external feature is 0. prepare() must cover every pair passed to
// featurize(); featurize is const and thread-safe afterwards.
class FeatureContext {
 public:
  FeatureContext(SnapshotView v, const Ontology* onto, const InformationContent* ic,
                 const VectorTable* vectors, const Ontology* taxonomy,
                 FeatureConfig cfg, const TokenCache* tokens = nullptr);
  ~FeatureContext();
  FeatureContext(FeatureContext&&) noexcept;

  void prepare(const std::vector<CandidatePair>& pairs);
  std::vector<double> featurize(const CandidatePair& pair) const;

  const SnapshotView& view() const { return view_; }
  const FeatureConfig& config() const { return cfg_; }

 private:
  struct Impl;
  SnapshotView view_;
  FeatureConfig cfg_;
  std::unique_ptr<Impl> impl_;
};

// ---------------------------------------------------------------------------
// Merge-direction features. All are exactly antisymmetric under side swap.
// ---------------------------------------------------------------------------

const std::vector<std::string>& direction_feature_names();  // 7 entries

struct DirectionExample {
  CandidatePair pair;  // canonical order; side 1 = pair.t1
  std::vector<double> features;
  int label = 0;  // 1 when the canonical first side is the merge destination
};

// Counts are taken from a snapshot one second before the event, so the merge
// itself never leaks into its own features.
DirectionExample direction_featurize(const Corpus& corpus, const Event& event);

}  // namespace topicmerge
