#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "topicmerge/corpus.hpp"
#include "topicmerge/features.hpp"
#include "topicmerge/models.hpp"

namespace topicmerge {

struct TwoStepConfig {
  IsolationForestConfig iforest;
  LinearFitConfig linear;
};

struct TwoStepModel {
  std::vector<std::string> feature_names;
  IsolationForestModel iforest;
  LinearModel classifier;
};

// Variant over prebuilt feature matrices (column-restricted runs reuse it).
TwoStepModel train_two_step_features(const Matrix& pos, const Matrix& neg,
                                     const Matrix& anomaly, const TwoStepConfig& cfg,
                                     uint64_t seed);

// Featurizes through ctx (prepare() is called internally). anomaly_train and
// train_neg must be disjoint pair sets; overlaps raise an error naming the
// offending pairs.
TwoStepModel train_two_step(FeatureContext& ctx, const std::vector<CandidatePair>& train_pos,
                            const std::vector<CandidatePair>& train_neg,
                            const std::vector<CandidatePair>& anomaly_train,
                            const TwoStepConfig& cfg, uint64_t seed);

enum class PredictionStage { filtered, classified };

struct PairPrediction {
  CandidatePair pair;
  PredictionStage stage = PredictionStage::classified;
  double score = 0.0;  // anomaly score when filtered, classifier score otherwise
  int label = 0;
};

// Pairs whose anomaly score is not above the filter threshold are labeled 0
// at stage "filtered" without invoking the classifier. skip_filter runs the
// classifier on everything (the single-step baseline).
std::vector<PairPrediction> predict_two_step(const TwoStepModel& m,
                                             const std::vector<CandidatePair>& pairs,
                                             const Matrix& features,
                                             bool skip_filter = false);

// model.json round trip (byte-identical save -> load -> save).
void save_two_step(const TwoStepModel& m, const std::string& path);
TwoStepModel load_two_step(const std::string& path);

// ---------------------------------------------------------------------------
// Merge direction.
// ---------------------------------------------------------------------------

struct DirectionModel {
  std::vector<std::string> feature_names;
  LinearModel model;  // hinge; label 1 = canonical first side wins
};

DirectionModel train_direction(const Corpus& corpus, const std::vector<Event>& events,
                               const LinearFitConfig& cfg, uint64_t seed);

struct DirectionPrediction {
  int label = 0;
  double margin = 0.0;
};
DirectionPrediction predict_direction(const DirectionModel& m,
                                      const DirectionExample& ex);

void save_direction(const DirectionModel& m, const std::string& path);
DirectionModel load_direction(const std::string& path);

struct DirectionCvResult {
  double accuracy = 0.0;  // mean over folds
  Prf mean_prf;           // per-fold PRF averaged
  std::vector<double> fold_accuracy;
};

// Stratified k-fold cross validation over merge events.
DirectionCvResult direction_cv(const Corpus& corpus, const std::vector<Event>& events,
                               int folds, const LinearFitConfig& cfg, uint64_t seed);

// ---------------------------------------------------------------------------
// Early prediction.
// ---------------------------------------------------------------------------

constexpr int64_t kMonthSeconds = 30LL * 86400;

struct EarlyPoint {
  int month = 0;
  int64_t detected = 0;
  int64_t total = 0;
  double recall = 0.0;
};

struct EarlyEvalInputs {
  const VectorTable* vectors = nullptr;
  const Ontology* taxonomy = nullptr;
  FeatureConfig feature_cfg;
  const TokenCache* tokens = nullptr;
};

// Replays each merge pair on a monthly grid from the later topic's creation
// to the merge. Every cutoff gets a fresh snapshot: the ontology is rebuilt
// from visible parent_add events and information content is recomputed. A
// pair detected in month m stays detected for all later months.
std::vector<EarlyPoint> early_eval(const TwoStepModel& m, const Corpus& corpus,
                                   const std::vector<Event>& merge_events,
                                   const EarlyEvalInputs& inputs);

// ---------------------------------------------------------------------------
// Dataset assembly and ablation.
// ---------------------------------------------------------------------------

struct GroundTruthPair {
  std::string t1, t2;
  std::string cls;  // merge | unmerge | neighbor | generated
  std::string winner;  // destination topic id; empty for non-merges
};

std::vector<GroundTruthPair> load_ground_truth(const std::string& path);
void save_ground_truth(const std::vector<GroundTruthPair>& pairs, const std::string& path);

struct AssembleConfig {
  double train_fraction = 0.7;
  size_t anomaly_train_size = 200000;
  size_t max_neighbor_pairs = 5000;  // cap when deriving neighbors from the ontology
  uint64_t seed = 0;
};

struct PairDataset {
  std::vector<CandidatePair> train_pos, train_neg, anomaly, test_pos, test_neg;
  std::vector<Event> train_events, test_events;
};

// Builds the supervised split: positives from unreverted merges (chronological
// train/test), hard negatives from unmerge + neighbor pairs, and an anomaly
// pool plus test negatives from generated pairs. Uses ground truth pair labels
// when given, otherwise derives neighbors and generated pairs from the corpus.
PairDataset assemble_dataset(const Corpus& corpus,
                             const std::vector<GroundTruthPair>* ground_truth,
                             const FilterConfig& filters, const AssembleConfig& cfg);

struct AblationRow {
  std::string label;
  std::vector<FeatureGroup> groups;
  Prf prf;
};

// Trains and evaluates on every non-empty feature-group combination.
std::vector<AblationRow> run_ablation(const Matrix& pos, const Matrix& neg,
                                      const Matrix& anomaly, const Matrix& test,
                                      const std::vector<int>& test_labels,
                                      const TwoStepConfig& cfg, uint64_t seed);

}  // namespace topicmerge
