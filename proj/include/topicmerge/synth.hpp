#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "topicmerge/corpus.hpp"
#include "topicmerge/pipeline.hpp"

namespace topicmerge {

// Synthetic Q&A corpus with planted merge pairs, reverted merges, taxonomy
// structure and word embeddings. Output is byte-identical for a given config.
struct SynthConfig {
  uint64_t seed = 7;

  // Content topic budget. Structural topics (root, categories, tags) come on
  // top. topics = 2*merge_pairs + unmerge_pairs + fillers.
  int topics = 500;
  int merge_pairs = 150;
  int unmerge_pairs = 150;
  int neighbor_pairs = 600;
  int generated_pairs = 20000;

  int families = 50;
  int tags_per_family = 6;
  int global_tags = 12;            // cross-cutting tags attached under the root
  int dim = 48;

  // Vocabulary sizes.
  int background_words = 800;
  int family_words = 30;
  int concept_words = 25;
  int private_words = 8;

  // Text composition.
  double concept_word_rate = 0.35;
  double family_word_rate = 0.40;
  double name_mixin_rate = 0.10;     // name words drawn from the background pool
  double merge_vocab_share = 0.85;   // concept draws from shared pool vs private
  double twin_vocab_share = 0.3;     // fraction of partner vocab copied to twin
  int crosslink_pairs = 60;          // cross-family topic pairs sharing rare jargon
  int crosslink_words = 3;
  double crosslink_rate = 0.25;      // upper bound on jargon density in text
  double impostor_vocab_share = 0.9; // upper bound on vocab borrowed by lookalike fillers

  // Volume and behaviour.
  double questions_mean_winner = 82.0;
  double questions_mean_loser = 22.0;
  double questions_mean_other = 32.0;
  double question_sigma = 0.5;
  double answer_rate_winner = 1.8;
  double answer_rate_loser = 1.2;
  double answer_rate_other = 1.5;
  double answer_missing_rate = 0.05;

  double older_wins_rate = 0.67;
  double merge_lag_mean_days = 936.0;
  double merge_lag_sigma = 0.6;
  double loser_burst = 0.35;       // share of loser questions in the first weeks
  double loser_burst_days = 60.0;

  double category_tag_rate = 0.8;
  double cross_tag_rate = 0.12;
  double global_tag_rate = 0.35;
  double second_category_rate = 0.25;  // topics filed under a second family
  double cousin_fraction = 0.45;   // same-family share of generated pairs

  double noise_scale = 0.3;        // word vector spread around pool centroid
};

struct SynthData {
  std::vector<Topic> topics;
  std::vector<Question> questions;
  std::vector<Event> events;
  std::vector<GroundTruthPair> ground_truth;
  std::vector<std::pair<std::string, std::vector<double>>> embeddings;
  std::vector<std::pair<std::string, std::string>> taxonomy;  // child -> parent
};

SynthData generate_synth(const SynthConfig& cfg);

// Writes topics.jsonl, questions.jsonl, events.jsonl, ground_truth.jsonl,
// embeddings.vec and taxonomy.tsv into dir (created if needed).
void write_synth(const SynthData& data, const std::string& dir);

}  // namespace topicmerge
