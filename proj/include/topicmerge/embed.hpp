#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "topicmerge/textfeat.hpp"
#include "topicmerge/util.hpp"

namespace topicmerge {

struct VectorTable {
  size_t dim = 0;
  std::unordered_map<std::string, std::vector<float>> vectors;

  const std::vector<float>* find(const std::string& word) const {
    auto it = vectors.find(word);
    return it == vectors.end() ? nullptr : &it->second;
  }
};

// Text format: one "word v1 v2 ... vd" line per word. An optional first line
// "count dim" (two integers) is skipped. Inconsistent dimensions raise an
// error with the line number; duplicate words keep the first occurrence.
VectorTable load_vectors(const std::string& path);

double cosine(const std::vector<double>& a, const std::vector<double>& b);

enum class DocVecWeighting { uniform, tfidf };

// Aggregates word vectors into a document vector. Words that are OOV or whose
// global corpus frequency (token occurrences across visible questions) is
// below min_count are skipped. uniform averages over token occurrences;
// tfidf weights distinct words by tf*idf (idx required). No usable words ->
// zero vector.
std::vector<double> doc_vector(const std::unordered_map<std::string, int64_t>& term_counts,
                               const VectorTable& table, DocVecWeighting mode,
                               int64_t min_count,
                               const std::unordered_map<std::string, int64_t>& global_freq,
                               const TfidfIndex* idx = nullptr);

}  // namespace topicmerge
