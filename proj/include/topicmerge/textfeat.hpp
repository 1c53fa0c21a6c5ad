#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "topicmerge/util.hpp"

namespace topicmerge {

// Lowercases ASCII, splits on any byte that is not an ASCII letter or digit.
// Bytes >= 0x80 are treated as word characters so UTF-8 sequences survive.
// Digits are kept: "3D-printing 101" -> ["3d", "printing", "101"].
std::vector<std::string> tokenize(const std::string& text);
std::vector<std::string> tokenize(const std::string& text,
                                  const std::unordered_set<std::string>* stopwords);

// One stopword per line, lowercased on load. Empty lines ignored.
std::unordered_set<std::string> load_stopwords(const std::string& path);

struct NGramMultiset {
  int n = 1;
  std::unordered_map<std::string, int64_t> counts;
  int64_t total = 0;  // token-occurrence count (sum of counts)

  size_t support() const { return counts.size(); }
  void add(const std::string& gram, int64_t c = 1) {
    counts[gram] += c;
    total += c;
  }
};

// Grams are tokens joined by a single space. Fewer than n tokens -> empty.
NGramMultiset ngrams(const std::vector<std::string>& tokens, int n);

enum class OverlapMode {
  unweighted,             // |support(A) cap support(B)| / min(|support|)
  weighted,               // sum of min frequencies / min total multiset size
  weighted_support_denom  // alternative denominator reading; NOT bounded by 1
};

// Overlap coefficient between multisets of equal arity. Either side empty -> 0.
double overlap(const NGramMultiset& a, const NGramMultiset& b,
               OverlapMode mode = OverlapMode::unweighted);

// Generic map-based variant shared with topic-id multisets.
double overlap_maps(const std::unordered_map<std::string, int64_t>& a,
                    const std::unordered_map<std::string, int64_t>& b,
                    OverlapMode mode);

// Jaro-Winkler similarity with scaling 0.1 and prefix cap 4. Two empty
// strings -> 1.0, one empty -> 0.0. Case-sensitive.
double jaro_winkler(const std::string& a, const std::string& b);

// True when one name reads as an initialism of the other: either its letters
// equal the concatenated word initials of the other (case-insensitive), or it
// is an all-caps token of >= 2 letters each of which is the initial of some
// word of the other. The expanded side must have at least two words.
bool abbreviation_pair(const std::string& a, const std::string& b);

// Document-frequency index over a set of term-count documents.
// idf(w) = ln(n_docs / df(w)) + 1, with unseen words treated as df = 1.
struct TfidfIndex {
  int64_t n_docs = 0;
  std::unordered_map<std::string, int64_t> df;

  double idf(const std::string& word) const {
    int64_t d = 1;
    auto it = df.find(word);
    if (it != df.end() && it->second > 0) d = it->second;
    if (n_docs <= 0) return 0.0;
    return std::log(static_cast<double>(n_docs) / static_cast<double>(d)) + 1.0;
  }
};

TfidfIndex build_tfidf(
    const std::vector<const std::unordered_map<std::string, int64_t>*>& docs);

// Cosine between tf-idf vectors (tf = raw count). Either doc empty -> 0.
double tfidf_cosine(const TfidfIndex& index,
                    const std::unordered_map<std::string, int64_t>& a,
                    const std::unordered_map<std::string, int64_t>& b);

// Highest-tfidf distinct terms of a document, ties broken lexicographically.
std::vector<std::string> top_tfidf_terms(
    const TfidfIndex& index, const std::unordered_map<std::string, int64_t>& doc,
    size_t k);

// Coarse part-of-speech tags.
enum class PosTag {
  noun, verb, adj, adv, pron, det, adp, num, conj, part, intj, other
};
constexpr size_t kNumPosTags = 12;

class PosTagger {
 public:
  virtual ~PosTagger() = default;
  virtual PosTag tag(const std::string& token) const = 0;
};

// Deterministic rule tagger: closed-class lexicon first, then suffix
// heuristics, defaulting to noun. Expects lowercased tokens.
class RulePosTagger : public PosTagger {
 public:
  RulePosTagger();
  PosTag tag(const std::string& token) const override;

 private:
  std::unordered_map<std::string, PosTag> lexicon_;
};

std::array<int64_t, kNumPosTags> pos_histogram(const std::vector<std::string>& tokens,
                                               const PosTagger& tagger);

// Cosine between tag histograms; either all-zero -> 0.
double pos_cosine(const std::array<int64_t, kNumPosTags>& a,
                  const std::array<int64_t, kNumPosTags>& b);

enum class FreqBand { top, bottom };

// The ceil-free 20% band: k = max(1, floor(D * fraction)) distinct words.
// top: by (count desc, word asc); bottom: by (count asc, word asc).
std::vector<std::string> freq_band(const std::unordered_map<std::string, int64_t>& counts,
                                   FreqBand band, double fraction = 0.2);

// Unweighted overlap of the two selected bands.
double freq_stratified_overlap(const std::unordered_map<std::string, int64_t>& a,
                               const std::unordered_map<std::string, int64_t>& b,
                               FreqBand band, double fraction = 0.2);

}  // namespace topicmerge
