#include "topicmerge/textfeat.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace topicmerge {

namespace {

inline bool word_char(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c >= 0x80;
}

}  // namespace

std::vector<std::string> tokenize(const std::string& text) {
  return tokenize(text, nullptr);
}

std::vector<std::string> tokenize(const std::string& text,
                                  const std::unordered_set<std::string>* stopwords) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    if (word_char(c)) {
      if (c >= 'A' && c <= 'Z') c = static_cast<unsigned char>(c - 'A' + 'a');
      cur.push_back(static_cast<char>(c));
    } else if (!cur.empty()) {
      if (!stopwords || !stopwords->count(cur)) out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty() && (!stopwords || !stopwords->count(cur))) out.push_back(cur);
  return out;
}

std::unordered_set<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open stopword file: " + path);
  std::unordered_set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) out.insert(lower_ascii(line));
  }
  return out;
}

NGramMultiset ngrams(const std::vector<std::string>& tokens, int n) {
  if (n < 1) throw Error("ngrams: n must be >= 1");
  NGramMultiset ms;
  ms.n = n;
  if (tokens.size() < static_cast<size_t>(n)) return ms;
  for (size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string g = tokens[i];
    for (int j = 1; j < n; ++j) {
      g += ' ';
      g += tokens[i + j];
    }
    ms.add(g);
  }
  return ms;
}

double overlap_maps(const std::unordered_map<std::string, int64_t>& a,
                    const std::unordered_map<std::string, int64_t>& b,
                    OverlapMode mode) {
  if (a.empty() || b.empty()) return 0.0;
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  if (mode == OverlapMode::unweighted) {
    int64_t inter = 0;
    for (const auto& [k, v] : small) {
      (void)v;
      if (large.count(k)) ++inter;
    }
    return static_cast<double>(inter) /
           static_cast<double>(std::min(a.size(), b.size()));
  }
  int64_t num = 0;
  for (const auto& [k, v] : small) {
    auto it = large.find(k);
    if (it != large.end()) num += std::min(v, it->second);
  }
  if (mode == OverlapMode::weighted_support_denom)
    return static_cast<double>(num) /
           static_cast<double>(std::min(a.size(), b.size()));
  int64_t ta = 0, tb = 0;
  for (const auto& [k, v] : a) {
    (void)k;
    ta += v;
  }
  for (const auto& [k, v] : b) {
    (void)k;
    tb += v;
  }
  if (ta == 0 || tb == 0) return 0.0;
  return static_cast<double>(num) / static_cast<double>(std::min(ta, tb));
}

double overlap(const NGramMultiset& a, const NGramMultiset& b, OverlapMode mode) {
  if (a.n != b.n) throw Error("overlap: mismatched n-gram arity");
  if (a.counts.empty() || b.counts.empty()) return 0.0;
  if (mode == OverlapMode::weighted) {
    if (a.total == 0 || b.total == 0) return 0.0;
    const auto& small = a.counts.size() <= b.counts.size() ? a.counts : b.counts;
    const auto& large = a.counts.size() <= b.counts.size() ? b.counts : a.counts;
    int64_t num = 0;
    for (const auto& [k, v] : small) {
      auto it = large.find(k);
      if (it != large.end()) num += std::min(v, it->second);
    }
    return static_cast<double>(num) / static_cast<double>(std::min(a.total, b.total));
  }
  return overlap_maps(a.counts, b.counts, mode);
}

double jaro_winkler(const std::string& a, const std::string& b) {
  const size_t la = a.size(), lb = b.size();
  if (la == 0 && lb == 0) return 1.0;
  if (la == 0 || lb == 0) return 0.0;
  const size_t window = std::max(la, lb) / 2 == 0 ? 0 : std::max(la, lb) / 2 - 1;
  std::vector<bool> ma(la, false), mb(lb, false);
  size_t m = 0;
  for (size_t i = 0; i < la; ++i) {
    size_t lo = i > window ? i - window : 0;
    size_t hi = std::min(lb, i + window + 1);
    for (size_t j = lo; j < hi; ++j) {
      if (!mb[j] && a[i] == b[j]) {
        ma[i] = mb[j] = true;
        ++m;
        break;
      }
    }
  }
  if (m == 0) return 0.0;
  size_t mismatched = 0, j = 0;
  for (size_t i = 0; i < la; ++i) {
    if (!ma[i]) continue;
    while (!mb[j]) ++j;
    if (a[i] != b[j]) ++mismatched;
    ++j;
  }
  double t = static_cast<double>(mismatched) / 2.0;
  double dm = static_cast<double>(m);
  double jaro = (dm / la + dm / lb + (dm - t) / dm) / 3.0;
  size_t prefix = 0;
  while (prefix < std::min({la, lb, static_cast<size_t>(4)}) && a[prefix] == b[prefix])
    ++prefix;
  return jaro + static_cast<double>(prefix) * 0.1 * (1.0 - jaro);
}

namespace {

std::string alpha_letters(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c >= 'a' && c <= 'z') out.push_back(c);
    else if (c >= 'A' && c <= 'Z') out.push_back(static_cast<char>(c - 'A' + 'a'));
  }
  return out;
}

bool all_alpha_upper(const std::string& s, size_t& n_alpha) {
  n_alpha = 0;
  for (char c : s) {
    if (c >= 'a' && c <= 'z') return false;
    if (c >= 'A' && c <= 'Z') ++n_alpha;
  }
  return n_alpha >= 2;
}

bool initialism_of(const std::string& abbr, const std::string& full) {
  auto words = tokenize(full);
  if (words.size() < 2) return false;
  std::string letters = alpha_letters(abbr);
  if (letters.size() < 2) return false;
  std::string initials;
  for (const auto& w : words)
    if (w[0] >= 'a' && w[0] <= 'z') initials.push_back(w[0]);
  if (letters == initials) return true;

  size_t n_alpha = 0;
  auto abbr_tokens = tokenize(abbr);
  bool abbr_shaped = all_alpha_upper(abbr, n_alpha);
  if (abbr_shaped && abbr_tokens.size() > 1)
    for (const auto& t : abbr_tokens)
      if (t.size() != 1) abbr_shaped = false;
  if (!abbr_shaped) return false;
  std::unordered_set<char> initial_set(initials.begin(), initials.end());
  for (char c : letters)
    if (!initial_set.count(c)) return false;
  return true;
}

}  // namespace

bool abbreviation_pair(const std::string& a, const std::string& b) {
  return initialism_of(a, b) || initialism_of(b, a);
}

TfidfIndex build_tfidf(
    const std::vector<const std::unordered_map<std::string, int64_t>*>& docs) {
  TfidfIndex idx;
  idx.n_docs = static_cast<int64_t>(docs.size());
  for (const auto* d : docs)
    for (const auto& [w, c] : *d) {
      (void)c;
      ++idx.df[w];
    }
  return idx;
}

double tfidf_cosine(const TfidfIndex& index,
                    const std::unordered_map<std::string, int64_t>& a,
                    const std::unordered_map<std::string, int64_t>& b) {
  if (a.empty() || b.empty()) return 0.0;
  double na = 0.0, nb = 0.0, dot = 0.0;
  for (const auto& [w, c] : a) {
    double v = static_cast<double>(c) * index.idf(w);
    na += v * v;
  }
  for (const auto& [w, c] : b) {
    double v = static_cast<double>(c) * index.idf(w);
    nb += v * v;
  }
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  for (const auto& [w, c] : small) {
    auto it = large.find(w);
    if (it == large.end()) continue;
    double idf = index.idf(w);
    dot += static_cast<double>(c) * idf * static_cast<double>(it->second) * idf;
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<std::string> top_tfidf_terms(
    const TfidfIndex& index, const std::unordered_map<std::string, int64_t>& doc,
    size_t k) {
  std::vector<std::pair<double, std::string>> scored;
  scored.reserve(doc.size());
  for (const auto& [w, c] : doc)
    scored.emplace_back(static_cast<double>(c) * index.idf(w), w);
  std::sort(scored.begin(), scored.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return x.second < y.second;
  });
  std::vector<std::string> out;
  for (size_t i = 0; i < scored.size() && i < k; ++i) out.push_back(scored[i].second);
  return out;
}

RulePosTagger::RulePosTagger() {
  auto add = [&](PosTag t, std::initializer_list<const char*> words) {
    for (const char* w : words) lexicon_[w] = t;
  };
  add(PosTag::pron, {"i", "you", "he", "she", "it", "we", "they", "me", "him", "her",
                     "us", "them", "my", "your", "his", "its", "our", "their", "mine",
                     "yours", "hers", "ours", "theirs", "this", "that", "these", "those",
                     "who", "whom", "whose", "which", "what", "someone", "something",
                     "anyone", "anything", "everyone", "everything", "nobody", "nothing"});
  add(PosTag::det, {"a", "an", "the", "some", "any", "no", "every", "each", "either",
                    "neither", "another", "such"});
  add(PosTag::adp, {"in", "on", "at", "by", "for", "with", "about", "against", "between",
                    "into", "through", "during", "before", "after", "above", "below",
                    "to", "from", "up", "down", "of", "off", "over", "under", "near",
                    "without", "within", "across", "behind", "beyond", "around", "among"});
  add(PosTag::conj, {"and", "or", "but", "nor", "so", "yet", "because", "although",
                     "while", "if", "unless", "since", "whereas", "whether"});
  add(PosTag::part, {"not"});
  add(PosTag::intj, {"oh", "wow", "hey", "hi", "hello", "yes", "yeah", "ok", "okay",
                     "hmm", "ouch", "alas"});
  add(PosTag::verb, {"is", "am", "are", "was", "were", "be", "been", "being", "do",
                     "does", "did", "done", "have", "has", "had", "having", "can",
                     "could", "will", "would", "shall", "should", "may", "might", "must",
                     "get", "got", "make", "made", "go", "goes", "went", "gone", "take",
                     "took", "know", "knew", "think", "thought", "want", "need", "use",
                     "used", "say", "said", "see", "saw", "come", "came"});
  add(PosTag::adv, {"very", "too", "also", "just", "now", "then", "here", "there",
                    "when", "where", "why", "how", "always", "often", "never",
                    "sometimes", "soon", "already", "still", "again", "quite", "rather",
                    "really", "almost"});
}

PosTag RulePosTagger::tag(const std::string& token) const {
  if (token.empty()) return PosTag::other;
  auto it = lexicon_.find(token);
  if (it != lexicon_.end()) return it->second;
  if (token[0] >= '0' && token[0] <= '9') return PosTag::num;

  auto ends = [&](const char* suf) {
    size_t n = std::char_traits<char>::length(suf);
    return token.size() > n + 1 &&
           token.compare(token.size() - n, n, suf) == 0;
  };
  if (token.size() > 3 && ends("ly")) return PosTag::adv;
  if (token.size() > 4 && (ends("ing") || ends("ed"))) return PosTag::verb;
  if (token.size() > 4 && (ends("ize") || ends("ise") || ends("ify"))) return PosTag::verb;
  if (ends("tion") || ends("sion") || ends("ment") || ends("ness") || ends("ship") ||
      ends("ity") || ends("ism") || ends("ist") || ends("ance") || ends("ence"))
    return PosTag::noun;
  if (ends("ous") || ends("ful") || ends("ive") || ends("able") || ends("ible") ||
      ends("ish") || ends("less") || ends("ical") || ends("est"))
    return PosTag::adj;
  return PosTag::noun;
}

std::array<int64_t, kNumPosTags> pos_histogram(const std::vector<std::string>& tokens,
                                               const PosTagger& tagger) {
  std::array<int64_t, kNumPosTags> h{};
  for (const auto& t : tokens) ++h[static_cast<size_t>(tagger.tag(t))];
  return h;
}

double pos_cosine(const std::array<int64_t, kNumPosTags>& a,
                  const std::array<int64_t, kNumPosTags>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < kNumPosTags; ++i) {
    dot += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    na += static_cast<double>(a[i]) * static_cast<double>(a[i]);
    nb += static_cast<double>(b[i]) * static_cast<double>(b[i]);
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<std::string> freq_band(const std::unordered_map<std::string, int64_t>& counts,
                                   FreqBand band, double fraction) {
  if (counts.empty()) return {};
  std::vector<std::pair<std::string, int64_t>> items(counts.begin(), counts.end());
  if (band == FreqBand::top) {
    std::sort(items.begin(), items.end(), [](const auto& x, const auto& y) {
      if (x.second != y.second) return x.second > y.second;
      return x.first < y.first;
    });
  } else {
    std::sort(items.begin(), items.end(), [](const auto& x, const auto& y) {
      if (x.second != y.second) return x.second < y.second;
      return x.first < y.first;
    });
  }
  size_t k = std::max<size_t>(
      1, static_cast<size_t>(static_cast<double>(items.size()) * fraction));
  std::vector<std::string> out;
  out.reserve(k);
  for (size_t i = 0; i < k; ++i) out.push_back(items[i].first);
  return out;
}

double freq_stratified_overlap(const std::unordered_map<std::string, int64_t>& a,
                               const std::unordered_map<std::string, int64_t>& b,
                               FreqBand band, double fraction) {
  auto ba = freq_band(a, band, fraction);
  auto bb = freq_band(b, band, fraction);
  if (ba.empty() || bb.empty()) return 0.0;
  std::unordered_set<std::string> sa(ba.begin(), ba.end());
  int64_t inter = 0;
  for (const auto& w : bb)
    if (sa.count(w)) ++inter;
  return static_cast<double>(inter) / static_cast<double>(std::min(ba.size(), bb.size()));
}

}  // namespace topicmerge
