#include "topicmerge/features.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace topicmerge {

CandidatePair make_candidate_pair(const Corpus& corpus, const std::string& a,
                                  const std::string& b, const std::string& provenance) {
  if (a == b) throw Error("candidate pair of a topic with itself: " + a);
  const Topic& ta = corpus.topic(a);
  const Topic& tb = corpus.topic(b);
  bool a_first = ta.name != tb.name ? ta.name < tb.name : ta.id < tb.id;
  CandidatePair p;
  p.t1 = a_first ? a : b;
  p.t2 = a_first ? b : a;
  p.provenance = provenance;
  return p;
}

std::vector<CandidatePair> generate_candidates(const SnapshotView& v,
                                               const FilterConfig& cfg) {
  const Corpus& corpus = v.corpus();
  std::vector<size_t> eligible;
  for (size_t i = 0; i < corpus.topics().size(); ++i) {
    const Topic& t = corpus.topics()[i];
    if (t.created_at > v.cutoff()) continue;
    if (v.question_count(t.id) < cfg.min_questions) continue;
    eligible.push_back(i);
  }
  std::sort(eligible.begin(), eligible.end(), [&](size_t a, size_t b) {
    const Topic& ta = corpus.topics()[a];
    const Topic& tb = corpus.topics()[b];
    return ta.name != tb.name ? ta.name < tb.name : ta.id < tb.id;
  });

  std::vector<std::unordered_map<std::string, int64_t>> cooc(eligible.size());
  for (size_t i = 0; i < eligible.size(); ++i)
    cooc[i] = v.cooccurrence(corpus.topics()[eligible[i]].id);

  std::vector<CandidatePair> out;
  for (size_t i = 0; i < eligible.size(); ++i) {
    const Topic& ti = corpus.topics()[eligible[i]];
    for (size_t j = i + 1; j < eligible.size(); ++j) {
      const Topic& tj = corpus.topics()[eligible[j]];
      if (jaro_winkler(ti.name, tj.name) >= cfg.jw_threshold) continue;
      if (abbreviation_pair(ti.name, tj.name)) continue;
      if (overlap_maps(cooc[i], cooc[j], OverlapMode::unweighted) < cfg.cooccur_threshold)
        continue;
      out.push_back({ti.id, tj.id, "generated"});
    }
  }
  return out;
}

const std::vector<FeatureDef>& feature_catalog() {
  static const std::vector<FeatureDef> defs = [] {
    std::vector<FeatureDef> d;
    auto qc = [&](const std::string& n) { d.push_back({n, FeatureGroup::question_content}); };
    auto on = [&](const std::string& n) { d.push_back({n, FeatureGroup::ontology}); };
    for (int n = 1; n <= 4; ++n) qc("q" + std::to_string(n) + "_overlap");
    for (int n = 1; n <= 4; ++n) qc("q" + std::to_string(n) + "_overlap_weighted");
    for (int n = 1; n <= 4; ++n) qc("name_text" + std::to_string(n) + "_overlap");
    for (int n = 1; n <= 4; ++n) qc("name_text" + std::to_string(n) + "_overlap_weighted");
    qc("tfidf_cosine");
    qc("cooccur_overlap");
    qc("cooccur_overlap_weighted");
    qc("word_vec_cosine");
    qc("doc_vec_cosine");
    qc("pos_cosine");
    qc("top_words_overlap");
    qc("bottom_words_overlap");
    on("cooccur_parents_children_overlap");
    on("cooccur_parents_children_overlap_weighted");
    on("top_cooccur_path");
    on("bottom_cooccur_path");
    on("top_cooccur_adamic_adar");
    on("bottom_cooccur_adamic_adar");
    on("top_cooccur_lin");
    on("top_cooccur_resnik");
    on("top_cooccur_jcn");
    on("top_cooccur_wup");
    on("bottom_cooccur_lin");
    d.push_back({"taxo_word_wup", FeatureGroup::external});
    return d;
  }();
  return defs;
}

std::vector<std::string> feature_names() {
  std::vector<std::string> out;
  for (const auto& d : feature_catalog()) out.push_back(d.name);
  return out;
}

std::vector<size_t> feature_indices(const std::vector<FeatureGroup>& groups) {
  std::vector<size_t> out;
  const auto& defs = feature_catalog();
  for (size_t i = 0; i < defs.size(); ++i)
    for (FeatureGroup g : groups)
      if (defs[i].group == g) {
        out.push_back(i);
        break;
      }
  return out;
}

TokenCache TokenCache::build(const Corpus& corpus,
                             const std::unordered_set<std::string>* stopwords) {
  TokenCache c;
  c.question_tokens.reserve(corpus.questions().size());
  for (const auto& q : corpus.questions())
    c.question_tokens.push_back(tokenize(q.text, stopwords));
  return c;
}

namespace {

struct TopicCache {
  std::vector<std::string> name_tokens;
  std::array<NGramMultiset, 4> name_grams;
  std::array<NGramMultiset, 4> text_grams;
  std::array<int64_t, kNumPosTags> pos{};
  std::vector<double> dv_uniform, dv_tfidf;
  std::unordered_map<std::string, int64_t> cooccur;
  std::vector<std::string> top_co, bottom_co;
  std::unordered_map<std::string, int64_t> expanded_pc;
  std::unordered_set<std::string> band_top, band_bottom;
  std::vector<std::string> top_terms;
};

std::vector<std::string> select_cooccur(
    const std::unordered_map<std::string, int64_t>& cooc, int k, bool top) {
  std::vector<std::pair<std::string, int64_t>> items(cooc.begin(), cooc.end());
  if (top) {
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
  } else {
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second < b.second;
      return a.first < b.first;
    });
  }
  std::vector<std::string> out;
  for (size_t i = 0; i < items.size() && i < static_cast<size_t>(k); ++i)
    out.push_back(items[i].first);
  return out;
}

}  // namespace

struct FeatureContext::Impl {
  const Ontology* onto = nullptr;
  const InformationContent* ic = nullptr;
  const VectorTable* vectors = nullptr;
  const Ontology* taxo = nullptr;
  InformationContent empty_ic;
  TokenCache own_tokens;
  const TokenCache* tokens = nullptr;
  RulePosTagger tagger;

  bool view_ready = false;
  TfidfIndex tfidf;
  std::unordered_map<std::string, int64_t> global_freq;
  std::unordered_map<std::string, TopicCache> topic_cache;
  std::unordered_map<std::string, std::vector<int>> dist_from;
};

FeatureContext::FeatureContext(SnapshotView v, const Ontology* onto,
                               const InformationContent* ic, const VectorTable* vectors,
                               const Ontology* taxonomy, FeatureConfig cfg,
                               const TokenCache* tokens)
    : view_(v), cfg_(cfg), impl_(std::make_unique<Impl>()) {
  impl_->onto = onto;
  impl_->ic = ic;
  impl_->vectors = vectors;
  impl_->taxo = taxonomy;
  if (tokens) {
    impl_->tokens = tokens;
  } else {
    impl_->own_tokens = TokenCache::build(v.corpus(), cfg.stopwords);
    impl_->tokens = &impl_->own_tokens;
  }
}

FeatureContext::~FeatureContext() = default;
FeatureContext::FeatureContext(FeatureContext&&) noexcept = default;

void FeatureContext::prepare(const std::vector<CandidatePair>& pairs) {
  Impl& im = *impl_;
  const Corpus& corpus = view_.corpus();
  const auto& qtok = im.tokens->question_tokens;

  if (!im.view_ready) {
    // Word frequencies over visible questions (each question counted once).
    for (size_t qi = 0; qi < corpus.questions().size(); ++qi) {
      if (corpus.questions()[qi].created_at > view_.cutoff()) continue;
      for (const auto& w : qtok[qi]) ++im.global_freq[w];
    }
    // Document frequencies over per-topic documents with >= 1 visible question.
    im.tfidf.n_docs = 0;
    for (const auto& t : corpus.topics()) {
      auto vis = view_.visible_questions(t.id);
      if (vis.empty()) continue;
      ++im.tfidf.n_docs;
      std::unordered_set<std::string> distinct;
      for (size_t qi : vis)
        for (const auto& w : qtok[qi]) distinct.insert(w);
      for (const auto& w : distinct) ++im.tfidf.df[w];
    }
    im.view_ready = true;
  }

  std::vector<std::string> todo;
  for (const auto& p : pairs) {
    if (!im.topic_cache.count(p.t1)) todo.push_back(p.t1);
    if (!im.topic_cache.count(p.t2)) todo.push_back(p.t2);
  }
  std::sort(todo.begin(), todo.end());
  todo.erase(std::unique(todo.begin(), todo.end()), todo.end());

  for (const auto& id : todo) {
    if (im.topic_cache.count(id)) continue;
    const Topic& topic = corpus.topic(id);
    TopicCache tc;
    tc.name_tokens = tokenize(topic.name, cfg_.stopwords);
    for (int n = 1; n <= 4; ++n)
      tc.name_grams[static_cast<size_t>(n - 1)] = ngrams(tc.name_tokens, n);

    for (int n = 1; n <= 4; ++n) tc.text_grams[static_cast<size_t>(n - 1)].n = n;
    for (size_t qi : view_.visible_questions(id)) {
      const auto& toks = qtok[qi];
      for (int n = 1; n <= 4; ++n) {
        NGramMultiset g = ngrams(toks, n);
        auto& acc = tc.text_grams[static_cast<size_t>(n - 1)];
        for (const auto& [k, v] : g.counts) acc.add(k, v);
      }
      auto h = pos_histogram(toks, im.tagger);
      for (size_t i = 0; i < kNumPosTags; ++i) tc.pos[i] += h[i];
    }

    const auto& terms = tc.text_grams[0].counts;
    tc.cooccur = view_.cooccurrence(id);
    tc.top_co = select_cooccur(tc.cooccur, cfg_.topk, true);
    tc.bottom_co = select_cooccur(tc.cooccur, cfg_.topk, false);

    tc.expanded_pc = tc.cooccur;
    if (im.onto) {
      for (const auto& [member, count] : tc.cooccur) {
        int idx = im.onto->index_of(member);
        if (idx < 0) continue;
        for (int p : im.onto->parents(idx)) tc.expanded_pc[im.onto->id_of(p)] += count;
        for (int c : im.onto->children(idx)) tc.expanded_pc[im.onto->id_of(c)] += count;
      }
    }

    auto bt = freq_band(terms, FreqBand::top, cfg_.band_fraction);
    auto bb = freq_band(terms, FreqBand::bottom, cfg_.band_fraction);
    tc.band_top.insert(bt.begin(), bt.end());
    tc.band_bottom.insert(bb.begin(), bb.end());
    tc.top_terms = top_tfidf_terms(im.tfidf, terms, static_cast<size_t>(cfg_.wup_terms));

    if (im.vectors) {
      tc.dv_uniform = doc_vector(terms, *im.vectors, DocVecWeighting::uniform,
                                 cfg_.min_word_count, im.global_freq);
      tc.dv_tfidf = doc_vector(terms, *im.vectors, DocVecWeighting::tfidf,
                               cfg_.min_word_count, im.global_freq, &im.tfidf);
    }
    im.topic_cache.emplace(id, std::move(tc));
  }

  if (im.onto) {
    std::vector<std::string> sources;
    for (const auto& id : todo) {
      const auto& tc = im.topic_cache.at(id);
      sources.insert(sources.end(), tc.top_co.begin(), tc.top_co.end());
      sources.insert(sources.end(), tc.bottom_co.begin(), tc.bottom_co.end());
    }
    std::sort(sources.begin(), sources.end());
    sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
    for (const auto& src : sources) {
      if (im.dist_from.count(src)) continue;
      int s = im.onto->index_of(src);
      std::vector<int> dist(static_cast<size_t>(im.onto->size()), -1);
      if (s >= 0) {
        std::deque<int> queue{s};
        dist[static_cast<size_t>(s)] = 0;
        while (!queue.empty()) {
          int cur = queue.front();
          queue.pop_front();
          for (int nb : im.onto->neighbors(cur))
            if (dist[static_cast<size_t>(nb)] == -1) {
              dist[static_cast<size_t>(nb)] = dist[static_cast<size_t>(cur)] + 1;
              queue.push_back(nb);
            }
        }
      }
      im.dist_from.emplace(src, std::move(dist));
    }
  }
}

std::vector<double> FeatureContext::featurize(const CandidatePair& pair) const {
  const Impl& im = *impl_;
  auto ita = im.topic_cache.find(pair.t1);
  auto itb = im.topic_cache.find(pair.t2);
  if (ita == im.topic_cache.end() || itb == im.topic_cache.end())
    throw Error("featurize: pair not prepared: " + pair.t1 + " / " + pair.t2);
  const TopicCache& a = ita->second;
  const TopicCache& b = itb->second;

  std::vector<double> f;
  f.reserve(feature_catalog().size());

  for (int n = 0; n < 4; ++n)
    f.push_back(overlap(a.text_grams[n], b.text_grams[n], OverlapMode::unweighted));
  for (int n = 0; n < 4; ++n)
    f.push_back(overlap(a.text_grams[n], b.text_grams[n], OverlapMode::weighted));
  for (int n = 0; n < 4; ++n)
    f.push_back(std::max(
        overlap(a.name_grams[n], b.text_grams[n], OverlapMode::unweighted),
        overlap(b.name_grams[n], a.text_grams[n], OverlapMode::unweighted)));
  for (int n = 0; n < 4; ++n)
    f.push_back(std::max(
        overlap(a.name_grams[n], b.text_grams[n], OverlapMode::weighted),
        overlap(b.name_grams[n], a.text_grams[n], OverlapMode::weighted)));

  f.push_back(tfidf_cosine(im.tfidf, a.text_grams[0].counts, b.text_grams[0].counts));
  f.push_back(overlap_maps(a.cooccur, b.cooccur, OverlapMode::unweighted));
  f.push_back(overlap_maps(a.cooccur, b.cooccur, OverlapMode::weighted));

  if (im.vectors && !a.dv_uniform.empty() && !b.dv_uniform.empty()) {
    f.push_back(cosine(a.dv_uniform, b.dv_uniform));
    f.push_back(cosine(a.dv_tfidf, b.dv_tfidf));
  } else {
    f.push_back(0.0);
    f.push_back(0.0);
  }
  f.push_back(pos_cosine(a.pos, b.pos));

  auto band_overlap = [](const std::unordered_set<std::string>& x,
                         const std::unordered_set<std::string>& y) {
    if (x.empty() || y.empty()) return 0.0;
    const auto& small = x.size() <= y.size() ? x : y;
    const auto& large = x.size() <= y.size() ? y : x;
    int64_t inter = 0;
    for (const auto& w : small)
      if (large.count(w)) ++inter;
    return static_cast<double>(inter) / static_cast<double>(std::min(x.size(), y.size()));
  };
  f.push_back(band_overlap(a.band_top, b.band_top));
  f.push_back(band_overlap(a.band_bottom, b.band_bottom));

  f.push_back(overlap_maps(a.expanded_pc, b.expanded_pc, OverlapMode::unweighted));
  f.push_back(overlap_maps(a.expanded_pc, b.expanded_pc, OverlapMode::weighted));

  auto path_agg = [&](const std::vector<std::string>& sa,
                      const std::vector<std::string>& sb) {
    if (!im.onto || sa.empty() || sb.empty()) return cfg_.max_path;
    double sum = 0.0;
    int64_t n = 0;
    for (const auto& x : sa) {
      auto dit = im.dist_from.find(x);
      for (const auto& y : sb) {
        if (x == y) {
          sum += 0.0;
          ++n;
          continue;
        }
        if (dit == im.dist_from.end()) continue;
        int yi = im.onto->index_of(y);
        if (yi < 0) continue;
        int d = dit->second[static_cast<size_t>(yi)];
        if (d < 0) continue;  // unreachable terms are skipped
        sum += static_cast<double>(d);
        ++n;
      }
    }
    if (n == 0) return cfg_.max_path;
    return sum / static_cast<double>(n);
  };
  f.push_back(path_agg(a.top_co, b.top_co));
  f.push_back(path_agg(a.bottom_co, b.bottom_co));

  auto adamic_agg = [&](const std::vector<std::string>& sa,
                        const std::vector<std::string>& sb) {
    if (!im.onto || sa.empty() || sb.empty()) return 0.0;
    double sum = 0.0;
    int64_t n = 0;
    for (const auto& x : sa)
      for (const auto& y : sb) {
        sum += adamic_adar(*im.onto, x, y);
        ++n;
      }
    return n == 0 ? 0.0 : sum / static_cast<double>(n);
  };
  f.push_back(adamic_agg(a.top_co, b.top_co));
  f.push_back(adamic_agg(a.bottom_co, b.bottom_co));

  auto taxo_agg = [&](const std::vector<std::string>& sa,
                      const std::vector<std::string>& sb, TaxoMeasure m) {
    if (!im.onto || !im.ic || sa.empty() || sb.empty()) return 0.0;
    double sum = 0.0;
    int64_t n = 0;
    for (const auto& x : sa)
      for (const auto& y : sb) {
        sum += taxo_similarity(*im.onto, *im.ic, x, y, m);
        ++n;
      }
    return n == 0 ? 0.0 : sum / static_cast<double>(n);
  };
  f.push_back(taxo_agg(a.top_co, b.top_co, TaxoMeasure::lin));
  f.push_back(taxo_agg(a.top_co, b.top_co, TaxoMeasure::resnik));
  f.push_back(taxo_agg(a.top_co, b.top_co, TaxoMeasure::jcn));
  f.push_back(taxo_agg(a.top_co, b.top_co, TaxoMeasure::wup));
  f.push_back(taxo_agg(a.bottom_co, b.bottom_co, TaxoMeasure::lin));

  double wup_sum = 0.0;
  int64_t wup_n = 0;
  if (im.taxo && !a.top_terms.empty() && !b.top_terms.empty()) {
    for (const auto& x : a.top_terms)
      for (const auto& y : b.top_terms) {
        wup_sum += taxo_similarity(*im.taxo, im.empty_ic, x, y, TaxoMeasure::wup);
        ++wup_n;
      }
  }
  f.push_back(wup_n == 0 ? 0.0 : wup_sum / static_cast<double>(wup_n));
  return f;
}

const std::vector<std::string>& direction_feature_names() {
  static const std::vector<std::string> names = {
      "name_chars_diff",    "name_words_diff",  "created_days_diff",
      "question_count_diff", "answer_count_diff", "answer_avail_diff",
      "older_indicator"};
  return names;
}

DirectionExample direction_featurize(const Corpus& corpus, const Event& event) {
  DirectionExample ex;
  ex.pair = make_candidate_pair(corpus, event.src, event.dst, "merge");
  const Topic& t1 = corpus.topic(ex.pair.t1);
  const Topic& t2 = corpus.topic(ex.pair.t2);
  SnapshotView v = corpus.snapshot(event.at - 1);

  auto [ans1, avail1] = v.answer_stats(t1.id);
  auto [ans2, avail2] = v.answer_stats(t2.id);
  double older = t1.created_at < t2.created_at   ? 1.0
                 : t1.created_at > t2.created_at ? -1.0
                                                 : 0.0;
  ex.features = {
      static_cast<double>(t1.name.size()) - static_cast<double>(t2.name.size()),
      static_cast<double>(tokenize(t1.name).size()) -
          static_cast<double>(tokenize(t2.name).size()),
      static_cast<double>(t1.created_at - t2.created_at) / 86400.0,
      static_cast<double>(v.question_count(t1.id) - v.question_count(t2.id)),
      static_cast<double>((avail1 ? ans1 : 0) - (avail2 ? ans2 : 0)),
      static_cast<double>((avail1 ? 1 : 0) - (avail2 ? 1 : 0)),
      older,
  };
  ex.label = event.dst == ex.pair.t1 ? 1 : 0;
  return ex;
}

}  // namespace topicmerge
