// Release gate. Runs the seven acceptance checks end to end and prints one
// "CRITERION k PASS/FAIL" line each; the exit status is the failure count.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "../oracles.hpp"
#include "topicmerge/corpus.hpp"
#include "topicmerge/embed.hpp"
#include "topicmerge/features.hpp"
#include "topicmerge/models.hpp"
#include "topicmerge/ontology.hpp"
#include "topicmerge/pipeline.hpp"
#include "topicmerge/synth.hpp"
#include "topicmerge/textfeat.hpp"
#include "topicmerge/util.hpp"

using namespace topicmerge;
namespace fs = std::filesystem;

namespace {

constexpr double kFloatTol = 1e-9;

bool approx_eq(double a, double b, double tol = kFloatTol) {
  return std::fabs(a - b) <= tol;
}

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof(buf), pattern, args);
  va_end(args);
  return buf;
}

// ---------------------------------------------------------------------------
// Criterion 1: library operations against brute-force oracles.
// ---------------------------------------------------------------------------

std::vector<std::string> random_tokens(Rng& rng, int max_len,
                                       const std::vector<std::string>& pool) {
  int len = rng.below(max_len + 1);
  std::vector<std::string> out;
  for (int i = 0; i < len; ++i)
    out.push_back(pool[static_cast<size_t>(rng.below(static_cast<int>(pool.size())))]);
  return out;
}

std::string random_string(Rng& rng, int max_len, int alphabet) {
  int len = rng.below(max_len + 1);
  std::string s;
  for (int i = 0; i < len; ++i) s += static_cast<char>('a' + rng.below(alphabet));
  return s;
}

std::vector<std::string> bigram_list(const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  for (size_t i = 0; i + 1 < tokens.size(); ++i) out.push_back(tokens[i] + " " + tokens[i + 1]);
  return out;
}

std::unordered_map<std::string, int64_t> count_map(const std::vector<std::string>& tokens) {
  std::unordered_map<std::string, int64_t> m;
  for (const auto& t : tokens) ++m[t];
  return m;
}

std::vector<std::string> band_ref(const std::unordered_map<std::string, int64_t>& counts,
                                  FreqBand band, double fraction) {
  std::vector<std::pair<std::string, int64_t>> items(counts.begin(), counts.end());
  std::sort(items.begin(), items.end(), [&](const auto& x, const auto& y) {
    if (x.second != y.second)
      return band == FreqBand::top ? x.second > y.second : x.second < y.second;
    return x.first < y.first;
  });
  size_t k = std::max<size_t>(
      1, static_cast<size_t>(std::floor(static_cast<double>(items.size()) * fraction)));
  k = std::min(k, items.size());
  std::vector<std::string> out;
  for (size_t i = 0; i < k; ++i) out.push_back(items[i].first);
  return out;
}

// Random child->parent DAG (edges only point to lower indexes) mirrored into
// the oracle structures, plus a corpus giving each node a question count.
struct GraphInstance {
  int n = 0;
  Ontology onto;
  oracles::RefGraph graph;
  oracles::RefDag dag;
  Corpus corpus;
};

GraphInstance random_graph(Rng& rng) {
  GraphInstance gi;
  gi.n = 2 + rng.below(14);
  gi.graph.resize(gi.n);
  gi.dag.resize(gi.n);
  for (int i = 0; i < gi.n; ++i) gi.onto.ensure_node("g" + std::to_string(i));

  auto below = [&rng](int n) { return static_cast<int>(rng.below(static_cast<uint64_t>(n))); };
  std::set<std::pair<int, int>> edges;
  for (int i = 1; i < gi.n; ++i)
    if (rng.uniform() < 0.75) edges.insert({i, below(i)});
  int extra = below(gi.n);
  for (int k = 0; k < extra; ++k) {
    int child = 1 + below(gi.n - 1);
    edges.insert({child, below(child)});
  }
  for (const auto& [child, parent] : edges) {
    gi.onto.add_edge("g" + std::to_string(child), "g" + std::to_string(parent));
    gi.graph.edge(child, parent);
    gi.dag.edge(child, parent);
  }
  gi.onto.finalize();

  std::vector<Topic> topics;
  std::vector<Question> questions;
  for (int i = 0; i < gi.n; ++i) {
    std::string id = "g" + std::to_string(i);
    topics.push_back({id, id, 0});
    int64_t qc = rng.below(5);
    gi.dag.freq[static_cast<size_t>(i)] = qc + 1;
    for (int64_t q = 0; q < qc; ++q) {
      Question question;
      question.id = id + "q" + std::to_string(q);
      question.text = "x";
      question.created_at = 1;
      question.topic_ids = {id};
      questions.push_back(std::move(question));
    }
  }
  gi.corpus = Corpus(std::move(topics), std::move(questions), {});
  return gi;
}

bool criterion1(std::string& detail) {
  Rng rng(20240816);
  const std::vector<std::string> pool = {"ka", "lo", "mi", "nu", "pe", "ra"};
  auto fail = [&detail](const std::string& op, int it) {
    detail = fmt("%s mismatched the oracle on instance %d", op.c_str(), it);
    return false;
  };

  for (int it = 0; it < 200; ++it) {
    auto ta = random_tokens(rng, 6, pool), tb = random_tokens(rng, 6, pool);
    auto ga = ngrams(ta, 1), gb = ngrams(tb, 1);
    if (!approx_eq(overlap(ga, gb, OverlapMode::unweighted),
                   oracles::overlap_unweighted(ta, tb)))
      return fail("unweighted overlap", it);
    if (!approx_eq(overlap(ga, gb, OverlapMode::weighted),
                   oracles::overlap_weighted(ta, tb)))
      return fail("weighted overlap", it);
    if (!approx_eq(overlap(ga, gb, OverlapMode::weighted_support_denom),
                   oracles::overlap_weighted_support_denom(ta, tb)))
      return fail("support-denominator overlap", it);
    if (!approx_eq(overlap(ngrams(ta, 2), ngrams(tb, 2), OverlapMode::unweighted),
                   oracles::overlap_unweighted(bigram_list(ta), bigram_list(tb))))
      return fail("bigram overlap", it);
  }

  for (int it = 0; it < 200; ++it) {
    std::string a = random_string(rng, 8, 3), b = random_string(rng, 8, 3);
    if (it % 7 == 0) b = a;
    if (!approx_eq(jaro_winkler(a, b), oracles::jaro_winkler_ref(a, b)))
      return fail("jaro-winkler", it);
    std::string c = random_string(rng, 12, 5), d = random_string(rng, 12, 5);
    if (!approx_eq(jaro_winkler(c, d), oracles::jaro_winkler_ref(c, d)))
      return fail("jaro-winkler", it);
  }

  for (int it = 0; it < 200; ++it) {
    int nd = 2 + rng.below(5);
    std::vector<std::unordered_map<std::string, int64_t>> docs;
    std::map<std::string, int64_t> df;
    for (int i = 0; i < nd; ++i) {
      docs.push_back(count_map(random_tokens(rng, 10, pool)));
      for (const auto& [w, cnt] : docs.back()) ++df[w];
    }
    std::vector<const std::unordered_map<std::string, int64_t>*> ptrs;
    for (const auto& doc : docs) ptrs.push_back(&doc);
    TfidfIndex idx = build_tfidf(ptrs);
    std::map<std::string, int64_t> ma(docs[0].begin(), docs[0].end());
    std::map<std::string, int64_t> mb(docs[1].begin(), docs[1].end());
    if (!approx_eq(tfidf_cosine(idx, docs[0], docs[1]),
                   oracles::tfidf_cosine_ref(nd, df, ma, mb)))
      return fail("tfidf cosine", it);
  }

  for (int it = 0; it < 200; ++it) {
    size_t dim = 1 + static_cast<size_t>(rng.below(8));
    std::vector<double> a(dim), b(dim);
    for (auto& v : a) v = rng.gaussian();
    for (auto& v : b) v = rng.gaussian();
    if (it % 10 == 0) std::fill(a.begin(), a.end(), 0.0);
    if (!approx_eq(cosine(a, b), oracles::cosine_ref(a, b))) return fail("cosine", it);
  }

  for (int it = 0; it < 200; ++it) {
    auto ca = count_map(random_tokens(rng, 6, pool));
    auto cb = count_map(random_tokens(rng, 6, pool));
    for (auto& [w, n] : ca) n = 1 + rng.below(5);
    for (auto& [w, n] : cb) n = 1 + rng.below(5);
    double fraction = 0.2 + 0.2 * rng.below(3);
    for (FreqBand band : {FreqBand::top, FreqBand::bottom}) {
      double got = freq_stratified_overlap(ca, cb, band, fraction);
      double want = oracles::overlap_unweighted(band_ref(ca, band, fraction),
                                                band_ref(cb, band, fraction));
      if (!approx_eq(got, want)) return fail("frequency band overlap", it);
    }
  }

  for (int it = 0; it < 200; ++it) {
    VectorTable table;
    table.dim = 3;
    std::unordered_map<std::string, int64_t> global_freq;
    for (const auto& w : pool) {
      global_freq[w] = rng.below(9);
      if (rng.uniform() < 0.75) {
        std::vector<float> v(3);
        for (auto& x : v) x = static_cast<float>(rng.gaussian());
        table.vectors.emplace(w, v);
      }
    }
    auto terms = count_map(random_tokens(rng, 6, pool));
    auto doc2 = count_map(random_tokens(rng, 6, pool));
    std::vector<const std::unordered_map<std::string, int64_t>*> ptrs = {&terms, &doc2};
    TfidfIndex idx = build_tfidf(ptrs);
    const int64_t min_count = 3;
    for (DocVecWeighting mode : {DocVecWeighting::uniform, DocVecWeighting::tfidf}) {
      auto got = doc_vector(terms, table, mode, min_count, global_freq, &idx);
      std::vector<double> acc(3, 0.0);
      double wsum = 0.0;
      for (const auto& [w, cnt] : terms) {
        auto git = global_freq.find(w);
        if (git == global_freq.end() || git->second < min_count) continue;
        const auto* vec = table.find(w);
        if (!vec) continue;
        double weight = mode == DocVecWeighting::uniform
                            ? static_cast<double>(cnt)
                            : static_cast<double>(cnt) * idx.idf(w);
        for (size_t i = 0; i < 3; ++i) acc[i] += weight * static_cast<double>((*vec)[i]);
        wsum += weight;
      }
      if (wsum > 0.0)
        for (auto& v : acc) v /= wsum;
      for (size_t i = 0; i < 3; ++i)
        if (!approx_eq(got[i], acc[i])) return fail("document vector", it);
    }
  }

  for (int it = 0; it < 200; ++it) {
    GraphInstance gi = random_graph(rng);
    auto dist = oracles::all_paths_ref(gi.graph);
    InformationContent icx = information_content(gi.onto, gi.corpus.full_view());
    auto ic_want = oracles::ic_ref(gi.dag);
    auto depth_want = oracles::depths_ref(gi.dag);

    for (int i = 0; i < gi.n; ++i) {
      std::string a = "g" + std::to_string(i);
      if (!approx_eq(icx.of(a), ic_want[static_cast<size_t>(i)]))
        return fail("information content", it);
      if (gi.onto.depth(i) != depth_want[static_cast<size_t>(i)])
        return fail("node depth", it);
      for (int j = 0; j < gi.n; ++j) {
        std::string b = "g" + std::to_string(j);
        auto got = min_path_len(gi.onto, a, b);
        int want = dist[static_cast<size_t>(i)][static_cast<size_t>(j)];
        if (want == -1 ? got.has_value() : (!got.has_value() || *got != want))
          return fail("shortest path", it);
        if (!approx_eq(adamic_adar(gi.onto, a, b), oracles::adamic_adar_ref(gi.graph, i, j)))
          return fail("adamic-adar", it);

        int lcs_ic = oracles::lcs_by_ic_ref(gi.dag, ic_want, i, j);
        int lcs_depth = oracles::lcs_by_depth_ref(gi.dag, i, j);
        double ic_a = ic_want[static_cast<size_t>(i)], ic_b = ic_want[static_cast<size_t>(j)];
        double resnik = lcs_ic < 0 ? 0.0 : ic_want[static_cast<size_t>(lcs_ic)];
        double lin = lcs_ic < 0 || ic_a + ic_b <= 0.0
                         ? 0.0
                         : 2.0 * ic_want[static_cast<size_t>(lcs_ic)] / (ic_a + ic_b);
        double jcn = lcs_ic < 0
                         ? 0.0
                         : 1.0 / std::max(1e-4, ic_a + ic_b -
                                                    2.0 * ic_want[static_cast<size_t>(lcs_ic)]);
        double wup = lcs_depth < 0
                         ? 0.0
                         : 2.0 * depth_want[static_cast<size_t>(lcs_depth)] /
                               static_cast<double>(depth_want[static_cast<size_t>(i)] +
                                                   depth_want[static_cast<size_t>(j)]);
        if (!approx_eq(taxo_similarity(gi.onto, icx, a, b, TaxoMeasure::resnik), resnik))
          return fail("resnik similarity", it);
        if (!approx_eq(taxo_similarity(gi.onto, icx, a, b, TaxoMeasure::lin), lin))
          return fail("lin similarity", it);
        if (!approx_eq(taxo_similarity(gi.onto, icx, a, b, TaxoMeasure::jcn), jcn))
          return fail("jiang-conrath similarity", it);
        if (!approx_eq(taxo_similarity(gi.onto, icx, a, b, TaxoMeasure::wup), wup))
          return fail("wu-palmer similarity", it);
      }
    }
    if (min_path_len(gi.onto, "absent", "g0").has_value())
      return fail("shortest path", it);
  }

  for (int it = 0; it < 200; ++it) {
    size_t n = 1 + static_cast<size_t>(rng.below(30));
    std::vector<int> predicted(n), actual(n);
    for (auto& v : predicted) v = rng.uniform() < 0.5;
    for (auto& v : actual) v = rng.uniform() < 0.5;
    Prf got = prf(predicted, actual);
    oracles::PrfRef want = oracles::prf_ref(predicted, actual);
    if (!approx_eq(got.precision, want.precision) || !approx_eq(got.recall, want.recall) ||
        !approx_eq(got.f_score, want.f) ||
        got.tp + got.fp + got.fn + got.tn != static_cast<int64_t>(n))
      return fail("precision-recall-f", it);
  }

  for (int it = 0; it < 200; ++it) {
    std::array<int64_t, kNumPosTags> ha{}, hb{};
    for (auto& v : ha) v = rng.below(5);
    for (auto& v : hb) v = rng.below(5);
    if (it % 9 == 0) ha.fill(0);
    std::vector<double> da(ha.begin(), ha.end()), db(hb.begin(), hb.end());
    if (!approx_eq(pos_cosine(ha, hb), oracles::cosine_ref(da, db)))
      return fail("tag histogram cosine", it);
  }

  detail = "11 operation families x 200 random instances";
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 2: gradient check, score fixed point, planted outlier.
// ---------------------------------------------------------------------------

bool criterion2(std::string& detail) {
  Rng rng(77);
  double max_err = 0.0;
  for (int it = 0; it < 100; ++it) {
    size_t n = 3 + static_cast<size_t>(rng.below(18));
    size_t d = 1 + static_cast<size_t>(rng.below(8));
    Matrix xs(n, std::vector<double>(d));
    for (auto& row : xs)
      for (auto& v : row) v = rng.gaussian();
    std::vector<int> y(n);
    for (auto& v : y) v = rng.uniform() < 0.5;
    std::vector<double> cw = {0.5 + rng.uniform(), 0.5 + rng.uniform()};
    double c = 0.3 + 3.0 * rng.uniform();
    std::vector<double> w(d);
    for (auto& v : w) v = rng.gaussian();
    double b = rng.gaussian();

    std::vector<double> grad(d);
    double grad_b = 0.0;
    linear_loss_grad(LinearKind::logistic, xs, y, cw, c, w, b, grad, grad_b);

    const double h = 1e-5;
    std::vector<double> scratch(d);
    double scratch_b = 0.0;
    auto loss_at = [&](const std::vector<double>& ww, double bb) {
      return linear_loss_grad(LinearKind::logistic, xs, y, cw, c, ww, bb, scratch,
                              scratch_b);
    };
    for (size_t j = 0; j < d; ++j) {
      std::vector<double> wp = w, wm = w;
      wp[j] += h;
      wm[j] -= h;
      double fd = (loss_at(wp, b) - loss_at(wm, b)) / (2.0 * h);
      max_err = std::max(max_err, std::fabs(fd - grad[j]));
    }
    double fd_b = (loss_at(w, b + h) - loss_at(w, b - h)) / (2.0 * h);
    max_err = std::max(max_err, std::fabs(fd_b - grad_b));
  }
  if (max_err >= 1e-4) {
    detail = fmt("gradient error %.3g exceeds 1e-4", max_err);
    return false;
  }

  IsolationForestModel leaf_forest;
  leaf_forest.n_features = 1;
  leaf_forest.psi = 256;
  leaf_forest.n_trees = 2;
  for (int t = 0; t < 2; ++t) {
    IsoTree tree;
    tree.nodes.push_back({-1, 0.0, -1, -1, 256});
    leaf_forest.trees.push_back(tree);
  }
  if (leaf_forest.score({0.0}) != 0.5) {
    detail = "leaf-only forest did not score exactly one half";
    return false;
  }

  int hits = 0;
  for (uint64_t seed = 1; seed <= 100; ++seed) {
    Rng cluster_rng(seed * 1337 + 11);
    Matrix x;
    for (int i = 0; i < 30; ++i) x.push_back({cluster_rng.gaussian()});
    x.push_back({8.0});
    IsolationForestModel m = iforest_fit(x, IsolationForestConfig{}, seed);
    std::vector<double> scores;
    for (int i = 0; i < 30; ++i) scores.push_back(m.score(x[static_cast<size_t>(i)]));
    std::sort(scores.begin(), scores.end());
    double median = 0.5 * (scores[14] + scores[15]);
    hits += m.score({8.0}) > median;
  }
  detail = fmt("gradient error %.3g, outlier above cluster median in %d/100 seeds",
               max_err, hits);
  return hits >= 95;
}

// ---------------------------------------------------------------------------
// Criteria 3-5 share one synthetic corpus and trained model.
// ---------------------------------------------------------------------------

struct Bench {
  Corpus corpus;
  VectorTable vectors;
  Ontology word_taxonomy;
  Ontology onto;
  InformationContent ic;
  TokenCache tokens;
  FeatureConfig fcfg;
  PairDataset ds;
  TwoStepModel model;
  Prf two_step, lr_alone;
};

std::optional<Bench> g_bench;

bool criterion3(std::string& detail) {
  g_bench.emplace();
  Bench& b = *g_bench;

  SynthConfig scfg;
  SynthData data = generate_synth(scfg);
  b.corpus = Corpus(data.topics, data.questions, data.events);
  b.vectors.dim = static_cast<size_t>(scfg.dim);
  for (const auto& [word, vec] : data.embeddings)
    b.vectors.vectors.emplace(word, std::vector<float>(vec.begin(), vec.end()));
  for (const auto& [child, parent] : data.taxonomy) b.word_taxonomy.add_edge(child, parent);
  b.word_taxonomy.finalize();
  b.onto = build_ontology(b.corpus, b.corpus.events());
  b.ic = information_content(b.onto, b.corpus.full_view());
  b.tokens = TokenCache::build(b.corpus, nullptr);

  AssembleConfig acfg;
  acfg.seed = scfg.seed;
  b.ds = assemble_dataset(b.corpus, &data.ground_truth, FilterConfig{}, acfg);

  FeatureContext ctx(b.corpus.full_view(), &b.onto, &b.ic, &b.vectors, &b.word_taxonomy,
                     b.fcfg, &b.tokens);
  ctx.prepare(b.ds.train_pos);
  ctx.prepare(b.ds.train_neg);
  ctx.prepare(b.ds.anomaly);
  ctx.prepare(b.ds.test_pos);
  ctx.prepare(b.ds.test_neg);
  auto featurize_all = [&](const std::vector<CandidatePair>& pairs) {
    Matrix m(pairs.size());
    for (size_t i = 0; i < pairs.size(); ++i) m[i] = ctx.featurize(pairs[i]);
    return m;
  };
  Matrix pos = featurize_all(b.ds.train_pos);
  Matrix neg = featurize_all(b.ds.train_neg);
  Matrix anomaly = featurize_all(b.ds.anomaly);

  b.model = train_two_step_features(pos, neg, anomaly, TwoStepConfig{}, scfg.seed);
  b.model.feature_names = feature_names();

  std::vector<CandidatePair> test = b.ds.test_pos;
  test.insert(test.end(), b.ds.test_neg.begin(), b.ds.test_neg.end());
  std::vector<int> labels(b.ds.test_pos.size(), 1);
  labels.insert(labels.end(), b.ds.test_neg.size(), 0);
  Matrix testx = featurize_all(test);

  auto label_vec = [](const std::vector<PairPrediction>& preds) {
    std::vector<int> out;
    for (const auto& p : preds) out.push_back(p.label);
    return out;
  };
  b.two_step = prf(label_vec(predict_two_step(b.model, test, testx, false)), labels);
  b.lr_alone = prf(label_vec(predict_two_step(b.model, test, testx, true)), labels);

  detail = fmt("F %.3f, precision %.3f (%lld fp) vs %.3f (%lld fp) classifier-alone, "
               "recall %.3f, %zu train / %zu test pairs",
               b.two_step.f_score, b.two_step.precision,
               static_cast<long long>(b.two_step.fp), b.lr_alone.precision,
               static_cast<long long>(b.lr_alone.fp), b.two_step.recall,
               b.ds.train_pos.size() + b.ds.train_neg.size(), test.size());
  return b.two_step.f_score >= 0.70 && b.two_step.precision > b.lr_alone.precision;
}

bool criterion4(std::string& detail) {
  if (!g_bench) {
    detail = "shared pipeline state unavailable";
    return false;
  }
  Bench& b = *g_bench;
  std::vector<Event> merges = collect_merge_pairs(b.corpus);
  DirectionCvResult cv = direction_cv(b.corpus, merges, 10, LinearFitConfig{}, 7);
  detail = fmt("10-fold accuracy %.3f over %zu merge events", cv.accuracy, merges.size());
  return cv.accuracy >= 0.85;
}

bool criterion5(std::string& detail) {
  if (!g_bench) {
    detail = "shared pipeline state unavailable";
    return false;
  }
  Bench& b = *g_bench;
  EarlyEvalInputs inputs;
  inputs.vectors = &b.vectors;
  inputs.taxonomy = &b.word_taxonomy;
  inputs.feature_cfg = b.fcfg;
  inputs.tokens = &b.tokens;
  std::vector<EarlyPoint> curve = early_eval(b.model, b.corpus, b.ds.test_events, inputs);
  if (curve.empty() || curve.front().month != 1) {
    detail = "empty or misaligned curve";
    return false;
  }
  bool monotone = true;
  for (size_t i = 1; i < curve.size(); ++i)
    monotone = monotone && curve[i].recall >= curve[i - 1].recall;
  double final_recall = curve.back().recall;
  double full_data_recall = b.two_step.recall;
  detail = fmt("month-1 recall %.3f, month-%d recall %.3f, full-data recall %.3f",
               curve.front().recall, curve.back().month, final_recall, full_data_recall);
  return curve.front().recall > 0.0 && monotone &&
         final_recall >= 0.9 * full_data_recall;
}

// ---------------------------------------------------------------------------
// Criterion 6: CLI walkthrough determinism.
// ---------------------------------------------------------------------------

bool run_cli(const std::string& args) {
  std::string cmd = std::string(TOPICMERGE_CLI_PATH) + " " + args + " >/dev/null";
  return std::system(cmd.c_str()) == 0;
}

bool walkthrough(const fs::path& root) {
  fs::create_directories(root);
  std::string corpus = (root / "corpus").string();
  std::string train = (root / "train").string();
  std::string pred = (root / "pred").string();
  std::string eval = (root / "eval").string();
  std::string inputs = " --vectors " + corpus + "/embeddings.vec --taxonomy " + corpus +
                       "/taxonomy.tsv";
  return run_cli("synth --out " + corpus +
                 " --seed 3 --topics 60 --merge-pairs 15 --unmerge-pairs 10"
                 " --neighbor-pairs 60 --generated-pairs 600 --families 5") &&
         run_cli("train --dir " + corpus + " --out " + train + inputs + " --seed 5") &&
         run_cli("predict --dir " + corpus + " --out " + pred + inputs + " --model " +
                 train + "/model.json --pairs " + train + "/test_pairs.csv") &&
         run_cli("eval --predictions " + pred + "/predictions.csv --pairs " + train +
                 "/test_pairs.csv --out " + eval);
}

bool criterion6(std::string& detail) {
  fs::path base = fs::temp_directory_path() / "topicmerge_accept_cli";
  fs::remove_all(base);
  if (!walkthrough(base / "a") || !walkthrough(base / "b")) {
    detail = "a CLI step exited nonzero";
    return false;
  }
  const std::vector<std::string> files = {"train/model.json", "train/direction_model.json",
                                          "pred/predictions.csv", "eval/metrics.json"};
  for (const auto& f : files) {
    if (read_file((base / "a" / f).string()) != read_file((base / "b" / f).string())) {
      detail = f + " differs between identical runs";
      return false;
    }
  }
  fs::remove_all(base);
  detail = "model.json, direction_model.json, predictions.csv, metrics.json identical";
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 7: elimination ranking keeps a question-content feature on top.
// ---------------------------------------------------------------------------

bool criterion7(std::string& detail) {
  const auto& catalog = feature_catalog();
  int hits = 0;
  for (uint64_t seed = 1; seed <= 100; ++seed) {
    SynthConfig scfg;
    scfg.seed = seed;
    scfg.topics = 40;
    scfg.merge_pairs = 12;
    scfg.unmerge_pairs = 8;
    scfg.neighbor_pairs = 40;
    scfg.generated_pairs = 300;
    scfg.families = 6;
    SynthData data = generate_synth(scfg);
    Corpus corpus(data.topics, data.questions, data.events);
    Ontology onto = build_ontology(corpus, corpus.events());
    InformationContent icx = information_content(onto, corpus.full_view());
    TokenCache tokens = TokenCache::build(corpus, nullptr);
    FeatureContext ctx(corpus.full_view(), &onto, &icx, nullptr, nullptr, FeatureConfig{},
                       &tokens);

    AssembleConfig acfg;
    acfg.seed = seed;
    PairDataset ds = assemble_dataset(corpus, &data.ground_truth, FilterConfig{}, acfg);
    ctx.prepare(ds.train_pos);
    ctx.prepare(ds.train_neg);
    Matrix x;
    std::vector<int> y;
    for (const auto& p : ds.train_pos) {
      x.push_back(ctx.featurize(p));
      y.push_back(1);
    }
    for (const auto& p : ds.train_neg) {
      x.push_back(ctx.featurize(p));
      y.push_back(0);
    }
    std::vector<int> ranks = rfe_rank(x, y, LinearFitConfig{}, seed);
    for (size_t j = 0; j < ranks.size(); ++j)
      if (ranks[j] == 1) {
        hits += catalog[j].group == FeatureGroup::question_content;
        break;
      }
  }
  detail = fmt("question-content feature ranked first in %d/100 seeds", hits);
  return hits >= 95;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double time_limit;  // seconds; 0 = unlimited
    std::function<bool(std::string&)> fn;
  };
  std::vector<Criterion> criteria = {
      {1, "feature oracles", 60, criterion1},
      {2, "model correctness", 120, criterion2},
      {3, "end-to-end pipeline", 600, criterion3},
      {4, "merge direction", 60, criterion4},
      {5, "early prediction", 300, criterion5},
      {6, "walkthrough determinism", 0, criterion6},
      {7, "elimination ranking", 0, criterion7},
  };
  int failures = 0;
  for (auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (ok && c.time_limit > 0 && secs >= c.time_limit) {
      ok = false;
      detail += fmt(" [exceeded %.0fs budget]", c.time_limit);
    }
    std::printf("CRITERION %d %s (%.1fs) %s: %s\n", c.id, ok ? "PASS" : "FAIL", secs,
                c.name, detail.c_str());
    std::fflush(stdout);
    failures += !ok;
  }
  return failures;
}
