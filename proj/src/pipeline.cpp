#include "topicmerge/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "json.hpp"
#include "topicmerge/ontology.hpp"

namespace topicmerge {

using nlohmann::json;

TwoStepModel train_two_step_features(const Matrix& pos, const Matrix& neg,
                                     const Matrix& anomaly, const TwoStepConfig& cfg,
                                     uint64_t seed) {
  if (pos.empty() || neg.empty()) throw Error("train_two_step: need both classes");
  if (anomaly.empty()) throw Error("train_two_step: empty anomaly pool");
  TwoStepModel m;
  m.iforest = iforest_fit(anomaly, cfg.iforest, seed);

  Matrix x;
  x.reserve(pos.size() + neg.size());
  std::vector<int> y;
  y.reserve(pos.size() + neg.size());
  for (const auto& r : pos) {
    x.push_back(r);
    y.push_back(1);
  }
  for (const auto& r : neg) {
    x.push_back(r);
    y.push_back(0);
  }
  m.classifier = linear_fit(x, y, LinearKind::logistic, cfg.linear, seed);
  return m;
}

TwoStepModel train_two_step(FeatureContext& ctx, const std::vector<CandidatePair>& train_pos,
                            const std::vector<CandidatePair>& train_neg,
                            const std::vector<CandidatePair>& anomaly_train,
                            const TwoStepConfig& cfg, uint64_t seed) {
  std::unordered_set<std::string> neg_keys;
  for (const auto& p : train_neg) neg_keys.insert(p.key());
  std::string offenders;
  int n_off = 0;
  for (const auto& p : anomaly_train)
    if (neg_keys.count(p.key())) {
      if (n_off < 5) offenders += (n_off ? ", " : "") + p.t1 + "/" + p.t2;
      ++n_off;
    }
  if (n_off > 0)
    throw Error("train_two_step: anomaly pool overlaps training negatives (" +
                std::to_string(n_off) + " pairs: " + offenders + ")");

  ctx.prepare(train_pos);
  ctx.prepare(train_neg);
  ctx.prepare(anomaly_train);
  auto featurize_all = [&](const std::vector<CandidatePair>& pairs) {
    Matrix m;
    m.reserve(pairs.size());
    for (const auto& p : pairs) m.push_back(ctx.featurize(p));
    return m;
  };
  TwoStepModel m = train_two_step_features(featurize_all(train_pos),
                                           featurize_all(train_neg),
                                           featurize_all(anomaly_train), cfg, seed);
  m.feature_names = feature_names();
  return m;
}

std::vector<PairPrediction> predict_two_step(const TwoStepModel& m,
                                             const std::vector<CandidatePair>& pairs,
                                             const Matrix& features, bool skip_filter) {
  if (pairs.size() != features.size())
    throw Error("predict_two_step: pair/feature count mismatch");
  std::vector<PairPrediction> out;
  out.reserve(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) {
    PairPrediction p;
    p.pair = pairs[i];
    double anomaly = m.iforest.score(features[i]);
    if (!skip_filter && anomaly <= m.iforest.threshold) {
      p.stage = PredictionStage::filtered;
      p.score = anomaly;
      p.label = 0;
    } else {
      p.stage = PredictionStage::classified;
      p.score = m.classifier.score(features[i]);
      p.label = m.classifier.label(features[i]);
    }
    out.push_back(std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization.
// ---------------------------------------------------------------------------

namespace {

json standardizer_to_json(const Standardizer& s) {
  return json{{"mean", s.mean}, {"std", s.stddev}};
}

Standardizer standardizer_from_json(const json& j) {
  Standardizer s;
  s.mean = j.at("mean").get<std::vector<double>>();
  s.stddev = j.at("std").get<std::vector<double>>();
  return s;
}

json linear_to_json(const LinearModel& m) {
  return json{{"kind", m.kind == LinearKind::logistic ? "logistic" : "hinge"},
              {"weights", m.weights},
              {"bias", m.bias},
              {"C", m.c}};
}

void linear_from_json(const json& j, LinearModel& m) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "logistic") m.kind = LinearKind::logistic;
  else if (kind == "hinge") m.kind = LinearKind::hinge;
  else throw Error("model file: unknown linear kind \"" + kind + "\"");
  m.weights = j.at("weights").get<std::vector<double>>();
  m.bias = j.at("bias").get<double>();
  m.c = j.at("C").get<double>();
}

json iforest_to_json(const IsolationForestModel& m) {
  json trees = json::array();
  for (const auto& t : m.trees) {
    json jt;
    std::vector<int32_t> feature, left, right, size;
    std::vector<double> value;
    for (const auto& n : t.nodes) {
      feature.push_back(n.feature);
      value.push_back(n.threshold);
      left.push_back(n.left);
      right.push_back(n.right);
      size.push_back(n.size);
    }
    jt["feature"] = feature;
    jt["value"] = value;
    jt["left"] = left;
    jt["right"] = right;
    jt["size"] = size;
    trees.push_back(std::move(jt));
  }
  return json{{"psi", m.psi},
              {"n_trees", m.n_trees},
              {"n_features", m.n_features},
              {"contamination", m.contamination},
              {"threshold", m.threshold},
              {"degenerate", m.degenerate},
              {"trees", std::move(trees)}};
}

IsolationForestModel iforest_from_json(const json& j) {
  IsolationForestModel m;
  m.psi = j.at("psi").get<int>();
  m.n_trees = j.at("n_trees").get<int>();
  m.n_features = j.at("n_features").get<int>();
  m.contamination = j.at("contamination").get<double>();
  m.threshold = j.at("threshold").get<double>();
  m.degenerate = j.at("degenerate").get<bool>();
  for (const auto& jt : j.at("trees")) {
    IsoTree t;
    auto feature = jt.at("feature").get<std::vector<int32_t>>();
    auto value = jt.at("value").get<std::vector<double>>();
    auto left = jt.at("left").get<std::vector<int32_t>>();
    auto right = jt.at("right").get<std::vector<int32_t>>();
    auto size = jt.at("size").get<std::vector<int32_t>>();
    if (value.size() != feature.size() || left.size() != feature.size() ||
        right.size() != feature.size() || size.size() != feature.size())
      throw Error("model file: ragged tree arrays");
    t.nodes.resize(feature.size());
    for (size_t i = 0; i < feature.size(); ++i)
      t.nodes[i] = {feature[i], value[i], left[i], right[i], size[i]};
    m.trees.push_back(std::move(t));
  }
  return m;
}

json load_model_json(const std::string& path, const char* expected_kind) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(path + ": " + e.what());
  }
  if (!j.contains("format_version") || j.at("format_version").get<int>() != 1)
    throw Error(path + ": unsupported model format version");
  if (j.at("kind").get<std::string>() != expected_kind)
    throw Error(path + ": expected a \"" + std::string(expected_kind) + "\" model");
  return j;
}

}  // namespace

void save_two_step(const TwoStepModel& m, const std::string& path) {
  json j{{"format_version", 1},
         {"kind", "two_step"},
         {"feature_names", m.feature_names},
         {"standardizer", standardizer_to_json(m.classifier.standardizer)},
         {"linear", linear_to_json(m.classifier)},
         {"iforest", iforest_to_json(m.iforest)}};
  write_file(path, j.dump(2) + "\n");
}

TwoStepModel load_two_step(const std::string& path) {
  json j = load_model_json(path, "two_step");
  TwoStepModel m;
  m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  linear_from_json(j.at("linear"), m.classifier);
  m.classifier.standardizer = standardizer_from_json(j.at("standardizer"));
  m.iforest = iforest_from_json(j.at("iforest"));
  return m;
}

void save_direction(const DirectionModel& m, const std::string& path) {
  json j{{"format_version", 1},
         {"kind", "direction"},
         {"feature_names", m.feature_names},
         {"standardizer", standardizer_to_json(m.model.standardizer)},
         {"linear", linear_to_json(m.model)}};
  write_file(path, j.dump(2) + "\n");
}

DirectionModel load_direction(const std::string& path) {
  json j = load_model_json(path, "direction");
  DirectionModel m;
  m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  linear_from_json(j.at("linear"), m.model);
  m.model.standardizer = standardizer_from_json(j.at("standardizer"));
  return m;
}

// ---------------------------------------------------------------------------
// Direction.
// ---------------------------------------------------------------------------

DirectionModel train_direction(const Corpus& corpus, const std::vector<Event>& events,
                               const LinearFitConfig& cfg, uint64_t seed) {
  if (events.empty()) throw Error("train_direction: no events");
  Matrix x;
  std::vector<int> y;
  for (const auto& e : events) {
    DirectionExample ex = direction_featurize(corpus, e);
    x.push_back(std::move(ex.features));
    y.push_back(ex.label);
  }
  DirectionModel m;
  m.feature_names = direction_feature_names();
  m.model = linear_fit(x, y, LinearKind::hinge, cfg, seed);
  return m;
}

DirectionPrediction predict_direction(const DirectionModel& m,
                                      const DirectionExample& ex) {
  DirectionPrediction p;
  p.margin = m.model.decision(ex.features);
  p.label = p.margin > 0.0 ? 1 : 0;
  return p;
}

DirectionCvResult direction_cv(const Corpus& corpus, const std::vector<Event>& events,
                               int folds, const LinearFitConfig& cfg, uint64_t seed) {
  if (folds < 2) throw Error("direction_cv: need at least 2 folds");
  std::vector<DirectionExample> examples;
  examples.reserve(events.size());
  for (const auto& e : events) examples.push_back(direction_featurize(corpus, e));

  std::vector<size_t> pos_idx, neg_idx;
  for (size_t i = 0; i < examples.size(); ++i)
    (examples[i].label == 1 ? pos_idx : neg_idx).push_back(i);
  if (pos_idx.size() < static_cast<size_t>(folds) ||
      neg_idx.size() < static_cast<size_t>(folds))
    throw Error("direction_cv: too few examples per class for " +
                std::to_string(folds) + " folds");

  Rng rng(seed);
  rng.shuffle(pos_idx);
  rng.shuffle(neg_idx);
  std::vector<int> fold(examples.size());
  for (size_t i = 0; i < pos_idx.size(); ++i)
    fold[pos_idx[i]] = static_cast<int>(i % static_cast<size_t>(folds));
  for (size_t i = 0; i < neg_idx.size(); ++i)
    fold[neg_idx[i]] = static_cast<int>(i % static_cast<size_t>(folds));

  DirectionCvResult out;
  double p_sum = 0, r_sum = 0, f_sum = 0;
  for (int k = 0; k < folds; ++k) {
    Matrix x;
    std::vector<int> y;
    for (size_t i = 0; i < examples.size(); ++i) {
      if (fold[i] == k) continue;
      x.push_back(examples[i].features);
      y.push_back(examples[i].label);
    }
    LinearModel m = linear_fit(x, y, LinearKind::hinge, cfg, seed);
    std::vector<int> pred, actual;
    for (size_t i = 0; i < examples.size(); ++i) {
      if (fold[i] != k) continue;
      pred.push_back(m.label(examples[i].features));
      actual.push_back(examples[i].label);
    }
    Prf fold_prf = prf(pred, actual);
    int64_t correct = fold_prf.tp + fold_prf.tn;
    double acc = static_cast<double>(correct) / static_cast<double>(pred.size());
    out.fold_accuracy.push_back(acc);
    p_sum += fold_prf.precision;
    r_sum += fold_prf.recall;
    f_sum += fold_prf.f_score;
  }
  double nf = static_cast<double>(folds);
  for (double a : out.fold_accuracy) out.accuracy += a;
  out.accuracy /= nf;
  out.mean_prf.precision = p_sum / nf;
  out.mean_prf.recall = r_sum / nf;
  out.mean_prf.f_score = f_sum / nf;
  return out;
}

// ---------------------------------------------------------------------------
// Early prediction.
// ---------------------------------------------------------------------------

std::vector<EarlyPoint> early_eval(const TwoStepModel& m, const Corpus& corpus,
                                   const std::vector<Event>& merge_events,
                                   const EarlyEvalInputs& inputs) {
  if (merge_events.empty()) throw Error("early_eval: no merge events");
  std::vector<int> detect_month(merge_events.size(), -1);
  int max_months = 0;

  for (size_t i = 0; i < merge_events.size(); ++i) {
    const Event& e = merge_events[i];
    CandidatePair pair = make_candidate_pair(corpus, e.src, e.dst, "merge");
    int64_t later = std::max(corpus.topic(e.src).created_at,
                             corpus.topic(e.dst).created_at);
    for (int month = 1;; ++month) {
      int64_t cutoff = later + static_cast<int64_t>(month) * kMonthSeconds;
      bool last = cutoff >= e.at;
      if (last) cutoff = e.at;

      SnapshotView v = corpus.snapshot(cutoff);
      Ontology onto = build_ontology(corpus, v.visible_events());
      InformationContent ic = information_content(onto, v);
      FeatureContext ctx(v, &onto, &ic, inputs.vectors, inputs.taxonomy,
                         inputs.feature_cfg, inputs.tokens);
      ctx.prepare({pair});
      Matrix f{ctx.featurize(pair)};
      auto pred = predict_two_step(m, {pair}, f);
      if (pred[0].label == 1) {
        detect_month[i] = month;
        max_months = std::max(max_months, month);
        break;
      }
      if (last) {
        max_months = std::max(max_months, month);
        break;
      }
    }
  }

  std::vector<EarlyPoint> curve;
  int64_t total = static_cast<int64_t>(merge_events.size());
  for (int month = 1; month <= max_months; ++month) {
    EarlyPoint pt;
    pt.month = month;
    pt.total = total;
    for (int dm : detect_month)
      if (dm != -1 && dm <= month) ++pt.detected;
    pt.recall = static_cast<double>(pt.detected) / static_cast<double>(total);
    curve.push_back(pt);
  }
  return curve;
}

// ---------------------------------------------------------------------------
// Dataset assembly.
// ---------------------------------------------------------------------------

std::vector<GroundTruthPair> load_ground_truth(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);
  std::vector<GroundTruthPair> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      json j = json::parse(line);
      GroundTruthPair p;
      p.t1 = j.at("t1").get<std::string>();
      p.t2 = j.at("t2").get<std::string>();
      p.cls = j.at("class").get<std::string>();
      if (j.contains("winner") && !j.at("winner").is_null())
        p.winner = j.at("winner").get<std::string>();
      if (p.cls != "merge" && p.cls != "unmerge" && p.cls != "neighbor" &&
          p.cls != "generated")
        throw Error("unknown pair class \"" + p.cls + "\"");
      out.push_back(std::move(p));
    } catch (const std::exception& e) {
      throw Error(path + " line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void save_ground_truth(const std::vector<GroundTruthPair>& pairs,
                       const std::string& path) {
  std::string out;
  for (const auto& p : pairs) {
    json j{{"t1", p.t1}, {"t2", p.t2}, {"class", p.cls}};
    if (!p.winner.empty()) j["winner"] = p.winner;
    out += j.dump() + "\n";
  }
  write_file(path, out);
}

PairDataset assemble_dataset(const Corpus& corpus,
                             const std::vector<GroundTruthPair>* ground_truth,
                             const FilterConfig& filters, const AssembleConfig& cfg) {
  PairDataset ds;
  std::vector<Event> merges = collect_merge_pairs(corpus);
  if (merges.empty()) throw Error("assemble_dataset: corpus has no usable merge events");
  auto [train_ev, test_ev] = chrono_split(merges, cfg.train_fraction);
  ds.train_events = train_ev;
  ds.test_events = test_ev;

  std::unordered_set<std::string> taken;
  auto add_pair = [&](std::vector<CandidatePair>& dst, const std::string& a,
                      const std::string& b, const std::string& prov) {
    CandidatePair p = make_candidate_pair(corpus, a, b, prov);
    if (!taken.insert(p.key()).second) return false;
    dst.push_back(std::move(p));
    return true;
  };
  for (const auto& e : train_ev) add_pair(ds.train_pos, e.src, e.dst, "merge");
  for (const auto& e : test_ev) add_pair(ds.test_pos, e.src, e.dst, "merge");

  std::vector<CandidatePair> pool;
  if (ground_truth) {
    for (const auto& g : *ground_truth) {
      if (g.cls == "unmerge" || g.cls == "neighbor")
        add_pair(ds.train_neg, g.t1, g.t2, g.cls);
    }
    for (const auto& g : *ground_truth) {
      if (g.cls == "generated") add_pair(pool, g.t1, g.t2, "generated");
    }
  } else {
    // Reverted merges are hard negatives.
    std::unordered_set<std::string> kept_keys;
    for (const auto& e : merges)
      kept_keys.insert(make_candidate_pair(corpus, e.src, e.dst, "merge").key());
    for (const auto& e : corpus.events()) {
      if (e.kind != EventKind::merge) continue;
      CandidatePair p = make_candidate_pair(corpus, e.src, e.dst, "unmerge");
      if (kept_keys.count(p.key())) continue;
      if (taken.insert(p.key()).second) ds.train_neg.push_back(std::move(p));
    }
    // One-hop ontology neighborhoods of the merging pairs.
    Ontology onto = build_ontology(corpus, corpus.events());
    std::vector<CandidatePair> neighbors;
    std::unordered_set<std::string> neighbor_keys;
    for (const auto& e : merges) {
      auto expand = [&](const std::string& id) {
        std::vector<std::string> out{id};
        int idx = onto.index_of(id);
        if (idx >= 0)
          for (int nb : onto.neighbors(idx)) out.push_back(onto.id_of(nb));
        return out;
      };
      for (const auto& x : expand(e.src))
        for (const auto& y : expand(e.dst)) {
          if (x == y) continue;
          CandidatePair p = make_candidate_pair(corpus, x, y, "neighbor");
          if (taken.count(p.key()) || !neighbor_keys.insert(p.key()).second) continue;
          neighbors.push_back(std::move(p));
        }
    }
    std::sort(neighbors.begin(), neighbors.end(),
              [](const CandidatePair& a, const CandidatePair& b) { return a.key() < b.key(); });
    Rng nrng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    nrng.shuffle(neighbors);
    if (neighbors.size() > cfg.max_neighbor_pairs) neighbors.resize(cfg.max_neighbor_pairs);
    for (auto& p : neighbors) {
      taken.insert(p.key());
      ds.train_neg.push_back(std::move(p));
    }
    // Everything else comes from the candidate generator.
    for (auto& p : generate_candidates(corpus.full_view(), filters)) {
      if (taken.count(p.key())) continue;
      if (taken.insert(p.key()).second) pool.push_back(std::move(p));
    }
  }

  std::sort(pool.begin(), pool.end(),
            [](const CandidatePair& a, const CandidatePair& b) { return a.key() < b.key(); });
  Rng rng(cfg.seed);
  rng.shuffle(pool);
  size_t n_anomaly = std::min(cfg.anomaly_train_size, pool.size() / 2);
  ds.anomaly.assign(pool.begin(), pool.begin() + static_cast<ptrdiff_t>(n_anomaly));
  ds.test_neg.assign(pool.begin() + static_cast<ptrdiff_t>(n_anomaly), pool.end());
  return ds;
}

std::vector<AblationRow> run_ablation(const Matrix& pos, const Matrix& neg,
                                      const Matrix& anomaly, const Matrix& test,
                                      const std::vector<int>& test_labels,
                                      const TwoStepConfig& cfg, uint64_t seed) {
  const std::vector<std::pair<std::string, std::vector<FeatureGroup>>> combos = {
      {"question_content+ontology+external",
       {FeatureGroup::question_content, FeatureGroup::ontology, FeatureGroup::external}},
      {"question_content", {FeatureGroup::question_content}},
      {"ontology", {FeatureGroup::ontology}},
      {"external", {FeatureGroup::external}},
      {"question_content+ontology",
       {FeatureGroup::question_content, FeatureGroup::ontology}},
      {"question_content+external",
       {FeatureGroup::question_content, FeatureGroup::external}},
      {"ontology+external", {FeatureGroup::ontology, FeatureGroup::external}},
  };

  auto restrict = [](const Matrix& m, const std::vector<size_t>& cols) {
    Matrix out(m.size());
    for (size_t i = 0; i < m.size(); ++i) {
      out[i].reserve(cols.size());
      for (size_t c : cols) out[i].push_back(m[i][c]);
    }
    return out;
  };

  std::vector<AblationRow> rows;
  for (const auto& [label, groups] : combos) {
    std::vector<size_t> cols = feature_indices(groups);
    TwoStepModel m = train_two_step_features(restrict(pos, cols), restrict(neg, cols),
                                             restrict(anomaly, cols), cfg, seed);
    Matrix test_r = restrict(test, cols);
    std::vector<CandidatePair> dummy(test_r.size());
    auto preds = predict_two_step(m, dummy, test_r);
    std::vector<int> pred_labels;
    pred_labels.reserve(preds.size());
    for (const auto& p : preds) pred_labels.push_back(p.label);
    AblationRow row;
    row.label = label;
    row.groups = groups;
    row.prf = prf(pred_labels, test_labels);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace topicmerge
