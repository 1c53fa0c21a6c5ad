// Command line surface for the topic merge toolkit. Every subcommand is
// deterministic given fixed inputs and seed; none of them mutate inputs.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>
#include <unordered_map>

#include "CLI11.hpp"
#include "json.hpp"
#include "topicmerge/corpus.hpp"
#include "topicmerge/embed.hpp"
#include "topicmerge/features.hpp"
#include "topicmerge/models.hpp"
#include "topicmerge/ontology.hpp"
#include "topicmerge/pipeline.hpp"
#include "topicmerge/synth.hpp"
#include "topicmerge/util.hpp"

namespace fs = std::filesystem;
using namespace topicmerge;
using nlohmann::json;

namespace {

int default_jobs() {
  unsigned n = std::thread::hardware_concurrency();
  return n ? static_cast<int>(n) : 1;
}

void ensure_out_dir(const std::string& out) {
  if (!out.empty()) fs::create_directories(out);
}

std::string out_path(const std::string& out, const std::string& name) {
  return out.empty() ? name : out + "/" + name;
}

void write_run_config(CLI::App* sub, const std::string& out) {
  ensure_out_dir(out);
  write_file(out_path(out, "run_config.txt"),
             "[" + sub->get_name() + "]\n" + sub->config_to_str(true, false));
}

// Everything the feature pipeline needs for one corpus, loaded once.
struct Workspace {
  explicit Workspace(Corpus c) : corpus(std::move(c)) {}

  Corpus corpus;
  Ontology onto;
  InformationContent ic;
  VectorTable vectors;
  Ontology word_taxonomy;
  bool has_vectors = false;
  bool has_taxonomy = false;
  TokenCache tokens;
  FeatureConfig fcfg;
};

Workspace load_workspace(const std::string& dir, const std::string& vectors_path,
                         const std::string& taxonomy_path) {
  Workspace w{load_corpus_dir(dir)};
  w.onto = build_ontology(w.corpus, w.corpus.events());
  w.ic = information_content(w.onto, w.corpus.full_view());
  if (!vectors_path.empty()) {
    w.vectors = load_vectors(vectors_path);
    w.has_vectors = true;
  }
  if (!taxonomy_path.empty()) {
    w.word_taxonomy = load_taxonomy(taxonomy_path);
    w.has_taxonomy = true;
  }
  w.tokens = TokenCache::build(w.corpus, nullptr);
  return w;
}

FeatureContext make_context(const Workspace& w) {
  return FeatureContext(w.corpus.full_view(), &w.onto, &w.ic,
                        w.has_vectors ? &w.vectors : nullptr,
                        w.has_taxonomy ? &w.word_taxonomy : nullptr, w.fcfg,
                        &w.tokens);
}

// Preallocated output slots keep the result order independent of job count.
Matrix featurize_parallel(const FeatureContext& ctx,
                          const std::vector<CandidatePair>& pairs, int jobs) {
  Matrix out(pairs.size());
  if (jobs < 1) jobs = 1;
  if (jobs == 1 || pairs.size() < 2) {
    for (size_t i = 0; i < pairs.size(); ++i) out[i] = ctx.featurize(pairs[i]);
    return out;
  }
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> workers;
  auto n_workers = std::min<size_t>(static_cast<size_t>(jobs), pairs.size());
  for (size_t t = 0; t < n_workers; ++t)
    workers.emplace_back([&] {
      try {
        for (size_t i; (i = next.fetch_add(1)) < pairs.size();) {
          if (failed.load()) return;
          out[i] = ctx.featurize(pairs[i]);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        failed.store(true);
      }
    });
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
  return out;
}

// ---------------------------------------------------------------------------
// CSV plumbing. Fields in our files never contain commas or quotes.
// ---------------------------------------------------------------------------

struct PairRows {
  std::vector<CandidatePair> pairs;
  std::vector<int> labels;  // -1 when the file carries no label column
};

PairRows read_pairs_csv(const std::string& path, const Corpus& corpus) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);
  PairRows rows;
  std::string line;
  size_t lineno = 0;
  size_t label_col = SIZE_MAX, prov_col = SIZE_MAX, t1_col = 0, t2_col = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells = split(line, ',');
    if (lineno == 1 && !cells.empty() && cells[0] == "t1") {
      for (size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] == "t1") t1_col = i;
        if (cells[i] == "t2") t2_col = i;
        if (cells[i] == "label") label_col = i;
        if (cells[i] == "provenance") prov_col = i;
      }
      continue;
    }
    if (cells.size() < 2)
      throw Error(path + " line " + std::to_string(lineno) + ": expected t1,t2");
    try {
      std::string prov =
          prov_col != SIZE_MAX && prov_col < cells.size() ? cells[prov_col] : "file";
      rows.pairs.push_back(
          make_candidate_pair(corpus, cells.at(t1_col), cells.at(t2_col), prov));
    } catch (const std::exception& e) {
      throw Error(path + " line " + std::to_string(lineno) + ": " + e.what());
    }
    int label = -1;
    if (label_col != SIZE_MAX && label_col < cells.size() && !cells[label_col].empty())
      label = std::stoi(cells[label_col]);
    rows.labels.push_back(label);
  }
  return rows;
}

void write_pairs_csv(const std::string& path, const std::vector<CandidatePair>& pairs,
                     const std::vector<int>& labels) {
  std::string buf = "t1,t2,label,provenance\n";
  for (size_t i = 0; i < pairs.size(); ++i)
    buf += pairs[i].t1 + "," + pairs[i].t2 + "," + std::to_string(labels[i]) + "," +
           pairs[i].provenance + "\n";
  write_file(path, buf);
}

json prf_to_json(const Prf& p) {
  return json{{"precision", p.precision},
              {"recall", p.recall},
              {"f_score", p.f_score},
              {"counts",
               {{"tp", p.tp},
                {"fp", p.fp},
                {"fn", p.fn},
                {"tn", p.tn},
                {"total", p.tp + p.fp + p.fn + p.tn}}}};
}

// ---------------------------------------------------------------------------
// Shared option bundles.
// ---------------------------------------------------------------------------

struct IoArgs {
  std::string dir;
  std::string out;
  std::string vectors;
  std::string taxonomy;
  uint64_t seed = 0;
  int jobs = default_jobs();
};

void add_common(CLI::App* sub, IoArgs& a, bool seed_required) {
  sub->add_option("--dir", a.dir, "Corpus directory (topics/questions/events .jsonl)")
      ->required();
  sub->add_option("--out", a.out, "Output directory")->required();
  sub->add_option("--vectors", a.vectors, "Word embedding file (word v1 .. vN per line)");
  sub->add_option("--taxonomy", a.taxonomy, "Word taxonomy TSV (child<TAB>parent)");
  auto* seed = sub->add_option("--seed", a.seed, "Random seed");
  if (seed_required) seed->required();
  sub->add_option("--jobs", a.jobs, "Worker threads for featurization")
      ->capture_default_str();
}

struct TrainArgs {
  IoArgs io;
  std::string ground_truth;
  bool no_ground_truth = false;
  double train_fraction = 0.7;
  size_t anomaly_size = 200000;
  size_t max_neighbor_pairs = 5000;
  int trees = 100;
  int psi = 256;
  double contamination = 0.2;
  double c = 1.0;
  FilterConfig filters;
};

void add_train_options(CLI::App* sub, TrainArgs& a) {
  add_common(sub, a.io, true);
  sub->add_option("--ground-truth", a.ground_truth,
                  "Labeled pair file (default: <dir>/ground_truth.jsonl if present)");
  sub->add_flag("--no-ground-truth", a.no_ground_truth,
                "Derive negatives from events and the candidate generator");
  sub->add_option("--train-fraction", a.train_fraction, "Chronological split point")
      ->capture_default_str();
  sub->add_option("--anomaly-size", a.anomaly_size,
                  "Max unlabeled pairs reserved for the anomaly filter")
      ->capture_default_str();
  sub->add_option("--max-neighbor-pairs", a.max_neighbor_pairs,
                  "Neighbor negatives cap when deriving from the ontology")
      ->capture_default_str();
  sub->add_option("--trees", a.trees, "Isolation forest size")->capture_default_str();
  sub->add_option("--psi", a.psi, "Isolation forest subsample")->capture_default_str();
  sub->add_option("--contamination", a.contamination, "Anomaly filter quantile")
      ->capture_default_str();
  sub->add_option("--c", a.c, "Logistic regression inverse regularization")
      ->capture_default_str();
  sub->add_option("--min-questions", a.filters.min_questions,
                  "Candidate filter: visible questions per side")
      ->capture_default_str();
  sub->add_option("--jw-threshold", a.filters.jw_threshold,
                  "Candidate filter: drop near-duplicate names at or above this")
      ->capture_default_str();
  sub->add_option("--cooccur-threshold", a.filters.cooccur_threshold,
                  "Candidate filter: minimum co-occurrence overlap")
      ->capture_default_str();
}

struct AssembledRun {
  Workspace ws;
  PairDataset ds;
};

AssembledRun assemble_run(const TrainArgs& a) {
  AssembledRun run{load_workspace(a.io.dir, a.io.vectors, a.io.taxonomy), {}};
  std::string gt_path = a.ground_truth;
  if (gt_path.empty() && !a.no_ground_truth) {
    std::string candidate = a.io.dir + "/ground_truth.jsonl";
    if (fs::exists(candidate)) gt_path = candidate;
  }
  AssembleConfig cfg;
  cfg.train_fraction = a.train_fraction;
  cfg.anomaly_train_size = a.anomaly_size;
  cfg.max_neighbor_pairs = a.max_neighbor_pairs;
  cfg.seed = a.io.seed;
  if (!gt_path.empty() && !a.no_ground_truth) {
    std::vector<GroundTruthPair> gt = load_ground_truth(gt_path);
    run.ds = assemble_dataset(run.ws.corpus, &gt, a.filters, cfg);
  } else {
    run.ds = assemble_dataset(run.ws.corpus, nullptr, a.filters, cfg);
  }
  return run;
}

TwoStepConfig two_step_config(const TrainArgs& a) {
  TwoStepConfig cfg;
  cfg.iforest.n_trees = a.trees;
  cfg.iforest.subsample = a.psi;
  cfg.iforest.contamination = a.contamination;
  cfg.linear.c = a.c;
  return cfg;
}

// ---------------------------------------------------------------------------
// Subcommands.
// ---------------------------------------------------------------------------

void cmd_synth(const SynthConfig& cfg, const std::string& out, CLI::App* sub) {
  SynthData data = generate_synth(cfg);
  write_synth(data, out);
  write_run_config(sub, out);
  std::cout << "wrote " << data.topics.size() << " topics, " << data.questions.size()
            << " questions, " << data.events.size() << " events, "
            << data.ground_truth.size() << " labeled pairs to " << out << "\n";
}

void cmd_ingest(const std::string& dir, const std::string& out, CLI::App* sub) {
  Corpus corpus = load_corpus_dir(dir);
  int64_t merges = 0, unmerges = 0, parent_adds = 0;
  for (const auto& e : corpus.events()) {
    if (e.kind == EventKind::merge) ++merges;
    if (e.kind == EventKind::unmerge) ++unmerges;
    if (e.kind == EventKind::parent_add) ++parent_adds;
  }
  Ontology onto = build_ontology(corpus, corpus.events());
  OntologyStats stats = ontology_stats(onto);
  json j{{"topics", corpus.topics().size()},
         {"questions", corpus.questions().size()},
         {"events",
          {{"merge", merges}, {"unmerge", unmerges}, {"parent_add", parent_adds}}},
         {"usable_merge_pairs", collect_merge_pairs(corpus).size()},
         {"ontology",
          {{"nodes", stats.nodes},
           {"edges", stats.edges},
           {"components", stats.components},
           {"largest_component", stats.largest_component},
           {"singletons", stats.singletons},
           {"depth_edges", stats.depth_edges},
           {"avg_degree", stats.avg_degree},
           {"avg_degree_largest", stats.avg_degree_largest}}}};
  std::cout << j.dump(2) << "\n";
  if (!out.empty()) {
    ensure_out_dir(out);
    write_file(out_path(out, "corpus_summary.json"), j.dump(2) + "\n");
    write_run_config(sub, out);
  }
}

void cmd_candidates(const std::string& dir, const std::string& out,
                    const FilterConfig& filters, CLI::App* sub) {
  Corpus corpus = load_corpus_dir(dir);
  std::vector<CandidatePair> pairs = generate_candidates(corpus.full_view(), filters);
  ensure_out_dir(out);
  std::string buf = "t1,t2\n";
  for (const auto& p : pairs) buf += p.t1 + "," + p.t2 + "\n";
  write_file(out_path(out, "candidates.csv"), buf);
  write_run_config(sub, out);
  std::cout << "wrote " << pairs.size() << " candidate pairs\n";
}

void cmd_featurize(const IoArgs& io, const std::string& pairs_path,
                   const std::string& gt_path, CLI::App* sub) {
  Workspace ws = load_workspace(io.dir, io.vectors, io.taxonomy);
  std::vector<CandidatePair> pairs;
  std::vector<int> labels;
  if (!pairs_path.empty()) {
    PairRows rows = read_pairs_csv(pairs_path, ws.corpus);
    pairs = std::move(rows.pairs);
    labels = std::move(rows.labels);
  } else {
    std::string path = gt_path.empty() ? io.dir + "/ground_truth.jsonl" : gt_path;
    for (const auto& g : load_ground_truth(path)) {
      pairs.push_back(make_candidate_pair(ws.corpus, g.t1, g.t2, g.cls));
      labels.push_back(g.cls == "merge" ? 1 : 0);
    }
  }
  FeatureContext ctx = make_context(ws);
  ctx.prepare(pairs);
  Matrix x = featurize_parallel(ctx, pairs, io.jobs);

  std::string buf = "t1,t2,label,provenance";
  for (const auto& name : feature_names()) buf += "," + name;
  buf += "\n";
  for (size_t i = 0; i < pairs.size(); ++i) {
    buf += pairs[i].t1 + "," + pairs[i].t2 + "," + std::to_string(labels[i]) + "," +
           pairs[i].provenance;
    for (double v : x[i]) buf += "," + fmt_double(v);
    buf += "\n";
  }
  ensure_out_dir(io.out);
  write_file(out_path(io.out, "features.csv"), buf);
  write_run_config(sub, io.out);
  std::cout << "wrote features for " << pairs.size() << " pairs\n";
}

void cmd_train(const TrainArgs& a, CLI::App* sub) {
  AssembledRun run = assemble_run(a);
  PairDataset& ds = run.ds;
  FeatureContext ctx = make_context(run.ws);
  ctx.prepare(ds.train_pos);
  ctx.prepare(ds.train_neg);
  ctx.prepare(ds.anomaly);

  TwoStepConfig cfg = two_step_config(a);
  Matrix pos = featurize_parallel(ctx, ds.train_pos, a.io.jobs);
  Matrix neg = featurize_parallel(ctx, ds.train_neg, a.io.jobs);
  Matrix anomaly = featurize_parallel(ctx, ds.anomaly, a.io.jobs);
  TwoStepModel model = train_two_step_features(pos, neg, anomaly, cfg, a.io.seed);
  model.feature_names = feature_names();

  DirectionModel direction =
      train_direction(run.ws.corpus, ds.train_events, cfg.linear, a.io.seed);

  ensure_out_dir(a.io.out);
  save_two_step(model, out_path(a.io.out, "model.json"));
  save_direction(direction, out_path(a.io.out, "direction_model.json"));

  std::vector<CandidatePair> train_pairs = ds.train_pos;
  std::vector<int> train_labels(ds.train_pos.size(), 1);
  train_pairs.insert(train_pairs.end(), ds.train_neg.begin(), ds.train_neg.end());
  train_labels.insert(train_labels.end(), ds.train_neg.size(), 0);
  write_pairs_csv(out_path(a.io.out, "train_pairs.csv"), train_pairs, train_labels);

  std::vector<CandidatePair> test_pairs = ds.test_pos;
  std::vector<int> test_labels(ds.test_pos.size(), 1);
  test_pairs.insert(test_pairs.end(), ds.test_neg.begin(), ds.test_neg.end());
  test_labels.insert(test_labels.end(), ds.test_neg.size(), 0);
  write_pairs_csv(out_path(a.io.out, "test_pairs.csv"), test_pairs, test_labels);

  write_pairs_csv(out_path(a.io.out, "anomaly_pairs.csv"), ds.anomaly,
                  std::vector<int>(ds.anomaly.size(), 0));
  write_run_config(sub, a.io.out);
  std::cout << "trained on " << ds.train_pos.size() << " merge / " << ds.train_neg.size()
            << " negative pairs, " << ds.anomaly.size() << " anomaly-pool pairs; "
            << "test set " << test_pairs.size() << " pairs\n";
}

void cmd_predict(const IoArgs& io, const std::string& model_path,
                 const std::string& pairs_path, bool skip_filter, CLI::App* sub) {
  Workspace ws = load_workspace(io.dir, io.vectors, io.taxonomy);
  TwoStepModel model = load_two_step(model_path);
  PairRows rows = read_pairs_csv(pairs_path, ws.corpus);
  FeatureContext ctx = make_context(ws);
  ctx.prepare(rows.pairs);
  Matrix x = featurize_parallel(ctx, rows.pairs, io.jobs);
  std::vector<PairPrediction> preds = predict_two_step(model, rows.pairs, x, skip_filter);

  std::string buf = "t1,t2,stage,score,label\n";
  for (const auto& p : preds)
    buf += p.pair.t1 + "," + p.pair.t2 + "," +
           (p.stage == PredictionStage::filtered ? "filtered" : "classified") + "," +
           fmt_double(p.score) + "," + std::to_string(p.label) + "\n";
  ensure_out_dir(io.out);
  write_file(out_path(io.out, "predictions.csv"), buf);
  write_run_config(sub, io.out);
  int64_t positive = 0, filtered = 0;
  for (const auto& p : preds) {
    positive += p.label;
    filtered += p.stage == PredictionStage::filtered;
  }
  std::cout << preds.size() << " pairs: " << filtered << " filtered, " << positive
            << " predicted merges\n";
}

void cmd_eval(const std::string& predictions_path, const std::string& pairs_path,
              const std::string& out, CLI::App* sub) {
  std::ifstream in(predictions_path);
  if (!in) throw Error("cannot open file: " + predictions_path);
  auto key = [](const std::string& a, const std::string& b) {
    return a < b ? a + "\x1f" + b : b + "\x1f" + a;
  };
  std::unordered_map<std::string, int> truth;
  {
    std::ifstream pin(pairs_path);
    if (!pin) throw Error("cannot open file: " + pairs_path);
    std::string line;
    size_t lineno = 0;
    while (std::getline(pin, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || (lineno == 1 && line.rfind("t1,", 0) == 0)) continue;
      std::vector<std::string> cells = split(line, ',');
      if (cells.size() < 3)
        throw Error(pairs_path + " line " + std::to_string(lineno) +
                    ": expected t1,t2,label");
      truth[key(cells[0], cells[1])] = std::stoi(cells[2]);
    }
  }
  std::vector<int> predicted, actual;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (lineno == 1 && line.rfind("t1,", 0) == 0)) continue;
    std::vector<std::string> cells = split(line, ',');
    if (cells.size() < 5)
      throw Error(predictions_path + " line " + std::to_string(lineno) +
                  ": expected t1,t2,stage,score,label");
    auto it = truth.find(key(cells[0], cells[1]));
    if (it == truth.end())
      throw Error(predictions_path + " line " + std::to_string(lineno) +
                  ": pair missing from " + pairs_path);
    predicted.push_back(std::stoi(cells[4]));
    actual.push_back(it->second);
  }
  Prf metrics = prf(predicted, actual);
  json j = prf_to_json(metrics);
  ensure_out_dir(out);
  write_file(out_path(out, "metrics.json"), j.dump(2) + "\n");
  write_run_config(sub, out);
  std::cout << "precision " << metrics.precision << " recall " << metrics.recall
            << " F " << metrics.f_score << " over " << predicted.size() << " pairs\n";
}

void cmd_early_eval(const IoArgs& io, const std::string& model_path,
                    double train_fraction, CLI::App* sub) {
  Workspace ws = load_workspace(io.dir, io.vectors, io.taxonomy);
  TwoStepModel model = load_two_step(model_path);
  std::vector<Event> merges = collect_merge_pairs(ws.corpus);
  auto [train_ev, test_ev] = chrono_split(merges, train_fraction);
  EarlyEvalInputs inputs;
  inputs.vectors = ws.has_vectors ? &ws.vectors : nullptr;
  inputs.taxonomy = ws.has_taxonomy ? &ws.word_taxonomy : nullptr;
  inputs.feature_cfg = ws.fcfg;
  inputs.tokens = &ws.tokens;
  std::vector<EarlyPoint> curve = early_eval(model, ws.corpus, test_ev, inputs);

  std::string buf = "month,detected,total,recall\n";
  for (const auto& pt : curve)
    buf += std::to_string(pt.month) + "," + std::to_string(pt.detected) + "," +
           std::to_string(pt.total) + "," + fmt_double(pt.recall) + "\n";
  ensure_out_dir(io.out);
  write_file(out_path(io.out, "early_curve.csv"), buf);
  write_run_config(sub, io.out);
  if (!curve.empty())
    std::cout << "recall " << curve.front().recall << " at month 1, "
              << curve.back().recall << " at month " << curve.back().month << " ("
              << curve.back().total << " merges)\n";
}

void cmd_ablate(const TrainArgs& a, CLI::App* sub) {
  AssembledRun run = assemble_run(a);
  PairDataset& ds = run.ds;
  FeatureContext ctx = make_context(run.ws);
  ctx.prepare(ds.train_pos);
  ctx.prepare(ds.train_neg);
  ctx.prepare(ds.anomaly);
  ctx.prepare(ds.test_pos);
  ctx.prepare(ds.test_neg);

  Matrix pos = featurize_parallel(ctx, ds.train_pos, a.io.jobs);
  Matrix neg = featurize_parallel(ctx, ds.train_neg, a.io.jobs);
  Matrix anomaly = featurize_parallel(ctx, ds.anomaly, a.io.jobs);
  std::vector<CandidatePair> test_pairs = ds.test_pos;
  test_pairs.insert(test_pairs.end(), ds.test_neg.begin(), ds.test_neg.end());
  std::vector<int> test_labels(ds.test_pos.size(), 1);
  test_labels.insert(test_labels.end(), ds.test_neg.size(), 0);
  Matrix test = featurize_parallel(ctx, test_pairs, a.io.jobs);

  std::vector<AblationRow> rows =
      run_ablation(pos, neg, anomaly, test, test_labels, two_step_config(a), a.io.seed);
  std::string buf = "groups,precision,recall,f_score\n";
  for (const auto& r : rows)
    buf += r.label + "," + fmt_double(r.prf.precision) + "," + fmt_double(r.prf.recall) +
           "," + fmt_double(r.prf.f_score) + "\n";
  ensure_out_dir(a.io.out);
  write_file(out_path(a.io.out, "ablation.csv"), buf);
  write_run_config(sub, a.io.out);
  std::cout << "wrote " << rows.size() << " ablation rows\n";
}

void cmd_rank_features(const TrainArgs& a, CLI::App* sub) {
  AssembledRun run = assemble_run(a);
  PairDataset& ds = run.ds;
  FeatureContext ctx = make_context(run.ws);
  ctx.prepare(ds.train_pos);
  ctx.prepare(ds.train_neg);
  Matrix x = featurize_parallel(ctx, ds.train_pos, a.io.jobs);
  Matrix neg = featurize_parallel(ctx, ds.train_neg, a.io.jobs);
  std::vector<int> y(x.size(), 1);
  x.insert(x.end(), neg.begin(), neg.end());
  y.insert(y.end(), neg.size(), 0);

  LinearFitConfig cfg;
  cfg.c = a.c;
  std::vector<int> ranks = rfe_rank(x, y, cfg, a.io.seed);
  std::vector<std::string> names = feature_names();
  std::vector<size_t> order(names.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t lhs, size_t rhs) {
    return ranks[lhs] != ranks[rhs] ? ranks[lhs] < ranks[rhs] : lhs < rhs;
  });
  std::string buf = "rank,feature\n";
  for (size_t i : order) buf += std::to_string(ranks[i]) + "," + names[i] + "\n";
  ensure_out_dir(a.io.out);
  write_file(out_path(a.io.out, "rfe.csv"), buf);
  write_run_config(sub, a.io.out);
  std::cout << "top feature: " << names[order.front()] << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topic merge prediction toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a key-value config file");

  // synth
  SynthConfig synth_cfg;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--seed", synth_cfg.seed, "Random seed")->required();
  synth->add_option("--topics", synth_cfg.topics, "Content topics")->capture_default_str();
  synth->add_option("--merge-pairs", synth_cfg.merge_pairs, "Planted merge pairs")
      ->capture_default_str();
  synth->add_option("--unmerge-pairs", synth_cfg.unmerge_pairs, "Planted reverted merges")
      ->capture_default_str();
  synth->add_option("--neighbor-pairs", synth_cfg.neighbor_pairs, "Same-family negatives")
      ->capture_default_str();
  synth->add_option("--generated-pairs", synth_cfg.generated_pairs, "Unlabeled pair pool")
      ->capture_default_str();
  synth->add_option("--families", synth_cfg.families, "Topic families")
      ->capture_default_str();
  synth->add_option("--tags-per-family", synth_cfg.tags_per_family, "Tag topics per family")
      ->capture_default_str();
  synth->add_option("--dim", synth_cfg.dim, "Embedding dimension")->capture_default_str();
  synth->add_option("--older-wins-rate", synth_cfg.older_wins_rate,
                    "Probability the older topic absorbs the younger")
      ->capture_default_str();
  synth->add_option("--cousin-fraction", synth_cfg.cousin_fraction,
                    "Same-family share of generated pairs")
      ->capture_default_str();
  synth->add_option("--twin-vocab-share", synth_cfg.twin_vocab_share,
                    "Partner vocabulary copied into reverted-merge twins")
      ->capture_default_str();
  synth->add_option("--merge-vocab-share", synth_cfg.merge_vocab_share,
                    "Concept draws from the shared pool vs per-topic words")
      ->capture_default_str();
  synth->add_option("--concept-word-rate", synth_cfg.concept_word_rate,
                    "Concept vocabulary rate in question text")
      ->capture_default_str();
  synth->add_option("--family-word-rate", synth_cfg.family_word_rate,
                    "Family vocabulary rate in question text")
      ->capture_default_str();
  synth->add_option("--questions-mean-winner", synth_cfg.questions_mean_winner,
                    "Mean questions on merge destinations")
      ->capture_default_str();
  synth->add_option("--questions-mean-loser", synth_cfg.questions_mean_loser,
                    "Mean questions on absorbed topics")
      ->capture_default_str();
  synth->add_option("--questions-mean-other", synth_cfg.questions_mean_other,
                    "Mean questions elsewhere")
      ->capture_default_str();
  synth->add_option("--merge-lag-mean-days", synth_cfg.merge_lag_mean_days,
                    "Mean days from later creation to merge")
      ->capture_default_str();
  synth->add_option("--loser-burst", synth_cfg.loser_burst,
                    "Share of absorbed-topic questions in the first weeks")
      ->capture_default_str();
  synth->callback([&] { cmd_synth(synth_cfg, synth_out, synth); });

  // ingest
  std::string ingest_dir, ingest_out;
  auto* ingest = app.add_subcommand("ingest", "Validate a corpus and print stats");
  ingest->add_option("--dir", ingest_dir, "Corpus directory")->required();
  ingest->add_option("--out", ingest_out, "Optional output directory for the summary");
  ingest->callback([&] { cmd_ingest(ingest_dir, ingest_out, ingest); });

  // candidates
  std::string cand_dir, cand_out;
  FilterConfig cand_filters;
  auto* cand = app.add_subcommand("candidates", "Emit filtered candidate pairs");
  cand->add_option("--dir", cand_dir, "Corpus directory")->required();
  cand->add_option("--out", cand_out, "Output directory")->required();
  cand->add_option("--min-questions", cand_filters.min_questions,
                   "Visible questions required per side")
      ->capture_default_str();
  cand->add_option("--jw-threshold", cand_filters.jw_threshold,
                   "Drop near-duplicate names at or above this similarity")
      ->capture_default_str();
  cand->add_option("--cooccur-threshold", cand_filters.cooccur_threshold,
                   "Minimum co-occurrence overlap")
      ->capture_default_str();
  cand->callback([&] { cmd_candidates(cand_dir, cand_out, cand_filters, cand); });

  // featurize
  IoArgs feat_io;
  std::string feat_pairs, feat_gt;
  auto* feat = app.add_subcommand("featurize", "Emit the feature matrix for pairs");
  add_common(feat, feat_io, false);
  feat->add_option("--pairs", feat_pairs, "Pair CSV (t1,t2[,label[,provenance]])");
  feat->add_option("--ground-truth", feat_gt,
                   "Labeled pair file (default: <dir>/ground_truth.jsonl)");
  feat->callback([&] { cmd_featurize(feat_io, feat_pairs, feat_gt, feat); });

  // train
  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "Train the two-step and direction models");
  add_train_options(train, train_args);
  train->callback([&] { cmd_train(train_args, train); });

  // predict
  IoArgs pred_io;
  std::string pred_model, pred_pairs;
  bool skip_filter = false;
  auto* pred = app.add_subcommand("predict", "Score pairs with a trained model");
  add_common(pred, pred_io, false);
  pred->add_option("--model", pred_model, "model.json from train")->required();
  pred->add_option("--pairs", pred_pairs, "Pair CSV to score")->required();
  pred->add_flag("--skip-filter", skip_filter,
                 "Bypass the anomaly filter (classifier-only baseline)");
  pred->callback([&] { cmd_predict(pred_io, pred_model, pred_pairs, skip_filter, pred); });

  // eval
  std::string eval_pred, eval_pairs, eval_out;
  auto* eval = app.add_subcommand("eval", "Compare predictions against labels");
  eval->add_option("--predictions", eval_pred, "predictions.csv from predict")->required();
  eval->add_option("--pairs", eval_pairs, "Labeled pair CSV (t1,t2,label,...)")->required();
  eval->add_option("--out", eval_out, "Output directory")->required();
  eval->callback([&] { cmd_eval(eval_pred, eval_pairs, eval_out, eval); });

  // early-eval
  IoArgs early_io;
  std::string early_model;
  double early_fraction = 0.7;
  auto* early = app.add_subcommand("early-eval",
                                   "Recall curve over monthly snapshots before each merge");
  add_common(early, early_io, false);
  early->add_option("--model", early_model, "model.json from train")->required();
  early->add_option("--train-fraction", early_fraction,
                    "Chronological split point; the curve uses the held-out merges")
      ->capture_default_str();
  early->callback([&] { cmd_early_eval(early_io, early_model, early_fraction, early); });

  // ablate
  TrainArgs ablate_args;
  auto* ablate = app.add_subcommand("ablate", "Retrain on feature-group subsets");
  add_train_options(ablate, ablate_args);
  ablate->callback([&] { cmd_ablate(ablate_args, ablate); });

  // rank-features
  TrainArgs rank_args;
  auto* rank = app.add_subcommand("rank-features",
                                  "Recursive feature elimination ranking");
  add_train_options(rank, rank_args);
  rank->callback([&] { cmd_rank_features(rank_args, rank); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
