#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "topicmerge/corpus.hpp"
#include "topicmerge/embed.hpp"
#include "topicmerge/features.hpp"
#include "topicmerge/models.hpp"
#include "topicmerge/ontology.hpp"
#include "topicmerge/pipeline.hpp"
#include "topicmerge/synth.hpp"
#include "topicmerge/textfeat.hpp"

namespace py = pybind11;
using namespace topicmerge;

namespace {

NGramMultiset to_multiset(const std::vector<std::string>& tokens, int n) {
  return ngrams(tokens, n);
}

double overlap_py(const std::vector<std::string>& a, const std::vector<std::string>& b,
                  int n, const std::string& mode) {
  OverlapMode m;
  if (mode == "unweighted") m = OverlapMode::unweighted;
  else if (mode == "weighted") m = OverlapMode::weighted;
  else if (mode == "weighted_support_denom") m = OverlapMode::weighted_support_denom;
  else throw Error("unknown overlap mode: " + mode);
  return overlap(to_multiset(a, n), to_multiset(b, n), m);
}

py::dict corpus_stats(const std::string& dir) {
  Corpus corpus = load_corpus_dir(dir);
  Ontology onto = build_ontology(corpus, corpus.events());
  OntologyStats stats = ontology_stats(onto);
  py::dict d;
  d["topics"] = corpus.topics().size();
  d["questions"] = corpus.questions().size();
  d["events"] = corpus.events().size();
  d["usable_merge_pairs"] = collect_merge_pairs(corpus).size();
  py::dict o;
  o["nodes"] = stats.nodes;
  o["edges"] = stats.edges;
  o["components"] = stats.components;
  o["largest_component"] = stats.largest_component;
  o["singletons"] = stats.singletons;
  o["depth_edges"] = stats.depth_edges;
  o["avg_degree"] = stats.avg_degree;
  d["ontology"] = o;
  return d;
}

void synth_corpus(const std::string& out, uint64_t seed, int topics, int merge_pairs,
                  int unmerge_pairs, int neighbor_pairs, int generated_pairs,
                  int families) {
  SynthConfig cfg;
  cfg.seed = seed;
  cfg.topics = topics;
  cfg.merge_pairs = merge_pairs;
  cfg.unmerge_pairs = unmerge_pairs;
  cfg.neighbor_pairs = neighbor_pairs;
  cfg.generated_pairs = generated_pairs;
  cfg.families = families;
  write_synth(generate_synth(cfg), out);
}

py::dict prf_dict(const Prf& p) {
  py::dict d;
  d["precision"] = p.precision;
  d["recall"] = p.recall;
  d["f_score"] = p.f_score;
  d["tp"] = p.tp;
  d["fp"] = p.fp;
  d["fn"] = p.fn;
  d["tn"] = p.tn;
  return d;
}

// Trains the two-step model on a corpus directory with ground truth and
// returns held-out metrics, optionally writing model.json to model_out.
py::dict train_and_eval(const std::string& dir, uint64_t seed, double train_fraction,
                        size_t anomaly_size, const std::string& model_out) {
  Corpus corpus = load_corpus_dir(dir);
  std::vector<GroundTruthPair> gt = load_ground_truth(dir + "/ground_truth.jsonl");
  AssembleConfig acfg;
  acfg.train_fraction = train_fraction;
  acfg.anomaly_train_size = anomaly_size;
  acfg.seed = seed;
  PairDataset ds = assemble_dataset(corpus, &gt, FilterConfig{}, acfg);

  Ontology onto = build_ontology(corpus, corpus.events());
  InformationContent ic = information_content(onto, corpus.full_view());
  VectorTable vectors = load_vectors(dir + "/embeddings.vec");
  Ontology word_taxonomy = load_taxonomy(dir + "/taxonomy.tsv");
  TokenCache tokens = TokenCache::build(corpus, nullptr);
  FeatureContext ctx(corpus.full_view(), &onto, &ic, &vectors, &word_taxonomy,
                     FeatureConfig{}, &tokens);

  TwoStepModel model =
      train_two_step(ctx, ds.train_pos, ds.train_neg, ds.anomaly, TwoStepConfig{}, seed);
  if (!model_out.empty()) save_two_step(model, model_out);

  std::vector<CandidatePair> test_pairs = ds.test_pos;
  test_pairs.insert(test_pairs.end(), ds.test_neg.begin(), ds.test_neg.end());
  std::vector<int> labels(ds.test_pos.size(), 1);
  labels.insert(labels.end(), ds.test_neg.size(), 0);
  ctx.prepare(test_pairs);
  Matrix x;
  x.reserve(test_pairs.size());
  for (const auto& p : test_pairs) x.push_back(ctx.featurize(p));
  auto preds = predict_two_step(model, test_pairs, x);
  std::vector<int> pred_labels;
  pred_labels.reserve(preds.size());
  for (const auto& p : preds) pred_labels.push_back(p.label);

  py::dict d = prf_dict(prf(pred_labels, labels));
  d["train_pos"] = ds.train_pos.size();
  d["train_neg"] = ds.train_neg.size();
  d["anomaly"] = ds.anomaly.size();
  d["test"] = test_pairs.size();
  return d;
}

}  // namespace

PYBIND11_MODULE(_topicmerge, m) {
  m.doc() = "Topic merge prediction core";

  py::register_exception<Error>(m, "TopicMergeError");

  m.def("tokenize",
        [](const std::string& text) { return tokenize(text); },
        py::arg("text"), "Lowercased alphanumeric tokens");
  m.def("jaro_winkler", &jaro_winkler, py::arg("a"), py::arg("b"));
  m.def("abbreviation_pair", &abbreviation_pair, py::arg("a"), py::arg("b"));
  m.def("overlap", &overlap_py, py::arg("a"), py::arg("b"), py::arg("n") = 1,
        py::arg("mode") = "unweighted",
        "Overlap coefficient between n-gram multisets of two token lists");
  m.def("corpus_stats", &corpus_stats, py::arg("dir"),
        "Validate a corpus directory and return summary statistics");
  m.def("synth_corpus", &synth_corpus, py::arg("out"), py::arg("seed") = 7,
        py::arg("topics") = 500, py::arg("merge_pairs") = 150,
        py::arg("unmerge_pairs") = 150, py::arg("neighbor_pairs") = 600,
        py::arg("generated_pairs") = 20000, py::arg("families") = 50,
        "Generate a synthetic corpus directory");
  m.def("train_and_eval", &train_and_eval, py::arg("dir"), py::arg("seed") = 0,
        py::arg("train_fraction") = 0.7, py::arg("anomaly_size") = 200000,
        py::arg("model_out") = std::string(),
        "Train the two-step model on a corpus with ground truth; returns held-out metrics");
}
